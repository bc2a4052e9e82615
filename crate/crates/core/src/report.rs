//! Run configuration and machine-readable reports.
//!
//! A report is a pure function of its config: rows carry no timestamps, and
//! wall-clock timings go to a separate sidecar.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Command path plus every effective parameter, echoed into the report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(command: impl Into<String>) -> RunConfig {
        RunConfig {
            command: command.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> RunConfig {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }
}

/// `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_overlay(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(Error::Parse(format!("config line {}: empty key", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Shown for context; never affects the exit code.
    Reported,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Reported => "reported",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub id: String,
    /// Which claim the row exercises.
    pub claim: String,
    pub status: Status,
    pub detail: Value,
}

impl Row {
    pub fn check(id: &str, claim: &str, ok: bool, detail: Value) -> Row {
        Row {
            id: id.into(),
            claim: claim.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    pub fn reported(id: &str, claim: &str, detail: Value) -> Row {
        Row {
            id: id.into(),
            claim: claim.into(),
            status: Status::Reported,
            detail,
        }
    }

    pub fn failed(id: &str, claim: &str, err: &Error) -> Row {
        Row::check(id, claim, false, serde_json::json!({ "error": err.to_string() }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(config: RunConfig) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            config,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    /// True iff no asserted row failed.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn row(&self, id: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Columns `kind,id,claim,status,detail`; meta and config lines first.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["kind", "id", "claim", "status", "detail"])
            .map_err(csv_err)?;
        w.write_record(["meta", "schema_version", "", "", &self.schema_version.to_string()])
            .map_err(csv_err)?;
        w.write_record(["meta", "command", "", "", &self.config.command])
            .map_err(csv_err)?;
        for (k, v) in &self.config.params {
            w.write_record(["config", k, "", "", v]).map_err(csv_err)?;
        }
        for r in &self.rows {
            w.write_record([
                "row",
                &r.id,
                &r.claim,
                r.status.as_str(),
                &r.detail.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Wall-clock time per row, kept out of the report proper.
#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub rows: Vec<(String, f64)>,
    pub total_ms: f64,
}

/// Builds a report while timing each step.
pub struct Recorder {
    pub report: Report,
    timings: Vec<(String, f64)>,
    start: Instant,
}

impl Recorder {
    pub fn new(config: RunConfig) -> Recorder {
        Recorder {
            report: Report::new(config),
            timings: Vec::new(),
            start: Instant::now(),
        }
    }

    /// Runs `f`, appends its rows, and records the elapsed time under `label`.
    /// An error becomes a failed row.
    pub fn step<F>(&mut self, label: &str, claim: &str, f: F)
    where
        F: FnOnce() -> Result<Vec<Row>>,
    {
        let t = Instant::now();
        match f() {
            Ok(rows) => self.report.rows.extend(rows),
            Err(e) => self.report.push(Row::failed(label, claim, &e)),
        }
        self.timings
            .push((label.to_string(), t.elapsed().as_secs_f64() * 1e3));
    }

    pub fn finish(self) -> (Report, Timing) {
        let total = self.start.elapsed().as_secs_f64() * 1e3;
        (
            self.report,
            Timing {
                rows: self.timings,
                total_ms: total,
            },
        )
    }
}
