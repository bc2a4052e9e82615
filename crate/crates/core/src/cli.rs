//! Command-line front end.
//!
//! Exit codes: 0 when every asserted row passes, 1 when one fails or an
//! internal invariant breaks, 2 for bad arguments or unusable input.
//! Reports go to stdout unless `--report` names a file, in which case wall
//! times land next to it in `<file>.timing.json`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geom::{AffineSpace, Line, PointSet, ProjectiveSpace};
use crate::gf::Field;
use crate::hermitian::{
    build_hermitian, build_tangent_line_family, degenerate_count, phi, square_root_order,
    HermitianMatrix, LineClass,
};
use crate::incidence::{
    cover_fraction_check, generate_planar_lines, generate_planes, implied_point_lower_bound,
    line_cover_fraction_check, mixing_discrepancy_check, mixing_incidence_bound,
    within_mixing_bound, CoverGenerator,
};
use crate::io::{load, read_line_family, read_point_set, save, write_line_family, write_point_set};
use crate::kakeya::{
    build_quadratic_residue_set, fractional_pipeline_with, integer_multiplicity_bound,
    qr_size, qr_size_bound, verify_kakeya, KakeyaCheck, PipelineOptions, DEFAULT_RETRY_CAP,
};
use crate::nikodym::{
    build_conic_dual_line_family, complement_report, conjecture_harness,
    coplanar_line_bound_check, union_lower_bound_check, verify_nikodym, Generator, NikodymCheck,
    NikodymWitness,
};
use crate::poly::{
    count_capped_monomials, degree_limit, format_rational, interpolate_vanishing, parse_rational,
    read_poly, write_poly,
};
use crate::report::{parse_overlay, Format, Recorder, Report, Row, RunConfig, Timing};
use crate::suite::{optimum_row, pipeline_row_from, run_suite, threshold_row, SuiteConfig};

pub const WORKERS_ENV: &str = "KAKEYA_LAB_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "kakeya-lab", version, about = "Finite-field Kakeya, Nikodym and incidence experiments")]
pub struct Cli {
    /// Worker threads (default: all cores; the environment variable applies when absent).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// key=value file; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Kakeya(KakeyaCmd),
    #[command(subcommand)]
    Nikodym(NikodymCmd),
    #[command(subcommand)]
    Hermitian(HermitianCmd),
    #[command(subcommand)]
    Incidence(IncidenceCmd),
    #[command(subcommand)]
    Poly(PolyCmd),
    /// The acceptance battery.
    Suite(SuiteArgs),
}

#[derive(Subcommand, Debug)]
pub enum KakeyaCmd {
    Build(KakeyaBuild),
    Verify(InputSet),
    Pipeline(KakeyaPipeline),
    Optimize(NoArgs),
}

#[derive(Subcommand, Debug)]
pub enum NikodymCmd {
    Verify(NikodymVerify),
    ConicFamily(ConicFamily),
    Threshold(NoArgs),
    Harness(Harness),
    /// Union-of-lines lower bound for a line file.
    Union(InputLines),
    /// Complement bound for a Nikodym set file.
    Complement(InputSet),
}

#[derive(Subcommand, Debug)]
pub enum HermitianCmd {
    Build(HermitianBuild),
    TangentFamily(TangentFamily),
}

#[derive(Subcommand, Debug)]
pub enum IncidenceCmd {
    Spectrum(QArg),
    Bound(IncidenceBoundArgs),
    Check(IncidenceCheck),
    PlanesCover(PlanesCover),
}

#[derive(Subcommand, Debug)]
pub enum PolyCmd {
    Count(PolyCount),
    Interpolate(PolyInterpolate),
    Check(PolyCheck),
}

#[derive(Args, Debug, Serialize)]
pub struct NoArgs {}

#[derive(Args, Debug, Serialize)]
pub struct QArg {
    #[arg(long)]
    pub q: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct InputSet {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct InputLines {
    #[arg(long)]
    pub lines: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Qr,
}

#[derive(Args, Debug, Serialize)]
pub struct KakeyaBuild {
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum, default_value_t = Construction::Qr)]
    pub construction: Construction,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct KakeyaPipeline {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub u: u32,
    /// Decimal or fraction.
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub seed: u64,
    /// Run interpolation even when the counting gate says it cannot succeed.
    #[arg(long)]
    pub ungated: bool,
    /// Point-set file to use instead of the quadratic-residue set.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_RETRY_CAP)]
    pub retry_cap: usize,
    #[arg(long)]
    pub all_lines: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct NikodymVerify {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub extract_witness: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ConicFamily {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value = "0.62")]
    pub fraction: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorName {
    UniformRandom,
    PlaneCappedRandom,
    #[value(alias = "hermitian")]
    HermitianTangent,
    #[value(alias = "conic")]
    ConicDual,
}

#[derive(Args, Debug, Serialize)]
pub struct Harness {
    #[arg(long, value_enum)]
    pub generator: GeneratorName,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value = "0.5")]
    pub alpha: String,
    #[arg(long, default_value = "0.62")]
    pub fraction: String,
    /// Family size for the random generators (default: ceil(0.62 q^3)).
    #[arg(long)]
    pub lines: Option<usize>,
    /// Plane cap for the capped generator (default: floor(q^{3/2})).
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::nikodym::DEFAULT_ALARM_RATIO)]
    pub alarm: f64,
    /// JSON-lines output; records are embedded in the report otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct HermitianBuild {
    /// Characteristic-side square root of q (q = p^2).
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Random Hermitian matrix from this seed instead of the identity.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct TangentFamily {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct IncidenceBoundArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub np: u64,
    #[arg(long)]
    pub nl: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct IncidenceCheck {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub lines: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverGen {
    Parallel,
    Pencil,
    Random,
}

#[derive(Args, Debug, Serialize)]
pub struct PlanesCover {
    #[arg(long)]
    pub q: u64,
    /// Number of planes is `k q`.
    #[arg(long)]
    pub k: u32,
    #[arg(long, value_enum)]
    pub gen: CoverGen,
    /// Random draws use seeds `seed-base .. seed-base + seeds`.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Lines of AG(2,q) instead of planes of AG(3,q).
    #[arg(long)]
    pub planar: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct PolyCount {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub m: String,
}

#[derive(Args, Debug, Serialize)]
pub struct PolyInterpolate {
    #[arg(long)]
    pub m: String,
    #[arg(long)]
    pub s1: PathBuf,
    #[arg(long)]
    pub m1: u32,
    #[arg(long)]
    pub s2: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub m2: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct PolyCheck {
    #[arg(long)]
    pub poly: PathBuf,
    /// Point-set file; its header fixes q and n.
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub mult: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 13)]
    pub max_q: u32,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub interpolation_instances: Option<usize>,
    #[arg(long)]
    pub restriction_instances: Option<usize>,
    #[arg(long)]
    pub mixing_draws: Option<usize>,
    #[arg(long)]
    pub nikodym_cases: Option<usize>,
}

/// What a command produced.
pub struct Outcome {
    pub report: Report,
    pub timing: Timing,
    /// Printed instead of the report when no `--report` file is given.
    pub scalar: Option<String>,
}

/// Parses `argv` (program name first), runs, writes output, and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match apply_config_overlay(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
            } else {
                let _ = write!(stdout, "{}", e.render());
            }
            return code;
        }
    };
    configure_workers(cli.workers);
    let mut out = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let fmt = format!("{:?}", cli.format).to_lowercase();
    out.report.config.params.insert("format".into(), fmt);
    if let Err(e) = emit(&cli, &out, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    for r in out.report.failures() {
        let _ = writeln!(stderr, "FAILED {} ({}): {}", r.id, r.claim, r.detail);
    }
    if out.report.passed() {
        0
    } else {
        1
    }
}

/// Broken internal invariants exit 1; everything else is a usage or input problem.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::InternalClassification(_) | Error::AssignmentNotInjective(_) => 1,
        _ => 2,
    }
}

fn configure_workers(flag: Option<usize>) {
    let n = flag.or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()));
    if let Some(n) = n {
        // a pool set up by an earlier in-process run stays in place
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Splices `--key value` for every config-file key the command line leaves unset.
fn apply_config_overlay(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let pos = argv.iter().position(|a| a == "--config");
    let path = match pos {
        Some(i) => argv
            .get(i + 1)
            .ok_or_else(|| Error::Parse("--config needs a path".into()))?
            .clone(),
        None => match argv
            .iter()
            .find_map(|a| a.to_str().and_then(|s| s.strip_prefix("--config=")))
        {
            Some(p) => OsString::from(p),
            None => return Ok(argv),
        },
    };
    let overlay = parse_overlay(&load(Path::new(&path))?)?;
    let present: Vec<String> = argv
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|s| s.strip_prefix("--"))
        .map(|s| s.split('=').next().unwrap_or(s).to_string())
        .collect();
    let mut out = argv;
    for (k, v) in overlay {
        if present.contains(&k) || k == "config" {
            continue;
        }
        match v.as_str() {
            "true" => out.push(format!("--{k}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{k}").into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

fn emit(cli: &Cli, out: &Outcome, stdout: &mut dyn Write) -> Result<()> {
    let body = out.report.render(cli.format)?;
    match &cli.report {
        Some(path) => {
            save(path, &body)?;
            let mut sidecar = path.clone().into_os_string();
            sidecar.push(".timing.json");
            let timing = serde_json::to_string_pretty(&out.timing).expect("timing serializes");
            save(PathBuf::from(sidecar), &(timing + "\n"))?;
            if let Some(s) = &out.scalar {
                writeln!(stdout, "{s}")?;
            }
        }
        None => match &out.scalar {
            Some(s) => writeln!(stdout, "{s}")?,
            None => stdout.write_all(body.as_bytes())?,
        },
    }
    Ok(())
}

fn config_of<T: Serialize>(command: &str, args: &T) -> RunConfig {
    let mut params = BTreeMap::new();
    if let Ok(Value::Object(map)) = serde_json::to_value(args) {
        for (k, v) in map {
            let v = match v {
                Value::String(s) => s,
                other => other.to_string(),
            };
            params.insert(k.replace('_', "-"), v);
        }
    }
    RunConfig {
        command: command.to_string(),
        params,
    }
}

fn finish(rec: Recorder) -> Outcome {
    let (report, timing) = rec.finish();
    Outcome {
        report,
        timing,
        scalar: None,
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Kakeya(c) => kakeya(c),
        Command::Nikodym(c) => nikodym(c),
        Command::Hermitian(c) => hermitian(c),
        Command::Incidence(c) => incidence(c),
        Command::Poly(c) => poly(c),
        Command::Suite(a) => {
            let mut cfg = SuiteConfig::new(a.max_q, a.seed);
            if let Some(v) = a.interpolation_instances {
                cfg.interpolation_instances = v;
            }
            if let Some(v) = a.restriction_instances {
                cfg.restriction_instances = v;
            }
            if let Some(v) = a.mixing_draws {
                cfg.mixing_draws = v;
            }
            if let Some(v) = a.nikodym_cases {
                cfg.nikodym_cases = v;
            }
            let (report, timing) = run_suite(&cfg);
            Ok(Outcome {
                report,
                timing,
                scalar: None,
            })
        }
    }
}

fn kakeya_set_rows(set: &PointSet) -> Vec<Row> {
    let space = set.space();
    let check = verify_kakeya(set);
    let missing: Vec<Vec<String>> = match &check {
        KakeyaCheck::Missing(d) => d
            .iter()
            .take(20)
            .map(|p| p.coords().iter().map(|&c| space.field().format(c)).collect())
            .collect(),
        KakeyaCheck::Kakeya(_) => Vec::new(),
    };
    let mut rows = vec![Row::check(
        "kakeya",
        "kakeya-verification",
        check.is_kakeya(),
        json!({ "q": space.q(), "n": space.dim(), "size": set.len(),
                "directions": space.direction_count(), "missing_examples": missing }),
    )];
    if space.dim() == 3 {
        let bound = integer_multiplicity_bound(space.q(), 2);
        rows.push(Row::reported(
            "multiplicity-bound",
            "integer-multiplicity-bound",
            json!({ "size": set.len(), "bound": bound, "at_least_bound": set.len() as u64 >= bound }),
        ));
    }
    rows
}

fn kakeya(cmd: &KakeyaCmd) -> Result<Outcome> {
    match cmd {
        KakeyaCmd::Build(a) => {
            let set = match a.construction {
                Construction::Qr => build_quadratic_residue_set(a.q)?,
            };
            let mut rec = Recorder::new(config_of("kakeya build", a));
            rec.step("verify", "kakeya-verification", || {
                let mut rows = kakeya_set_rows(&set);
                let q = set.space().q() as u64;
                rows.push(Row::check(
                    "size-formula",
                    "quadratic-residue-kakeya",
                    set.len() as u64 == qr_size(q),
                    json!({ "size": set.len(), "formula": "(q-1)((q+1)/2)^2 + q^2", "value": qr_size(q) }),
                ));
                rows.push(Row::reported(
                    "stated-size",
                    "quadratic-residue-kakeya",
                    json!({ "formula": "q((q+1)/2)^2 + q^2", "value": qr_size_bound(q), "size": set.len() }),
                ));
                Ok(rows)
            });
            if let Some(out) = &a.out {
                save(out, &write_point_set(&set))?;
            }
            Ok(finish(rec))
        }
        KakeyaCmd::Verify(a) => {
            let set = read_point_set(&load(&a.input)?)?;
            let mut rec = Recorder::new(config_of("kakeya verify", a));
            rec.step("verify", "kakeya-verification", || Ok(kakeya_set_rows(&set)));
            Ok(finish(rec))
        }
        KakeyaCmd::Pipeline(a) => {
            let alpha = parse_rational(&a.alpha)?;
            let set = match &a.set {
                Some(p) => Some(read_point_set(&load(p)?)?),
                None => None,
            };
            let opts = PipelineOptions {
                gated: !a.ungated,
                set,
                retry_cap: a.retry_cap,
                all_lines: a.all_lines,
            };
            let result = fractional_pipeline_with(a.q, a.u, alpha, a.seed, &opts);
            if let Err(e) = &result {
                if !matches!(e, Error::CountingNotInParadoxRegime { .. } | Error::InfeasibleCount { .. }) {
                    return Err(e.clone());
                }
            }
            let mut rec = Recorder::new(config_of("kakeya pipeline", a));
            rec.step("pipeline", "fractional-multiplicity-pipeline", || {
                Ok(vec![pipeline_row_from(a.q as u32, a.seed, result)])
            });
            Ok(finish(rec))
        }
        KakeyaCmd::Optimize(a) => {
            let mut rec = Recorder::new(config_of("kakeya optimize", a));
            rec.step("optimize", "fractional-multiplicity-optimum", || Ok(vec![optimum_row()?]));
            Ok(finish(rec))
        }
    }
}

#[derive(Serialize)]
struct AssignmentEntry {
    point: Vec<String>,
    base: Vec<String>,
    dir: Vec<String>,
}

fn witness_json(w: &NikodymWitness) -> Value {
    let space = w.set.space();
    let f = space.field();
    let fmt = |cs: &[crate::gf::Fe]| cs.iter().map(|&c| f.format(c)).collect::<Vec<_>>();
    let entries: Vec<AssignmentEntry> = w
        .assignment
        .iter()
        .map(|(p, l): &(usize, Line)| AssignmentEntry {
            point: fmt(space.point(*p).coords()),
            base: fmt(l.base.coords()),
            dir: fmt(l.dir.coords()),
        })
        .collect();
    json!({ "q": space.q(), "n": space.dim(), "complement": entries.len(), "assignment": entries })
}

fn nikodym(cmd: &NikodymCmd) -> Result<Outcome> {
    match cmd {
        NikodymCmd::Verify(a) => {
            let set = read_point_set(&load(&a.input)?)?;
            let check = verify_nikodym(&set)?;
            let mut rec = Recorder::new(config_of("nikodym verify", a));
            rec.step("verify", "nikodym-verification", || {
                let mut rows = Vec::new();
                match &check {
                    NikodymCheck::Failing(f) => rows.push(Row::check(
                        "nikodym",
                        "nikodym-verification",
                        false,
                        json!({ "size": set.len(), "failing_points": f.len() }),
                    )),
                    NikodymCheck::Nikodym(w) => {
                        rows.push(Row::check(
                            "nikodym",
                            "nikodym-verification",
                            true,
                            json!({ "size": set.len(), "complement": w.assignment.len() }),
                        ));
                        if set.space().dim() == 3 {
                            let rep = complement_report(w)?;
                            rows.push(Row::check("complement-bound", "nikodym-complement-bound", rep.holds, json!(rep)));
                            let cop = coplanar_line_bound_check(w)?;
                            rows.push(Row::reported("coplanar-lines", "nikodym-coplanar-lines", json!(cop)));
                        }
                    }
                }
                Ok(rows)
            });
            if let (Some(path), NikodymCheck::Nikodym(w)) = (&a.extract_witness, &check) {
                let text = serde_json::to_string_pretty(&witness_json(w)).expect("witness serializes");
                save(path, &(text + "\n"))?;
            }
            Ok(finish(rec))
        }
        NikodymCmd::ConicFamily(a) => {
            let fraction = parse_rational(&a.fraction)?;
            let (fam, rep) = build_conic_dual_line_family(a.q, fraction)?;
            let mut rec = Recorder::new(config_of("nikodym conic-family", a));
            rec.step("conic-family", "conic-dual-union", || {
                Ok(vec![Row::check("conic-dual", "conic-dual-union", rep.holds, json!(rep))])
            });
            if let Some(out) = &a.out {
                save(out, &write_line_family(&fam))?;
            }
            Ok(finish(rec))
        }
        NikodymCmd::Threshold(a) => {
            let mut rec = Recorder::new(config_of("nikodym threshold", a));
            rec.step("threshold", "nikodym-complement-threshold", || Ok(vec![threshold_row()?]));
            Ok(finish(rec))
        }
        NikodymCmd::Harness(a) => {
            let q = Field::with_order(a.q)?.order();
            let q3 = (q as u64).pow(3) as f64;
            let generator = match a.generator {
                GeneratorName::UniformRandom => Generator::UniformRandom {
                    lines: a.lines.unwrap_or((0.62 * q3).ceil() as usize),
                },
                GeneratorName::PlaneCappedRandom => Generator::PlaneCappedRandom {
                    lines: a.lines.unwrap_or((0.62 * q3).ceil() as usize),
                    cap: a.cap.unwrap_or((q as f64).powf(1.5).floor() as u32),
                },
                GeneratorName::HermitianTangent => Generator::HermitianTangent {
                    alpha: format_rational(&parse_rational(&a.alpha)?),
                },
                GeneratorName::ConicDual => Generator::ConicDual {
                    fraction: format_rational(&parse_rational(&a.fraction)?),
                },
            };
            let records = conjecture_harness(&generator, a.q, a.trials, a.seed, a.alarm)?;
            if let Some(out) = &a.out {
                let mut text = String::new();
                for r in &records {
                    text.push_str(&serde_json::to_string(r).expect("record serializes"));
                    text.push('\n');
                }
                save(out, &text)?;
            }
            let mut rec = Recorder::new(config_of("nikodym harness", a));
            rec.step("harness", "nikodym-conjecture-harness", || {
                let alarms = records.iter().filter(|r| r.alarm).count();
                let min_ratio = records.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
                let mut detail = json!({ "generator": json!(generator), "trials": records.len(),
                                         "alarms": alarms, "min_ratio": min_ratio });
                if a.out.is_none() {
                    detail["records"] = json!(records);
                }
                Ok(vec![Row::reported("harness", "nikodym-conjecture-harness", detail)])
            });
            Ok(finish(rec))
        }
        NikodymCmd::Union(a) => {
            let fam = read_line_family(&load(&a.lines)?)?;
            let rep = union_lower_bound_check(&fam)?;
            let mut rec = Recorder::new(config_of("nikodym union", a));
            rec.step("union", "union-of-lines-lower-bound", || {
                Ok(vec![Row::check("union", "union-of-lines-lower-bound", rep.holds, json!(rep))])
            });
            Ok(finish(rec))
        }
        NikodymCmd::Complement(a) => {
            let set = read_point_set(&load(&a.input)?)?;
            let rep = crate::nikodym::nikodym_complement_bound_check(&set)?;
            let mut rec = Recorder::new(config_of("nikodym complement", a));
            rec.step("complement", "nikodym-complement-bound", || {
                Ok(vec![Row::check("complement-bound", "nikodym-complement-bound", rep.holds, json!(rep))])
            });
            Ok(finish(rec))
        }
    }
}

fn square_field(p: u64) -> Result<Arc<Field>> {
    let q = p
        .checked_mul(p)
        .ok_or_else(|| Error::FieldTooLarge(format!("p = {p}")))?;
    Ok(Arc::new(Field::with_order(q)?))
}

fn hermitian(cmd: &HermitianCmd) -> Result<Outcome> {
    match cmd {
        HermitianCmd::Build(a) => {
            if !(2..=3).contains(&a.n) {
                return Err(Error::OutOfRange(format!("n = {} (supported: 2, 3)", a.n)));
            }
            let field = square_field(a.p)?;
            let s = square_root_order(&field)?;
            let q = field.order();
            let h = match a.seed {
                Some(seed) => HermitianMatrix::random(field.clone(), a.n + 1, &mut ChaCha8Rng::seed_from_u64(seed))?,
                None => HermitianMatrix::identity(field.clone(), a.n + 1)?,
            };
            let v = build_hermitian(h)?;
            let mut rec = Recorder::new(config_of("hermitian build", a));
            rec.step("count", "hermitian-point-count", || {
                let n = a.n as u32;
                let r = v.rank() as u32;
                let expected = if r == 0 {
                    ProjectiveSpace::new(field.clone(), a.n).points().len() as u64
                } else {
                    degenerate_count(n, q as u64, r)
                };
                Ok(vec![Row::check(
                    "point-count",
                    "hermitian-point-count",
                    v.len() as u64 == expected,
                    json!({ "q": q, "n": n, "rank": r, "points": v.len(), "formula": expected,
                            "non_degenerate_formula": phi(n, q as u64),
                            "singular_points": v.singular_points().len() }),
                )])
            });
            rec.step("lines", "hermitian-line-intersections", || {
                let mut sizes = BTreeMap::new();
                let mut bad = 0usize;
                for l in v.space().lines() {
                    match v.classify_line(&l) {
                        Ok(c) => *sizes.entry(format!("{c:?}")).or_insert(0usize) += 1,
                        Err(_) => bad += 1,
                    }
                }
                Ok(vec![Row::check(
                    "line-classes",
                    "hermitian-line-intersections",
                    bad == 0,
                    json!({ "classes": sizes, "unclassified": bad,
                            "allowed_sizes": [1, s + 1, q + 1] }),
                )])
            });
            if a.n == 3 && !v.is_degenerate() {
                rec.step("tangents", "hermitian-tangent-lines", || {
                    let mut wrong = 0;
                    for c in v.points() {
                        let t = v.tangent_lines_at(c)?;
                        if t.len() as u32 != q - s
                            || t.iter().any(|l| v.classify_line(l).ok() != Some(LineClass::Tangent))
                        {
                            wrong += 1;
                        }
                    }
                    Ok(vec![Row::check(
                        "tangent-lines",
                        "hermitian-tangent-lines",
                        wrong == 0,
                        json!({ "points": v.len(), "per_point": q - s, "wrong": wrong }),
                    )])
                });
            }
            Ok(finish(rec))
        }
        HermitianCmd::TangentFamily(a) => {
            let field = square_field(a.p)?;
            let s = square_root_order(&field)?;
            let q = field.order();
            let alpha = parse_rational(&a.alpha)?;
            let v = build_hermitian(HermitianMatrix::identity(field, 4)?)?;
            let (fam, rep) = build_tangent_line_family(&v, alpha, a.seed)?;
            let mut rec = Recorder::new(config_of("hermitian tangent-family", a));
            rec.step("family", "hermitian-tangent-family", || {
                let ok = rep.lines == (q - s) as usize * rep.chosen_points
                    && rep.lines_distinct
                    && rep.unchosen_variety_covered == 0;
                Ok(vec![
                    Row::check("tangent-family", "hermitian-tangent-family", ok, json!(rep)),
                    Row::reported(
                        "plane-occupancy",
                        "hermitian-tangent-family",
                        json!({ "max_plane_occupancy": rep.max_plane_occupancy,
                                "reference": rep.occupancy_reference }),
                    ),
                ])
            });
            if let Some(out) = &a.out {
                save(out, &write_line_family(&fam.affine))?;
            }
            Ok(finish(rec))
        }
    }
}

fn incidence(cmd: &IncidenceCmd) -> Result<Outcome> {
    match cmd {
        IncidenceCmd::Spectrum(a) => {
            let space = AffineSpace::new(Arc::new(Field::with_order(a.q)?), 3);
            let mut rec = Recorder::new(config_of("incidence spectrum", a));
            rec.step("spectrum", "incidence-spectrum", || {
                Ok(vec![crate::suite::spectrum_row(space.q())?])
            });
            Ok(finish(rec))
        }
        IncidenceCmd::Bound(a) => {
            Field::with_order(a.q as u64)?;
            let bound = mixing_incidence_bound(a.np, a.nl, a.q)?;
            let implied = implied_point_lower_bound(a.nl, a.q)?;
            let mut rec = Recorder::new(config_of("incidence bound", a));
            rec.step("bound", "mixing-incidence-bound", || {
                Ok(vec![Row::reported(
                    "incidence-bound",
                    "mixing-incidence-bound",
                    json!({ "bound": bound, "points_needed_for_lines_full_incidence": implied }),
                )])
            });
            Ok(finish(rec))
        }
        IncidenceCmd::Check(a) => {
            let points = read_point_set(&load(&a.points)?)?;
            let lines = read_line_family(&load(&a.lines)?)?;
            let rep = mixing_discrepancy_check(&points, &lines)?;
            let q = points.space().q();
            let bound_ok = within_mixing_bound(rep.incidences, rep.points as u64, rep.lines as u64, q)?;
            let mut rec = Recorder::new(config_of("incidence check", a));
            rec.step("check", "expander-mixing", || {
                Ok(vec![
                    Row::check("mixing", "expander-mixing", rep.holds, json!(rep)),
                    Row::check(
                        "incidence-bound",
                        "mixing-incidence-bound",
                        bound_ok,
                        json!({ "incidences": rep.incidences,
                                "bound": mixing_incidence_bound(rep.points as u64, rep.lines as u64, q)? }),
                    ),
                ])
            });
            Ok(finish(rec))
        }
        IncidenceCmd::PlanesCover(a) => {
            let field = Arc::new(Field::with_order(a.q)?);
            let dim = if a.planar { 2 } else { 3 };
            let space = AffineSpace::new(field, dim);
            let count = a.k as usize * space.q() as usize;
            let seeds: Vec<Option<u64>> = match a.gen {
                CoverGen::Random => (a.seed_base..a.seed_base + a.seeds).map(Some).collect(),
                _ => vec![None],
            };
            let mut rows = Vec::new();
            for seed in seeds {
                let gen = match (a.gen, seed) {
                    (CoverGen::Parallel, _) => CoverGenerator::Parallel,
                    (CoverGen::Pencil, _) => CoverGenerator::Pencil,
                    (CoverGen::Random, s) => CoverGenerator::Random { seed: s.unwrap_or(0) },
                };
                let rep = if a.planar {
                    line_cover_fraction_check(&generate_planar_lines(&space, count, gen)?)?
                } else {
                    cover_fraction_check(&space, &generate_planes(&space, count, gen)?)?
                };
                let id = match seed {
                    Some(s) => format!("cover-seed{s}"),
                    None => "cover".to_string(),
                };
                rows.push(Row::check(&id, "plane-cover-fraction", rep.holds, json!(rep)));
            }
            let mut rec = Recorder::new(config_of("incidence planes-cover", a));
            rec.step("cover", "plane-cover-fraction", || Ok(rows));
            Ok(finish(rec))
        }
    }
}

fn poly(cmd: &PolyCmd) -> Result<Outcome> {
    match cmd {
        PolyCmd::Count(a) => {
            if !(1..=crate::poly::MAX_VARS as u32).contains(&a.n) || a.q < 2 {
                return Err(Error::OutOfRange(format!("n = {}, q = {}", a.n, a.q)));
            }
            let m = parse_rational(&a.m)?;
            let count = count_capped_monomials(a.n, a.q, m);
            let mut rec = Recorder::new(config_of("poly count", a));
            rec.step("count", "capped-monomial-count", || {
                Ok(vec![Row::reported(
                    "count",
                    "capped-monomial-count",
                    json!({ "count": count, "degree_limit": degree_limit(m, a.q) }),
                )])
            });
            let mut out = finish(rec);
            out.scalar = Some(count.to_string());
            Ok(out)
        }
        PolyCmd::Interpolate(a) => {
            let m = parse_rational(&a.m)?;
            let s1 = read_point_set(&load(&a.s1)?)?;
            let s2 = match &a.s2 {
                Some(p) => read_point_set(&load(p)?)?,
                None => PointSet::empty(s1.space().clone()),
            };
            let g = interpolate_vanishing(&s1, a.m1, &s2, a.m2, m)?;
            let mut rec = Recorder::new(config_of("poly interpolate", a));
            rec.step("interpolate", "vanishing-interpolation", || {
                let ok = s1.points().all(|p| g.multiplicity_by_hasse(p.coords()).at_least(a.m1))
                    && s2.points().all(|p| g.multiplicity_by_hasse(p.coords()).at_least(a.m2));
                Ok(vec![Row::check(
                    "interpolant",
                    "vanishing-interpolation",
                    ok && !g.is_zero(),
                    json!({ "terms": g.terms().len(), "degree": g.total_degree(),
                            "s1": s1.len(), "s2": s2.len() }),
                )])
            });
            if let Some(out) = &a.out {
                save(out, &write_poly(&g))?;
            }
            Ok(finish(rec))
        }
        PolyCmd::Check(a) => {
            let pts = read_point_set(&load(&a.points)?)?;
            let space = pts.space();
            let g = read_poly(space.field().clone(), space.dim(), &load(&a.poly)?)?;
            let mut rec = Recorder::new(config_of("poly check", a));
            rec.step("check", "vanishing-interpolation", || {
                let mut short = 0;
                for p in pts.points() {
                    let by_shift = g.multiplicity_at(p.coords());
                    let by_hasse = g.multiplicity_by_hasse(p.coords());
                    if by_shift != by_hasse {
                        return Err(Error::Internal("multiplicity paths disagree".into()));
                    }
                    if !by_shift.at_least(a.mult) {
                        short += 1;
                    }
                }
                Ok(vec![Row::check(
                    "multiplicity",
                    "vanishing-interpolation",
                    short == 0 && !g.is_zero(),
                    json!({ "points": pts.len(), "mult": a.mult, "short": short, "zero": g.is_zero() }),
                )])
            });
            Ok(finish(rec))
        }
    }
}
