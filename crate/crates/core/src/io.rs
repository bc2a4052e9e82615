//! Text formats for point sets and line families.
//!
//! Header `q n kind` with `kind` one of `points` or `lines`, then one row per
//! element. Coordinates are written as base-p digit strings (most significant
//! first, `.`-separated when q is not prime). A line row lists its canonical
//! base point followed by its normalized direction.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{AffinePoint, AffineSpace, Line, LineFamily, PointSet, ProjPoint};
use crate::gf::{Fe, Field};

fn header(space: &AffineSpace, kind: &str) -> String {
    format!("{} {} {}\n", space.q(), space.dim(), kind)
}

fn coords(field: &Field, cs: &[Fe]) -> String {
    cs.iter().map(|&c| field.format(c)).collect::<Vec<_>>().join(" ")
}

pub fn write_point_set(set: &PointSet) -> String {
    let space = set.space();
    let mut out = header(space, "points");
    for i in set.iter() {
        out.push_str(&coords(space.field(), space.point(i).coords()));
        out.push('\n');
    }
    out
}

pub fn write_line_family(fam: &LineFamily) -> String {
    let space = fam.space();
    let mut out = header(space, "lines");
    let mut lines = fam.lines().to_vec();
    lines.sort();
    for l in lines {
        out.push_str(&coords(space.field(), l.base.coords()));
        out.push(' ');
        out.push_str(&coords(space.field(), l.dir.coords()));
        out.push('\n');
    }
    out
}

fn rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the header and returns the space plus the remaining rows.
fn read_header<'a>(text: &'a str, want: &str) -> Result<(AffineSpace, Vec<(usize, &'a str)>)> {
    let mut it = rows(text);
    let (_, head) = it
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    let parts: Vec<&str> = head.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("bad header {head:?}")));
    }
    let q: u64 = parts[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad q {:?}", parts[0])))?;
    let n: usize = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad n {:?}", parts[1])))?;
    if parts[2] != want {
        return Err(Error::Parse(format!("expected kind {want}, found {}", parts[2])));
    }
    if !(1..=3).contains(&n) {
        return Err(Error::Parse(format!("dimension {n} unsupported")));
    }
    let field = Arc::new(Field::with_order(q)?);
    Ok((AffineSpace::new(field, n), it.collect()))
}

fn parse_coords(field: &Field, line_no: usize, toks: &[&str]) -> Result<Vec<Fe>> {
    toks.iter()
        .map(|t| {
            field
                .parse(t)
                .map_err(|e| Error::Parse(format!("line {line_no}: {e}")))
        })
        .collect()
}

pub fn read_point_set(text: &str) -> Result<PointSet> {
    let (space, body) = read_header(text, "points")?;
    let mut set = PointSet::empty(space.clone());
    for (no, row) in body {
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != space.dim() {
            return Err(Error::Parse(format!(
                "line {no}: expected {} coordinates, found {}",
                space.dim(),
                toks.len()
            )));
        }
        let cs = parse_coords(space.field(), no, &toks)?;
        set.insert(space.index(&AffinePoint::new(&cs)));
    }
    Ok(set)
}

pub fn read_line_family(text: &str) -> Result<LineFamily> {
    let (space, body) = read_header(text, "lines")?;
    let n = space.dim();
    let mut fam = LineFamily::new(space.clone());
    for (no, row) in body {
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != 2 * n {
            return Err(Error::Parse(format!(
                "line {no}: expected {} coordinates, found {}",
                2 * n,
                toks.len()
            )));
        }
        let cs = parse_coords(space.field(), no, &toks)?;
        let dir = ProjPoint::normalize(space.field(), &cs[n..])
            .ok_or_else(|| Error::Parse(format!("line {no}: zero direction")))?;
        let line: Line = space.line(&AffinePoint::new(&cs[..n]), &dir);
        fam.insert(line);
    }
    Ok(fam)
}

pub fn save(path: impl AsRef<Path>, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}
