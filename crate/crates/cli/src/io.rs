//! Text formats.
//!
//! Point sets: UTF-8, `#` starts a comment, one `x y` pair per line.
//! Coordinates are written in Rust's shortest round-trip decimal form, so
//! save followed by load returns bit-identical `f64`s.
//!
//! Grids: header `grid <K> <n>`, then `n` lines `i j`, written in sorted
//! `(i, j)` order. Comments and blank lines are allowed anywhere when
//! reading.
//!
//! Witnesses: line 1 `HW1 <kind> K=<K> n=<n>`, line 2 `<bits>:<hex>` with
//! bits packed most significant first and the last nibble zero-padded.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use heilbronn::geom::{GridArrangement, GridPoint, PointSet, UnitPoint};
use heilbronn::witnesses::WitnessFile;

use crate::CliError;

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn line_err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("line {line}: {msg}"))
}

fn two_fields(line: usize, l: &str) -> Result<(&str, &str), CliError> {
    let mut it = l.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(line_err(line, "expected two fields")),
    }
}

pub fn parse_pointset(text: &str) -> Result<PointSet, CliError> {
    let mut pts = Vec::new();
    for (line, l) in content_lines(text) {
        let (a, b) = two_fields(line, l)?;
        let x: f64 = a.parse().map_err(|_| line_err(line, format!("bad coordinate '{a}'")))?;
        let y: f64 = b.parse().map_err(|_| line_err(line, format!("bad coordinate '{b}'")))?;
        pts.push(UnitPoint::new(x, y).map_err(|e| line_err(line, e))?);
    }
    Ok(PointSet::new(pts))
}

pub fn render_pointset(points: &PointSet, header: &[String]) -> String {
    let mut s = String::new();
    for h in header {
        writeln!(s, "# {h}").unwrap();
    }
    for p in &points.points {
        writeln!(s, "{:?} {:?}", p.x, p.y).unwrap();
    }
    s
}

pub fn parse_grid(text: &str) -> Result<GridArrangement, CliError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| CliError::Data("empty grid file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "grid" {
        return Err(line_err(hl, "expected header 'grid <K> <n>'"));
    }
    let k: u64 = parts[1].parse().map_err(|_| line_err(hl, "bad K"))?;
    let n: usize = parts[2].parse().map_err(|_| line_err(hl, "bad n"))?;
    let mut pts = Vec::with_capacity(n.min(1 << 20));
    let mut seen = std::collections::HashSet::new();
    for (line, l) in lines {
        let (a, b) = two_fields(line, l)?;
        let i: u32 = a.parse().map_err(|_| line_err(line, format!("bad column '{a}'")))?;
        let j: u32 = b.parse().map_err(|_| line_err(line, format!("bad row '{b}'")))?;
        if i as u64 >= k || j as u64 >= k {
            return Err(line_err(line, format!("({i}, {j}) lies outside the grid of side {k}")));
        }
        if !seen.insert((i, j)) {
            return Err(line_err(line, format!("duplicate cell ({i}, {j})")));
        }
        pts.push(GridPoint::new(i, j));
    }
    if pts.len() != n {
        return Err(CliError::Data(format!("header declares {n} pebbles, found {}", pts.len())));
    }
    GridArrangement::new(k, pts).map_err(CliError::from)
}

pub fn render_grid(a: &GridArrangement) -> String {
    let mut s = format!("grid {} {}\n", a.k(), a.n());
    for p in a.points() {
        writeln!(s, "{} {}", p.x, p.y).unwrap();
    }
    s
}

pub fn parse_witness(text: &str) -> Result<WitnessFile, CliError> {
    WitnessFile::parse(text).map_err(|e| CliError::Data(e.to_string()))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn load_pointset(path: &Path) -> Result<PointSet, CliError> {
    parse_pointset(&read_text(path)?)
}

pub fn save_pointset(points: &PointSet, path: &Path) -> Result<(), CliError> {
    write_text(path, &render_pointset(points, &[]))
}

pub fn load_grid(path: &Path) -> Result<GridArrangement, CliError> {
    parse_grid(&read_text(path)?)
}

pub fn save_grid(a: &GridArrangement, path: &Path) -> Result<(), CliError> {
    write_text(path, &render_grid(a))
}

/// A file holding either a grid (first content line starts with `grid`) or
/// a point set.
pub enum Loaded {
    Grid(GridArrangement),
    Points(PointSet),
}

pub fn load_any(path: &Path) -> Result<Loaded, CliError> {
    let text = read_text(path)?;
    let is_grid = content_lines(&text).next().is_some_and(|(_, l)| l.starts_with("grid"));
    if is_grid {
        parse_grid(&text).map(Loaded::Grid)
    } else {
        parse_pointset(&text).map(Loaded::Points)
    }
}
