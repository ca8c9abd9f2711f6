//! Plain-text CSV for grid functions and solve histories.
//!
//! Grid function layout:
//!
//! ```text
//! # plap-field v1
//! # n=<n> xmin=<xmin> xmax=<xmax> ymin=<ymin> ymax=<ymax> h=<h>
//! u(x_0, y_0),u(x_1, y_0),...,u(x_{n-1}, y_0)
//! ...
//! u(x_0, y_{n-1}),...
//! ```
//!
//! Report layout:
//!
//! ```text
//! # plap-report v1 method=<method> termination=<termination>
//! iter,delta_max,residual_max,error_max
//! 0,,,<initial error>
//! 1,<delta>,<residual>,<error>
//! ```
//!
//! `error_max` cells are empty when no exact solution was tracked. Floats
//! are written in shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Bounds, Grid2D, GridFunction};
use crate::solvers::{Method, SolveReport, Termination};

pub const FIELD_HEADER: &str = "# plap-field v1";
pub const REPORT_HEADER: &str = "# plap-report v1";
pub const REPORT_COLUMNS: &str = "iter,delta_max,residual_max,error_max";

pub fn field_to_string(u: &GridFunction) -> String {
    let g = u.grid();
    let b = g.bounds();
    let n = g.n();
    let mut s = String::with_capacity(n * n * 22 + 128);
    let _ = writeln!(s, "{FIELD_HEADER}");
    let _ = writeln!(
        s,
        "# n={n} xmin={} xmax={} ymin={} ymax={} h={}",
        b.xmin,
        b.xmax,
        b.ymin,
        b.ymax,
        g.h()
    );
    for row in u.values().chunks(n) {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v}");
        }
        s.push('\n');
    }
    s
}

pub fn write_field<W: Write>(mut w: W, u: &GridFunction) -> Result<()> {
    w.write_all(field_to_string(u).as_bytes())?;
    Ok(())
}

pub fn write_field_file(path: impl AsRef<Path>, u: &GridFunction) -> Result<()> {
    fs::write(path, field_to_string(u))?;
    Ok(())
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("{what}: '{s}': {e}")))
}

fn header_value<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    line.trim_start_matches('#')
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| Error::Parse(format!("missing '{key}' in header '{line}'")))
}

pub fn read_field<R: BufRead>(r: R) -> Result<GridFunction> {
    let mut lines = r.lines();
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| Error::Parse("unexpected end of field file".into()))?
            .map_err(Error::from)
    };
    let version = next()?;
    if version.trim() != FIELD_HEADER {
        return Err(Error::Parse(format!(
            "expected '{FIELD_HEADER}', got '{version}'"
        )));
    }
    let meta = next()?;
    let n: usize = header_value(&meta, "n")?
        .parse()
        .map_err(|e| Error::Parse(format!("n: {e}")))?;
    let bounds = Bounds::new(
        parse_f64(header_value(&meta, "xmin")?, "xmin")?,
        parse_f64(header_value(&meta, "xmax")?, "xmax")?,
        parse_f64(header_value(&meta, "ymin")?, "ymin")?,
        parse_f64(header_value(&meta, "ymax")?, "ymax")?,
    );
    let grid = Grid2D::new(bounds, n)?;
    let mut values = Vec::with_capacity(grid.len());
    for j in 0..n {
        let row = next()?;
        let before = values.len();
        for cell in row.split(',') {
            values.push(parse_f64(cell, &format!("row {j}"))?);
        }
        if values.len() - before != n {
            return Err(Error::Parse(format!(
                "row {j} has {} values, expected {n}",
                values.len() - before
            )));
        }
    }
    GridFunction::from_values(grid, values)
}

pub fn read_field_file(path: impl AsRef<Path>) -> Result<GridFunction> {
    read_field(std::io::BufReader::new(fs::File::open(path)?))
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::Converged => "converged",
        Termination::MaxIterations => "max-iterations",
        Termination::Diverged => "diverged",
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn report_to_string(report: &SolveReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{REPORT_HEADER} method={} termination={}",
        report.method,
        termination_name(report.termination)
    );
    let _ = writeln!(s, "{REPORT_COLUMNS}");
    let _ = writeln!(s, "0,,,{}", cell(report.initial_error));
    for k in 1..=report.iterations {
        let _ = writeln!(
            s,
            "{k},{},{},{}",
            cell(report.delta.get(k - 1).copied()),
            cell(report.residual.get(k - 1).copied()),
            cell(report.error_at(k))
        );
    }
    s
}

pub fn write_report<W: Write>(mut w: W, report: &SolveReport) -> Result<()> {
    w.write_all(report_to_string(report).as_bytes())?;
    Ok(())
}

pub fn write_report_file(path: impl AsRef<Path>, report: &SolveReport) -> Result<()> {
    fs::write(path, report_to_string(report))?;
    Ok(())
}

pub fn read_report<R: BufRead>(r: R) -> Result<SolveReport> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty report".into()))??;
    if !header.starts_with(REPORT_HEADER) {
        return Err(Error::Parse(format!(
            "expected '{REPORT_HEADER}', got '{header}'"
        )));
    }
    let method: Method = header_value(&header, "method")?.parse()?;
    let termination = match header_value(&header, "termination")? {
        "converged" => Termination::Converged,
        "max-iterations" => Termination::MaxIterations,
        "diverged" => Termination::Diverged,
        other => return Err(Error::Parse(format!("unknown termination '{other}'"))),
    };
    let columns = lines
        .next()
        .ok_or_else(|| Error::Parse("missing column line".into()))??;
    if columns.trim() != REPORT_COLUMNS {
        return Err(Error::Parse(format!("unexpected columns '{columns}'")));
    }
    let opt = |s: &str, what: &str| -> Result<Option<f64>> {
        if s.trim().is_empty() {
            Ok(None)
        } else {
            parse_f64(s, what).map(Some)
        }
    };
    let mut report = SolveReport {
        method,
        iterations: 0,
        delta: Vec::new(),
        residual: Vec::new(),
        error: None,
        initial_error: None,
        termination,
    };
    let mut errors = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 4 {
            return Err(Error::Parse(format!("expected 4 columns in '{line}'")));
        }
        let k: usize = cells[0]
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("iter '{}': {e}", cells[0])))?;
        let err = opt(cells[3], "error_max")?;
        if k == 0 {
            report.initial_error = err;
            continue;
        }
        if k != report.iterations + 1 {
            return Err(Error::Parse(format!("iteration {k} out of order")));
        }
        report.iterations = k;
        report.delta.extend(opt(cells[1], "delta_max")?);
        report.residual.extend(opt(cells[2], "residual_max")?);
        errors.extend(err);
    }
    if !errors.is_empty() {
        report.error = Some(errors);
    }
    Ok(report)
}
