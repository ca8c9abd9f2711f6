//! Experiment configuration from flags and `key = value` files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use plap::reference::{exact_solution, parse_field};
use plap::{Bounds, Exponent, Method, Stencil};

use crate::CliError;

pub const OUTPUT_DIR_ENV: &str = "PLAP_OUTPUT_DIR";

/// Largest accepted grid size per side.
pub const MAX_NODES: usize = 8193;

/// Keys accepted on the command line and in config files.
pub const KEYS: &[&str] = &[
    "command",
    "n",
    "stencil",
    "p",
    "alpha",
    "boundary",
    "rhs",
    "exact",
    "method",
    "tol",
    "max-iters",
    "rho",
    "domain",
    "output",
    "name",
    "point",
    "oracle-point",
    "eps",
    "samples",
    "h-reg",
    "write-fields",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Consistency,
    FailureDemo,
    ContractionModel,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Consistency => "consistency",
            Command::FailureDemo => "failure-demo",
            Command::ContractionModel => "contraction-model",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "solve" => Ok(Command::Solve),
            "sweep" => Ok(Command::Sweep),
            "consistency" => Ok(Command::Consistency),
            "failure-demo" => Ok(Command::FailureDemo),
            "contraction-model" => Ok(Command::ContractionModel),
            other => Err(format!("unknown command '{other}'")),
        }
    }
}

/// Unvalidated `key -> value` pairs.
pub type RawConfig = BTreeMap<String, String>;

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<RawConfig, CliError> {
    let mut raw = RawConfig::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config {
            key: format!("line {}", lineno + 1),
            message: format!("expected key = value, got '{line}'"),
        })?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::config(&key, "unknown key"));
        }
        if raw.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::config(&key, "given more than once"));
        }
    }
    Ok(raw)
}

pub fn read_config_file(path: &Path) -> Result<RawConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config_text(&text)
}

/// Overlays `file` on `flags`. File values win; conflicts are logged.
pub fn merge(flags: RawConfig, file: RawConfig) -> RawConfig {
    let mut merged = flags;
    for (k, v) in file {
        if let Some(old) = merged.get(&k) {
            if *old != v {
                log::warn!("config file sets {k} = {v}, overriding --{k} {old}");
            }
        }
        merged.insert(k, v);
    }
    merged
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: Vec<usize>,
    /// Stencil sizes in points (5, 9 or 17).
    pub stencils: Vec<usize>,
    pub exponents: Vec<Exponent>,
    pub boundary: Vec<String>,
    pub rhs: String,
    /// Exact solution paired with each boundary entry.
    pub exact: Vec<Option<String>>,
    pub methods: Vec<Method>,
    pub tol: f64,
    pub max_iters: usize,
    pub rho: Option<f64>,
    pub bounds: Bounds,
    pub output: PathBuf,
    pub name: String,
    pub point: (f64, f64),
    pub oracle_point: (f64, f64),
    pub eps: Vec<f64>,
    pub samples: usize,
    pub h_reg: Option<f64>,
    pub write_fields: bool,
}

fn list<T>(
    raw: &RawConfig,
    key: &str,
    sep: char,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<Vec<T>>, CliError> {
    let Some(v) = raw.get(key) else {
        return Ok(None);
    };
    let items: Vec<T> = v
        .split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).map_err(|m| CliError::config(key, m)))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(CliError::config(key, "empty list"));
    }
    Ok(Some(items))
}

fn single<T>(
    raw: &RawConfig,
    key: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<T>, CliError> {
    raw.get(key)
        .map(|v| parse(v.trim()).map_err(|m| CliError::config(key, m)))
        .transpose()
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("'{s}': {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("'{s}' must be positive"))
    }
}

fn parse_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("'{s}': {e}"))?;
    if !(3..=MAX_NODES).contains(&n) {
        return Err(format!("{n} outside [3, {MAX_NODES}]"));
    }
    Ok(n)
}

fn parse_p(s: &str) -> Result<Exponent, String> {
    let p = match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => f64::INFINITY,
        _ => s.parse().map_err(|e| format!("'{s}': {e}"))?,
    };
    Exponent::new(p).map_err(|e| e.to_string())
}

fn parse_alpha(s: &str) -> Result<Exponent, String> {
    // accept 1/2^k style fractions
    let alpha = match s.split_once('/') {
        Some((a, b)) => parse_f64(a.trim())? / parse_f64(b.trim())?,
        None => parse_f64(s)?,
    };
    Exponent::from_alpha(alpha).map_err(|_| format!("alpha {alpha} outside [0, 1/2]"))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_f64(a)?, parse_f64(b)?)),
        _ => Err(format!("expected 'x,y', got '{s}'")),
    }
}

fn parse_domain(s: &str) -> Result<Bounds, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| parse_f64(t.trim()))
        .collect::<Result<_, _>>()?;
    let b = match v.as_slice() {
        [lo, hi] => Bounds::square(*lo, *hi),
        [a, b, c, d] => Bounds::new(*a, *b, *c, *d),
        _ => {
            return Err(format!(
                "expected 'lo,hi' or 'xmin,xmax,ymin,ymax', got '{s}'"
            ))
        }
    };
    if !(b.xmin < b.xmax && b.ymin < b.ymax) {
        return Err(format!("empty domain '{s}'"));
    }
    let (w, h) = (b.xmax - b.xmin, b.ymax - b.ymin);
    if (w - h).abs() > 1e-12 * w.max(h) {
        return Err(format!("domain must be square, got {w} x {h}"));
    }
    Ok(b)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got '{s}'")),
    }
}

fn parse_stencil(s: &str) -> Result<usize, String> {
    let points: usize = s.parse().map_err(|e| format!("'{s}': {e}"))?;
    Stencil::from_points(points)
        .map_err(|_| format!("stencil must have 5, 9 or 17 points, got {points}"))?;
    Ok(points)
}

fn one<T: Clone>(key: &str, items: &[T], command: Command) -> Result<(), CliError> {
    if items.len() != 1 {
        return Err(CliError::config(
            key,
            format!("{command} takes a single value, got {}", items.len()),
        ));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Validates every key before anything is allocated or solved.
    pub fn from_raw(raw: &RawConfig, env_output: Option<PathBuf>) -> Result<Self, CliError> {
        for key in raw.keys() {
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::config(key, "unknown key"));
            }
        }
        let command: Command = single(raw, "command", |s| s.parse())?
            .ok_or_else(|| CliError::config("command", "missing"))?;

        let default_n = match command {
            Command::FailureDemo => vec![201],
            Command::Consistency => vec![65, 129, 257],
            Command::ContractionModel => vec![3, 4, 5, 9, 17, 33, 65, 129, 257, 513, 1025],
            _ => vec![129],
        };
        let n = list(raw, "n", ',', parse_n)?.unwrap_or(default_n);
        let default_stencils = if command == Command::Consistency {
            vec![5, 9, 17]
        } else {
            vec![17]
        };
        let stencils = list(raw, "stencil", ',', parse_stencil)?.unwrap_or(default_stencils);

        let exponents = match (
            list(raw, "p", ',', parse_p)?,
            list(raw, "alpha", ',', parse_alpha)?,
        ) {
            (Some(_), Some(_)) => {
                return Err(CliError::config(
                    "alpha",
                    "give either p or alpha, not both",
                ))
            }
            (Some(p), None) | (None, Some(p)) => p,
            (None, None) => vec![Exponent::INFINITY],
        };

        let exact_names = list(raw, "exact", ';', |s| {
            exact_solution(s)
                .map(|_| s.to_string())
                .map_err(|e| e.to_string())
        })?;
        let boundary = list(raw, "boundary", ';', |s| {
            parse_field(s)
                .map(|_| s.to_string())
                .map_err(|e| e.to_string())
        })?;
        let (boundary, exact) = match (boundary, exact_names) {
            (None, None) => (vec!["aronsson".to_string()], vec![None]),
            (Some(b), None) => {
                let e = vec![None; b.len()];
                (b, e)
            }
            (None, Some(e)) => (e.clone(), e.into_iter().map(Some).collect()),
            (Some(b), Some(e)) => {
                if b.len() != e.len() {
                    return Err(CliError::config(
                        "exact",
                        format!("{} exact solutions for {} boundary specs", e.len(), b.len()),
                    ));
                }
                (b, e.into_iter().map(Some).collect())
            }
        };
        let rhs = single(raw, "rhs", |s| {
            parse_field(s)
                .map(|_| s.to_string())
                .map_err(|e| e.to_string())
        })?
        .unwrap_or_else(|| "zero".to_string());

        let methods = match raw.get("method").map(|s| s.trim()) {
            None => vec![Method::SemiImplicit],
            Some("both") => {
                if command != Command::Sweep {
                    return Err(CliError::config("method", "'both' is only valid for sweep"));
                }
                vec![Method::Explicit, Method::SemiImplicit]
            }
            Some(s) => vec![s
                .parse::<Method>()
                .map_err(|e| CliError::config("method", e.to_string()))?],
        };
        let tol = single(raw, "tol", parse_positive)?.unwrap_or(1e-6);
        let max_iters = single(raw, "max-iters", |s| {
            let k: usize = s.parse().map_err(|e| format!("'{s}': {e}"))?;
            if k == 0 {
                Err("must be at least 1".to_string())
            } else {
                Ok(k)
            }
        })?
        .unwrap_or(1000);
        let rho = single(raw, "rho", parse_positive)?;
        let bounds = single(raw, "domain", parse_domain)?.unwrap_or(Bounds::square(-1.0, 1.0));
        let output = env_output
            .or_else(|| raw.get("output").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        let name = single(raw, "name", |s| {
            if !s.is_empty()
                && s.chars()
                    .all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c))
            {
                Ok(s.to_string())
            } else {
                Err(format!(
                    "'{s}' must be non-empty and use only letters, digits, '-', '_', '.'"
                ))
            }
        })?
        .unwrap_or_else(|| command.name().to_string());
        let point = single(raw, "point", parse_pair)?.unwrap_or((0.25, 0.5));
        let oracle_point = single(raw, "oracle-point", parse_pair)?.unwrap_or((0.0, 0.0));
        let eps = list(raw, "eps", ',', parse_positive)?.unwrap_or(vec![0.2, 0.1, 0.05, 0.02]);
        let samples = single(raw, "samples", |s| {
            let m: usize = s.parse().map_err(|e| format!("'{s}': {e}"))?;
            if m < plap::reference::MIN_CIRCLE_SAMPLES {
                Err(format!("{m} below {}", plap::reference::MIN_CIRCLE_SAMPLES))
            } else {
                Ok(m)
            }
        })?
        .unwrap_or(plap::reference::DEFAULT_CIRCLE_SAMPLES);
        let h_reg = single(raw, "h-reg", parse_positive)?;
        let write_fields = single(raw, "write-fields", parse_bool)?.unwrap_or(true);

        let config = Self {
            command,
            n,
            stencils,
            exponents,
            boundary,
            rhs,
            exact,
            methods,
            tol,
            max_iters,
            rho,
            bounds,
            output,
            name,
            point,
            oracle_point,
            eps,
            samples,
            h_reg,
            write_fields,
        };
        config.check_arity()?;
        Ok(config)
    }

    fn check_arity(&self) -> Result<(), CliError> {
        let c = self.command;
        if matches!(c, Command::Solve | Command::FailureDemo) {
            one("n", &self.n, c)?;
            one("boundary", &self.boundary, c)?;
        }
        if c == Command::Solve {
            one("stencil", &self.stencils, c)?;
            one("p", &self.exponents, c)?;
        }
        let (x, y) = self.point;
        let b = self.bounds;
        if c == Command::Consistency && !(b.xmin < x && x < b.xmax && b.ymin < y && y < b.ymax) {
            return Err(CliError::config("point", "outside the domain"));
        }
        Ok(())
    }
}
