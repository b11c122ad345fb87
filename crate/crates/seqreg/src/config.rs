//! Validated run configuration assembled from flags and the environment.

use std::fmt;
use std::path::PathBuf;

use seqreg_core::num::parse_ext;
use seqreg_core::{ExtReal, PhiKind, Rational};

pub const DEFAULT_WINDOW: usize = 64;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const MAX_TOLERANCE: f64 = 1e-3;
pub const TOLERANCE_VAR: &str = "SEQREG_TOLERANCE";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    Minorant,
    Assoc,
    Trace,
    Phireg,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Minorant => "minorant",
            Command::Assoc => "assoc",
            Command::Trace => "trace",
            Command::Phireg => "phireg",
            Command::Compare => "compare",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    Linear { start: f64, stop: f64, step: f64 },
    Log { start: f64, stop: f64, count: usize },
}

/// Largest number of grid points accepted.
const GRID_LIMIT: usize = 1_000_000;

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            Grid::Linear { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| tidy(start + i as f64 * step)).collect()
            }
            Grid::Log { start, stop, count } => {
                if count == 1 {
                    return vec![start];
                }
                let (l, h) = (start.ln(), stop.ln());
                (0..count)
                    .map(|i| (l + (h - l) * i as f64 / (count - 1) as f64).exp())
                    .collect()
            }
        }
    }
}

/// Drops accumulated rounding noise such as `0.30000000000000004`.
fn tidy(x: f64) -> f64 {
    format!("{x:.12}").parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(message: impl Into<String>) -> ConfigError {
    ConfigError(message.into())
}

fn float(text: &str, what: &str) -> Result<f64, ConfigError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| bad(format!("{what}: `{text}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{what}: `{text}` is not finite")))
    }
}

/// `start:stop:step` with `step > 0` and `start ≤ stop`.
pub fn parse_grid(text: &str) -> Result<Grid, ConfigError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(bad(format!("--grid `{text}`: expected start:stop:step")));
    };
    let (start, stop, step) = (float(start, "--grid")?, float(stop, "--grid")?, float(step, "--grid")?);
    if step <= 0.0 || stop < start {
        return Err(bad(format!("--grid `{text}`: need step > 0 and start <= stop")));
    }
    if (stop - start) / step > GRID_LIMIT as f64 {
        return Err(bad(format!("--grid `{text}`: more than {GRID_LIMIT} points")));
    }
    Ok(Grid::Linear { start, stop, step })
}

/// `start:stop:count` with `0 < start ≤ stop` and `count ≥ 1`.
pub fn parse_loggrid(text: &str) -> Result<Grid, ConfigError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad(format!("--loggrid `{text}`: expected start:stop:count")));
    };
    let (start, stop) = (float(start, "--loggrid")?, float(stop, "--loggrid")?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| bad(format!("--loggrid `{text}`: count must be a positive integer")))?;
    if start <= 0.0 || stop < start || count == 0 || count > GRID_LIMIT {
        return Err(bad(format!("--loggrid `{text}`: need 0 < start <= stop and 1 <= count <= {GRID_LIMIT}")));
    }
    Ok(Grid::Log { start, stop, count })
}

fn exact(text: &str, what: &str) -> Result<Rational, ConfigError> {
    match parse_ext(text) {
        Ok(ExtReal::Finite(r)) => Ok(r),
        _ => Err(bad(format!("{what}: `{text}` is not a finite number"))),
    }
}

/// Points for a piecewise φ: a JSON array of pairs, or one `x,y` pair per line.
pub fn parse_phi_points(text: &str, source: &str) -> Result<Vec<(Rational, Rational)>, ConfigError> {
    let what = format!("piecewise φ file {source}");
    if text.trim_start().starts_with('[') {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| bad(format!("{what}: {e}")))?;
        let items = value.as_array().ok_or_else(|| bad(format!("{what}: expected an array")))?;
        return items
            .iter()
            .enumerate()
            .map(|(i, pair)| {
                let pair = pair
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| bad(format!("{what}: entry {i} is not an [x, y] pair")))?;
                let text_of = |v: &serde_json::Value| match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                Ok((exact(&text_of(&pair[0]), &what)?, exact(&text_of(&pair[1]), &what)?))
            })
            .collect();
    }
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'))
        .map(|(i, line)| {
            let (x, y) = line
                .split_once(',')
                .ok_or_else(|| bad(format!("{what}: line {} is not `x,y`", i + 1)))?;
            Ok((exact(x, &what)?, exact(y, &what)?))
        })
        .collect()
}

/// `exp`, `expaffine:α,β`, `blowup:T`, `infinite`, or `piecewise:<file>`.
pub fn parse_phi(text: &str) -> Result<PhiKind, ConfigError> {
    let (name, arg) = match text.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a)),
        None => (text.trim(), None),
    };
    match (name.to_ascii_lowercase().as_str(), arg) {
        ("exp", None) => Ok(PhiKind::Exp),
        ("infinite" | "inf", None) => Ok(PhiKind::Infinite),
        ("expaffine", Some(arg)) => {
            let (alpha, beta) = arg
                .split_once(',')
                .ok_or_else(|| bad(format!("--phi `{text}`: expected expaffine:alpha,beta")))?;
            Ok(PhiKind::ExpAffine {
                alpha: exact(alpha, "--phi alpha")?,
                beta: exact(beta, "--phi beta")?,
            })
        }
        ("blowup", Some(arg)) => Ok(PhiKind::BlowupReciprocal {
            t: exact(arg, "--phi T")?,
        }),
        ("piecewise", Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| bad(format!("--phi piecewise file {path}: {e}")))?;
            Ok(PhiKind::Piecewise(parse_phi_points(&text, path)?))
        }
        _ => Err(bad(format!(
            "--phi `{text}`: expected exp, expaffine:alpha,beta, blowup:T, infinite or piecewise:<file>"
        ))),
    }
}

/// Reads `SEQREG_TOLERANCE`-style text and checks `0 < ε ≤ 10⁻³`.
pub fn parse_tolerance(text: &str) -> Result<f64, ConfigError> {
    let eps = float(text, TOLERANCE_VAR)?;
    if eps > 0.0 && eps <= MAX_TOLERANCE {
        Ok(eps)
    } else {
        Err(bad(format!("tolerance {eps} outside (0, {MAX_TOLERANCE}]")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub window: usize,
    pub tolerance: f64,
    pub format: Format,
    pub verify: bool,
    pub extended: bool,
    pub grid: Option<Grid>,
    pub phi: Option<PhiKind>,
    pub phi2: Option<PhiKind>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.window < 4 {
            return Err(bad(format!("--window {} is below the minimum of 4", self.window)));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= MAX_TOLERANCE) {
            return Err(bad(format!("tolerance {} outside (0, {MAX_TOLERANCE}]", self.tolerance)));
        }
        if self.inputs.is_empty() {
            return Err(bad("no input files"));
        }
        if self.command == Command::Compare && (self.phi.is_none() || self.phi2.is_none()) {
            return Err(bad("compare needs --phi1 and --phi2"));
        }
        Ok(())
    }
}
