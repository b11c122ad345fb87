//! `seqreg`: regularizes weight sequences from JSON files and prints JSON or CSV.

pub mod commands;
pub mod config;
pub mod expr;
pub mod input;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::commands::Computed;
use crate::config::{
    parse_grid, parse_loggrid, parse_phi, parse_tolerance, Command, ConfigError, Format, RunConfig, DEFAULT_TOLERANCE,
    DEFAULT_WINDOW,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_REGIME: i32 = 2;
pub const EXIT_DEVIATION: i32 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    /// Growth regime, growth indicators and log-convexity
    Classify,
    /// Convex (log scale) or log-convex (weight scale) minorant
    Minorant,
    /// Associated weight function and its variants on a grid
    Assoc,
    /// Trace function with breakpoints and samples
    Trace,
    /// Regularization with respect to a regularizing function
    Phireg,
    /// Orders the regularizations for two regularizing functions
    Compare,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "seqreg", version, about = "Regularization of weight sequences")]
pub struct Cli {
    #[arg(value_enum)]
    command: CommandArg,
    /// Sequence files in JSON
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Number of indices examined
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    /// Relative tolerance; overrides SEQREG_TOLERANCE
    #[arg(long)]
    tolerance: Option<String>,
    /// Output format; assoc defaults to csv, everything else to json
    #[arg(long, value_enum)]
    emit: Option<FormatArg>,
    /// Cross-check against the brute-force oracles
    #[arg(long)]
    verify: bool,
    /// Report +inf outside the domain of the trace instead of leaving it empty
    #[arg(long)]
    extended: bool,
    /// Linear grid start:stop:step
    #[arg(long, conflicts_with = "loggrid")]
    grid: Option<String>,
    /// Log-spaced grid start:stop:count
    #[arg(long)]
    loggrid: Option<String>,
    /// exp | expaffine:ALPHA,BETA | blowup:T | infinite | piecewise:FILE
    #[arg(long)]
    phi: Option<String>,
    /// First regularizing function for compare
    #[arg(long)]
    phi1: Option<String>,
    /// Second regularizing function for compare
    #[arg(long)]
    phi2: Option<String>,
}

impl Cli {
    /// Builds the run configuration; `env_tolerance` is the value of `SEQREG_TOLERANCE`.
    pub fn into_config(self, env_tolerance: Option<&str>) -> Result<RunConfig, ConfigError> {
        let command = match self.command {
            CommandArg::Classify => Command::Classify,
            CommandArg::Minorant => Command::Minorant,
            CommandArg::Assoc => Command::Assoc,
            CommandArg::Trace => Command::Trace,
            CommandArg::Phireg => Command::Phireg,
            CommandArg::Compare => Command::Compare,
        };
        let tolerance = match self.tolerance.as_deref().or(env_tolerance) {
            Some(text) => parse_tolerance(text)?,
            None => DEFAULT_TOLERANCE,
        };
        let format = match self.emit {
            Some(FormatArg::Json) => Format::Json,
            Some(FormatArg::Csv) => Format::Csv,
            None if command == Command::Assoc => Format::Csv,
            None => Format::Json,
        };
        let grid = match (&self.grid, &self.loggrid) {
            (Some(g), _) => Some(parse_grid(g)?),
            (None, Some(g)) => Some(parse_loggrid(g)?),
            (None, None) => None,
        };
        let (phi, phi2) = if command == Command::Compare {
            (self.phi1.as_deref().map(parse_phi).transpose()?, self.phi2.as_deref().map(parse_phi).transpose()?)
        } else {
            (self.phi.as_deref().map(parse_phi).transpose()?, None)
        };
        if command == Command::Phireg && phi.is_none() {
            return Err(ConfigError("phireg needs --phi".into()));
        }
        let config = RunConfig {
            command,
            inputs: self.inputs,
            window: self.window,
            tolerance,
            format,
            verify: self.verify,
            extended: self.extended,
            grid,
            phi,
            phi2,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Output and exit status for one input file.
pub struct FileOutcome {
    pub json: Option<Value>,
    pub csv: Option<String>,
    pub diagnostics: Vec<String>,
    pub code: i32,
}

fn failure(path: &Path, message: String, code: i32) -> FileOutcome {
    FileOutcome {
        json: None,
        csv: None,
        diagnostics: vec![format!("{}: {message}", path.display())],
        code,
    }
}

fn render(config: &RunConfig, path: &Path, computed: Computed) -> FileOutcome {
    let mut diagnostics = Vec::new();
    let mut code = EXIT_OK;
    if let Some(w) = &computed.warning {
        diagnostics.push(format!("{}: {w}", path.display()));
        code = EXIT_REGIME;
    }
    for check in computed.checks.iter().filter(|c| !c.passed()) {
        diagnostics.push(format!(
            "{}: verify: {} deviates by {:e} (tolerance {:e})",
            path.display(),
            check.report.quantity,
            check.report.max_rel,
            check.tolerance
        ));
        if code == EXIT_OK {
            code = EXIT_DEVIATION;
        }
    }
    let oracle: Option<Vec<Value>> = config.verify.then(|| computed.checks.iter().map(|c| c.to_json()).collect());
    match config.format {
        Format::Json => {
            let mut envelope = json!({
                "command": config.command.name(),
                "input": path.display().to_string(),
                "window": config.window,
                "tolerance": config.tolerance,
                "result": computed.result,
            });
            if let Some(oracle) = oracle {
                envelope["oracle"] = Value::Array(oracle);
            }
            FileOutcome {
                json: Some(envelope),
                csv: None,
                diagnostics,
                code,
            }
        }
        Format::Csv => {
            let mut text = output::csv(&computed.table.header, &computed.table.rows);
            for check in &computed.checks {
                let r = &check.report;
                text.push_str(&format!(
                    "# oracle {}: max_abs={:e} max_rel={:e} tolerance={:e} within_tolerance={}\n",
                    r.quantity,
                    r.max_abs,
                    r.max_rel,
                    check.tolerance,
                    check.passed()
                ));
            }
            FileOutcome {
                json: None,
                csv: Some(text),
                diagnostics,
                code,
            }
        }
    }
}

/// Reads, parses and processes one input file.
pub fn process(config: &RunConfig, path: &Path) -> FileOutcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return failure(path, e.to_string(), EXIT_INPUT),
    };
    let spec = match input::parse_sequence(&text, &path.display().to_string()) {
        Ok(s) => s,
        Err(e) => {
            return FileOutcome {
                json: None,
                csv: None,
                diagnostics: vec![e.to_string()],
                code: EXIT_INPUT,
            }
        }
    };
    match commands::execute(config, &spec) {
        Ok(computed) => render(config, path, computed),
        Err(e) => failure(path, e.to_string(), EXIT_REGIME),
    }
}

/// Processes every input concurrently and writes results in input order; returns the exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcomes: Vec<FileOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .inputs
            .iter()
            .map(|path| scope.spawn(move || process(config, path)))
            .collect();
        handles
            .into_iter()
            .zip(&config.inputs)
            .map(|(h, path)| {
                h.join()
                    .unwrap_or_else(|_| failure(path, "internal error".into(), EXIT_REGIME))
            })
            .collect()
    });

    let mut code = EXIT_OK;
    let mut text = String::new();
    let single = config.inputs.len() == 1;
    let mut documents = Vec::new();
    for (outcome, path) in outcomes.into_iter().zip(&config.inputs) {
        for d in &outcome.diagnostics {
            let _ = writeln!(err, "seqreg: {d}");
        }
        if code == EXIT_OK {
            code = outcome.code;
        }
        if let Some(doc) = outcome.json {
            documents.push(doc);
        }
        if let Some(csv) = outcome.csv {
            if !single {
                text.push_str(&format!("# input: {}\n", path.display()));
            }
            text.push_str(&csv);
        }
    }
    if config.format == Format::Json && !documents.is_empty() {
        let doc = if single {
            documents.pop().expect("one document")
        } else {
            Value::Array(documents)
        };
        text = serde_json::to_string_pretty(&doc).expect("serializable");
        text.push('\n');
    }
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() && code == EXIT_OK {
        code = EXIT_INPUT;
    }
    code
}

/// Entry point shared by the binary and the tests.
pub fn main_with<I, T>(args: I, env_tolerance: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match cli.into_config(env_tolerance) {
        Ok(config) => run(&config, out, err),
        Err(e) => {
            let _ = writeln!(err, "seqreg: {e}");
            EXIT_INPUT
        }
    }
}
