//! Argument plumbing, provenance, result files and error records.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{expand_config, read_provenance, replay_args};
use crate::{dispatch, Cli};

/// Invalid or out-of-range user input (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(argv: Vec<String>) -> Result<()> {
    let argv = expand_config(argv).map_err(|e| usage(format!("{e:#}")))?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            e.print()?;
            return Ok(());
        }
        Err(e) => return Err(usage(e.render().to_string().trim_end())),
    };
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    if let Some(path) = &cli.replay {
        if cli.command.is_some() {
            return Err(usage("--replay cannot be combined with a subcommand"));
        }
        let recorded = replay_args(&read_provenance(path)?)?;
        let mut replay_argv = vec![argv[0].clone()];
        replay_argv.extend(recorded.iter().cloned());
        let mut again = Cli::try_parse_from(&replay_argv).map_err(|e| usage(e.render().to_string().trim_end()))?;
        again.output = cli.output;
        return dispatch(again, recorded[1..].to_vec());
    }
    let recorded = command_args(&argv);
    dispatch(cli, recorded)
}

/// Tokens after the subcommand, minus output/thread flags.
fn command_args(argv: &[String]) -> Vec<String> {
    let names = [
        "check-u",
        "simulate-1d",
        "simulate-2d",
        "winding-1d",
        "winding-2d",
        "phase-diagram",
        "mean-displacement",
        "edge-state",
        "noisy-run",
        "export",
    ];
    let Some(start) = argv.iter().position(|a| names.contains(&a.as_str())) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut it = argv[start + 1..].iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "-o" | "--output" | "--threads" => {
                it.next();
            }
            s if s.starts_with("--output=") || s.starts_with("--threads=") => {}
            s if s.starts_with("-o") && s.len() > 2 => {}
            _ => out.push(a.clone()),
        }
    }
    out
}

pub struct Context {
    pub command: &'static str,
    pub args: Vec<String>,
    pub output: Option<PathBuf>,
}

impl Context {
    pub fn new(command: &'static str, args: Vec<String>, output: Option<PathBuf>) -> Self {
        Context { command, args, output }
    }

    pub fn provenance(&self, parameters: &impl Serialize) -> Value {
        json!({
            "tool": "topocircuit",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "args": self.args,
            "parameters": parameters,
        })
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Writes `{"provenance": ..., <result fields>}`.
    pub fn emit_json(&self, parameters: &impl Serialize, result: Value) -> Result<()> {
        let mut doc = json!({ "provenance": self.provenance(parameters) });
        if let (Some(doc), Value::Object(fields)) = (doc.as_object_mut(), result) {
            doc.extend(fields);
        }
        self.write(&(serde_json::to_string_pretty(&doc)? + "\n"))
    }

    /// Writes a CSV table after a `# provenance: {...}` line.
    pub fn emit_csv(&self, parameters: &impl Serialize, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?;
        let line = serde_json::to_string(&self.provenance(parameters))?;
        self.write(&format!("# provenance: {line}\n{body}"))
    }

    /// Writes program text after a provenance comment.
    pub fn emit_text(&self, parameters: &impl Serialize, comment: &str, text: &str, summary: Value) -> Result<()> {
        let line = serde_json::to_string(&self.provenance(parameters))?;
        self.write(&format!("{comment} provenance: {line}\n{text}"))?;
        if self.output.is_some() {
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Ok(())
    }

    pub fn wants_csv(&self) -> bool {
        self.output
            .as_deref()
            .and_then(Path::extension)
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    }
}

/// Prints the machine-readable error record and picks the exit code.
pub fn report(err: anyhow::Error) -> ExitCode {
    let (kind, code) = if err.downcast_ref::<UsageError>().is_some() {
        ("usage", 2)
    } else if err.chain().any(|c| c.downcast_ref::<topocircuit::Error>().is_some()) {
        ("guard", 1)
    } else {
        ("runtime", 1)
    };
    let record = json!({ "error": { "kind": kind, "message": format!("{err:#}") } });
    eprintln!("{record}");
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recorded_args_skip_output_and_threads() {
        let argv: Vec<String> = ["p", "--threads", "2", "winding-1d", "--alpha", "0.1", "-o", "x.json", "--threads=3"]
            .map(String::from)
            .to_vec();
        assert_eq!(command_args(&argv), ["--alpha", "0.1"]);
    }
}
