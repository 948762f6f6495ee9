//! `key = value` configuration files and provenance-based replay.
//!
//! Config entries become `--key value` flags placed before the command-line
//! flags, so anything given explicitly wins.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;

pub fn read_config(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in config {}", path.display()))
}

pub fn parse_config(text: &str) -> Result<Vec<String>> {
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`, found `{line}`", i + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key.is_empty() {
            bail!("line {}: empty key", i + 1);
        }
        match value {
            "true" => args.push(format!("--{key}")),
            "false" => {}
            _ => {
                args.push(format!("--{key}"));
                args.push(value.to_string());
            }
        }
    }
    Ok(args)
}

/// Expands `--config FILE` (anywhere after the subcommand) in place.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    let mut config = Vec::new();
    let mut rest = Vec::new();
    let mut seen_command = false;
    while let Some(a) = it.next() {
        if let Some(path) = a.strip_prefix("--config=") {
            config.extend(read_config(Path::new(path))?);
        } else if a == "--config" {
            let path = it.next().context("--config needs a file")?;
            config.extend(read_config(Path::new(&path))?);
        } else if !seen_command && !out.is_empty() && !a.starts_with('-') && !is_global_value(&out) {
            seen_command = true;
            out.push(a);
        } else if seen_command {
            rest.push(a);
        } else {
            out.push(a);
        }
    }
    out.extend(config);
    out.extend(rest);
    Ok(out)
}

/// True when the last token is a global flag that consumes the next one.
fn is_global_value(prefix: &[String]) -> bool {
    matches!(prefix.last().map(String::as_str), Some("--threads" | "--replay"))
}

/// The provenance block embedded in an output file: a JSON document with a
/// `provenance` member, or a first line `<comment> provenance: {...}`.
pub fn read_provenance(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let first = text.lines().next().unwrap_or("");
    let json = if text.trim_start().starts_with('{') {
        serde_json::from_str::<Value>(&text)?
            .get("provenance")
            .cloned()
            .context("no provenance member")?
    } else if let Some((_, rest)) = first.split_once("provenance: ") {
        serde_json::from_str(rest)?
    } else {
        bail!("{} carries no provenance block", path.display());
    };
    Ok(json)
}

/// Command line (after the program name) recorded in a provenance block.
pub fn replay_args(provenance: &Value) -> Result<Vec<String>> {
    let command = provenance["command"].as_str().context("provenance lacks `command`")?;
    let args = provenance["args"].as_array().context("provenance lacks `args`")?;
    let mut out = vec![command.to_string()];
    for a in args {
        out.push(a.as_str().context("non-string argument")?.to_string());
    }
    Ok(out)
}
