//! Flat `key = value` configuration files, applied as default flags.
//!
//! A file given with `--config FILE` is expanded into `--key=value`
//! arguments placed directly after the subcommand, so flags on the command
//! line (which come later) override it.

use std::path::Path;

use anyhow::{bail, Context, Result};

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected key = value", no + 1);
        };
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            bail!("line {}: malformed key `{key}`", no + 1);
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Removes `--config FILE` from `args` and splices the file's entries in
/// after the subcommand name.
pub fn expand(mut args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                bail!("--config needs a file");
            }
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {path}"))?;
    let entries = parse(&text).with_context(|| format!("parsing config {path}"))?;
    // The subcommand is the first argument that is not a flag or a flag value.
    let mut at = 1;
    while at < args.len() && args[at].starts_with('-') {
        at += if args[at] == "--out" { 2 } else { 1 };
    }
    let at = (at + 1).min(args.len());
    let flags: Vec<String> = entries
        .into_iter()
        .map(|(k, v)| format!("--{}={v}", if k == "N" { k } else { k.replace('_', "-") }))
        .collect();
    args.splice(at..at, flags);
    Ok(args)
}
