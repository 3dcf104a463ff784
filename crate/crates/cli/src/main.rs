//! `hopfspike`: command-line driver for the reduced annulus problem.

mod commands;
mod config;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use commands::Command;
use manifest::{Outputs, RunManifest, MANIFEST_FILE};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "hopfspike",
    version,
    about = "Boundary spikes of weighted Hénon problems on annuli"
)]
struct Cli {
    /// Directory for output files and the run manifest.
    #[arg(long, global = true, env = "HOPFSPIKE_OUT", default_value = "hopfspike-out")]
    out: PathBuf,
    #[command(subcommand)]
    top: Top,
}

#[derive(Debug, Subcommand)]
enum Top {
    #[command(flatten)]
    Run(Command),
    /// Rerun the command stored in a manifest and compare output checksums.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Manifest written by an earlier run.
    manifest: PathBuf,
}

fn main() -> ExitCode {
    let args = match config::expand(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Invalid parameters and malformed inputs exit with 2, anything else with 1.
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<hopfspike::Error>() {
            return match err {
                hopfspike::Error::Domain(_) | hopfspike::Error::Config(_) | hopfspike::Error::Format(_) => EXIT_INPUT,
                _ => EXIT_FAIL,
            };
        }
    }
    EXIT_FAIL
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.top {
        Top::Run(cmd) => execute(canonical(cmd)?, &cli.out),
        Top::Replay(args) => replay(&args.manifest, &cli.out),
    }
}

/// Stores input paths in absolute form so manifests replay from anywhere.
fn canonical(mut cmd: Command) -> Result<Command> {
    if let Command::Lift(args) = &mut cmd {
        args.field = args
            .field
            .canonicalize()
            .map_err(|e| hopfspike::Error::Format(format!("{}: {e}", args.field.display())))?;
    }
    Ok(cmd)
}

fn execute(cmd: Command, out_dir: &Path) -> Result<bool> {
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let inputs = commands::inputs(&cmd)?;
    let mut out = Outputs::new(out_dir)?;
    let outcome = commands::run(&cmd, &mut out)?;
    for line in &outcome.lines {
        println!("{line}");
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_hash: manifest::input_hash(&cmd, &inputs)?,
        command: cmd,
        inputs,
        outputs: out.records()?,
        passed: outcome.passed,
        started_unix: started,
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
    };
    out.write_json(MANIFEST_FILE, &manifest)?;
    println!("{}", if outcome.passed { "PASS" } else { "FAIL" });
    Ok(outcome.passed)
}

fn replay(path: &Path, out_dir: &Path) -> Result<bool> {
    let old = manifest::read(path)?;
    for input in &old.inputs {
        let now = manifest::FileRecord::of(Path::new(&input.path), input.path.clone())?;
        if now.sha256 != input.sha256 {
            bail!("input {} changed since the recorded run", input.path);
        }
    }
    if out_dir.canonicalize().ok() == path.parent().and_then(|p| p.canonicalize().ok()) {
        bail!("replay needs an output directory other than the manifest's");
    }
    execute(old.command, out_dir)?;
    let new = manifest::read(&out_dir.join(MANIFEST_FILE)).context("reading the replayed manifest")?;
    let mut same = new.outputs.len() == old.outputs.len();
    for rec in &old.outputs {
        match new.outputs.iter().find(|r| r.path == rec.path) {
            Some(r) if r.sha256 == rec.sha256 => println!("identical {}", rec.path),
            Some(_) => {
                println!("differs   {}", rec.path);
                same = false;
            }
            None => {
                println!("missing   {}", rec.path);
                same = false;
            }
        }
    }
    println!("{}", if same { "REPLAY IDENTICAL" } else { "REPLAY DIFFERS" });
    Ok(same)
}
