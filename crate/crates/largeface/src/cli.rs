//! Command-line front end. Every subcommand turns its flags into a
//! [`RunConfig`], so `sweep --config` can replay any run from its manifest.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::config::{manifest_path, Experiment, RunConfig, SCHEMA_VERSION};
use crate::error::{RunError, RunResult};
use crate::experiments as ex;
use crate::output::{self, Manifest};
use crate::runner::Runner;

/// Printed by `--version`; the number in parentheses is [`SCHEMA_VERSION`].
pub const VERSION_LINE: &str = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)");

#[derive(Debug, Parser)]
#[command(name = "largeface", version = VERSION_LINE, about = "Large faces of random laminations and large dislocations of fragmentations")]
struct Cli {
    /// Worker threads for replicates (default: all cores). Results do not
    /// depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample one excursion and write its triangles.
    Triangulate(crate::config::TriangulateParams),
    /// Count large triangles over many excursions.
    CountLarge(crate::config::CountLargeParams),
    /// Sample the longest chord and compare it with its law.
    LongestChord(crate::config::LongestChordParams),
    /// Simulate a fragmentation and count large dislocations.
    Fragment(crate::config::FragmentParams),
    /// Sample stable subordinator jumps and check their laws.
    Stable(crate::config::StableParams),
    /// Evaluate closed forms and Monte Carlo constants.
    Theory(crate::config::TheoryParams),
    /// Run the experiment described by a JSON config or a manifest.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
}

/// Runs the command line and returns the process exit code: 0 on success, 2
/// for configuration and IO errors, 3 for numerical failures.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> RunResult<()> {
    let config = match cli.command {
        Command::Triangulate(p) => RunConfig::new(Experiment::Triangulate(p)),
        Command::CountLarge(p) => RunConfig::new(Experiment::CountLarge(p)),
        Command::LongestChord(p) => RunConfig::new(Experiment::LongestChord(p)),
        Command::Fragment(p) => RunConfig::new(Experiment::Fragment(p)),
        Command::Stable(p) => RunConfig::new(Experiment::Stable(p)),
        Command::Theory(p) => RunConfig::new(Experiment::Theory(p)),
        Command::Sweep(s) => load_config(&s.config)?,
    };
    config.validate()?;
    let runner = Runner::new(cli.threads)?;
    let text = execute(&config, &runner)?;
    println!("{text}");
    Ok(())
}

/// Reads a [`RunConfig`], or the `config` member of a manifest.
pub fn load_config(path: &Path) -> RunResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.to_path_buf(), source })?;
    let mut value: Value = serde_json::from_str(&text)?;
    if value.get("tool").is_some() {
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
    }
    let config: RunConfig = serde_json::from_value(value)?;
    if config.schema_version != SCHEMA_VERSION {
        return Err(RunError::config(format!(
            "{}: schema version {} is not {SCHEMA_VERSION}",
            path.display(),
            config.schema_version
        )));
    }
    Ok(config)
}

fn finish(config: &RunConfig, explicit: &Option<PathBuf>, outputs: Vec<PathBuf>, summary: Value) -> RunResult<String> {
    if let Some(path) = manifest_path(explicit, outputs.first().map(PathBuf::as_path)) {
        output::write_json(&path, &Manifest::new(config, outputs, summary.clone()))?;
    }
    Ok(serde_json::to_string_pretty(&summary)?)
}

/// Runs `config`, writes its declared outputs and manifest, and returns the
/// text for stdout.
pub fn execute(config: &RunConfig, runner: &Runner) -> RunResult<String> {
    config.validate()?;
    match &config.run {
        Experiment::Triangulate(p) => {
            let t = ex::triangulate(p)?;
            output::write_records(&p.out, &t.tree)?;
            let mut outputs = vec![p.out.clone()];
            if let Some(dump) = &p.dump_path {
                output::write_path(dump, &t.path)?;
                outputs.push(dump.clone());
            }
            finish(config, &p.manifest, outputs, t.summary())
        }
        Experiment::CountLarge(p) => {
            let o = ex::count_large(p, runner)?;
            output::write_sweep(&p.out, &o.points)?;
            let mut outputs = vec![p.out.clone()];
            if let (Some(path), Some(rows)) = (&p.ratio_out, &o.ratio) {
                output::write_ratio(path, rows)?;
                outputs.push(path.clone());
            }
            finish(config, &p.manifest, outputs, ex::count_large_summary(&o))
        }
        Experiment::LongestChord(p) => {
            let o = ex::longest_chord(p, runner)?;
            output::write_chords(&p.out, &o)?;
            finish(config, &p.manifest, vec![p.out.clone()], o.summary())
        }
        Experiment::Fragment(p) => {
            let o = ex::fragment(p, runner)?;
            for w in &o.warnings {
                eprintln!("warning: {w}");
            }
            output::write_sweep(&p.out, &o.sweep.points)?;
            let mut outputs = vec![p.out.clone()];
            if let (Some(path), Some(rows)) = (&p.ratio_out, &o.sweep.ratio) {
                output::write_ratio(path, rows)?;
                outputs.push(path.clone());
            }
            if let Some(path) = &p.events_out {
                output::write_events(path, o.first_events.as_deref().unwrap_or(&[]))?;
                outputs.push(path.clone());
            }
            finish(config, &p.manifest, outputs, o.summary())
        }
        Experiment::Stable(p) => {
            let o = ex::stable(p, runner)?;
            output::write_stable(&p.out, &o)?;
            finish(config, &p.manifest, vec![p.out.clone()], o.summary())
        }
        Experiment::Theory(p) => {
            let records = ex::theory(p, runner)?;
            let mut outputs = Vec::new();
            if let Some(path) = &p.out {
                output::write_json(path, &records)?;
                outputs.push(path.clone());
            }
            if let Some(path) = manifest_path(&p.manifest, p.out.as_deref()) {
                output::write_json(&path, &Manifest::new(config, outputs, serde_json::to_value(&records)?))?;
            }
            output::theory_json(&records)
        }
    }
}
