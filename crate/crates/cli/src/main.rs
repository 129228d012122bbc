use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use condisc_core::conductor::{analyze_full, Analysis, AnalyzeOptions, Fault, Report};
use condisc_core::error::{AnalysisError, InputError};
use condisc_core::harness::{run_trial, GenSpec, SuiteSummary};
use condisc_core::input::parse_instance_file;
use condisc_core::render::{dot_files, render_text};

#[derive(Parser)]
#[command(name = "condisc", version, about = "Compare the Artin conductor and the discriminant of split hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BatchFormat {
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one instance file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write t_b.dot, t_y.dot and t_x.dot into this directory.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
        /// Treat warnings as errors.
        #[arg(long)]
        strict: bool,
        /// Accept 2 or 4 roots (genus 0 or 1).
        #[arg(long)]
        allow_small_genus: bool,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Analyze every .json file in a directory, one JSON line each.
    Batch {
        dir: PathBuf,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: BatchFormat,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        allow_small_genus: bool,
    },
    /// Run random identity trials.
    #[command(hide = true)]
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(path: &Path, opts: &AnalyzeOptions) -> Result<Analysis, AnalysisError> {
    let text = fs::read_to_string(path)
        .map_err(|e| InputError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_instance_file(&text, opts.allow_small_genus)?;
    let mut analysis = analyze_full(&file.input, opts)?;
    analysis.report.label = file.label;
    Ok(analysis)
}

fn analyze(file: &Path, format: Format, dot_dir: Option<&Path>, opts: AnalyzeOptions) -> u8 {
    let analysis = match load(file, &opts) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code() as u8;
        }
    };
    if let Some(dir) = dot_dir {
        if let Err(e) = write_dots(dir, &analysis) {
            eprintln!("error: cannot write DOT files to {}: {e}", dir.display());
            return 1;
        }
    }
    let out = match format {
        Format::Text => render_text(&analysis.report, &analysis.tree),
        Format::Json => serde_json::to_string_pretty(&analysis.report).expect("report serializes") + "\n",
    };
    print!("{out}");
    for w in &analysis.report.warnings {
        eprintln!("warning: {w}");
    }
    0
}

fn write_dots(dir: &Path, analysis: &Analysis) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, body) in dot_files(analysis) {
        fs::write(dir.join(name), body)?;
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum BatchLine<'a> {
    Ok {
        file: String,
        #[serde(flatten)]
        report: &'a Report,
    },
    Failed {
        file: String,
        error: String,
        exit_code: i32,
    },
}

fn instance_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn batch(dir: &Path, opts: AnalyzeOptions) -> u8 {
    let files = match instance_files(dir) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot read directory {}: {e}", dir.display());
            return 1;
        }
    };
    if files.is_empty() {
        eprintln!("error: no instances found in {}", dir.display());
        return 1;
    }
    let results: Vec<(PathBuf, Result<Analysis, AnalysisError>)> = files
        .into_par_iter()
        .map(|f| {
            let r = load(&f, &opts);
            (f, r)
        })
        .collect();

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut code = 0u8;
    let mut failed = 0usize;
    for (path, result) in &results {
        let line = match result {
            Ok(a) => BatchLine::Ok {
                file: path.display().to_string(),
                report: &a.report,
            },
            Err(e) => {
                failed += 1;
                code = code.max(e.exit_code() as u8);
                eprintln!("{}: {e}", path.display());
                BatchLine::Failed {
                    file: path.display().to_string(),
                    error: e.to_string(),
                    exit_code: e.exit_code(),
                }
            }
        };
        let line = serde_json::to_string(&line).expect("report serializes");
        writeln!(out, "{line}").expect("stdout is writable");
    }
    eprintln!(
        "analyzed {} instances: {} ok, {} failed",
        results.len(),
        results.len() - failed,
        failed
    );
    code
}

fn fuzz(trials: usize, seed: u64) -> u8 {
    let specs: Vec<GenSpec> = (0..trials)
        .map(|k| GenSpec::random(seed.wrapping_mul(1_000_003).wrapping_add(k as u64)))
        .collect();
    let outcomes: Vec<_> = specs.par_iter().map(run_trial).collect();
    let mut summary = SuiteSummary::default();
    for (spec, t) in specs.iter().zip(outcomes) {
        summary.merge(spec, t);
    }
    for f in &summary.failures {
        eprintln!("{f}");
    }
    println!(
        "trials {} strict {} equality {} mutants flagged {} failures {}",
        summary.trials,
        summary.strict,
        summary.equality,
        summary.mutations_flagged,
        summary.failures.len()
    );
    if summary.is_ok() {
        0
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze {
            file,
            format,
            dot_dir,
            strict,
            allow_small_genus,
            inject_fault,
        } => analyze(
            &file,
            format,
            dot_dir.as_deref(),
            AnalyzeOptions {
                allow_small_genus,
                strict,
                fault: inject_fault,
            },
        ),
        Command::Batch {
            dir,
            format: BatchFormat::Jsonl,
            strict,
            allow_small_genus,
        } => batch(
            &dir,
            AnalyzeOptions {
                allow_small_genus,
                strict,
                fault: None,
            },
        ),
        Command::Fuzz { trials, seed } => fuzz(trials, seed),
    };
    ExitCode::from(code)
}
