//! `tstruct`: batch front end for classifying compactly generated
//! t-structures by their filtrations by supports.
//!
//! Exit codes: 0 success, 1 a Conditional verdict under `--strict`, 2 input
//! error, 3 resource guard exceeded, 4 a verification suite failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use tstruct_core::doc::PosetDoc;
use tstruct_core::report::{enumerate_report, run_job, spectrum_report, to_json, ClassifyOptions};
use tstruct_core::verify::{run_suite, SuiteParams, SuiteReport, DEFAULT_SEED, SUITE_NAMES};
use tstruct_core::{parse_job, Error, Limits};

const GUARD_OVERRIDE: &str = "TSTRUCT_GUARD_OVERRIDE";

const EXIT_CONDITIONAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_VERIFY_FAIL: u8 = 4;

#[derive(Parser)]
#[command(name = "tstruct", version, about = "Classify t-structures via filtrations by supports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Write the report to this path instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the prime spectrum of a ring document.
    Spectrum {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Classify every filtration of a job document.
    Classify {
        file: PathBuf,
        /// Exit with status 1 if any verdict is conditional.
        #[arg(long)]
        strict: bool,
        /// Use only the cheap sufficient criteria; undecided cases report `grothendieck`.
        #[arg(long)]
        fastpaths_only: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Census of all filtrations with jumps in a window.
    Enumerate {
        file: PathBuf,
        /// Window `lo:hi` of admissible jump positions.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: (i64, i64),
        /// Print only the totals per verdict, without the listing.
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        fastpaths_only: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run an exhaustive verification suite.
    Verify {
        #[arg(value_parser = PossibleValuesParser::new(SUITE_NAMES))]
        suite: String,
        /// Suite parameters, or a ring, poset or job document to run the suite on.
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn limits() -> Limits {
    if std::env::var_os(GUARD_OVERRIDE).is_some() {
        Limits::unbounded()
    } else {
        Limits::default()
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &Output, text: String) -> Result<(), Error> {
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render<T: serde::Serialize>(output: &Output, report: &T, text: impl FnOnce() -> String) -> Result<(), Error> {
    if output.json {
        emit(output, to_json(report) + "\n")
    } else {
        emit(output, text())
    }
}

/// Suite parameters from a verify input: an explicit parameter document
/// (whose `suite` must match), a job listing the suite, or a ring / poset /
/// job document supplying the domain with default parameters.
fn suite_params(suite: &str, text: &str) -> Result<Vec<SuiteParams>, Error> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Input("verify input must be a JSON object".into()))?;
    let parse = |v: Value| {
        serde_json::from_value::<SuiteParams>(v).map_err(|e| Error::Input(format!("invalid {suite} parameters: {e}")))
    };
    if let Some(name) = obj.get("suite") {
        if name.as_str() != Some(suite) {
            return Err(Error::Input(format!("parameter file is for suite {name}, not {suite:?}")));
        }
        return Ok(vec![parse(value)?]);
    }
    if obj.contains_key("ring") {
        let job = parse_job(text)?;
        let listed: Vec<SuiteParams> = job.verifications.iter().filter(|p| p.name() == suite).cloned().collect();
        if !listed.is_empty() {
            return Ok(listed);
        }
    }
    let mut params = Map::new();
    params.insert("suite".into(), Value::from(suite));
    let ring = if obj.contains_key("variant") {
        Some(value.clone())
    } else {
        obj.get("ring").cloned()
    };
    match suite {
        "lemma31" | "prop32" => {
            let ring = ring.ok_or_else(|| Error::Input(format!("suite {suite} needs a ring document")))?;
            params.insert("ring".into(), ring);
        }
        "prop53" | "cor512" => {
            let poset = if obj.contains_key("elements") {
                Some(value.clone())
            } else if let Some(ring) = ring {
                let ring = parse_job(&ring.to_string())?.ring.build()?;
                Some(serde_json::to_value(PosetDoc::from_poset(&ring.spectrum())).expect("poset documents serialize"))
            } else {
                None
            };
            if let Some(p) = poset {
                params.insert("poset".into(), p);
            }
        }
        _ => {}
    }
    Ok(vec![parse(Value::Object(params))?])
}

fn run(cli: Cli) -> Result<u8, Error> {
    let limits = limits();
    match cli.command {
        Command::Spectrum { file, output } => {
            let ring = parse_job(&read(&file)?)?.ring.build()?;
            let report = spectrum_report(&ring);
            render(&output, &report, || report.render_text())?;
            Ok(0)
        }
        Command::Classify {
            file,
            strict,
            fastpaths_only,
            output,
        } => {
            let job = parse_job(&read(&file)?)?;
            let report = run_job(&job, ClassifyOptions { fastpaths_only }, &limits)?;
            render(&output, &report, || report.render_text())?;
            if !report.all_verifications_passed() {
                Ok(EXIT_VERIFY_FAIL)
            } else if strict && report.has_conditional() {
                Ok(EXIT_CONDITIONAL)
            } else {
                Ok(0)
            }
        }
        Command::Enumerate {
            file,
            window: (lo, hi),
            stats,
            fastpaths_only,
            output,
        } => {
            let ring = parse_job(&read(&file)?)?.ring.build()?;
            let report = enumerate_report(&ring, lo, hi, stats, ClassifyOptions { fastpaths_only }, &limits)?;
            render(&output, &report, || report.render_text())?;
            Ok(0)
        }
        Command::Verify {
            suite,
            file,
            seed,
            output,
        } => {
            let reports = suite_params(&suite, &read(&file)?)?
                .iter()
                .map(|p| run_suite(p, seed, &limits))
                .collect::<Result<Vec<SuiteReport>, Error>>()?;
            let passed = reports.iter().all(|r| r.passed);
            render(&output, &reports, || reports.iter().map(SuiteReport::render_text).collect())?;
            Ok(if passed { 0 } else { EXIT_VERIFY_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tstruct: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => EXIT_RESOURCE,
                Error::Input(_) | Error::Precondition(_) => EXIT_INPUT,
            })
        }
    }
}
