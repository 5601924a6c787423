//! Batch CLI. Every subcommand reads one JSON payload, runs one job,
//! and writes one report.
//!
//! Exit codes: 0 positive verdict, 2 negative verdict (still a
//! successful run; the report explains), 1 input or runtime error.
//! Usage errors also exit 1 so that 2 keeps its mathematical meaning.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use freiheit::jobs::{run, Command, ConfigOverrides};

#[derive(Parser)]
#[command(
    name = "freiheit",
    version,
    about = "Freeness certificates for matrix groups, displacement obstructions, \
             and Euler-characteristic bookkeeping"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct JobArgs {
    /// Input JSON document; `-` reads stdin.
    #[arg(long, value_name = "FILE")]
    input: String,

    /// Report destination; `-` writes stdout.
    #[arg(long, value_name = "FILE", default_value = "-")]
    out: String,

    /// Seed for every randomized step; recorded in the report.
    #[arg(long)]
    seed: Option<u64>,

    /// Tolerance for floating-point verdicts.
    #[arg(long)]
    tol: Option<f64>,

    /// Search depth (syllable count or Nielsen-move budget).
    #[arg(long)]
    depth: Option<usize>,

    /// Re-check a stored certificate instead of running the search.
    /// Accepts a bare certificate or a whole previous report.
    #[arg(long)]
    verify: bool,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Certify that matrices generate a free product, by polynomial
    /// degree profiles of alternating words.
    CertifyMagnus(JobArgs),
    /// Certify independence of Moebius transformations by pairwise
    /// disjoint isometric disks.
    CertifySchottky(JobArgs),
    /// Search for a basepoint whose displacements obstruct
    /// simultaneous discreteness and independence.
    Obstruct(JobArgs),
    /// Compute (words) or bracket (matrices) the independence number
    /// of a finite set.
    Iof(JobArgs),
    /// Upper-bound the minimal independence number of a free group
    /// over Nielsen-reachable generating sets.
    MiofBound(JobArgs),
    /// Reduced Euler characteristic and deficiency of a group
    /// descriptor.
    Chibar(JobArgs),
    /// Check independence evidence for a generating set against the
    /// freeness bound chibar(G) < iof.
    TheoremB(JobArgs),
    /// Check that killing generators cannot raise the independence
    /// number.
    QuotientCheck(JobArgs),
}

impl CliCommand {
    fn split(&self) -> (Command, &JobArgs) {
        match self {
            CliCommand::CertifyMagnus(a) => (Command::CertifyMagnus, a),
            CliCommand::CertifySchottky(a) => (Command::CertifySchottky, a),
            CliCommand::Obstruct(a) => (Command::Obstruct, a),
            CliCommand::Iof(a) => (Command::Iof, a),
            CliCommand::MiofBound(a) => (Command::MiofBound, a),
            CliCommand::Chibar(a) => (Command::Chibar, a),
            CliCommand::TheoremB(a) => (Command::TheoremB, a),
            CliCommand::QuotientCheck(a) => (Command::QuotientCheck, a),
        }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn write_output(path: &str, report: &Value) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    if path == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}"))
    }
}

fn fail(message: String) -> ExitCode {
    let doc = json!({ "error": message });
    eprintln!("{}", serde_json::to_string_pretty(&doc).expect("error doc serializes"));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if ok { 0 } else { 1 });
        }
    };
    let (command, args) = cli.command.split();

    let raw = match read_input(&args.input) {
        Ok(raw) => raw,
        Err(msg) => return fail(msg),
    };
    let payload: Value = match serde_json::from_str(&raw) {
        Ok(v) => v,
        Err(e) => return fail(format!("input is not valid JSON: {e}")),
    };

    let overrides = ConfigOverrides {
        seed: args.seed,
        tol: args.tol,
        depth: args.depth,
        verify: args.verify,
    };
    match run(command, &payload, &overrides) {
        Ok(outcome) => {
            if let Err(msg) = write_output(&args.out, &outcome.report) {
                return fail(msg);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => fail(e.to_string()),
    }
}
