//! `dyndeg` command-line front end.
//!
//! Exit codes are a stable contract: 0 pass, 1 verification failed,
//! 2 input/parse error, 3 unsupported combination or dimension cap.

mod commands;
mod desc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{effective_seed, run_degrees, run_report, run_sequence, run_verify, CheckName};
use desc::SystemDescription;
use report::{CheckOut, DegreesOut, SequenceOut};

const EXIT_PASS: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

/// Errors on the CLI boundary, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: file, syntax, validation (exit 2).
    Input(String),
    /// Out of certified scope: caps, uncertifiable combinations (exit 3).
    Unsupported(String),
}

impl From<dyndeg::Error> for CliError {
    fn from(e: dyndeg::Error) -> Self {
        match e {
            dyndeg::Error::DimensionCap { .. }
            | dyndeg::Error::Unsupported(_)
            | dyndeg::Error::RootIsolation(_) => CliError::Unsupported(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dyndeg",
    about = "Exact degree sequences, dynamical degrees and relative dynamical \
             degrees for monomial, rational and fibered self-maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the dynamical degree profile(s) of the system.
    Degrees {
        file: PathBuf,
        /// Seed for random base points and sampled conjugators.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the result as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the degree sequence table of one order.
    Sequence {
        file: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run one verification check.
    Verify {
        file: PathBuf,
        /// theorem1.1 | corollary1.2 | corollary1.3 | logconcavity |
        /// powerrule | lemma4.2
        #[arg(long)]
        check: String,
        /// Iterations / power for checks that take one.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run degrees, a sequence and every applicable check; write JSON.
    Report {
        file: PathBuf,
        #[arg(long)]
        json: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(CliError::Unsupported(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(EXIT_UNSUPPORTED)
        }
    }
}

/// Thread count comes from DYNDEG_THREADS when set.
fn configure_threads() {
    if let Ok(v) = std::env::var("DYNDEG_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn load(file: &PathBuf) -> Result<SystemDescription, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
    SystemDescription::parse(&text)
}

fn write_json<T: serde::Serialize>(path: &PathBuf, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("JSON encoding failed: {e}")))?;
    std::fs::write(path, text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Degrees { file, seed, json } => {
            let desc = load(&file)?;
            let seed = effective_seed(seed, &desc);
            let out = run_degrees(&desc, seed)?;
            print_degrees(&out);
            if let Some(path) = json {
                write_json(&path, &out)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Sequence {
            file,
            p,
            n,
            seed,
            json,
        } => {
            let desc = load(&file)?;
            let seed = effective_seed(seed, &desc);
            let out = run_sequence(&desc, p, n, seed)?;
            print_sequence(&out);
            if let Some(path) = json {
                write_json(&path, &out)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Verify {
            file,
            check,
            n,
            seed,
            json,
        } => {
            let desc = load(&file)?;
            let seed = effective_seed(seed, &desc);
            let check = CheckName::parse(&check)?;
            let out = run_verify(&desc, check, n, seed)?;
            print_check(&out);
            if let Some(path) = json {
                write_json(&path, &out)?;
            }
            Ok(if out.passed() {
                EXIT_PASS
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::Report { file, json, seed } => {
            let desc = load(&file)?;
            let seed = effective_seed(seed, &desc);
            let out = run_report(&desc, seed)?;
            if let Some(d) = &out.degrees {
                print_degrees(d);
            }
            if let Some(s) = &out.sequence {
                print_sequence(s);
            }
            for check in &out.checks {
                print_check(check);
            }
            println!("overall: {}", out.overall.to_uppercase());
            write_json(&json, &out)?;
            Ok(if out.overall == "pass" {
                EXIT_PASS
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

fn print_degrees(out: &DegreesOut) {
    println!("system: {}", out.system);
    for profile in &out.profiles {
        println!("{}", profile.render());
    }
    if let Some(d1) = &out.d1 {
        println!(
            "d_1 = {} ({} estimate, tol {:.2e}; upper bound {} at n = {})",
            d1.estimate, d1.method, d1.tol, d1.upper_bound, d1.upper_bound_at
        );
    }
    if let Some(point) = &out.base_point {
        println!("base point: [{}]", point.join(", "));
    }
}

fn print_sequence(out: &SequenceOut) {
    let mut header = vec!["n".to_string()];
    header.extend(out.columns.iter().map(|c| c.label.clone()));
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for (ci, column) in out.columns.iter().enumerate() {
        for v in &column.values {
            widths[ci + 1] = widths[ci + 1].max(v.len());
        }
    }
    widths[0] = widths[0].max(out.n.to_string().len());
    let row = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        println!("{}", padded.join("  "));
    };
    row(header);
    for i in 0..out.n {
        let mut cells = vec![(i + 1).to_string()];
        for column in &out.columns {
            cells.push(
                column
                    .values
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| "-".to_string()),
            );
        }
        row(cells);
    }
    if let Some(point) = &out.base_point {
        println!("base point: [{}]", point.join(", "));
    }
}

fn print_check(out: &CheckOut) {
    println!("{}: {}", out.name, out.verdict.to_uppercase());
    if let Some(note) = &out.note {
        println!("  {note}");
    }
    for e in &out.theorem_entries {
        println!(
            "  p={}: {}, witness j={} (ties {:?}), residual {:.2e} (tol {:.2e})",
            e.p, e.verdict, e.witness, e.tied_witnesses, e.residual, e.tolerance
        );
    }
}
