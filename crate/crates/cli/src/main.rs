//! `sofic`: build and check finite quasi-actions from the command line.
//!
//! Exit status 0 means every requested check passed, 1 means a check failed,
//! 2 means the input could not be used.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sofic_core::constructions::{girth_group_search, ConstructionError, GirthCertificate, SearchParams};
use sofic_core::rational::{format_rational, parse_epsilon, RationalError};
use sofic_core::request::{Outcome, Request, RequestError};
use sofic_core::{verify, Certificate, QaError, VerificationReport};

#[derive(Parser)]
#[command(name = "sofic", version, about = "Construct and verify (F, epsilon)-quasi-actions of groups on finite sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-measure a certificate's quasi-action exhaustively.
    Verify {
        #[arg(long)]
        qa: PathBuf,
        /// Threshold as "p/q"; defaults to the certificate's claim.
        #[arg(long)]
        epsilon: Option<String>,
        /// Also check bijectivity, fixpoint-freeness, inverse pairs and pairwise separation.
        #[arg(long)]
        strict: bool,
    },
    /// Run a JSON construction request and write its certificate.
    Construct {
        #[arg(long)]
        request: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a permutation group with no short relations among its generators.
    GirthSearch {
        #[arg(long)]
        labels: usize,
        /// Every nonempty reduced word up to this length must be nontrivial.
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value_t = 20_000)]
        order_cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Epsilon(#[from] RationalError),
    #[error("{0}")]
    Certificate(#[from] QaError),
    #[error("{0}")]
    Request(#[from] RequestError),
    #[error("{0}")]
    Construction(#[from] ConstructionError),
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_error(path))?;
    tmp.write_all(contents.as_bytes()).map_err(io_error(path))?;
    tmp.as_file().sync_all().map_err(io_error(path))?;
    tmp.persist(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.error })?;
    Ok(())
}

fn print_report(r: &VerificationReport) {
    let eps = format_rational(r.epsilon);
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    println!("carrier {} points, |F| = {}, epsilon {eps}", r.carrier_n, r.f.len());
    println!("(a) max product defect {} <= {eps}: {}", r.max_pair_defect(), verdict(r.condition_a));
    println!("(b) identity defect {} <= {eps}: {}", r.identity_defect, verdict(r.condition_b));
    println!(
        "(c) max fixpoints {} of {} (need more than (1-{eps})n disagreements): {}",
        r.max_fixpoints(),
        r.carrier_n,
        verdict(r.condition_c)
    );
    if let Some(s) = &r.strict {
        println!("(b') identity exact, bijective, fixpoint-free, inverse pairs: {}", verdict(s.condition_b_strict));
        println!("(c') pairwise separation over F and 1: {}", verdict(s.condition_c_strict));
    }
    println!("max defect {}", r.max_defect);
    println!("{}", if r.passed() { "PASSED" } else { "FAILED" });
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify { qa, epsilon, strict } => {
            let text = fs::read_to_string(&qa).map_err(io_error(&qa))?;
            let cert = Certificate::from_json_str(&text)?;
            let action = cert.quasi_action()?;
            let eps = match epsilon {
                Some(e) => parse_epsilon(&e)?,
                None => cert.epsilon,
            };
            let report = verify(&action, &cert.f_subset()?, eps, strict)?;
            print_report(&report);
            Ok(report.passed())
        }
        Command::Construct { request, seed, out } => {
            let text = fs::read_to_string(&request).map_err(io_error(&request))?;
            let outcome = Request::from_json_str(&text)?.run(seed)?;
            write_atomically(&out, &outcome.to_json_string())?;
            match &outcome {
                Outcome::Certificate(c) => print_report(&c.report()?),
                Outcome::Girth(w) => println!("girth group of order {} on {} points", w.order, w.degree),
            }
            println!("wrote {}", out.display());
            Ok(outcome.passed())
        }
        Command::GirthSearch { labels, bound, order_cap, seed, out } => {
            let params = SearchParams::new(order_cap, seed);
            let v = girth_group_search(labels, GirthCertificate::Words { bound }, &params)?;
            let w = v.witness();
            let mut text = serde_json::to_string(&w).expect("witness serializes");
            text.push('\n');
            write_atomically(&out, &text)?;
            println!("order {} on {} points, no relation of length <= {bound}", w.order, w.degree);
            println!("wrote {}", out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
