//! The `framedef` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::counting::{self, CountOptions, CountReport, CountRow, Method};
use crate::crystalline::{choose_weights, classify_character_point, witness_components};
use crate::deformation::{
    check_relation, det_component, sample_point_on_v, ParamsRepr, PointFile, PointMeta,
};
use crate::error::Error;
use crate::paths::{connect_to_diagonal, verify_certificate, CertificateFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "framedef", version, about = "Framed deformations of the trivial representation as matrix tuples")]
pub struct Cli {
    /// Parameters as inline JSON `{"p":..,"q":..,"d":..,"n":..,"N":..,"f0":..}` or a path to such a file.
    #[arg(long, global = true)]
    params: Option<String>,
    /// Overrides the working precision N.
    #[arg(long, global = true)]
    precision: Option<i64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a point of V with prescribed eigenvalue labels.
    Gen {
        /// Comma-separated labels k (eigenvalue ζ^k), one per row.
        #[arg(long)]
        eigenvalues: String,
    },
    /// Check the relation on a point file.
    Check { point: PathBuf },
    /// Print the component label of a point file.
    Classify { point: PathBuf },
    /// Build a path certificate from a point of V.
    Connect { point: PathBuf },
    /// Verify a path certificate.
    Verify { certificate: PathBuf },
    /// Count pairs (X, Y) with X Y X⁻¹ = Y^(q+1).
    Count(CountArgs),
    /// Crystalline witness labels.
    Crystalline {
        #[arg(long, default_value_t = 1)]
        j_count: usize,
        #[arg(long, default_value_t = 1)]
        inertia_degree: u32,
        /// Draw random weights from --seed instead of the minimal choice.
        #[arg(long)]
        random_weights: bool,
    },
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// Comma-separated extension degrees m for fields F_{p^m}.
    #[arg(long, default_value = "")]
    fields: String,
    /// Comma-separated exponents k for rings Z/p^k.
    #[arg(long, default_value = "")]
    rings: String,
    /// Count by exhaustive enumeration instead of the class sum.
    #[arg(long)]
    brute: bool,
    #[arg(long, default_value_t = 6)]
    kernel_cap: u32,
    #[arg(long, default_value_t = 100_000_000)]
    budget: u128,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Malformed(_) | Error::DimensionMismatch(_) | Error::UnsupportedParameters(_) => EXIT_MALFORMED,
            Error::NotInV | Error::AssumptionViolated(_) => EXIT_PRECONDITION,
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_SEMANTIC,
        };
        Failure { code, message: e.to_string() }
    }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_MALFORMED, message: message.into() }
}

fn semantic(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_SEMANTIC, message: message.into() }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| semantic(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_params(cli: &Cli) -> CliResult<ParamsRepr> {
    let raw = cli.params.as_ref().ok_or_else(|| malformed("--params is required"))?;
    let text = if raw.trim_start().starts_with('{') {
        raw.clone()
    } else {
        fs::read_to_string(raw).map_err(|e| malformed(format!("{raw}: {e}")))?
    };
    let mut repr: ParamsRepr = serde_json::from_str(&text).map_err(|e| malformed(format!("params: {e}")))?;
    if let Some(n) = cli.precision {
        repr.precision = n;
    }
    Ok(repr)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|_| malformed(format!("bad {what} entry {x:?}"))))
        .collect()
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen { eigenvalues } => {
            let repr = load_params(cli)?;
            let params = repr.build()?;
            let eig: Vec<usize> = parse_list(eigenvalues, "eigenvalue")?;
            let pt = sample_point_on_v(&params, cli.seed, &eig)?;
            emit(&cli.out, &pt.to_file(Some(PointMeta { seed: cli.seed, eigenvalues: eig })))
        }
        Command::Check { point } => {
            let file: PointFile = read_json(point)?;
            let pt = file.to_point()?;
            if !pt.is_residually_trivial() {
                return Err(semantic("relation violated: some matrix is not ≡ I mod m"));
            }
            let residual = check_relation(&pt)?;
            println!("residual valuation: {residual}");
            if !residual.at_least(pt.field().tau()) {
                return Err(semantic(format!("relation violated: residual {residual} < τ = {}", pt.field().tau())));
            }
            let label = det_component(&pt)?;
            println!("component label: {}", label.index);
            Ok(())
        }
        Command::Classify { point } => {
            let file: PointFile = read_json(point)?;
            let pt = file.to_point()?;
            let label = det_component(&pt)?;
            println!("component label: {}", label.index);
            if pt.params.n == 1 {
                let values: Vec<_> = pt.matrices.iter().map(|m| m.get(0, 0).clone()).collect();
                let chi = classify_character_point(&values)?;
                println!("character label: {}", chi.index);
            }
            Ok(())
        }
        Command::Connect { point } => {
            let file: PointFile = read_json(point)?;
            let pt = file.to_point()?;
            let cert = connect_to_diagonal(&pt)?;
            emit(&cli.out, &cert.to_file())
        }
        Command::Verify { certificate } => {
            let file: CertificateFile = read_json(certificate)?;
            let cert = file.to_certificate()?;
            let report = verify_certificate(&cert);
            if report.passed() {
                println!("certificate verified: {} segments, label {}", report.segments, cert.label.index);
                Ok(())
            } else {
                for f in &report.failures {
                    println!("{f}");
                }
                Err(semantic(format!("{} clause failure(s)", report.failures.len())))
            }
        }
        Command::Count(args) => {
            let opts = CountOptions { kernel_cap: args.kernel_cap, field_budget: args.budget, brute_budget: args.budget };
            let ms: Vec<u32> = parse_list(&args.fields, "field degree")?;
            let ks: Vec<u32> = parse_list(&args.rings, "ring exponent")?;
            if ms.is_empty() && ks.is_empty() {
                return Err(malformed("give --fields and/or --rings"));
            }
            let mut report = if args.brute {
                let mut rows = Vec::new();
                for &m in &ms {
                    let count = counting::count_pairs_bruteforce(args.n, args.p, m, args.q, &opts)?;
                    let size = args.p.pow(m);
                    rows.push(CountRow {
                        structure: format!("F_{size}"),
                        size,
                        count,
                        slope: (count as f64).ln() / (size as f64).ln(),
                        method: Method::BruteForce,
                    });
                }
                let pairs: Vec<(u64, u128)> = rows.iter().map(|r| (r.size, r.count)).collect();
                CountReport { n: args.n, q: args.q, rows, slope: Some(counting::dimension_slope(args.n, &pairs)) }
            } else {
                counting::field_report(args.n, args.p, &ms, args.q, &opts)?
            };
            if ms.is_empty() {
                report.slope = None;
            }
            for &k in &ks {
                let count = counting::count_pairs_ring(args.n, args.p, k, args.q, &opts)?;
                let size = args.p.pow(k);
                report.rows.push(CountRow {
                    structure: format!("Z/{size}"),
                    size,
                    count,
                    slope: (count as f64).ln() / (size as f64).ln(),
                    method: Method::RingBruteForce,
                });
            }
            for r in &report.rows {
                eprintln!("{:>8}  {:>14}  slope {:.4}  {:?}", r.structure, r.count, r.slope, r.method);
            }
            emit(&cli.out, &report)
        }
        Command::Crystalline { j_count, inertia_degree, random_weights } => {
            let repr = load_params(cli)?;
            let params = repr.build()?;
            let seed = random_weights.then_some(cli.seed);
            let w = choose_weights(params.field.q(), *j_count, seed)?.with_inertia_degree(*inertia_degree);
            let report = witness_components(&params, &w)?;
            for r in &report.rows {
                eprintln!("m = {:>2}  label {:>2}  regular {}", r.m, r.label, r.regular);
            }
            emit(&cli.out, &report)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
