//! Single-binary front end. Subcommands map one-to-one onto the library
//! operations; results print as JSON on stdout, diagnostics go to stderr.
//!
//! Exit codes: 0 success (or verification pass), 1 verification failure,
//! 2 input or usage error, 3 enumeration or solver limit exceeded.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fracmatch::counting::CountError;
use fracmatch::lp::LpError;
use fracmatch::verify::VerifyError;
use fracmatch::{construct, counting, lp, verify, Format, Hypergraph, Rational};

#[derive(Parser)]
#[command(
    name = "fracmatch",
    version,
    about = "Exact extremal edge counts, threshold families, and fractional-matching certificates for k-uniform hypergraphs"
)]
struct Cli {
    /// Worker threads for verification workloads; results do not depend on it
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Params {
    /// Number of vertices
    #[arg(long)]
    n: u64,
    /// Edge size
    #[arg(long)]
    k: u64,
    /// Cardinality, as `p/q` or a decimal, parsed exactly
    #[arg(long)]
    s: String,
}

#[derive(Copy, Clone, ValueEnum)]
enum FileFormat {
    Plain,
    Json,
}

impl From<FileFormat> for Format {
    fn from(value: FileFormat) -> Format {
        match value {
            FileFormat::Plain => Format::Plain,
            FileFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Maximum edge count admitting no fractional matching of cardinality s
    /// (requires n*s to be an integer)
    Count(Params),
    /// Floor/ceiling bracket on that maximum for cardinalities off the
    /// integer grid
    Bounds(Params),
    /// Write the extremal threshold family for prefix size c
    Construct {
        #[command(flatten)]
        params: Params,
        /// Prefix size, between 1 and n*s - 1
        #[arg(long)]
        c: u64,
        /// Output file; `-` or absent means stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FileFormat::Plain)]
        format: FileFormat,
    },
    /// Fractional matching number of a hypergraph file, with certificates
    Nu {
        /// Input file; `-` means stdin
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FileFormat::Plain)]
        format: FileFormat,
    },
    /// Decide whether a hypergraph has a fractional matching of cardinality s
    Check {
        /// Input file; `-` means stdin
        #[arg(long = "in")]
        input: PathBuf,
        /// Cardinality, as `p/q` or a decimal, parsed exactly
        #[arg(long)]
        s: String,
        #[arg(long, value_enum, default_value_t = FileFormat::Plain)]
        format: FileFormat,
    },
    /// Verification drivers; exit 0 on pass, 1 on fail
    Verify {
        #[command(subcommand)]
        mode: VerifyMode,
    },
}

#[derive(Subcommand)]
enum VerifyMode {
    /// Formula vs construction vs LP on the extremal family, including all
    /// one-edge extensions
    Extremal(Params),
    /// Enumerate every family one edge above the maximum
    Tightness {
        #[command(flatten)]
        params: Params,
        /// Refuse enumerations larger than this many families
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Seeded random families one edge above the maximum
    Random {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 500)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Step, random, and perturbed weight vectors against the maximum
    Threshold {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bracket and step families for cardinalities off the integer grid
    BoundsCheck(Params),
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<CountError> for Failure {
    fn from(err: CountError) -> Failure {
        Failure::usage(err.to_string())
    }
}

impl From<fracmatch::RationalParseError> for Failure {
    fn from(err: fracmatch::RationalParseError) -> Failure {
        Failure::usage(err.to_string())
    }
}

impl From<fracmatch::HypergraphError> for Failure {
    fn from(err: fracmatch::HypergraphError) -> Failure {
        Failure::usage(err.to_string())
    }
}

impl From<fracmatch::ConstructError> for Failure {
    fn from(err: fracmatch::ConstructError) -> Failure {
        Failure::usage(err.to_string())
    }
}

impl From<LpError> for Failure {
    fn from(err: LpError) -> Failure {
        let code = match err {
            LpError::TooManyEdges { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(err: VerifyError) -> Failure {
        let code = match &err {
            VerifyError::EnumerationTooLarge { .. }
            | VerifyError::UniverseTooLarge { .. }
            | VerifyError::Lp(LpError::TooManyEdges { .. }) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    fracmatch::configure_workers(cli.jobs);
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn parse_cardinality(text: &str) -> Result<Rational, Failure> {
    Ok(text.parse::<Rational>()?)
}

fn small_dims(params: &Params) -> Result<(u32, u32, Rational), Failure> {
    let n = u32::try_from(params.n).map_err(|_| Failure::usage("n does not fit in 32 bits"))?;
    let k = u32::try_from(params.k).map_err(|_| Failure::usage("k does not fit in 32 bits"))?;
    Ok((n, k, parse_cardinality(&params.s)?))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))
    }
}

fn emit_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output serializes")
    );
}

#[derive(Serialize)]
struct CountOutput {
    #[serde(rename = "M")]
    max_edges: String,
    argmax_c: u64,
    terms: Vec<String>,
}

#[derive(Serialize)]
struct BoundsOutput {
    lower: String,
    upper: String,
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Count(params) => {
            let s = parse_cardinality(&params.s)?;
            let ec = counting::extremal_count(params.n, params.k, &s)?;
            emit_json(&CountOutput {
                max_edges: ec.max_edges.to_string(),
                argmax_c: ec.argmax_c,
                terms: ec.terms.iter().map(|t| t.to_string()).collect(),
            });
            Ok(0)
        }
        Command::Bounds(params) => {
            let s = parse_cardinality(&params.s)?;
            let bounds = counting::extremal_count_bounds(params.n, params.k, &s)?;
            emit_json(&BoundsOutput {
                lower: bounds.lower.to_string(),
                upper: bounds.upper.to_string(),
            });
            Ok(0)
        }
        Command::Construct {
            params,
            c,
            out,
            format,
        } => {
            let (n, k, s) = small_dims(&params)?;
            let family = construct::extremal_family(n, k, &s, c)?;
            let text = family.serialize(format.into());
            match out {
                Some(path) if path.as_os_str() != "-" => {
                    std::fs::write(&path, text)
                        .map_err(|e| Failure::usage(format!("writing {}: {e}", path.display())))?;
                }
                _ => print!("{text}"),
            }
            Ok(0)
        }
        Command::Nu { input, format } => {
            let text = read_input(&input)?;
            let h = Hypergraph::parse(&text, Format::from(format))?;
            let result = lp::matching_number(&h)?;
            emit_json(&result);
            Ok(0)
        }
        Command::Check { input, s, format } => {
            let s = parse_cardinality(&s)?;
            let text = read_input(&input)?;
            let h = Hypergraph::parse(&text, Format::from(format))?;
            let decision = lp::has_matching(&h, &s)?;
            emit_json(&decision);
            Ok(0)
        }
        Command::Verify { mode } => {
            let report = match mode {
                VerifyMode::Extremal(params) => {
                    let (n, k, s) = small_dims(&params)?;
                    verify::verify_extremal(n, k, &s)?
                }
                VerifyMode::Tightness { params, limit } => {
                    let (n, k, s) = small_dims(&params)?;
                    verify::exhaustive_tightness(n, k, &s, limit)?
                }
                VerifyMode::Random {
                    params,
                    samples,
                    seed,
                } => {
                    let (n, k, s) = small_dims(&params)?;
                    verify::randomized_tightness(n, k, &s, samples, seed)?
                }
                VerifyMode::Threshold {
                    params,
                    trials,
                    seed,
                } => {
                    let (n, k, s) = small_dims(&params)?;
                    verify::threshold_search(n, k, &s, trials, seed)?
                }
                VerifyMode::BoundsCheck(params) => {
                    let (n, k, s) = small_dims(&params)?;
                    verify::cross_check_bounds(n, k, &s)?
                }
            };
            println!("{}", report.to_json());
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}
