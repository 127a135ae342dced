//! `kodaira-kit`: command-line front end for kodaira-core.
//!
//! Every subcommand prints one JSON document (or a table with
//! `--format table`) on stdout. Exit status: 0 on success, 1 when the
//! computation fails or returns a negative verdict, 2 on malformed input.

mod commands;
mod docs;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "kodaira-kit", version, about = "Exact computations with line bundles on projective space")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cech cohomology of O(d) on P^n, graded by Laurent multidegree.
    Cohomology {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        q: usize,
        /// Bound on multidegree entries; defaults to |d| + 1.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Monomial cocycles on the standard cover of P^n.
    Picard {
        #[command(subcommand)]
        op: PicardOp,
    },
    /// Divisors and rational functions on P^1.
    Divisor {
        #[command(subcommand)]
        op: DivisorOp,
    },
    /// Blowup of C^n at the origin.
    Blowup {
        #[command(subcommand)]
        op: BlowupOp,
    },
    /// Curvature matrix of a Hermitian metric.
    Curvature(MetricArgs),
    /// Positive-definiteness of a curvature matrix at sample points.
    Positivity {
        /// Coordinate arrays in C^n, or `default`.
        #[arg(long, default_value = "default")]
        points: String,
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// The map to projective space given by a basis of sections.
    Kodaira {
        #[command(subcommand)]
        op: KodairaOp,
    },
    /// Runs the built-in invariant suite.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum PicardOp {
    /// Checks the cocycle identities.
    Check {
        #[arg(long)]
        cocycle: String,
    },
    /// Tensor product of two cocycles.
    Tensor {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Degree of the standard bundle equivalent to a cocycle.
    Degree {
        #[arg(long)]
        cocycle: String,
    },
    /// The cocycle of O(d).
    Standard {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Dual cocycle.
    Dual {
        #[arg(long)]
        cocycle: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum DivisorOp {
    /// Order of a function at a point.
    Ord {
        #[arg(long)]
        function: String,
        /// `p/q` or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Divisor of a function whose numerator and denominator split.
    Principal {
        #[arg(long)]
        function: String,
    },
    /// Transition cocycle of the bundle of a divisor.
    Bundle {
        #[arg(long)]
        divisor: String,
    },
    /// Basis of L(D).
    Sections {
        #[arg(long)]
        divisor: String,
    },
    /// Linear equivalence with a witness function.
    Equiv {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum BlowupOp {
    /// Chart transition from chart j to chart k.
    Transition {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
    },
    /// Jacobian determinant of a chart transition against (z_j/z_k)^(n-1).
    Jacobian {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
    },
    /// Checks that K tensor [E]^(-exponent) has sign-only transitions.
    VerifyCanonical {
        #[arg(long)]
        n: usize,
        /// Defaults to n - 1.
        #[arg(long, allow_hyphen_values = true)]
        exponent: Option<i64>,
        /// Cocycle of the outer charts; defaults to the trivial one on P^n.
        #[arg(long)]
        base: Option<String>,
    },
    /// Cocycle of the exceptional divisor on P^(n-1).
    Exceptional {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
pub struct MetricSource {
    /// Metric document.
    #[arg(long)]
    metric: Option<String>,
    /// Fubini-Study form on P^N.
    #[arg(long)]
    fs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    #[command(flatten)]
    source: MetricSource,
    /// Affine chart for `--fs`.
    #[arg(long, default_value_t = 0, requires = "fs")]
    chart: usize,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    /// Projective points as coordinate arrays, or `default`.
    #[arg(long, default_value = "default")]
    samples: String,
    /// Basis document; defaults to all monomials of degree d.
    #[arg(long)]
    basis: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum KodairaOp {
    /// Common zeros of the sections.
    Basepoints(MapArgs),
    /// Images of the sample points.
    Map(MapArgs),
    /// Separation of all pairs of sample points.
    Inject(MapArgs),
    /// Rank of the differential at each sample point.
    Immerse(MapArgs),
    /// Restriction of degree-d forms onto every pair of sample points.
    TwoPoint {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value = "default")]
        samples: String,
    },
    /// Smallest degree whose full basis passes every check.
    Search {
        #[arg(long)]
        d_max: i64,
        #[arg(long, default_value = "default")]
        samples: String,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("KODAIRA_KIT_THREADS") else {
        return Ok(());
    };
    let k: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| format!("KODAIRA_KIT_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(cli.command) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.doc).expect("serializable") + "\n",
                Format::Table => table::render(&out.doc),
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
