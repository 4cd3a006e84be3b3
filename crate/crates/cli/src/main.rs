mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hassecount::counting::CountMethod;
use hassecount::exceptions::CorollaryReading;

use crate::error::CliError;

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (rng: ChaCha8Rng from rand_chacha 0.3)");

/// Point counting on elliptic curves over finite fields by point orders.
#[derive(Debug, Parser)]
#[command(name = "hassecount", version = VERSION)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the points on a curve.
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Order of a point.
    Order {
        #[command(flatten)]
        curve: CurveArgs,
        /// `x,y` as field encodings, or `inf`.
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Quadratic twist of a curve, with both counts for q <= 65536.
    Twist {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Group structure Z/n1 x Z/n2, for q <= 65536.
    Group {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Enumerate exceptional (M, N, t, t') quadruples for prime powers up to qmax.
    Exceptions {
        #[arg(long, default_value_t = 1024)]
        qmax: u64,
        /// Apply the extra cofactor conditions at t'.
        #[arg(long)]
        corollary: bool,
        #[arg(long, value_enum, default_value_t = ReadingArg::ExponentOnly, requires = "corollary")]
        reading: ReadingArg,
        /// Allow qmax above 1024.
        #[arg(long)]
        beyond_bound: bool,
        #[command(flatten)]
        jobs: JobsArg,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Check the tabulated exceptional cases and their example curves.
    Table1 {
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Run the invariant sweep.
    Selftest {
        /// Smaller fields and fewer samples.
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        jobs: JobsArg,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Field size, a prime power.
    #[arg(long)]
    q: u64,
    /// Modulus polynomial as a base-p encoding in [q, 2q).
    #[arg(long)]
    poly: Option<u64>,
    /// Coefficients `a1,a2,a3,a4,a6` as field encodings.
    #[arg(long)]
    curve: String,
}

#[derive(Debug, Args)]
struct JobsArg {
    /// Worker threads (0 picks one per core).
    #[arg(long, env = "HASSECOUNT_JOBS", default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum MethodArg {
    Auto,
    Exhaustive,
    PointOrder,
}

impl From<MethodArg> for CountMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => CountMethod::Auto,
            MethodArg::Exhaustive => CountMethod::Exhaustive,
            MethodArg::PointOrder => CountMethod::PointOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ReadingArg {
    ExponentOnly,
    ExponentAndQMinusOne,
}

impl From<ReadingArg> for CorollaryReading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::ExponentOnly => CorollaryReading::ExponentOnly,
            ReadingArg::ExponentAndQMinusOne => CorollaryReading::ExponentAndQMinusOne,
        }
    }
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(pool.install(f))
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Count {
            curve,
            method,
            seed,
            format,
        } => {
            let e = commands::parse_curve(curve.q, curve.poly, &curve.curve)?;
            commands::count(&e, method.into(), seed, format)
        }
        Command::Order { curve, point, format } => {
            let e = commands::parse_curve(curve.q, curve.poly, &curve.curve)?;
            commands::order(&e, &point, format)
        }
        Command::Twist { curve, format } => {
            let e = commands::parse_curve(curve.q, curve.poly, &curve.curve)?;
            commands::twist(&e, format)
        }
        Command::Group { curve, format } => {
            let e = commands::parse_curve(curve.q, curve.poly, &curve.curve)?;
            commands::group(&e, format)
        }
        Command::Exceptions {
            qmax,
            corollary,
            reading,
            beyond_bound,
            jobs,
            format,
        } => {
            if qmax < 2 {
                return Err(CliError::Usage(format!("--qmax must be at least 2, got {qmax}")));
            }
            if qmax > hassecount::exceptions::DEFAULT_Q_MAX && !beyond_bound {
                return Err(CliError::Usage(format!(
                    "--qmax {qmax} exceeds {}; pass --beyond-bound to sweep further",
                    hassecount::exceptions::DEFAULT_Q_MAX
                )));
            }
            let reading = corollary.then(|| reading.into());
            with_jobs(jobs.jobs, || commands::exceptions(qmax, reading, format))?
        }
        Command::Table1 { format } => commands::table1(format),
        Command::Selftest {
            fast,
            seed,
            jobs,
            format,
        } => with_jobs(jobs.jobs, || commands::selftest(fast, seed, format))?,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e @ CliError::Failed { .. }) => {
            print!("{e}");
            e.exit_code()
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
