//! `rootfrac`: tables of `M_theta(n) = floor(1/frac(theta^(1/n)))`, chi tables
//! and check suites.

mod check;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rootfrac::bounds::sweep_thetas;
use rootfrac::exact::set_precision_cap;
use rootfrac::periodic::chi_table;
use rootfrac::{m_sequence, Error, ThetaExpr};

use check::{Options, Suite};
use render::{Format, OutputSpec};

/// Exit status for a failed check or computation.
const EXIT_FAIL: u8 = 1;
/// Exit status for invalid input.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rootfrac",
    version,
    about = "Certified values of floor(1/frac(theta^(1/n)))"
)]
struct Cli {
    /// Maximum working precision in bits.
    #[arg(long, global = true, env = "ROOTFRAC_PRECISION_CAP")]
    precision_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print M_theta(n) for n in [from, to].
    Table(TableArgs),
    /// Print the chi table of e^(k/l).
    Chi(ChiArgs),
    /// Run a check suite; exits nonzero if any certified check fails.
    Check(CheckArgs),
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    theta: String,
    #[arg(long, default_value_t = 1)]
    from: u64,
    #[arg(long, default_value_t = 90)]
    to: u64,
    #[arg(long, value_enum, default_value_t = Format::Grid)]
    format: Format,
    /// Entries per row in grid format.
    #[arg(long, default_value_t = 15)]
    columns: usize,
    /// Do not box the entry at N0.
    #[arg(long)]
    no_mark_n0: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ChiFormat {
    Text,
    KeyValue,
}

#[derive(Args)]
struct ChiArgs {
    k: u64,
    l: u64,
    #[arg(long, value_enum, default_value_t = ChiFormat::Text)]
    format: ChiFormat,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Base to check; repeat for several. Defaults to 3/2, 2, e^1/2, e, e^3/7, pi, 17.
    #[arg(long)]
    theta: Vec<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Samples per inequality family in the randomized sweep.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Verification horizon for periodicity certificates.
    #[arg(long, default_value_t = 10_000)]
    horizon: u64,
    #[arg(long, default_value_t = 1)]
    from: u64,
    #[arg(long, default_value_t = 2000)]
    to: u64,
    #[arg(long, default_value_t = 10)]
    max_period: usize,
    #[arg(long, default_value_t = 8)]
    min_repeats: usize,
    /// Modulus for the residue histogram.
    #[arg(long, default_value_t = 3)]
    modulus: u64,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidTheta(_)
            | Error::NotCoprime { .. }
            | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn parse_theta(text: &str) -> Result<ThetaExpr, Failure> {
    text.parse()
        .map_err(|e: Error| Failure::Usage(format!("--theta {text}: {e}")))
}

fn table(args: &TableArgs) -> Result<bool, Failure> {
    let theta = parse_theta(&args.theta)?;
    if args.columns == 0 {
        return Err(Failure::Usage("--columns must be positive".into()));
    }
    let seq = m_sequence(&theta, args.from, args.to)?;
    let spec = OutputSpec {
        format: args.format,
        columns: args.columns,
        mark_n0: !args.no_mark_n0,
    };
    print!("{}", render::render(&seq, &spec));
    Ok(true)
}

fn chi(args: &ChiArgs) -> Result<bool, Failure> {
    let table = chi_table(args.k, args.l)?;
    match args.format {
        ChiFormat::Text => print!("{}", table.render_text()),
        ChiFormat::KeyValue => print!("{}", table.render_key_value()),
    }
    Ok(true)
}

fn check(args: &CheckArgs) -> Result<bool, Failure> {
    let thetas = if args.theta.is_empty() {
        sweep_thetas()
    } else {
        args.theta
            .iter()
            .map(|t| parse_theta(t))
            .collect::<Result<_, _>>()?
    };
    if args.from == 0 || args.from > args.to {
        return Err(Failure::Usage(format!(
            "need 1 <= from <= to, got {} and {}",
            args.from, args.to
        )));
    }
    let opts = Options {
        thetas,
        seed: args.seed,
        samples: args.samples,
        horizon: args.horizon,
        from: args.from,
        to: args.to,
        max_period: args.max_period,
        min_repeats: args.min_repeats,
        modulus: args.modulus,
    };
    let report = check::run(args.suite, &opts)?;
    for line in &report.lines {
        println!("{line}");
    }
    println!(
        "{}",
        if report.failed {
            "FAILED"
        } else {
            "ALL PASSED"
        }
    );
    Ok(!report.failed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(bits) = cli.precision_cap {
        set_precision_cap(bits);
    }
    let outcome = match &cli.command {
        Command::Table(args) => table(args),
        Command::Chi(args) => chi(args),
        Command::Check(args) => check(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
