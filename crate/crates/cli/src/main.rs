//! `pellprod`: squares and p-adic valuations of `a_n = ∏_{k=2}^{n} (k² − 1)`.
//!
//! Exit codes: 0 success, 1 a verification inside the command failed,
//! 2 usage or domain error.

mod commands;
mod output;

use std::io;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use pellprod::{Kind, Nat};

use commands::SquaresLimit;
use output::{render, Format};

#[derive(Debug, Parser)]
#[command(
    name = "pellprod",
    version,
    about = "Squares and p-adic valuations of (2^2-1)(3^2-1)...(n^2-1)"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Print nothing on success; only the exit code reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Minus,
    Plus,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Minus => Kind::Minus,
            KindArg::Plus => Kind::Plus,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a_n exactly and test it for squareness.
    Term { n: Nat },

    /// List the indices n at which a_n is a perfect square.
    #[command(group(ArgGroup::new("limit").required(true).args(["max_n", "count"])))]
    Squares {
        /// All square indices up to this bound.
        #[arg(long)]
        max_n: Option<Nat>,
        /// The first C square indices.
        #[arg(long)]
        count: Option<usize>,
    },

    /// v_p(a_n) from the closed form.
    Valuation {
        n: Nat,
        p: u64,
        /// Print the individual terms of the formula.
        #[arg(long)]
        explain: bool,
    },

    /// Compare the closed form against the summation oracle on a grid.
    Verify {
        #[arg(long)]
        max_n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Add 1 to every closed-form value with n at or above this index.
        #[arg(long, hide = true)]
        inject_fault_at: Option<u64>,
    },

    /// v_p(a_n) relative to 2n/(p-1), with its deviation bound.
    Ratio {
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<Nat>,
    },

    /// Exhaustive square search in prod (k^2 - a^2) or prod (k^2 + a).
    Explore {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        a: Nat,
        #[arg(long)]
        max_n: Nat,
    },

    /// Time the closed form against the oracle.
    Bench {
        #[arg(long)]
        n: Nat,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        reps: u32,
    },
}

fn run(command: &Command) -> pellprod::Result<output::Report> {
    match command {
        Command::Term { n } => commands::term(n),
        Command::Squares { max_n, count } => {
            let limit = match (max_n, count) {
                (Some(m), None) => SquaresLimit::MaxN(m.clone()),
                (None, Some(c)) => SquaresLimit::Count(*c),
                _ => unreachable!("clap enforces exactly one of --max-n, --count"),
            };
            commands::squares(&limit)
        }
        Command::Valuation { n, p, explain } => commands::valuation(n, *p, *explain),
        Command::Verify {
            max_n,
            primes,
            inject_fault_at,
        } => commands::verify(*max_n, primes, *inject_fault_at),
        Command::Ratio { p, n_list } => commands::ratio(*p, n_list),
        Command::Explore { kind, a, max_n } => commands::explore((*kind).into(), a, max_n),
        Command::Bench { n, p, reps } => commands::bench(n, *p, *reps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let elapsed_ns = start.elapsed().as_nanos() as u64;

    if !cli.quiet {
        if let Err(e) = render(&report, elapsed_ns, cli.format, &mut io::stdout().lock()) {
            if e.kind() != io::ErrorKind::BrokenPipe {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if report.failed {
        eprintln!("verification failed in `{}`", report.command);
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
