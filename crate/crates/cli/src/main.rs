//! `padic-cf`: expansions, convergents, height audits and family generators
//! for Browkin p-adic continued fractions.

mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{cf, family, height, sweep};
use error::{CliError, CliResult};
use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "padic-cf", version, about = "Browkin p-adic continued fractions, exactly")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct GlobalArgs {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    output: Format,
    /// Shorthand for `--output json`.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Shorthand for `--output csv`.
    #[arg(long, global = true)]
    csv: bool,
    /// Digit budget for p-adic valuations of quadratic irrationals.
    #[arg(long, global = true, env = "PADIC_CF_PRECISION")]
    precision: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fraction expansion of a rational or quadratic value.
    Expand(cf::ExpandArgs),
    /// The p-adic Euclidean algorithm on two rationals.
    Euclid(cf::EuclidArgs),
    /// Convergent table with the valuation laws and determinant checked.
    Convergents(cf::ConvergentsArgs),
    /// A floor value and the three conditions it should satisfy.
    Floor(cf::FloorArgs),
    /// Height bound audit for a periodic expansion read from JSON.
    Height(height::HeightArgs),
    /// Generate a quotient sequence from one of the families.
    Family(family::FamilyArgs),
    /// Randomized batch of height audits.
    Audit(height::AuditArgs),
    /// Invariant battery over random rationals for several primes.
    Sweep(sweep::SweepArgs),
}

/// Settings shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub precision: usize,
    pub seed: u64,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs) -> CliResult<Self> {
        let precision = g.precision.unwrap_or(padic_cf::DEFAULT_PRECISION);
        if precision < 8 {
            return Err(CliError::Usage(format!("precision must be at least 8, got {precision}")));
        }
        Ok(RunConfig { precision, seed: g.seed })
    }
}

fn format_of(g: &GlobalArgs) -> Format {
    if g.json {
        Format::Json
    } else if g.csv {
        Format::Csv
    } else {
        g.output
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    let cfg = RunConfig::from_args(&cli.global)?;
    match &cli.command {
        Command::Expand(a) => cf::expand(a, &cfg),
        Command::Euclid(a) => cf::euclid(a),
        Command::Convergents(a) => cf::convergents(a, &cfg),
        Command::Floor(a) => cf::floor(a),
        Command::Height(a) => height::height(a),
        Command::Family(a) => family::family(a, &cfg),
        Command::Audit(a) => height::audit(a, &cfg),
        Command::Sweep(a) => sweep::sweep(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(format_of(&cli.global)).as_bytes());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
