use std::path::PathBuf;

use clap::{Args, ValueEnum};
use padic_cf::cf::{
    archimedean_growth_check, check_valuation_laws, expand_traced, CfStatus, ConvergentTable, ExpandOptions,
};
use padic_cf::exact_arith::format_rat;
use padic_cf::{check_floor_contract, FloorKind, Number, Rat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{random_rat, read_json};
use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// The expansion is finite and folds back to the input.
    Termination,
    /// Valuation laws of the convergents, including the exact gap law.
    Laws,
    /// `A_n B_{n-1} - A_{n-1} B_n = (-1)^{n+1}`.
    Determinant,
    /// Archimedean growth of `A_n`, `B_n` and `|B_n|_inf ≤ |B_n|_p`.
    Bounds,
    /// Floor conditions at every complete quotient.
    Contract,
}

const ALL_SUITES: [Suite; 5] = [Suite::Termination, Suite::Laws, Suite::Determinant, Suite::Bounds, Suite::Contract];

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Random rationals per prime.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value = "browkin")]
    kind: FloorKind,
    /// Comma-separated suites (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    suites: Vec<Suite>,
    /// JSON file `{"primes": [...], "samples": N, "suites": [...]}`, used in
    /// place of the flags.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Bound on numerators and denominators.
    #[arg(long, default_value_t = 1_000_000)]
    height: i64,
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
}

#[derive(Deserialize)]
struct SweepSpec {
    primes: Vec<u64>,
    samples: usize,
    #[serde(default)]
    suites: Option<Vec<Suite>>,
}

#[derive(Serialize)]
struct Cell {
    p: u64,
    suite: Suite,
    checked: usize,
    failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
}

impl Cell {
    fn record(&mut self, ok: bool, datum: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(datum());
            }
        }
    }
}

fn resolve(args: &SweepArgs) -> CliResult<(Vec<u64>, usize, Vec<Suite>)> {
    let (primes, samples, suites) = match &args.spec {
        Some(path) => {
            let spec: SweepSpec = read_json(path)?;
            (spec.primes, spec.samples, spec.suites.unwrap_or_else(|| ALL_SUITES.to_vec()))
        }
        None => {
            let suites = if args.suites.is_empty() { ALL_SUITES.to_vec() } else { args.suites.clone() };
            (args.primes.clone(), args.samples, suites)
        }
    };
    if primes.is_empty() || samples == 0 || suites.is_empty() {
        return Err(CliError::Usage("empty sweep: need primes, a positive sample count and suites".into()));
    }
    for &p in &primes {
        padic_cf::exact_arith::modular::check_prime(p)?;
    }
    let mut suites = suites;
    suites.sort_unstable();
    suites.dedup();
    Ok((primes, samples, suites))
}

/// Runs the requested suites on one input.
fn check_one(x: &Rat, p: u64, opts: &ExpandOptions, suites: &[Suite], cells: &mut [Cell]) -> CliResult<()> {
    let alpha = Number::Rat(x.clone());
    let shown = || format_rat(x);
    let trace = expand_traced(&alpha, p, opts)?;
    let cf = &trace.expansion;
    let table = ConvergentTable::build(&cf.unrolled(cf.len()), p);
    for (suite, cell) in suites.iter().zip(cells.iter_mut()) {
        match suite {
            Suite::Termination => {
                let ok = cf.status == CfStatus::Finite && cf.fold(cf.len()).as_ref() == Some(x);
                cell.record(ok, || format!("x = {}: {} after {} steps", shown(), cf.status, cf.len()));
            }
            Suite::Laws => {
                let laws = check_valuation_laws(&table, cf, Some(&alpha))?;
                cell.record(laws.ok(), || {
                    let v = &laws.violations[0];
                    format!("x = {}: law {} at n = {}: {}", shown(), v.law, v.n, v.detail)
                });
            }
            Suite::Determinant => {
                let bad = table.determinant_failures();
                cell.record(bad.is_empty(), || format!("x = {}: fails at n = {:?}", shown(), bad));
            }
            Suite::Bounds => {
                let g = archimedean_growth_check(&table, cf);
                cell.record(g.ok(), || {
                    format!(
                        "x = {}: growth fails at {:?}, |B_n| dominance fails at {:?}, A_n dominance {}",
                        shown(),
                        g.growth_failures,
                        g.b_dominated_failures,
                        if g.a_dominated_claimed && !g.a_dominated { "fails" } else { "holds" }
                    )
                });
            }
            Suite::Contract => {
                let mut first_bad = None;
                for (i, c) in trace.complete.iter().enumerate() {
                    let fc = check_floor_contract(c, p, opts.kind)?;
                    if !fc.all_hold() {
                        first_bad = Some(format!(
                            "x = {}: at alpha_{i} = {c}, s = {} (in Z[1/p] {}, |s|_inf < p/2 {}, |alpha - s|_p < 1 {})",
                            shown(),
                            fc.value.human(p),
                            fc.in_s_integers,
                            fc.archimedean_bound,
                            fc.padic_contraction
                        ));
                        break;
                    }
                }
                let ok = first_bad.is_none();
                cell.record(ok, || first_bad.unwrap_or_default());
            }
        }
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs, cfg: &RunConfig) -> CliResult<Report> {
    let (primes, samples, suites) = resolve(args)?;
    let opts = ExpandOptions {
        max_steps: args.max_steps,
        kind: args.kind,
        precision: cfg.precision,
        ..ExpandOptions::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut matrix = Vec::new();
    for &p in &primes {
        let mut cells: Vec<Cell> = suites
            .iter()
            .map(|&suite| Cell {
                p,
                suite,
                checked: 0,
                failed: 0,
                counterexample: None,
            })
            .collect();
        for _ in 0..samples {
            let x = random_rat(&mut rng, args.height);
            check_one(&x, p, &opts, &suites, &mut cells)?;
        }
        matrix.extend(cells);
    }
    let mut r = Report::new("sweep");
    r.field("kind", args.kind.name());
    r.field("primes", &primes);
    r.field("samples", &samples);
    r.header(&["p", "suite", "checked", "failed", "counterexample"]);
    for c in &matrix {
        let suite = c.suite.to_possible_value().expect("named").get_name().to_string();
        let status = if c.failed == 0 { "PASS" } else { "FAIL" };
        r.line(format!("p = {:<3} {suite:<12} {status} {}/{}", c.p, c.checked - c.failed, c.checked));
        r.row(vec![
            c.p.to_string(),
            suite.clone(),
            c.checked.to_string(),
            c.failed.to_string(),
            c.counterexample.clone().unwrap_or_default(),
        ]);
        if let Some(ce) = &c.counterexample {
            r.violation(format!("p = {} {suite}: {ce}", c.p));
        }
    }
    r.field("matrix", &matrix);
    Ok(r)
}
