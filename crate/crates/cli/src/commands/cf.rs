use clap::Args;
use padic_cf::cf::{
    check_valuation_laws, convergents as convergent_table, euclid_algorithm, expand as expand_value, expand_rat,
    remainder_shrinks, CfStatus, ExpandOptions,
};
use padic_cf::exact_arith::{format_rat, parse_number, parse_rat};
use padic_cf::{check_floor_contract, Branch, FloorKind, Number};

use super::pass_fail;
use crate::error::CliResult;
use crate::report::Report;
use crate::RunConfig;

#[derive(Args, Debug)]
pub struct ValueArgs {
    #[arg(long)]
    p: u64,
    /// A rational `n/d` or a quadratic value such as `(1 + sqrt(-11))/2`.
    #[arg(long, allow_hyphen_values = true)]
    value: String,
    /// Embedding of the square root: `+` or `-`.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    branch: String,
}

impl ValueArgs {
    fn number(&self) -> CliResult<Number> {
        Ok(parse_number(&self.value, self.p, Branch::parse(&self.branch)?)?)
    }
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[command(flatten)]
    value: ValueArgs,
    #[arg(long, default_value = "browkin")]
    kind: FloorKind,
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
}

pub fn expand(args: &ExpandArgs, cfg: &RunConfig) -> CliResult<Report> {
    let p = args.value.p;
    let alpha = args.value.number()?;
    let opts = ExpandOptions {
        max_steps: args.max_steps,
        kind: args.kind,
        precision: cfg.precision,
        ..ExpandOptions::default()
    };
    let cf = expand_value(&alpha, p, &opts)?;
    let mut r = Report::new("expand");
    r.field("value", &alpha.to_string());
    r.field("kind", args.kind.name());
    r.merge(&cf);
    r.line(format!("{}, {}", cf.human(), cf.status));
    r.header(&["i", "u", "a", "quotient"]);
    for (i, b) in cf.quotients().enumerate() {
        r.row(vec![i.to_string(), b.unit().to_string(), b.exponent().to_string(), b.human(p)]);
    }
    if let (Number::Rat(x), CfStatus::Finite) = (&alpha, cf.status) {
        let back = cf.fold(cf.len());
        if back.as_ref() != Some(x) {
            let got = back.map_or("undefined".into(), |b| format_rat(&b));
            r.violation(format!("expansion folds back to {got}, not {}", format_rat(x)));
        }
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct EuclidArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    x0: String,
    #[arg(long, allow_hyphen_values = true)]
    x1: String,
}

pub fn euclid(args: &EuclidArgs) -> CliResult<Report> {
    let p = args.p;
    let (x0, x1) = (parse_rat(&args.x0)?, parse_rat(&args.x1)?);
    let steps = euclid_algorithm(&x0, &x1, p)?;
    let mut r = Report::new("euclid");
    r.field("p", &p);
    r.field("steps", &steps);
    r.header(&["i", "x", "y", "q", "r"]);
    for (i, s) in steps.iter().enumerate() {
        let q = s.q.human(p);
        r.line(format!("{} = ({q})·({}) + {}", s.x, s.y, s.r));
        r.row(vec![i.to_string(), s.x.to_string(), s.y.to_string(), q, s.r.to_string()]);
        if !remainder_shrinks(s, p)? {
            r.violation(format!("step {i}: |{}|_p is not below |{}|_p", s.r, s.y));
        }
    }
    let expansion = expand_rat(&(&x0 / &x1), p)?;
    let same = expansion.quotients().eq(steps.iter().map(|s| &s.q));
    if !same {
        r.violation(format!("quotients differ from the expansion {}", expansion.human()));
    }
    r.line(format!("quotients match the expansion of x0/x1: {}", pass_fail(same)));
    Ok(r)
}

#[derive(Args, Debug)]
pub struct ConvergentsArgs {
    #[command(flatten)]
    value: ValueArgs,
    /// Number of partial quotients to use.
    #[arg(long, default_value_t = 10)]
    terms: usize,
}

pub fn convergents(args: &ConvergentsArgs, cfg: &RunConfig) -> CliResult<Report> {
    let p = args.value.p;
    let alpha = args.value.number()?;
    let opts = ExpandOptions {
        max_steps: args.terms.max(1),
        precision: cfg.precision,
        ..ExpandOptions::default()
    };
    let cf = expand_value(&alpha, p, &opts)?;
    let n = args.terms.min(cf.unrolled(args.terms).len());
    let table = convergent_table(&cf, n)?;
    let laws = check_valuation_laws(&table, &cf, Some(&alpha))?;
    let det = table.determinant_failures();
    let mut r = Report::new("convergents");
    r.field("p", &p);
    r.field("value", &alpha.to_string());
    r.field("expansion", &cf.human());
    r.field("rows", table.rows());
    r.field("laws", &laws);
    r.field("determinant_failures", &det);
    r.line(format!("{} = {}", alpha, cf.human()));
    r.header(&["n", "A", "B", "v_p(A)", "v_p(B)"]);
    for row in table.rows() {
        let cells = vec![
            row.n.to_string(),
            format_rat(&row.a),
            format_rat(&row.b),
            row.e.to_string(),
            row.f.to_string(),
        ];
        r.line(cells.join("  "));
        r.row(cells);
    }
    r.line(format!("valuation laws: {} ({} checks)", pass_fail(laws.ok()), laws.checks));
    r.line(format!("determinant identity: {}", pass_fail(det.is_empty())));
    for v in &laws.violations {
        r.violation(format!("law {} at n = {}: {}", v.law, v.n, v.detail));
    }
    for n in det {
        r.violation(format!("determinant identity fails at n = {n}"));
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct FloorArgs {
    #[command(flatten)]
    value: ValueArgs,
    #[arg(long, default_value = "browkin")]
    kind: FloorKind,
}

pub fn floor(args: &FloorArgs) -> CliResult<Report> {
    let p = args.value.p;
    let x = args.value.number()?;
    let c = check_floor_contract(&x, p, args.kind)?;
    let mut r = Report::new("floor");
    r.field("p", &p);
    r.field("x", &x.to_string());
    r.merge(&c);
    r.line(format!("s({x}) = {} under the {} floor", c.value.human(p), args.kind));
    let checks = [
        ("s(x) in Z[1/p]", c.in_s_integers),
        ("|s(x)|_inf < p/2", c.archimedean_bound),
        ("|x - s(x)|_p < 1", c.padic_contraction),
    ];
    for (name, ok) in checks {
        r.line(format!("{name}: {}", pass_fail(ok)));
        if !ok {
            r.violation(format!("{name} fails at x = {x} (s(x) = {})", c.value.human(p)));
        }
    }
    Ok(r)
}
