//! Checks of the valuation and size laws satisfied by Browkin convergents.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::rational::{abs_p, p_power_rat};
use crate::exact_arith::{Number, Rat, Valuation, DEFAULT_PRECISION};

use super::{CFExpansion, ConvergentTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    pub law: &'static str,
    pub n: i64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    /// Number of individual equalities checked.
    pub checks: usize,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn undefined(&mut self, law: &'static str, n: i64, detail: &str) {
        self.checks += 1;
        self.violations.push(LawViolation {
            law,
            n,
            detail: detail.into(),
        });
    }

    fn expect_eq(&mut self, law: &'static str, n: i64, got: Valuation, want: Valuation) {
        self.checks += 1;
        if got != want {
            self.violations.push(LawViolation {
                law,
                n,
                detail: format!("got {got}, expected {want}"),
            });
        }
    }
}

/// `α_n` recovered from `α` and the convergents:
/// `α_n = (A_{n-2} - α B_{n-2}) / (α B_{n-1} - A_{n-1})`.
pub fn complete_quotient(alpha: &Number, table: &ConvergentTable, n: i64) -> Result<Number> {
    let num = alpha.mul_rat(table.b(n - 2)).neg().add_rat(table.a(n - 2));
    let den = alpha.mul_rat(table.b(n - 1)).sub_rat(table.a(n - 1));
    num.div(&den)
}

/// Verifies the valuation laws on the rows of `table`:
///
/// * (i) `v(b_n) = v(α_n)` for `n ≥ 1` (needs `alpha`);
/// * (ii) `v(b_n) < 0` for `n ≥ 1`;
/// * (iii)/(iv) `v(A_n)` is the sum of `v(b_i)` from `i = 0`, or from `i = 2`
///   when `b0 = 0`;
/// * (v) `v(B_n) = v(b_1) + … + v(b_n)`;
/// * (vi) `v(α - A_n/B_n) = -v(B_n B_{n+1})` (needs `alpha`).
pub fn check_valuation_laws(table: &ConvergentTable, cf: &CFExpansion, alpha: Option<&Number>) -> Result<LawReport> {
    let p = cf.p;
    let last = table.last_index();
    let qs = cf.unrolled((last + 1).max(0) as usize);
    let v = |i: usize| qs[i].valuation();
    let mut rep = LawReport::default();

    for n in 1..=last {
        let vb = v(n as usize);
        rep.checks += 1;
        if vb >= Valuation::Finite(0) {
            rep.violations.push(LawViolation {
                law: "ii",
                n,
                detail: format!("v(b_n) = {vb}"),
            });
        }
    }

    let b0_zero = cf.b0.is_zero();
    for n in 0..=last {
        let row = table.row(n);
        if !b0_zero {
            let want = (0..=n as usize).fold(Valuation::Finite(0), |acc, i| acc + v(i));
            rep.expect_eq("iii", n, row.e, want);
        } else if n >= 2 {
            let want = (2..=n as usize).fold(Valuation::Finite(0), |acc, i| acc + v(i));
            rep.expect_eq("iv", n, row.e, want);
        }
        if n >= 1 {
            let want = (1..=n as usize).fold(Valuation::Finite(0), |acc, i| acc + v(i));
            rep.expect_eq("v", n, row.f, want);
        }
    }

    if let Some(alpha) = alpha {
        // non-Browkin floors can produce B_n = 0; that is itself a violation
        for n in 1..=last {
            let an = match complete_quotient(alpha, table, n) {
                Ok(an) => an,
                Err(Error::DivisionByZero) => {
                    rep.undefined("i", n, "alpha_n is undefined");
                    continue;
                }
                Err(e) => return Err(e),
            };
            let budget = budget_for(table, n);
            rep.expect_eq("i", n, v(n as usize), an.vp(p, budget)?);
        }
        for n in 0..last {
            let Some(conv) = table.convergent(n) else {
                rep.undefined("vi", n, "B_n = 0");
                continue;
            };
            let gap = alpha.sub_rat(&conv);
            let want = table.row(n).f + table.row(n + 1).f;
            let want = match want {
                Valuation::Finite(w) => Valuation::Finite(-w),
                Valuation::Infinite => Valuation::Infinite,
            };
            let budget = budget_for(table, n + 1);
            rep.expect_eq("vi", n, gap.vp(p, budget)?, want);
        }
    }
    Ok(rep)
}

/// Digit budget large enough to resolve valuations around row `n`.
fn budget_for(table: &ConvergentTable, n: i64) -> usize {
    let depth: i64 = (0..=n.min(table.last_index()))
        .filter_map(|i| table.row(i).f.finite())
        .map(|f| -f)
        .max()
        .unwrap_or(0);
    DEFAULT_PRECISION.max(4 * depth as usize + 64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    /// The constant `M` chosen so that both seed pairs satisfy the hypotheses.
    pub m: u64,
    /// `|x_k|_∞ < M (p/2 + 1)^k` for both sequences at every row.
    pub growth_bound_holds: bool,
    pub growth_failures: Vec<i64>,
    /// First `n` from which `|A_n|_∞ < |A_n|_p` and `|B_n|_∞ < |B_n|_p`
    /// hold up to the end of the table.
    pub n0: Option<i64>,
    /// `|B_n|_∞ ≤ |B_n|_p` for every `n ≥ -2`.
    pub b_dominated: bool,
    pub b_dominated_failures: Vec<i64>,
    /// `|A_n|_∞ ≤ |A_n|_p` for every `n ≥ -2`, claimed when `|b0|_p ≠ 1`.
    pub a_dominated_claimed: bool,
    pub a_dominated: bool,
}

impl GrowthReport {
    pub fn ok(&self) -> bool {
        self.growth_bound_holds && self.b_dominated && (!self.a_dominated_claimed || self.a_dominated)
    }
}

/// Smallest integer `M` with `|x0| < M` and `|x1| < M (p/2 + 1)`.
fn seed_constant(x0: &Rat, x1: &Rat, p: u64) -> u64 {
    let mut m = 1u64;
    let half_plus_one = Rat::new(BigInt::from(p + 2), BigInt::from(2));
    loop {
        let mr = Rat::from_integer(BigInt::from(m));
        if x0.abs() < mr && x1.abs() < &mr * &half_plus_one {
            return m;
        }
        m += 1;
    }
}

pub fn archimedean_growth_check(table: &ConvergentTable, cf: &CFExpansion) -> GrowthReport {
    let p = cf.p;
    let m = seed_constant(table.a(-2), table.a(-1), p).max(seed_constant(table.b(-2), table.b(-1), p));
    let mut growth_failures = Vec::new();
    let mut b_fail = Vec::new();
    let mut a_dominated = true;
    let mut n0: Option<i64> = None;
    let big_m = BigInt::from(m);
    let base = BigInt::from(p + 2);
    for row in table.rows() {
        // x_k = X_{k-2}, bound checked as |x_k|·2^k < M (p+2)^k
        let k = (row.n + 2) as usize;
        let two_k = Rat::from_integer(num_traits::pow(BigInt::from(2), k));
        let rhs = Rat::from_integer(&big_m * num_traits::pow(base.clone(), k));
        if row.a.abs() * &two_k >= rhs || row.b.abs() * &two_k >= rhs {
            growth_failures.push(row.n);
        }
        let pa = abs_p(&row.a, p);
        let pb = abs_p(&row.b, p);
        if row.b.abs() > pb {
            b_fail.push(row.n);
        }
        if row.a.abs() > pa {
            a_dominated = false;
        }
        let strict = row.a.abs() < pa && row.b.abs() < pb;
        match (strict, n0) {
            (true, None) => n0 = Some(row.n),
            (false, Some(_)) => n0 = None,
            _ => {}
        }
    }
    GrowthReport {
        m,
        growth_bound_holds: growth_failures.is_empty(),
        growth_failures,
        n0,
        b_dominated: b_fail.is_empty(),
        b_dominated_failures: b_fail,
        a_dominated_claimed: cf.b0.is_zero() || cf.b0.exponent() != 0,
        a_dominated,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    /// Number of leading partial quotients the two expansions share.
    pub shared: usize,
    pub gap_valuation: Valuation,
    /// `-2 v(B_n)`: the gap must exceed this.
    pub threshold: i64,
    /// Exact value predicted by law (vi), when it applies.
    pub predicted: Option<i64>,
    pub holds: bool,
}

/// Checks `|α - β|_p < |B_n|_p^{-2}` for two numbers whose expansions share
/// their first `n + 1` quotients.
pub fn shared_prefix_gap(alpha: &Number, beta: &Number, p: u64, n: usize) -> Result<GapReport> {
    use super::{expand, ExpandOptions};
    let opts = ExpandOptions {
        max_steps: n + 3,
        ..ExpandOptions::default()
    };
    let ea = expand(alpha, p, &opts)?;
    let eb = expand(beta, p, &opts)?;
    let (ua, ub) = (ea.unrolled(n + 2), eb.unrolled(n + 2));
    let shared = ua.iter().zip(ub.iter()).take_while(|(x, y)| x == y).count();
    if shared < n + 1 {
        return Err(crate::error::Error::InvalidInput(format!(
            "expansions share only {shared} quotients"
        )));
    }
    let table = ConvergentTable::build(&ea.unrolled(n + 1), p);
    let fb = table.row(n as i64).f.unwrap_finite();
    let threshold = -2 * fb;
    let gap = alpha.sub(beta)?;
    let gap_valuation = gap.vp(p, DEFAULT_PRECISION.max(8 * (-fb) as usize + 64))?;
    // law (vi) pins both gaps to -v(B_n B_{n+1}) when b_{n+1} is shared too
    let predicted = if shared > n + 1 {
        let t = ConvergentTable::build(&ea.unrolled(n + 2), p);
        Some(-(t.row(n as i64).f.unwrap_finite() + t.row(n as i64 + 1).f.unwrap_finite()))
    } else {
        None
    };
    Ok(GapReport {
        shared,
        gap_valuation,
        threshold,
        predicted,
        holds: gap_valuation > Valuation::Finite(threshold),
    })
}

/// `p^{-v}` as an exact rational.
pub fn abs_from_valuation(v: Valuation, p: u64) -> Rat {
    match v {
        Valuation::Infinite => Rat::zero(),
        Valuation::Finite(v) => p_power_rat(p, -v),
    }
}
