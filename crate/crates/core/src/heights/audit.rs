//! Height bounds for periodic expansions, checked exactly.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::height::{is_irreducible_quadratic, naive_height, naive_height_rat, weil_height_deg2};
use super::periodic::{
    annihilation_valuation, candidate_roots, evaluate, periodic_to_relation, primitive_part, relation_root, PeriodicCF,
};
use crate::error::{Error, Result};
use crate::exact_arith::rational::{bigint_str, p_pow, rat_str};
use crate::exact_arith::{Number, PartialQuotient, Rat, Valuation};
use crate::families::{fibonacci, hypothesis1_check, Hypothesis1Report};

/// Number of p-adic digits the annihilation check works at.
pub const ANNIHILATION_DIGITS: i64 = 64;
/// Valuation the residual must reach.
pub const ANNIHILATION_TARGET: i64 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightCheck {
    H1,
    H2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsEntry {
    pub label: String,
    #[serde(with = "bigint_str")]
    pub value: BigInt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct H1Details {
    pub clearing_exponent: i64,
    /// `max |p^E C_i|` before dividing out the content.
    #[serde(with = "bigint_str")]
    pub unreduced_max: BigInt,
    #[serde(with = "bigint_str")]
    pub content: BigInt,
    pub summands_integral: bool,
    pub annihilation_valuation: Valuation,
    pub root: String,
    /// The bound is at least `8p²`.
    pub bound_guard: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct H2Details {
    pub hypothesis: Hypothesis1Report,
    #[serde(with = "rat_str")]
    pub threshold: Rat,
    /// `|B_k|_∞²`.
    #[serde(with = "rat_str")]
    pub b_k_sq: Rat,
    #[serde(with = "rat_str")]
    pub a_k_sq: Rat,
    pub b_k_small: bool,
    pub a_k_small: bool,
    /// The explicit polynomial agrees with the general relation up to content.
    pub matches_relation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightReport {
    pub check: HeightCheck,
    pub p: u64,
    pub cf: String,
    #[serde(serialize_with = "ser_poly")]
    pub polynomial: [BigInt; 3],
    pub degree: u32,
    pub irreducible: bool,
    /// Naive height of the audited polynomial.
    #[serde(with = "bigint_str")]
    pub naive_h: BigInt,
    /// Naive height of the minimal polynomial.
    #[serde(with = "bigint_str")]
    pub minimal_h: BigInt,
    pub weil_h: Option<f64>,
    #[serde(with = "bigint_str")]
    pub bound_value: BigInt,
    pub bound_holds: bool,
    #[serde(with = "bigint_str")]
    pub margin: BigInt,
    pub abs_p: Vec<AbsEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h1: Option<H1Details>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2: Option<H2Details>,
}

pub(crate) fn ser_poly<S: serde::Serializer>(v: &[BigInt; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl HeightReport {
    /// Every audited condition holds.
    pub fn passes(&self) -> bool {
        let extra = match (&self.h1, &self.h2) {
            (Some(d), _) => {
                d.summands_integral
                    && d.bound_guard
                    && d.annihilation_valuation >= Valuation::Finite(ANNIHILATION_TARGET)
            }
            (_, Some(d)) => d.b_k_small && d.a_k_small && d.matches_relation,
            _ => true,
        };
        self.bound_holds && extra
    }

    /// `c0 x^2 + c1 x + c2` in plain notation.
    pub fn polynomial_text(&self) -> String {
        format_poly(&self.polynomial)
    }
}

pub fn format_poly(c: &[BigInt; 3]) -> String {
    let mut s = String::new();
    for (i, (coef, mono)) in c.iter().zip(["x^2", "x", ""]).enumerate() {
        if coef.is_zero() {
            continue;
        }
        let mag = coef.abs().to_string();
        if s.is_empty() {
            if coef.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if coef.is_negative() { " - " } else { " + " });
        }
        if i == 2 || mag != "1" {
            s.push_str(&mag);
        }
        s.push_str(mono);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn abs_entry(label: &str, f: i64, p: u64) -> AbsEntry {
    AbsEntry {
        label: label.to_string(),
        value: p_pow(p, f as u32),
    }
}

/// Heights of the minimal polynomial through whichever root is `α`.
fn minimal_height(poly: &[BigInt; 3], alpha: &Number) -> Result<(u32, BigInt)> {
    match alpha {
        Number::Rat(r) => Ok((1, naive_height_rat(r))),
        Number::Surd(_) => Ok((2, naive_height(poly)?)),
    }
}

/// Audits `h(α) ≤ (8/p²) |B_{k+t+1}|_p² |B_k|_p²`.
pub fn check_h1_bound(cf: &PeriodicCF) -> Result<HeightReport> {
    let p = cf.p;
    let k = cf.k();
    let t = cf.t();
    let rel = periodic_to_relation(cf)?;
    let table = cf.table(k + t + 2);
    let f_k = -table.row(k as i64).f.unwrap_finite();
    let f_kt = -table.row((k + t + 1) as i64).f.unwrap_finite();
    let bound_value = BigInt::from(8) * p_pow(p, (2 * (f_kt + f_k) - 2) as u32);
    let h = naive_height(&rel.cleared)?;
    let root = relation_root(&rel, cf)?;
    if !evaluate(&rel.cleared, &root)?.is_zero() {
        return Err(Error::ReportsViolation("selected root does not satisfy the relation".into()));
    }
    let (degree, minimal_h) = minimal_height(&rel.cleared, &root)?;
    let irreducible = is_irreducible_quadratic(&rel.cleared);
    let weil_h = if irreducible {
        Some(weil_height_deg2(&rel.cleared)?.value)
    } else {
        None
    };
    let annihilation = annihilation_valuation(&rel, cf, ANNIHILATION_DIGITS)?;
    let unreduced_max = rel.unreduced.iter().map(|c| c.abs()).max().expect("three");
    let guard = bound_value >= BigInt::from(8) * p_pow(p, 2);
    Ok(HeightReport {
        check: HeightCheck::H1,
        p,
        cf: cf.human(),
        polynomial: rel.cleared.clone(),
        degree,
        irreducible,
        bound_holds: h <= bound_value,
        margin: &bound_value - &h,
        naive_h: h,
        minimal_h,
        weil_h,
        abs_p: vec![abs_entry("|B_k|_p", f_k, p), abs_entry("|B_{k+t+1}|_p", f_kt, p)],
        bound_value,
        h1: Some(H1Details {
            clearing_exponent: rel.clearing_exponent,
            unreduced_max,
            content: rel.content.clone(),
            summands_integral: rel.summands_integral,
            annihilation_valuation: annihilation,
            root: root.to_string(),
            bound_guard: guard,
        }),
        h2: None,
    })
}

fn as_integer(x: Rat) -> Result<BigInt> {
    if !x.is_integer() {
        return Err(Error::ReportsViolation(format!("expected an integer, got {x}")));
    }
    Ok(x.to_integer())
}

/// The explicit polynomial of `[0, b_1, …, b_k, overline(p^{-1})]` written
/// through the unit parts `Â_i = A_i p^{e_i}` and `B̂_i = B_i p^{f_i}`.
pub fn h2_polynomial(prefix: &[PartialQuotient], p: u64) -> Result<[BigInt; 3]> {
    let k = prefix.len();
    if k == 0 {
        return Err(Error::InvalidInput("empty prefix".into()));
    }
    let mut qs = vec![PartialQuotient::zero()];
    qs.extend_from_slice(prefix);
    let table = crate::cf::ConvergentTable::build(&qs, p);
    let a: Vec<u32> = prefix.iter().map(|b| b.exponent()).collect();
    // e_i = a_2 + … + a_i, f_i = a_1 + … + a_i
    let e = |i: usize| -> u32 { (2..=i).map(|j| a[j - 1]).sum() };
    let f = |i: usize| -> u32 { (1..=i).map(|j| a[j - 1]).sum() };
    let pp = |x: u32| Rat::from_integer(p_pow(p, x));
    let hat_a = |i: usize| as_integer(table.a(i as i64) * pp(e(i)));
    let hat_b = |i: usize| as_integer(table.b(i as i64) * pp(f(i)));
    let (ak, ak1, bk, bk1) = (hat_a(k)?, hat_a(k - 1)?, hat_b(k)?, hat_b(k - 1)?);
    let (a1, akk) = (a[0], a[k - 1]);
    let q = |x: u32| p_pow(p, x);
    let two = BigInt::from(2);
    let c0 = &bk * &bk1 * q(akk - 1) - &bk * &bk + &bk1 * &bk1 * q(2 * akk);
    let c1 = &two * &ak * &bk * q(a1) - &two * &ak1 * &bk1 * q(a1 + 2 * akk)
        - &ak * &bk1 * q(a1 + akk - 1)
        - &ak1 * &bk * q(a1 + akk - 1);
    let c2 = &ak * &ak1 * q(2 * a1 + akk - 1) - &ak * &ak * q(2 * a1) + &ak1 * &ak1 * q(2 * a1 + 2 * akk);
    Ok([c0, c1, c2])
}

/// Audits `h(α) ≤ |B_k|_p²` for `α = [0, b_1, …, b_k, overline(p^{-1})]`,
/// together with the intermediate bounds `|A_k|_∞², |B_k|_∞² < p/(4p+2)`.
pub fn check_h2_bound(prefix: &[PartialQuotient], p: u64) -> Result<HeightReport> {
    let hyp = hypothesis1_check(prefix, p)?;
    if !hyp.passes {
        return Err(Error::HypothesisViolated(hyp.violations.clone()));
    }
    let cf = PeriodicCF::with_prefix(p, prefix, vec![PartialQuotient::inv_p_pow(1)])?;
    let k = prefix.len();
    let poly = h2_polynomial(prefix, p)?;
    let (_, prim) = primitive_part(&poly)?;
    let rel = periodic_to_relation(&cf)?;
    let h = naive_height(&poly)?;
    let f_k: u32 = prefix.iter().map(|b| b.exponent()).sum();
    let bound_value = p_pow(p, 2 * f_k);

    let table = cf.table(k + 1);
    let threshold = Rat::new(BigInt::from(p), BigInt::from(4 * p + 2));
    let b_k_sq = table.b(k as i64) * table.b(k as i64);
    let a_k_sq = table.a(k as i64) * table.a(k as i64);

    let root = relation_root(&rel, &cf)?;
    let (degree, minimal_h) = minimal_height(&prim, &root)?;
    let irreducible = is_irreducible_quadratic(&prim);
    let weil_h = if irreducible {
        Some(weil_height_deg2(&prim)?.value)
    } else {
        None
    };
    Ok(HeightReport {
        check: HeightCheck::H2,
        p,
        cf: cf.human(),
        polynomial: poly,
        degree,
        irreducible,
        bound_holds: h <= bound_value,
        margin: &bound_value - &h,
        naive_h: h,
        minimal_h,
        weil_h,
        abs_p: vec![abs_entry("|B_k|_p", f_k as i64, p)],
        bound_value,
        h1: None,
        h2: Some(H2Details {
            hypothesis: hyp,
            b_k_small: b_k_sq < threshold,
            a_k_small: a_k_sq < threshold,
            threshold,
            b_k_sq,
            a_k_sq,
            matches_relation: prim == rel.cleared,
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibonacciCount {
    pub k: usize,
    /// Number of monomials in the expansion of `B̂_k`.
    pub count: usize,
    #[serde(with = "bigint_str")]
    pub fibonacci: BigInt,
    /// The monomials sum to `B̂_k` computed from the convergents.
    pub value_matches: bool,
}

impl FibonacciCount {
    pub fn ok(&self) -> bool {
        BigInt::from(self.count) == self.fibonacci && self.value_matches
    }
}

pub const FIBONACCI_TERM_LIMIT: usize = 12;

/// Expands `B̂_k` as a sum of monomials `b̂_{i_1}⋯b̂_{i_h} p^{a_{j_1}}⋯p^{a_{j_l}}`
/// via `B̂_i = b̂_i B̂_{i-1} + p^{a_{i-1}} p^{a_i} B̂_{i-2}` and counts them.
pub fn fibonacci_term_count(prefix: &[PartialQuotient], p: u64) -> Result<FibonacciCount> {
    let k = prefix.len();
    if k > FIBONACCI_TERM_LIMIT {
        return Err(Error::SizeLimit {
            what: "prefix length",
            got: k,
            limit: FIBONACCI_TERM_LIMIT,
        });
    }
    if k == 0 {
        return Err(Error::InvalidInput("empty prefix".into()));
    }
    // a monomial is (mask of b̂ indices, mask of p^{a_j} indices), bit i-1 for index i
    type Mono = (u16, u16);
    let mut prev2: Vec<Mono> = Vec::new(); // B̂_{-1} = 0
    let mut prev: Vec<Mono> = vec![(0, 0)]; // B̂_0 = 1
    for i in 1..=k {
        let bit = 1u16 << (i - 1);
        let mut next: Vec<Mono> = prev.iter().map(|&(b, a)| (b | bit, a)).collect();
        if i >= 2 {
            let pair = bit | (bit >> 1);
            next.extend(prev2.iter().map(|&(b, a)| (b, a | pair)));
        }
        prev2 = std::mem::replace(&mut prev, next);
    }
    let value: BigInt = prev
        .iter()
        .map(|&(bm, am)| {
            let mut term = BigInt::from(1);
            for (j, b) in prefix.iter().enumerate() {
                if bm & (1 << j) != 0 {
                    term *= b.unit();
                }
                if am & (1 << j) != 0 {
                    term *= p_pow(p, b.exponent());
                }
            }
            term
        })
        .sum();
    let mut qs = vec![PartialQuotient::zero()];
    qs.extend_from_slice(prefix);
    let table = crate::cf::ConvergentTable::build(&qs, p);
    let f: u32 = prefix.iter().map(|b| b.exponent()).sum();
    let hat_b = table.b(k as i64) * Rat::from_integer(p_pow(p, f));
    Ok(FibonacciCount {
        k,
        count: prev.len(),
        fibonacci: fibonacci(k + 1),
        value_matches: hat_b == Rat::from_integer(value),
    })
}

/// The worked example `[0, 4/5^2, -3/5^3, overline(1/5)]` at `p = 5`.
pub fn reference_example() -> PeriodicCF {
    let q = |u, a| PartialQuotient::from_small(u, a, 5).expect("valid");
    PeriodicCF::with_prefix(5, &[q(4, 2), q(-3, 3)], vec![q(1, 1)]).expect("valid")
}

/// All roots of the cleared relation, for diagnostics.
pub fn relation_roots(cf: &PeriodicCF) -> Result<Vec<Number>> {
    candidate_roots(&periodic_to_relation(cf)?.cleared, cf.p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(u: i64, a: u32) -> PartialQuotient {
        PartialQuotient::from_small(u, a, 5).unwrap()
    }

    #[test]
    fn h1_on_worked_example() {
        let r = check_h1_bound(&reference_example()).unwrap();
        assert_eq!(r.naive_h, BigInt::from(9713125));
        assert_eq!(r.polynomial_text(), "9129469x^2 + 5530075x - 9713125");
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.degree, 2);
        // f_k = 5, f_{k+t+1} = 6: bound 8·5^20
        assert_eq!(r.bound_value, BigInt::from(8) * p_pow(5, 20));
    }

    #[test]
    fn h2_on_worked_example() {
        let r = check_h2_bound(&[q(4, 2), q(-3, 3)], 5).unwrap();
        assert_eq!(r.naive_h, BigInt::from(9713125));
        assert_eq!(r.bound_value, BigInt::from(9765625));
        assert!(r.bound_holds);
        let d = r.h2.as_ref().unwrap();
        assert!(d.matches_relation);
        // |A_1| = 1 makes the intermediate bound on A_k unreachable here
        assert!(!(d.a_k_small && d.b_k_small));
    }

    #[test]
    fn h2_bound_can_fail_under_the_hypothesis() {
        let pre = [q(1, 2), q(1, 3), q(3, 2)];
        assert!(hypothesis1_check(&pre, 5).unwrap().passes);
        let r = check_h2_bound(&pre, 5).unwrap();
        assert_eq!(r.naive_h, BigInt::from(6146519381u64));
        assert_eq!(r.bound_value, p_pow(5, 14));
        assert!(!r.bound_holds);
    }

    #[test]
    fn h2_requires_the_hypothesis() {
        let pre = [q(7, 2), q(1, 1), q(1, 1)];
        assert_eq!(check_h2_bound(&pre, 5).unwrap_err(), Error::HypothesisViolated(vec![1]));
    }

    #[test]
    fn fibonacci_counts() {
        for k in 1..=FIBONACCI_TERM_LIMIT {
            let pre: Vec<PartialQuotient> = (0..k).map(|i| q([1, 2, -2, 3][i % 4], 1 + (i % 3) as u32)).collect();
            let c = fibonacci_term_count(&pre, 5).unwrap();
            assert!(c.ok(), "k = {k}: {c:?}");
        }
        let long = vec![q(1, 1); FIBONACCI_TERM_LIMIT + 1];
        assert!(matches!(fibonacci_term_count(&long, 5), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn poly_text() {
        let c = [BigInt::from(-1), BigInt::from(0), BigInt::from(1)];
        assert_eq!(format_poly(&c), "-x^2 + 1");
        assert_eq!(format_poly(&[BigInt::from(0), BigInt::from(0), BigInt::from(0)]), "0");
    }

    #[test]
    fn roots_of_example() {
        let roots = relation_roots(&reference_example()).unwrap();
        assert_eq!(roots.len(), 2);
    }
}
