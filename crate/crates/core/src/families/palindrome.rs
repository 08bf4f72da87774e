//! The convergent matrix `M_n` and the simultaneous approximations that
//! palindromic prefixes give to `α` and `α²`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::words::is_palindrome;
use crate::cf::{abs_from_valuation, ConvergentTable};
use crate::error::{Error, Result};
use crate::exact_arith::rational::{abs_rat, rat_str};
use crate::exact_arith::{Number, PartialQuotient, Rat, Valuation, DEFAULT_PRECISION};

/// `[[B_n, B_{n-1}], [A_n, A_{n-1}]]` as a product of `[[b_i, 1], [1, 0]]`.
pub fn quotient_matrix(prefix: &[PartialQuotient], p: u64) -> [[Rat; 2]; 2] {
    let mut m = [[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]];
    for b in prefix {
        let bv = b.value(p);
        m = [
            [&m[0][0] * &bv + &m[0][1], m[0][0].clone()],
            [&m[1][0] * &bv + &m[1][1], m[1][0].clone()],
        ];
    }
    m
}

/// Convergents of `[0, b_1, …, b_m]`.
fn table(prefix: &[PartialQuotient], p: u64) -> ConvergentTable {
    let mut qs = vec![PartialQuotient::zero()];
    qs.extend_from_slice(prefix);
    ConvergentTable::build(&qs, p)
}

fn budget_for(v_bn: i64) -> usize {
    DEFAULT_PRECISION.max(4 * v_bn.unsigned_abs() as usize + 64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PalindromeReport {
    pub n: usize,
    pub palindromic: bool,
    pub symmetric: bool,
    #[serde(rename = "A_eq_Bprev")]
    pub a_eq_bprev: bool,
    /// `v_p(α² - A_{n-1}/B_n)`, when `α` is supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq_approx_valuation: Option<Valuation>,
    /// Valuation of `max{|α/B_n²|_p, |α|_p/|B_n B_{n-1}|_p}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_valuation: Option<Valuation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_holds: Option<bool>,
}

impl PalindromeReport {
    /// Symmetry matches palindromicity, and a palindrome gives `A_n = B_{n-1}`.
    pub fn consistent(&self) -> bool {
        self.symmetric == self.palindromic && (!self.palindromic || self.a_eq_bprev)
    }
}

/// Symmetry of `M_n` for `α = [0, b_1, b_2, …]`, given `prefix = b_1 … b_m`
/// with `1 ≤ n ≤ m`.
pub fn palindrome_analysis(
    prefix: &[PartialQuotient],
    n: usize,
    alpha: Option<&Number>,
    p: u64,
) -> Result<PalindromeReport> {
    if n == 0 || n > prefix.len() {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..={}", prefix.len())));
    }
    let m = quotient_matrix(&prefix[..n], p);
    let t = table(&prefix[..n], p);
    let ni = n as i64;
    let mut report = PalindromeReport {
        n,
        palindromic: is_palindrome(&prefix[..n]),
        symmetric: m[0][1] == m[1][0],
        a_eq_bprev: t.a(ni) == t.b(ni - 1),
        sq_approx_valuation: None,
        bound_valuation: None,
        bound_holds: None,
    };
    if let Some(alpha) = alpha {
        let (vb, vb1) = (t.row(ni).f.unwrap_finite(), t.row(ni - 1).f.unwrap_finite());
        let budget = budget_for(vb);
        let approx = Number::Rat(t.a(ni - 1) / t.b(ni));
        let got = alpha.square().sub(&approx)?.vp(p, budget)?;
        let va = alpha.vp(p, budget)?;
        let bound = va + (-2 * vb).min(-(vb + vb1));
        // the bound rests on A_n = B_{n-1}
        report.bound_holds = report.palindromic.then_some(got >= bound);
        report.sq_approx_valuation = Some(got);
        report.bound_valuation = Some(bound);
    }
    Ok(report)
}

/// Lengths `n` at which symmetry of `M_n`, palindromicity of `(b_1 … b_n)`
/// and `A_n = B_{n-1}` do not all agree. One pass over the word.
pub fn symmetry_mismatches(word: &[PartialQuotient], p: u64) -> Vec<usize> {
    let t = table(word, p);
    let mut m = [[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]];
    let mut out = Vec::new();
    for (i, b) in word.iter().enumerate() {
        let bv = b.value(p);
        m = [
            [&m[0][0] * &bv + &m[0][1], m[0][0].clone()],
            [&m[1][0] * &bv + &m[1][1], m[1][0].clone()],
        ];
        let n = i + 1;
        let pal = is_palindrome(&word[..n]);
        let sym = m[0][1] == m[1][0];
        let a_eq = t.a(n as i64) == t.b(n as i64 - 1);
        if pal != sym || pal != a_eq {
            out.push(n);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubspaceWitness {
    pub n: usize,
    /// `(b_1 … b_n)` is a palindrome.
    pub applicable: bool,
    #[serde(with = "rat_str")]
    pub x: Rat,
    #[serde(with = "rat_str")]
    pub y: Rat,
    #[serde(with = "rat_str")]
    pub z: Rat,
    /// `v_p(α - x/z)`.
    pub gap_x: Valuation,
    /// `v_p(α² - y/z)`.
    pub gap_y: Valuation,
    /// Supremum of the exponents `δ` with `max gap < |z|_p^{-δ}`.
    #[serde(serialize_with = "ser_opt_rat")]
    pub delta: Option<Rat>,
    pub delta_exceeds_15_8: bool,
    /// `|z|_p = max(|x|_p, |y|_p, |z|_p)`.
    pub z_dominates: bool,
    /// `|w|_∞ < |w|_p^{1/4}` for `w = x, y, z`.
    pub size_x: bool,
    pub size_y: bool,
    pub size_z: bool,
}

fn ser_opt_rat<S: serde::Serializer>(x: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&crate::exact_arith::format_rat(r)),
        None => s.serialize_none(),
    }
}

/// `|w|_∞⁴ < |w|_p`, exactly.
fn small_at_infinity(w: &Rat, p: u64) -> bool {
    if w.is_zero() {
        return false;
    }
    let a = abs_rat(w);
    let a2 = &a * &a;
    &a2 * &a2 < abs_from_valuation(crate::exact_arith::vp_rat(w, p), p)
}

/// The triple `(x, y, z) = (A_n, A_{n-1}, B_n)` and the exponent it realizes
/// in the simultaneous approximation of `α` and `α²`.
pub fn subspace_witness(prefix: &[PartialQuotient], n: usize, alpha: &Number, p: u64) -> Result<SubspaceWitness> {
    if n == 0 || n > prefix.len() {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..={}", prefix.len())));
    }
    let t = table(&prefix[..n], p);
    let ni = n as i64;
    let (x, y, z) = (t.a(ni).clone(), t.a(ni - 1).clone(), t.b(ni).clone());
    let vz = t.row(ni).f.unwrap_finite();
    let budget = budget_for(vz);
    let gap_x = alpha.sub(&Number::Rat(&x / &z))?.vp(p, budget)?;
    let gap_y = alpha.square().sub(&Number::Rat(&y / &z))?.vp(p, budget)?;
    let delta = match (gap_x.min(gap_y), vz) {
        (Valuation::Finite(g), v) if v < 0 => Some(Rat::new(g.into(), (-v).into())),
        _ => None,
    };
    let vp = |w: &Rat| crate::exact_arith::vp_rat(w, p);
    Ok(SubspaceWitness {
        n,
        applicable: is_palindrome(&prefix[..n]),
        delta_exceeds_15_8: delta.as_ref().is_some_and(|d| *d > Rat::new(15.into(), 8.into())),
        delta,
        gap_x,
        gap_y,
        z_dominates: vp(&z) <= vp(&x) && vp(&z) <= vp(&y),
        size_x: small_at_infinity(&x, p),
        size_y: small_at_infinity(&y, p),
        size_z: small_at_infinity(&z, p),
        x,
        y,
        z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::{periodic_to_relation, relation_root, PeriodicCF};

    fn q(u: i64, a: u32) -> PartialQuotient {
        PartialQuotient::from_small(u, a, 5).unwrap()
    }

    #[test]
    fn palindromic_prefix_example() {
        let pre = [q(1, 1), q(2, 2), q(1, 1)];
        let r = palindrome_analysis(&pre, 3, None, 5).unwrap();
        assert!(r.palindromic && r.symmetric && r.a_eq_bprev);
        // oracle: explicit 2×2 products
        let (b1, b2) = (Rat::new(1.into(), 5.into()), Rat::new(2.into(), 25.into()));
        let bn = &b1 * (&b2 * &b1 + Rat::one()) + &b1;
        let m = quotient_matrix(&pre, 5);
        assert_eq!(m[0][0], bn);
        assert_eq!(m[0][1], &b1 * &b2 + Rat::one());
    }

    #[test]
    fn single_pass_agrees_with_per_prefix_analysis() {
        let w = [q(1, 1), q(2, 2), q(1, 1), q(1, 1), q(2, 2), q(1, 1), q(-1, 1)];
        assert!(symmetry_mismatches(&w, 5).is_empty());
        for n in 1..=w.len() {
            assert!(palindrome_analysis(&w, n, None, 5).unwrap().consistent());
        }
    }

    #[test]
    fn non_palindromic_prefix() {
        let pre = [q(1, 1), q(2, 2)];
        let r = palindrome_analysis(&pre, 2, None, 5).unwrap();
        assert!(!r.palindromic && !r.symmetric);
        assert!(r.consistent());
    }

    fn two_periodic() -> (Vec<PartialQuotient>, Number) {
        // α = [0, overline(1/5, 2/5²)]
        let cf = PeriodicCF::with_prefix(5, &[q(1, 1), q(2, 2)], vec![q(1, 1), q(2, 2)]).unwrap();
        let rel = periodic_to_relation(&cf).unwrap();
        let alpha = relation_root(&rel, &cf).unwrap();
        (cf.unrolled(41)[1..].to_vec(), alpha)
    }

    #[test]
    fn two_periodic_palindromes_at_odd_lengths() {
        let (pre, alpha) = two_periodic();
        for n in 1..=40 {
            let r = palindrome_analysis(&pre, n, Some(&alpha), 5).unwrap();
            assert_eq!(r.palindromic, n % 2 == 1, "n = {n}");
            assert!(r.consistent());
            assert_eq!(r.bound_holds, (n % 2 == 1).then_some(true), "n = {n}: {r:?}");
        }
    }

    #[test]
    fn witness_exponent_approaches_two() {
        let (pre, alpha) = two_periodic();
        let w = subspace_witness(&pre, 39, &alpha, 5).unwrap();
        assert!(w.applicable && w.z_dominates);
        let d = w.delta.clone().unwrap();
        assert!(w.delta_exceeds_15_8, "{d}");
        assert!(d <= Rat::new(21.into(), 10.into()));
        assert!(w.size_x && w.size_y && w.size_z);
        let w = subspace_witness(&pre, 2, &alpha, 5).unwrap();
        assert!(!w.applicable);
    }
}
