use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::modular::check_prime;
use crate::exact_arith::rational::{bigint_str, p_pow, rat_str};
use crate::exact_arith::{PartialQuotient, Rat};

/// `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis1Report {
    pub k: usize,
    /// Smallest exponent `a_i` different from 1 (1 if there is none).
    pub a: u32,
    /// `F_{k+1}`.
    #[serde(with = "bigint_str")]
    pub fib: BigInt,
    /// Square of the unit bound, `(3/14) p^{2a} / F_{k+1}²`.
    #[serde(with = "rat_str")]
    pub bound_sq: Rat,
    /// 1-based indices that break the hypothesis.
    pub violations: Vec<usize>,
    pub passes: bool,
}

/// Hypothesis 1 for `(b_1, …, b_k)`: every `b_i = û_i / p^{a_i}` has
/// `a_i > 0`, and away from `b_i = p^{-1}`, `14 û_i² F_{k+1}² < 3 p^{2a}`.
pub fn hypothesis1_check(prefix: &[PartialQuotient], p: u64) -> Result<Hypothesis1Report> {
    check_prime(p)?;
    if prefix.is_empty() {
        return Err(Error::InvalidInput("empty prefix".into()));
    }
    let items: Vec<(usize, &PartialQuotient)> = prefix.iter().enumerate().map(|(i, b)| (i + 1, b)).collect();
    Ok(hypothesis1_at(&items, prefix.len(), p))
}

/// The same test on a partially known prefix of nominal length `k`;
/// `items` holds `(index, b_index)` pairs for the known entries.
pub(crate) fn hypothesis1_at(items: &[(usize, &PartialQuotient)], k: usize, p: u64) -> Hypothesis1Report {
    let a = items
        .iter()
        .map(|(_, b)| b.exponent())
        .filter(|&e| e != 1)
        .min()
        .unwrap_or(1);
    let fib = fibonacci(k + 1);
    let rhs = BigInt::from(3) * p_pow(p, 2 * a);
    let fib_sq14 = BigInt::from(14) * &fib * &fib;
    let violations: Vec<usize> = items
        .iter()
        .filter(|(_, b)| {
            if b.exponent() == 0 {
                return true;
            }
            !b.is_inv_p() && &fib_sq14 * b.unit() * b.unit() >= rhs
        })
        .map(|(i, _)| *i)
        .collect();
    Hypothesis1Report {
        k,
        a,
        bound_sq: Rat::new(rhs, fib_sq14),
        fib,
        passes: violations.is_empty(),
        violations,
    }
}

/// Largest `u ≥ 0` with `14 u² F_{k+1}² < 3 p^{2a}`.
fn unit_cap(p: u64, a: u32, k: usize) -> BigInt {
    let fib = fibonacci(k + 1);
    let lhs = |u: &BigInt| BigInt::from(14) * u * u * &fib * &fib;
    let rhs = BigInt::from(3) * p_pow(p, 2 * a);
    let mut u = (&rhs / (BigInt::from(14) * &fib * &fib)).sqrt();
    while u > BigInt::zero() && lhs(&u) >= rhs {
        u -= 1;
    }
    u
}

/// Draws a prefix of length `k` meeting Hypothesis 1 whose quotients are
/// Browkin floor values with exponents in `1..=max_exp`.
pub fn random_hypothesis1_prefix<R: Rng + ?Sized>(
    rng: &mut R,
    p: u64,
    k: usize,
    max_exp: u32,
) -> Result<Vec<PartialQuotient>> {
    check_prime(p)?;
    if k == 0 || max_exp == 0 {
        return Err(Error::InvalidInput("need k ≥ 1 and max_exp ≥ 1".into()));
    }
    // smallest exponent ≥ 2 that leaves room for a unit; below it only p^{-1} fits
    let floor_exp = (2..=max_exp).find(|&a| unit_cap(p, a, k) >= BigInt::one());
    for _ in 0..1000 {
        let exps: Vec<u32> = (0..k)
            .map(|_| match (rng.random_range(1..=max_exp), floor_exp) {
                (1, _) => 1,
                (e, Some(m)) => e.max(m),
                (_, None) => 1,
            })
            .collect();
        let a = exps.iter().copied().filter(|&e| e != 1).min().unwrap_or(1);
        let cap = unit_cap(p, a, k);
        let mut out = Vec::with_capacity(k);
        for &e in &exps {
            let browkin_cap = (p_pow(p, e + 1) - 1) / 2;
            let lim = cap.clone().min(browkin_cap);
            match sample_unit(rng, &lim, p) {
                Some(u) => out.push(PartialQuotient::new(u, e, p)?),
                None if e == 1 => out.push(PartialQuotient::inv_p_pow(1)),
                None => break,
            }
        }
        if out.len() == k {
            return Ok(out);
        }
    }
    Err(Error::InfeasibleSpec(format!(
        "no Hypothesis-1 prefix of length {k} with exponents ≤ {max_exp} at p = {p}"
    )))
}

/// A random `u` with `0 < |u| ≤ lim` and `p ∤ u`.
fn sample_unit<R: Rng + ?Sized>(rng: &mut R, lim: &BigInt, p: u64) -> Option<BigInt> {
    let lim = lim.clone().min(BigInt::from(i64::MAX)).to_i64()?;
    if lim < 1 {
        return None;
    }
    loop {
        let u: i64 = rng.random_range(-lim..=lim);
        if u != 0 && !u.unsigned_abs().is_multiple_of(p) {
            return Some(BigInt::from(u));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(u: i64, a: u32) -> PartialQuotient {
        PartialQuotient::from_small(u, a, 5).unwrap()
    }

    #[test]
    fn fibonacci_values() {
        let got: Vec<BigInt> = (0..10).map(fibonacci).collect();
        let want: Vec<BigInt> = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn worked_example_prefix() {
        let r = hypothesis1_check(&[q(4, 2), q(-3, 3)], 5).unwrap();
        assert!(r.passes);
        assert_eq!(r.a, 2);
        assert_eq!(r.fib, BigInt::from(2));
        assert_eq!(r.bound_sq, rat(3 * 625, 14 * 4));
    }

    #[test]
    fn inverse_p_is_exempt() {
        let r = hypothesis1_check(&vec![q(1, 1); 20], 5).unwrap();
        assert!(r.passes);
        assert_eq!(r.a, 1);
    }

    #[test]
    fn large_unit_fails() {
        // 14·49·1 ≥ 3·625 is false, so 7/5² passes at k = 1; at k = 3 it fails
        assert!(hypothesis1_check(&[q(7, 2)], 5).unwrap().passes);
        let r = hypothesis1_check(&[q(7, 2), q(1, 1), q(1, 1)], 5).unwrap();
        assert_eq!(r.violations, vec![1]);
        // 14·49·F_4² = 6174 ≥ 3·5⁴ = 1875
        assert_eq!(r.fib, BigInt::from(3));
    }

    #[test]
    fn zero_exponent_is_a_violation() {
        let r = hypothesis1_check(&[q(2, 0), q(1, 1)], 5).unwrap();
        assert_eq!(r.violations, vec![1]);
    }

    #[test]
    fn random_prefixes_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [5u64, 7, 11] {
            for k in (1..=5).chain([12, 30]) {
                let pre = random_hypothesis1_prefix(&mut rng, p, k, 4).unwrap();
                assert_eq!(pre.len(), k);
                assert!(hypothesis1_check(&pre, p).unwrap().passes);
                assert!(pre.iter().all(|b| b.is_browkin_image(p) && b.exponent() >= 1));
            }
        }
    }

    #[test]
    fn unit_cap_is_tight() {
        for (p, a, k) in [(5u64, 2u32, 2usize), (7, 3, 4), (11, 1, 1)] {
            let u = unit_cap(p, a, k);
            let f = fibonacci(k + 1);
            let rhs = BigInt::from(3) * p_pow(p, 2 * a);
            assert!(BigInt::from(14) * &u * &u * &f * &f < rhs || u.is_zero());
            let v = &u + 1;
            assert!(BigInt::from(14) * &v * &v * &f * &f >= rhs);
            assert!(u >= BigInt::zero());
        }
    }
}
