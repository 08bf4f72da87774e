use num_bigint::BigInt;
use serde::Serialize;

use super::hypothesis::{hypothesis1_check, Hypothesis1Report};
use crate::cf::{shared_prefix_gap, GapReport};
use crate::error::{Error, Result};
use crate::exact_arith::rational::{bigint_str, p_pow};
use crate::exact_arith::{Number, PartialQuotient};
use crate::heights::{naive_height, periodic_to_relation, relation_root, PeriodicCF};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaReport {
    pub n_i: usize,
    /// `[0, b_1, …, b_{n_i - 1}, overline(p^{-1})]`.
    pub cf: String,
    pub beta: Number,
    #[serde(serialize_with = "crate::heights::ser_poly")]
    pub relation: [BigInt; 3],
    /// Gap against `α` at `n = n_i + k_i λ_i - 1`.
    pub gap: GapReport,
    /// Hypothesis 1 on `(b_1 … b_{n_i - 1})`, when that prefix is nonempty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<Hypothesis1Report>,
    #[serde(with = "bigint_str")]
    pub naive_h: BigInt,
    /// `|B_{n_i - 1}|_p²`.
    #[serde(with = "bigint_str")]
    pub bound: BigInt,
    pub height_holds: bool,
}

/// Builds `β = [0, b_1, …, b_{n_i - 1}, overline(p^{-1})]` from the first
/// quotients of `α`, then measures `|α - β|_p` against `|B_n|_p^{-2}` with
/// `n = n_i + run - 1` and `h(β)` against `|B_{n_i - 1}|_p²`.
///
/// `prefix` is `b_1, b_2, …` of `α`; `run` is the run length `k_i λ_i`.
pub fn beta_approximant(
    alpha: &Number,
    prefix: &[PartialQuotient],
    n_i: usize,
    run: usize,
    p: u64,
) -> Result<BetaReport> {
    if n_i == 0 || n_i > prefix.len() + 1 {
        return Err(Error::InvalidInput(format!("n_i = {n_i} outside 1..={}", prefix.len() + 1)));
    }
    let inv_p = PartialQuotient::inv_p_pow(1);
    let head = &prefix[..n_i - 1];
    // [0, overline(p^{-1})] is written with one unrolled period
    let pre: Vec<PartialQuotient> = if head.is_empty() { vec![inv_p.clone()] } else { head.to_vec() };
    let cf = PeriodicCF::with_prefix(p, &pre, vec![inv_p])?;
    let rel = periodic_to_relation(&cf)?;
    let beta = relation_root(&rel, &cf)?;
    let gap = shared_prefix_gap(alpha, &beta, p, n_i + run - 1)?;
    let f: u32 = head.iter().map(|b| b.exponent()).sum();
    let bound = p_pow(p, 2 * f);
    let naive_h = naive_height(&rel.cleared)?;
    Ok(BetaReport {
        n_i,
        cf: cf.human(),
        beta,
        relation: rel.cleared,
        gap,
        hypothesis: if head.is_empty() { None } else { Some(hypothesis1_check(head, p)?) },
        height_holds: naive_h <= bound,
        naive_h,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::fold_quotients;

    fn q(u: i64, a: u32) -> PartialQuotient {
        PartialQuotient::from_small(u, a, 5).unwrap()
    }

    fn alpha_of(prefix: &[PartialQuotient]) -> Number {
        let mut qs = vec![PartialQuotient::zero()];
        qs.extend_from_slice(prefix);
        Number::Rat(fold_quotients(&qs, 5).unwrap())
    }

    #[test]
    fn worked_example_prefix() {
        let mut pre = vec![q(4, 2), q(-3, 3)];
        pre.extend(vec![q(1, 1); 6]);
        pre.push(q(2, 2));
        let r = beta_approximant(&alpha_of(&pre), &pre, 3, 6, 5).unwrap();
        assert_eq!(r.naive_h, BigInt::from(9713125));
        assert_eq!(r.bound, BigInt::from(9765625));
        assert!(r.height_holds && r.gap.holds);
        assert_eq!(r.gap.shared, 9);
    }

    #[test]
    fn smallest_case() {
        let pre = vec![q(1, 1), q(1, 1), q(-2, 2)];
        let r = beta_approximant(&alpha_of(&pre), &pre, 1, 2, 5).unwrap();
        assert!(r.gap.holds);
        assert!(r.hypothesis.is_none());
    }

    #[test]
    fn too_short_a_share_is_rejected() {
        let pre = vec![q(4, 2), q(2, 2), q(1, 1)];
        assert!(beta_approximant(&alpha_of(&pre), &pre, 2, 3, 5).is_err());
    }
}
