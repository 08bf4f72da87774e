//! Floor functions `Q_p → Z[1/p]` driving the continued fraction iteration.
//!
//! [`FloorKind::Browkin`] truncates the balanced expansion at index 0;
//! [`FloorKind::Ruban`] does the same with digits in `{0, …, p-1}`. The third
//! kind lives in [`diagnostics`]: it is not a usable floor and exists to show
//! how a function can look floor-like and still break the contraction
//! `|x - s(x)|_p < 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::rational::p_pow;
use crate::exact_arith::{Number, PartialQuotient, Rat, Valuation, DEFAULT_PRECISION};
use crate::padic_digits::{digits_of_rat, digits_of_surd_with_budget, PAdicApprox};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FloorKind {
    Browkin,
    Ruban,
    Counterexample,
}

impl FloorKind {
    pub const ALL: [FloorKind; 3] = [FloorKind::Browkin, FloorKind::Ruban, FloorKind::Counterexample];

    pub fn name(self) -> &'static str {
        match self {
            FloorKind::Browkin => "browkin",
            FloorKind::Ruban => "ruban",
            FloorKind::Counterexample => "counterexample",
        }
    }
}

impl fmt::Display for FloorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FloorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FloorKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown floor kind {s:?}")))
    }
}

/// Floor of a truncated expansion. The digits must reach index 0.
pub fn floor_of_approx(x: &PAdicApprox, kind: FloorKind) -> Result<PartialQuotient> {
    let p = x.p();
    if x.is_zero() {
        if x.precision() == 0 {
            return Err(Error::PrecisionExhausted { budget: 0 });
        }
        return Ok(PartialQuotient::zero());
    }
    let r = x.r();
    if r >= 1 {
        return Ok(PartialQuotient::zero());
    }
    if kind == FloorKind::Counterexample {
        return Ok(diagnostics::counterexample_floor_at(r));
    }
    if x.known_until() < 1 {
        return Err(Error::PrecisionExhausted {
            budget: x.precision(),
        });
    }
    let a = (-r) as u32;
    // numerator of the Browkin truncation over p^a
    let mut m = BigInt::zero();
    for i in (r..=0).rev() {
        m = m * p + x.digit_at(i).expect("covered");
    }
    if kind == FloorKind::Ruban {
        m = m.mod_floor(&p_pow(p, a + 1));
    }
    PartialQuotient::new(m, a, p)
}

/// Floor of an exact number, resolving surd digits within `budget`.
pub fn floor_with_budget(x: &Number, p: u64, kind: FloorKind, budget: usize) -> Result<PartialQuotient> {
    let v = match x.vp(p, budget)? {
        Valuation::Infinite => return Ok(PartialQuotient::zero()),
        Valuation::Finite(v) if v >= 1 => return Ok(PartialQuotient::zero()),
        Valuation::Finite(v) => v,
    };
    if kind == FloorKind::Counterexample {
        return Ok(diagnostics::counterexample_floor_at(v));
    }
    let n = (1 - v) as usize;
    let digits = match x {
        Number::Rat(r) => digits_of_rat(r, p, n)?,
        Number::Surd(s) => digits_of_surd_with_budget(s, n, budget)?,
    };
    floor_of_approx(&digits, kind)
}

pub fn floor(x: &Number, p: u64, kind: FloorKind) -> Result<PartialQuotient> {
    floor_with_budget(x, p, kind, DEFAULT_PRECISION)
}

/// Browkin floor of a rational.
pub fn browkin(x: &Rat, p: u64) -> Result<PartialQuotient> {
    floor(&Number::Rat(x.clone()), p, FloorKind::Browkin)
}

/// The three conditions a floor should meet at `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FloorContract {
    pub kind: FloorKind,
    pub value: PartialQuotient,
    /// `s(x) ∈ Z[1/p]`.
    pub in_s_integers: bool,
    /// `|s(x)|_∞ < p/2`.
    pub archimedean_bound: bool,
    /// `|x - s(x)|_p < 1`.
    pub padic_contraction: bool,
}

impl FloorContract {
    pub fn all_hold(&self) -> bool {
        self.in_s_integers && self.archimedean_bound && self.padic_contraction
    }
}

pub fn check_floor_contract(x: &Number, p: u64, kind: FloorKind) -> Result<FloorContract> {
    let s = floor(x, p, kind)?;
    let sv = s.value(p);
    let rest = x.sub_rat(&sv);
    let contraction = rest.vp(p, DEFAULT_PRECISION)? >= Valuation::Finite(1);
    let double: Rat = sv.abs() * Rat::from_integer(BigInt::from(2));
    Ok(FloorContract {
        kind,
        in_s_integers: crate::exact_arith::rational::is_s_integer(&sv, p),
        archimedean_bound: double < Rat::from_integer(BigInt::from(p)),
        padic_contraction: contraction,
        value: s,
    })
}

pub mod diagnostics {
    //! A floor-like map `s(x) = p^{v_p(x)}` (and 0 on `pZ_p`). It respects
    //! valuations and vanishes on the maximal ideal, yet `x - s(x)` need not
    //! be small: at `x = 2/p` the difference is `1/p`.

    use super::*;

    pub(super) fn counterexample_floor_at(v: i64) -> PartialQuotient {
        if v >= 1 {
            PartialQuotient::zero()
        } else {
            PartialQuotient::inv_p_pow((-v) as u32)
        }
    }

    pub fn counterexample_floor(x: &Number, p: u64) -> Result<PartialQuotient> {
        super::floor(x, p, FloorKind::Counterexample)
    }

    /// `v_p(x - s(x))` under the counterexample map, for rationals.
    pub fn counterexample_defect(x: &Rat, p: u64) -> Result<Valuation> {
        let s = counterexample_floor(&Number::Rat(x.clone()), p)?;
        Ok(crate::exact_arith::vp_rat(&(x - s.value(p)), p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{int, rat};
    use crate::exact_arith::{Branch, QuadField, QuadSurd};
    use crate::exact_arith::modular::mod_inverse;

    fn num(n: i64, d: i64) -> Number {
        Number::Rat(rat(n, d))
    }

    #[test]
    fn browkin_examples() {
        assert_eq!(floor(&num(1, 3), 5, FloorKind::Browkin).unwrap().value(5), int(2));
        assert_eq!(floor(&num(-3, 5), 5, FloorKind::Browkin).unwrap().value(5), rat(-3, 5));
        assert!(floor(&num(10, 7), 5, FloorKind::Browkin).unwrap().is_zero());
        assert!(floor(&num(0, 1), 5, FloorKind::Browkin).unwrap().is_zero());
    }

    #[test]
    fn browkin_matches_modular_inverse() {
        // for a p-adic unit n/d the floor is the centered residue of n·d⁻¹
        let p = 7u64;
        for (n, d) in [(1i64, 3i64), (5, 2), (-4, 9), (100, 13)] {
            let inv = mod_inverse(&BigInt::from(d), &BigInt::from(p)).unwrap();
            let r = (BigInt::from(n) * inv).mod_floor(&BigInt::from(p));
            let c = if r > BigInt::from(p / 2) { r - p } else { r };
            let got = floor(&num(n, d), p, FloorKind::Browkin).unwrap();
            assert_eq!(got.value(p), Rat::from_integer(c));
        }
    }

    #[test]
    fn ruban_digits() {
        // -1 = (p-1) + (p-1)p + …
        let s = floor(&num(-1, 1), 5, FloorKind::Ruban).unwrap();
        assert_eq!(s.value(5), int(4));
        // -1/5 = 4/5 + 4 + …
        let s = floor(&num(-1, 5), 5, FloorKind::Ruban).unwrap();
        assert_eq!(s.value(5), rat(24, 5));
        let c = check_floor_contract(&num(-1, 1), 5, FloorKind::Ruban).unwrap();
        assert!(c.in_s_integers && c.padic_contraction && !c.archimedean_bound);
    }

    #[test]
    fn counterexample_at_two_over_p() {
        for p in [3u64, 5, 7] {
            let x = num(2, p as i64);
            let c = check_floor_contract(&x, p, FloorKind::Counterexample).unwrap();
            assert_eq!(c.value, PartialQuotient::inv_p_pow(1));
            assert!(!c.padic_contraction);
            assert_eq!(
                diagnostics::counterexample_defect(&rat(2, p as i64), p).unwrap(),
                Valuation::Finite(-1)
            );
            assert!(check_floor_contract(&x, p, FloorKind::Browkin).unwrap().all_hold());
        }
    }

    #[test]
    fn approx_needs_index_zero() {
        let x = PAdicApprox::new(5, -3, vec![1, 2]).unwrap();
        assert!(matches!(
            floor_of_approx(&x, FloorKind::Browkin),
            Err(Error::PrecisionExhausted { .. })
        ));
        let x = PAdicApprox::new(5, -1, vec![2, -1, 2]).unwrap();
        assert_eq!(floor_of_approx(&x, FloorKind::Browkin).unwrap().value(5), rat(-3, 5));
    }

    #[test]
    fn surd_floor() {
        let f = QuadField::new(BigInt::from(2), 7, Branch::Plus).unwrap();
        let x = Number::Surd(QuadSurd::new(&f, &rat(1, 7), &rat(1, 1), &int(1)).unwrap());
        let s = floor(&x, 7, FloorKind::Browkin).unwrap();
        assert_eq!(s.exponent(), 1);
        let rest = x.sub_rat(&s.value(7));
        assert!(rest.vp(7, 64).unwrap() >= Valuation::Finite(1));
        assert!(check_floor_contract(&x, 7, FloorKind::Browkin).unwrap().all_hold());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("Ruban".parse::<FloorKind>().unwrap(), FloorKind::Ruban);
        assert!("floor".parse::<FloorKind>().is_err());
    }
}
