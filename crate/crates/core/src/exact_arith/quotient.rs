use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{bigint_str, p_pow, split_p, Rat};
use super::Valuation;
use crate::error::{Error, Result};

/// An element `u / p^a` of `Z[1/p]` with `p ∤ u` (or zero).
///
/// This is the shape of every Browkin partial quotient: the floor of a p-adic
/// number is a finite balanced-digit sum ending at index 0. The prime is not
/// stored; it always comes from the surrounding expansion or field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialQuotient {
    #[serde(with = "bigint_str")]
    u: BigInt,
    a: u32,
}

impl PartialQuotient {
    pub fn zero() -> Self {
        PartialQuotient {
            u: BigInt::zero(),
            a: 0,
        }
    }

    pub fn new(u: BigInt, a: u32, p: u64) -> Result<Self> {
        if u.is_zero() {
            if a != 0 {
                return Err(Error::InvalidInput("zero quotient must have a = 0".into()));
            }
            return Ok(Self::zero());
        }
        if split_p(&u, p).0 != 0 {
            return Err(Error::InvalidInput(format!("{p} divides numerator {u}")));
        }
        Ok(PartialQuotient { u, a })
    }

    /// `p^{-a}` shorthand, e.g. `p^{-1}` for `inv_p_pow(1)`.
    pub fn inv_p_pow(a: u32) -> Self {
        PartialQuotient {
            u: BigInt::from(1),
            a,
        }
    }

    pub fn from_small(u: i64, a: u32, p: u64) -> Result<Self> {
        Self::new(BigInt::from(u), a, p)
    }

    /// Accepts a nonpositive-valuation rational whose denominator is a power
    /// of `p`.
    pub fn from_rat(x: &Rat, p: u64) -> Result<Self> {
        if x.is_zero() {
            return Ok(Self::zero());
        }
        let (vd, rest) = split_p(x.denom(), p);
        if rest != BigInt::from(1) {
            return Err(Error::InvalidInput(format!("{x} is not in Z[1/{p}]")));
        }
        if split_p(x.numer(), p).0 > 0 {
            return Err(Error::InvalidInput(format!("{x} has positive {p}-adic valuation")));
        }
        Ok(PartialQuotient {
            u: x.numer().clone(),
            a: vd,
        })
    }

    pub fn unit(&self) -> &BigInt {
        &self.u
    }

    pub fn exponent(&self) -> u32 {
        self.a
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero()
    }

    pub fn value(&self, p: u64) -> Rat {
        Rat::new(self.u.clone(), p_pow(p, self.a))
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(-(self.a as i64))
        }
    }

    /// True for `p^{-1}` itself.
    pub fn is_inv_p(&self) -> bool {
        self.a == 1 && self.u == BigInt::from(1)
    }

    /// Whether this value can be produced by the Browkin floor:
    /// `2|u| < p^{a+1}`, i.e. `|value|_∞ < p/2`.
    pub fn is_browkin_image(&self, p: u64) -> bool {
        let lhs: BigInt = self.u.abs() * 2;
        lhs < p_pow(p, self.a + 1)
    }

    /// Human notation `û/p^a`.
    pub fn human(&self, p: u64) -> String {
        match self.a {
            0 => self.u.to_string(),
            1 => format!("{}/{}", self.u, p),
            a => format!("{}/{}^{}", self.u, p, a),
        }
    }
}

impl fmt::Display for PartialQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 0 {
            write!(f, "{}", self.u)
        } else {
            write!(f, "{}/p^{}", self.u, self.a)
        }
    }
}
