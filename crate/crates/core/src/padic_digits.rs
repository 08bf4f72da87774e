//! Balanced-digit p-adic expansions of rationals and embedded quadratic
//! surds, at explicit finite precision.
//!
//! Digits are taken in `{-(p-1)/2, …, (p-1)/2}`. Everything here reduces to
//! integer arithmetic modulo `p^N`: the unit part of the input is reduced
//! modulo `p^N` and then peeled one centered digit at a time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::modular::{centered, check_prime, mod_inverse, residue_u64, sqrt_mod_p};
use crate::exact_arith::rational::{p_pow, p_power_rat, split_p, vp_int};
use crate::exact_arith::{Branch, QuadSurd, Rat, Valuation};

/// A truncated balanced-digit Laurent series `Σ_{i=r}^{r+N-1} a_i p^i`.
///
/// Zero is stored with `r = 0` and no digits; `precision` then records how
/// many digits are known to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicApprox {
    p: u64,
    r: i64,
    digits: Vec<i64>,
    precision: usize,
}

impl PAdicApprox {
    pub fn zero(p: u64, precision: usize) -> Self {
        PAdicApprox {
            p,
            r: 0,
            digits: Vec::new(),
            precision,
        }
    }

    /// Builds an approximation from explicit digits, checking the balanced
    /// range and that the leading digit is nonzero.
    pub fn new(p: u64, r: i64, digits: Vec<i64>) -> Result<Self> {
        check_prime(p)?;
        let half = ((p - 1) / 2) as i64;
        if digits.iter().any(|d| d.abs() > half) {
            return Err(Error::InvalidInput("digit outside balanced range".into()));
        }
        if digits.first() == Some(&0) {
            return Err(Error::InvalidInput("leading digit must be nonzero".into()));
        }
        let precision = digits.len();
        if precision == 0 {
            return Ok(Self::zero(p, 0));
        }
        Ok(PAdicApprox {
            p,
            r,
            digits,
            precision,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Index of the leading digit.
    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Highest digit index known, exclusive: digits cover `r .. r + N`.
    pub fn known_until(&self) -> i64 {
        self.r + self.precision as i64
    }

    pub fn digit_at(&self, i: i64) -> Option<i64> {
        if i < self.r || i >= self.known_until() {
            return None;
        }
        self.digits.get((i - self.r) as usize).copied()
    }

    /// Exact value of the finite digit sum.
    pub fn truncated_value(&self) -> Rat {
        self.partial_sum(self.known_until())
    }

    /// `Σ a_i p^i` over the known indices `i < end`.
    pub fn partial_sum(&self, end: i64) -> Rat {
        let mut acc = BigInt::zero();
        let pb = BigInt::from(self.p);
        let stop = end.min(self.known_until());
        if stop <= self.r {
            return Rat::zero();
        }
        // Horner from the highest used digit down to r
        for i in (self.r..stop).rev() {
            acc = acc * &pb + self.digit_at(i).unwrap_or(0);
        }
        Rat::from_integer(acc) * p_power_rat(self.p, self.r)
    }
}

/// Peels `n` centered base-`p` digits off the integer `m`.
fn balanced_digits(m: &BigInt, p: u64, n: usize) -> Vec<i64> {
    let pb = BigInt::from(p);
    let mut m = m.clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let d = centered(&m, &pb);
        m = (&m - &d) / &pb;
        out.push(d.to_i64().expect("digit fits i64"));
    }
    out
}

fn from_unit_residue(p: u64, r: i64, residue: &BigInt, n: usize) -> PAdicApprox {
    PAdicApprox {
        p,
        r,
        digits: balanced_digits(residue, p, n),
        precision: n,
    }
}

/// First `n` balanced digits of `x`, starting at `r = v_p(x)`.
pub fn digits_of_rat(x: &Rat, p: u64, n: usize) -> Result<PAdicApprox> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    if x.is_zero() {
        return Ok(PAdicApprox::zero(p, n));
    }
    let (vn, un) = split_p(x.numer(), p);
    let (vd, ud) = split_p(x.denom(), p);
    let modulus = p_pow(p, n as u32);
    let inv = mod_inverse(&ud, &modulus).expect("unit denominator");
    let residue = (un * inv).mod_floor(&modulus);
    Ok(from_unit_residue(p, vn as i64 - vd as i64, &residue, n))
}

/// A square root of `d` modulo `p^n`, lifted from the root mod p selected by
/// `branch` (`Plus` has residue in `{1, …, (p-1)/2}`).
pub fn hensel_sqrt(d: &BigInt, p: u64, n: usize, branch: Branch) -> Result<BigInt> {
    check_prime(p)?;
    let not_residue = || Error::NotResidue {
        d: d.to_string(),
        p,
    };
    let d_mod_p = residue_u64(d, p);
    if d_mod_p == 0 {
        return Err(not_residue());
    }
    let r = sqrt_mod_p(d_mod_p, p).ok_or_else(not_residue)?;
    let plus = if r <= (p - 1) / 2 { r } else { p - r };
    let root = match branch {
        Branch::Plus => plus,
        Branch::Minus => p - plus,
    };
    if n == 0 {
        return Ok(BigInt::zero());
    }
    let mut s = BigInt::from(root);
    let mut k = 1usize;
    while k < n {
        k = (2 * k).min(n);
        let m = p_pow(p, k as u32);
        let two_s: BigInt = (&s * 2u32).mod_floor(&m);
        let inv = mod_inverse(&two_s, &m).expect("2s is a unit");
        let f = (&s * &s - d).mod_floor(&m);
        s = (&s - f * inv).mod_floor(&m);
    }
    Ok(s.mod_floor(&p_pow(p, n as u32)))
}

/// First `n` balanced digits of an embedded surd, refining the valuation
/// within `budget` digits.
pub fn digits_of_surd_with_budget(x: &QuadSurd, n: usize, budget: usize) -> Result<PAdicApprox> {
    if let Some(r) = x.as_rational() {
        return digits_of_rat(&r, x.p(), n);
    }
    if n == 0 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let p = x.p();
    let (a, b, c) = x.coords();
    let v = x.vp(budget)?.unwrap_finite();
    let (vc, uc) = split_p(c, p);
    let vnum = v + vc as i64;
    debug_assert!(vnum >= 0);
    let prec = vnum as usize + n;
    let s = x.field().sqrt_mod(prec);
    let big_mod = p_pow(p, prec as u32);
    let num = (a + b * s).mod_floor(&big_mod);
    debug_assert_eq!(vp_int(&num, p), Valuation::Finite(vnum));
    let unit = num / p_pow(p, vnum as u32);
    let modulus = p_pow(p, n as u32);
    let inv = mod_inverse(&uc, &modulus).expect("unit denominator");
    let residue = (unit * inv).mod_floor(&modulus);
    Ok(from_unit_residue(p, v, &residue, n))
}

pub fn digits_of_surd(x: &QuadSurd, n: usize) -> Result<PAdicApprox> {
    digits_of_surd_with_budget(x, n, crate::DEFAULT_PRECISION.max(2 * n))
}
