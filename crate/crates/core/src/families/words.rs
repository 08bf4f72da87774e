//! Two-letter words: Sturmian (Beatty differences) and Thue–Morse.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::modular::exact_sqrt;
use crate::exact_arith::{parse_surd_parts, PartialQuotient};

/// A real number `(a + b√d)/c` with `d > 0` and `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealQuadratic {
    #[serde(with = "crate::exact_arith::rational::bigint_str")]
    a: BigInt,
    #[serde(with = "crate::exact_arith::rational::bigint_str")]
    b: BigInt,
    #[serde(with = "crate::exact_arith::rational::bigint_str")]
    d: BigInt,
    #[serde(with = "crate::exact_arith::rational::bigint_str")]
    c: BigInt,
}

impl RealQuadratic {
    pub fn new(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d.is_negative() {
            return Err(Error::InvalidInput(format!("sqrt({d}) is not real")));
        }
        let (a, b, c) = if c.is_negative() { (-a, -b, -c) } else { (a, b, c) };
        Ok(RealQuadratic { a, b, d, c })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts = parse_surd_parts(s)?;
        Self::new(parts.a, parts.b, parts.d, parts.c)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() || exact_sqrt(&self.d).is_some()
    }

    /// `⌊n·self⌋`, exact for irrational values.
    ///
    /// `t = na + nb√d` is never an integer, so `⌊t/c⌋ = ⌊⌊t⌋/c⌋`, and
    /// `⌊nb√d⌋` is an integer square root of `(nb)²d` up to sign.
    pub fn floor_mul(&self, n: &BigInt) -> BigInt {
        let x = n * &self.a;
        let y = n * &self.b;
        let r = (&y * &y * &self.d).sqrt();
        let s = if y.is_negative() {
            if &r * &r == &y * &y * &self.d {
                -r
            } else {
                -r - 1
            }
        } else {
            r
        };
        (x + s).div_floor(&self.c)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigInt| x.to_string().parse::<f64>().unwrap_or(f64::NAN);
        (f(&self.a) + f(&self.b) * f(&self.d).sqrt()) / f(&self.c)
    }
}

/// Slope `θ ∈ (0, 1)` irrational, with the two letters it selects between.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SturmianSlope {
    pub theta: RealQuadratic,
    pub a: PartialQuotient,
    pub b: PartialQuotient,
}

impl SturmianSlope {
    pub fn new(theta: RealQuadratic, a: PartialQuotient, b: PartialQuotient) -> Result<Self> {
        if theta.is_rational() {
            return Err(Error::RationalSlope);
        }
        let one = BigInt::from(1);
        // θ irrational, so ⌊θ⌋ = 0 means 0 < θ < 1
        if !theta.floor_mul(&one).is_zero() {
            return Err(Error::InvalidInput("slope must lie in (0, 1)".into()));
        }
        if a == b {
            return Err(Error::InvalidInput("the two letters must differ".into()));
        }
        Ok(SturmianSlope { theta, a, b })
    }
}

/// `⌊(n+1)θ⌋ - ⌊nθ⌋` for `n = 1 … len` (`true` for 1).
pub fn sturmian_word(theta: &RealQuadratic, len: usize) -> Vec<bool> {
    let mut prev = theta.floor_mul(&BigInt::from(1));
    (1..=len)
        .map(|n| {
            let next = theta.floor_mul(&BigInt::from(n + 1));
            let jump = next != prev;
            prev = next;
            jump
        })
        .collect()
}

/// `c_1 … c_N`.
pub fn gen_sturmian(slope: &SturmianSlope, len: usize) -> Vec<PartialQuotient> {
    sturmian_word(&slope.theta, len)
        .into_iter()
        .map(|j| if j { slope.b.clone() } else { slope.a.clone() })
        .collect()
}

/// Parity of the binary digit sum of `n` for `n = 0 … len - 1`.
pub fn thue_morse_word(len: usize) -> Vec<bool> {
    (0..len).map(|n| n.count_ones() % 2 == 1).collect()
}

/// `c_0 … c_{N-1}`.
pub fn gen_thue_morse(a: &PartialQuotient, b: &PartialQuotient, len: usize) -> Result<Vec<PartialQuotient>> {
    if a == b {
        return Err(Error::InvalidInput("the two letters must differ".into()));
    }
    Ok(thue_morse_word(len)
        .into_iter()
        .map(|j| if j { b.clone() } else { a.clone() })
        .collect())
}

pub fn is_palindrome<T: PartialEq>(w: &[T]) -> bool {
    w.iter().eq(w.iter().rev())
}

/// Lengths `n ≥ 1` such that `w[..n]` is a palindrome.
pub fn palindromic_prefix_lengths<T: PartialEq>(w: &[T]) -> Vec<usize> {
    (1..=w.len()).filter(|&n| is_palindrome(&w[..n])).collect()
}
