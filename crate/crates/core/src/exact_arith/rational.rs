use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Valuation;
use crate::error::{Error, Result};

/// Reduced rational with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn p_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Splits `n != 0` as `p^k * m` with `p ∤ m`.
pub fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (k, m);
        }
        m = q;
        k += 1;
    }
}

pub fn vp_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(split_p(n, p).0 as i64)
    }
}

pub fn vp_rat(x: &Rat, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let (vn, _) = split_p(x.numer(), p);
    let (vd, _) = split_p(x.denom(), p);
    Valuation::Finite(vn as i64 - vd as i64)
}

/// `|x|_p = p^{-v_p(x)}` as an exact rational (zero for zero).
pub fn abs_p(x: &Rat, p: u64) -> Rat {
    match vp_rat(x, p) {
        Valuation::Infinite => Rat::zero(),
        Valuation::Finite(v) => p_power_rat(p, -v),
    }
}

/// `p^e` for any integer `e`.
pub fn p_power_rat(p: u64, e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(p_pow(p, e as u32))
    } else {
        Rat::new(BigInt::one(), p_pow(p, (-e) as u32))
    }
}

/// True when the denominator of `x` is a power of `p`, i.e. `x ∈ Z[1/p]`.
pub fn is_s_integer(x: &Rat, p: u64) -> bool {
    split_p(x.denom(), p).1.is_one()
}

/// Parses `"num/den"`, `"num"` or `"u/p^a"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational: {s:?}"));
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| err());
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = match d.split_once('^') {
                Some((base, exp)) => {
                    let base = parse_int(base)?;
                    let exp: usize = exp.trim().parse().map_err(|_| err())?;
                    num_traits::pow(base, exp)
                }
                None => parse_int(d)?,
            };
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Prints `"num/den"`, or just `"num"` for integers.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs_rat(x: &Rat) -> Rat {
    x.abs()
}

/// Serde adapter writing a `BigInt` as a decimal string.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.trim().parse().map_err(serde::de::Error::custom),
            Repr::Int(v) => Ok(BigInt::from(v)),
        }
    }
}

/// Serde adapter writing a `Rat` as `"num/den"`.
pub mod rat_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(vp_rat(&rat(1, 3), 5), Valuation::Finite(0));
        assert_eq!(vp_rat(&rat(-3, 5), 5), Valuation::Finite(-1));
        // 50 = 2 * 5^2
        assert_eq!(vp_rat(&rat(50, 7), 5), Valuation::Finite(2));
        assert_eq!(vp_rat(&int(0), 5), Valuation::Infinite);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("4/5^2").unwrap(), rat(4, 25));
        assert_eq!(parse_rat(" -3/125 ").unwrap(), rat(-3, 125));
        assert_eq!(parse_rat("7").unwrap(), int(7));
        assert_eq!(parse_rat("10/4").unwrap(), rat(5, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rat(&int(-6)), "-6");
    }

    #[test]
    fn s_integers() {
        assert!(is_s_integer(&rat(7, 125), 5));
        assert!(!is_s_integer(&rat(7, 15), 5));
        assert_eq!(abs_p(&rat(3, 25), 5), int(25));
    }
}
