use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use regex::Regex;

use super::rational::parse_rat;
use super::surd::{Branch, QuadField, QuadSurd};
use super::Number;
use crate::error::{Error, Result};

/// The integers of `(a + b·sqrt(d))/c` as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdParts {
    pub a: BigInt,
    pub b: BigInt,
    pub d: BigInt,
    pub c: BigInt,
}

fn surd_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\(?(?P<a>[+-]?\d+)?(?:(?P<sign>[+-])?(?:(?P<b>\d+)\*)?sqrt\((?P<d>-?\d+)\))\)?(?:/(?P<c>\d+))?$")
            .expect("valid regex")
    })
}

/// Parses `(P + Q*sqrt(D))/R` and its shorthands (`sqrt(2)`, `1-sqrt(5)`,
/// `(3-sqrt(5))/2`, `2*sqrt(3)`).
pub fn parse_surd_parts(s: &str) -> Result<SurdParts> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let caps = surd_re()
        .captures(&t)
        .ok_or_else(|| Error::Parse(format!("expected (P + Q*sqrt(D))/R, got {s:?}")))?;
    let int = |name: &str| -> Result<Option<BigInt>> {
        caps.name(name)
            .map(|m| m.as_str().parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())))
            .transpose()
    };
    let a = int("a")?.unwrap_or_else(BigInt::zero);
    let mut b = int("b")?.unwrap_or_else(BigInt::one);
    if caps.name("sign").is_some_and(|m| m.as_str() == "-") {
        b = -b;
    }
    let c = int("c")?.unwrap_or_else(BigInt::one);
    if c.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(SurdParts {
        a,
        b,
        d: int("d")?.expect("d is mandatory in the pattern"),
        c,
    })
}

/// A rational (`n/d`) or a quadratic surd embedded in `Q_p` on `branch`.
pub fn parse_number(s: &str, p: u64, branch: Branch) -> Result<Number> {
    if !s.contains("sqrt") {
        return Ok(Number::Rat(parse_rat(s)?));
    }
    let parts = parse_surd_parts(s)?;
    let field = QuadField::new(parts.d, p, branch)?;
    Ok(Number::from_surd(QuadSurd::from_ints(&field, parts.a, parts.b, parts.c)?))
}
