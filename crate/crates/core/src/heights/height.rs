use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::modular::exact_sqrt;
use crate::exact_arith::Rat;

/// `max |c_i| / gcd(c_i)` of an integer polynomial.
pub fn naive_height(coeffs: &[BigInt]) -> Result<BigInt> {
    let g = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(coeffs.iter().map(|c| c.abs()).max().expect("nonempty") / g)
}

/// Height of a reduced rational `a/b`: `max(|a|, |b|)`.
pub fn naive_height_rat(x: &Rat) -> BigInt {
    x.numer().abs().max(x.denom().clone())
}

/// Whether `c_0 x² + c_1 x + c_2` is irreducible over `Q` (degree 2 and a
/// non-square discriminant).
pub fn is_irreducible_quadratic(c: &[BigInt; 3]) -> bool {
    if c[0].is_zero() {
        return false;
    }
    let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
    exact_sqrt(&disc).is_none()
}

/// A Mahler measure enclosed in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MahlerBounds {
    #[serde(serialize_with = "ser_rat")]
    pub lo: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub hi: Rat,
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exact_arith::format_rat(x))
}

/// `M(f) = |c_0| ∏ max(1, |root|)` for an irreducible quadratic.
///
/// With roots ordered by modulus, `M` is the largest of `|c_0|`, `|c_2|` and
/// `|c_0 r_1| = (|c_1| + √Δ)/2` (the last only for real roots), so only one
/// integer square root is needed and the enclosure is exact up to it.
pub fn mahler_measure_deg2(c: &[BigInt; 3]) -> Result<MahlerBounds> {
    if !is_irreducible_quadratic(c) {
        return Err(Error::ReduciblePolynomial);
    }
    let base = c[0].abs().max(c[2].abs());
    let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
    let int = |n: BigInt| Rat::from_integer(n);
    if disc.is_negative() {
        return Ok(MahlerBounds {
            lo: int(base.clone()),
            hi: int(base),
        });
    }
    let s = disc.sqrt();
    let two = BigInt::from(2);
    let lead_lo = Rat::new(c[1].abs() + &s, two.clone());
    let lead_hi = Rat::new(c[1].abs() + &s + 1, two);
    let b = int(base);
    Ok(MahlerBounds {
        lo: lead_lo.max(b.clone()),
        hi: lead_hi.max(b),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeilHeight {
    /// `H = M^{1/2}`.
    pub value: f64,
    /// Half-width of the enclosure of `H`.
    pub error_bound: f64,
    pub mahler: MahlerBounds,
}

pub fn weil_height_deg2(c: &[BigInt; 3]) -> Result<WeilHeight> {
    let m = mahler_measure_deg2(c)?;
    let lo = m.lo.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let hi = m.hi.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let value = (lo + hi) / 2.0;
    Ok(WeilHeight {
        value,
        error_bound: (hi - lo) / 2.0 + value * 1e-12,
        mahler: m,
    })
}

/// The two height comparisons, evaluated under two readings of `H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemarkReport {
    pub degree: u32,
    #[serde(serialize_with = "crate::exact_arith::rational::bigint_str::serialize")]
    pub naive_h: BigInt,
    pub weil_h: f64,
    /// `H ≤ √(D+1) h` with `H` the absolute height.
    pub upper_holds: bool,
    /// `h ≤ 2^D H` with `H` the absolute height.
    pub lower_holds: bool,
    /// The same two inequalities with `H^D` (the relative height) in place of `H`.
    pub upper_holds_relative: bool,
    pub lower_holds_relative: bool,
}

impl RemarkReport {
    pub fn ok(&self) -> bool {
        self.upper_holds && self.lower_holds
    }
}

/// Degree-1 case: both heights are `max(|a|, |b|)`.
pub fn check_remark_rat(x: &Rat) -> RemarkReport {
    let h = naive_height_rat(x);
    RemarkReport {
        degree: 1,
        weil_h: h.to_f64().unwrap_or(f64::INFINITY),
        naive_h: h,
        upper_holds: true,
        lower_holds: true,
        upper_holds_relative: true,
        lower_holds_relative: true,
    }
}

/// Checks `H ≤ √3 h` and `h ≤ 4 H` for an irreducible quadratic, exactly
/// (squared, against the enclosure of `M = H²`). Reducible inputs are
/// handled through their rational root.
pub fn check_remark_h(c: &[BigInt; 3]) -> Result<RemarkReport> {
    if !is_irreducible_quadratic(c) {
        let root = rational_root(c)?;
        return Ok(check_remark_rat(&root));
    }
    let h = naive_height(c)?;
    let w = weil_height_deg2(c)?;
    let hr = Rat::from_integer(h.clone());
    let h2 = &hr * &hr;
    let int = |n: i64| Rat::from_integer(BigInt::from(n));
    let (lo, hi) = (&w.mahler.lo, &w.mahler.hi);
    Ok(RemarkReport {
        degree: 2,
        naive_h: h,
        weil_h: w.value,
        // H² = M ≤ 3h²
        upper_holds: *hi <= int(3) * &h2,
        // h² ≤ 16 M
        lower_holds: h2 <= int(16) * lo,
        // M ≤ √3 h  ⇔  M² ≤ 3h²
        upper_holds_relative: hi * hi <= int(3) * &h2,
        // h ≤ 4 M
        lower_holds_relative: hr <= int(4) * lo,
    })
}

fn rational_root(c: &[BigInt; 3]) -> Result<Rat> {
    if c[0].is_zero() {
        if c[1].is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        return Ok(Rat::new(-&c[2], c[1].clone()));
    }
    let disc = &c[1] * &c[1] - BigInt::from(4) * &c[0] * &c[2];
    let s = exact_sqrt(&disc).ok_or(Error::ReduciblePolynomial)?;
    Ok(Rat::new(-&c[1] + s, BigInt::from(2) * &c[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::rat;

    fn poly(a: i64, b: i64, c: i64) -> [BigInt; 3] {
        [BigInt::from(a), BigInt::from(b), BigInt::from(c)]
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive_height(&poly(9129469, 5530075, -9713125)).unwrap(), BigInt::from(9713125));
        assert_eq!(naive_height(&poly(1, 0, -2)).unwrap(), BigInt::from(2));
        assert_eq!(naive_height(&poly(2, 4, -6)).unwrap(), BigInt::from(3));
        assert_eq!(naive_height_rat(&rat(3, 7)), BigInt::from(7));
        assert_eq!(naive_height(&poly(0, 0, 0)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn weil_closed_forms() {
        let w = weil_height_deg2(&poly(1, 0, -2)).unwrap();
        assert!((w.value - 2f64.sqrt()).abs() < 1e-9);
        let w = weil_height_deg2(&poly(1, 0, 1)).unwrap();
        assert_eq!(w.value, 1.0);
        assert_eq!(weil_height_deg2(&poly(1, 0, -4)), Err(Error::ReduciblePolynomial));
    }

    #[test]
    fn weil_matches_float_roots() {
        // oracle: quadratic formula in floating point
        for c in [poly(5, 1, -5), poly(3, -7, 1), poly(2, 3, 9), poly(9129469, 5530075, -9713125)] {
            let (a, b, cc) = (c[0].to_f64().unwrap(), c[1].to_f64().unwrap(), c[2].to_f64().unwrap());
            let d = b * b - 4.0 * a * cc;
            let m = if d >= 0.0 {
                let r1 = (-b + d.sqrt()) / (2.0 * a);
                let r2 = (-b - d.sqrt()) / (2.0 * a);
                a.abs() * r1.abs().max(1.0) * r2.abs().max(1.0)
            } else {
                let r = (cc / a).abs().sqrt();
                a.abs() * r.max(1.0) * r.max(1.0)
            };
            let w = weil_height_deg2(&c).unwrap();
            assert!((w.value - m.sqrt()).abs() <= 1e-9 * m.sqrt() + w.error_bound, "{c:?}");
        }
    }

    #[test]
    fn remark_examples() {
        let r = check_remark_h(&poly(1, 0, -2)).unwrap();
        assert!(r.ok() && r.upper_holds_relative && r.lower_holds_relative);
        let r = check_remark_rat(&rat(3, 7));
        assert!(r.ok());
        assert_eq!(r.naive_h, BigInt::from(7));
        // 5x² - x - 5 (the pure period overline(1/5), up to sign of x)
        let r = check_remark_h(&poly(5, 1, -5)).unwrap();
        assert!(r.ok());
    }

    #[test]
    fn remark_on_large_example() {
        // h = 9713125 while H = M^{1/2} ≈ 3547: the lower inequality needs H^2
        let r = check_remark_h(&poly(9129469, 5530075, -9713125)).unwrap();
        assert!(r.upper_holds);
        assert!(!r.lower_holds);
        assert!(r.upper_holds_relative && r.lower_holds_relative);
    }
}
