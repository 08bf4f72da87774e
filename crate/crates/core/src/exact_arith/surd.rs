use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::modular::{check_prime, exact_sqrt, is_square_mod_p};
use super::rational::{p_pow, split_p, vp_int, Rat};
use super::Valuation;
use crate::error::{Error, Result};
use crate::padic_digits::hensel_sqrt;

/// Which of the two square roots of `D` in `Q_p` is meant by `√D`.
///
/// `Plus` is the Hensel lift whose residue mod p lies in `{1, …, (p-1)/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub fn parse(s: &str) -> Result<Branch> {
        match s.trim() {
            "+" | "plus" => Ok(Branch::Plus),
            "-" | "minus" => Ok(Branch::Minus),
            other => Err(Error::Parse(format!("branch must be + or -, got {other:?}"))),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}

/// `Q(√D)` together with a fixed embedding into `Q_p`.
///
/// `D` is a non-square integer with `p ∤ D` that is a square mod p. It may be
/// negative: imaginary quadratic fields embed into `Q_p` just as well.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: BigInt,
    p: u64,
    branch: Branch,
}

impl QuadField {
    pub fn new(d: BigInt, p: u64, branch: Branch) -> Result<Arc<QuadField>> {
        check_prime(p)?;
        if d.is_zero() || exact_sqrt(&d).is_some() {
            return Err(Error::InvalidInput(format!("{d} is a perfect square")));
        }
        if !is_square_mod_p(&d, p) {
            return Err(Error::NotResidue {
                d: d.to_string(),
                p,
            });
        }
        Ok(Arc::new(QuadField { d, p, branch }))
    }

    /// Writes `disc = s² · D` with `p ∤ D` and small square factors removed,
    /// returning the field of `√D` and the cofactor `s ≥ 1`.
    pub fn from_discriminant(
        disc: &BigInt,
        p: u64,
        branch: Branch,
    ) -> Result<(Arc<QuadField>, BigInt)> {
        if disc.is_zero() {
            return Err(Error::InvalidInput("zero discriminant".into()));
        }
        let (k, mut m) = split_p(disc, p);
        if k % 2 == 1 {
            return Err(Error::NotResidue {
                d: disc.to_string(),
                p,
            });
        }
        let mut s = p_pow(p, k / 2);
        let mut q = BigInt::from(2);
        let limit = BigInt::from(2000);
        while q < limit {
            let q2 = &q * &q;
            if q2 > m.abs() {
                break;
            }
            while (&m % &q2).is_zero() {
                m /= &q2;
                s *= &q;
            }
            q += 1;
        }
        Ok((QuadField::new(m, p, branch)?, s))
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// The same `D` and `p` with the other square root chosen.
    pub fn conjugate_embedding(&self) -> Arc<QuadField> {
        Arc::new(QuadField {
            d: self.d.clone(),
            p: self.p,
            branch: self.branch.flip(),
        })
    }

    /// `√D mod p^n` under this field's branch.
    pub fn sqrt_mod(&self, n: usize) -> BigInt {
        hensel_sqrt(&self.d, self.p, n, self.branch)
            .expect("field construction checked the residue condition")
    }
}

/// An element `(a + b√D)/c` of a quadratic field, kept in canonical form:
/// `c > 0` and `gcd(a, b, c) = 1`.
///
/// `b = 0` is allowed so that field arithmetic is closed; [`crate::Number`]
/// folds such values back to plain rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    field: Arc<QuadField>,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl QuadSurd {
    fn canonical(field: Arc<QuadField>, mut a: BigInt, mut b: BigInt, mut c: BigInt) -> Self {
        debug_assert!(!c.is_zero());
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadSurd { field, a, b, c }
    }

    pub fn from_ints(field: &Arc<QuadField>, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(field.clone(), a, b, c))
    }

    /// `(P + Q√D)/R` with rational parts.
    pub fn new(field: &Arc<QuadField>, p_part: &Rat, q_part: &Rat, r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // clear all three denominators
        let l = p_part.denom().lcm(q_part.denom()).lcm(r.denom());
        let a = p_part.numer() * (&l / p_part.denom());
        let b = q_part.numer() * (&l / q_part.denom());
        let c = r.numer() * (&l / r.denom());
        Ok(Self::canonical(field.clone(), a, b, c))
    }

    pub fn from_rat(field: &Arc<QuadField>, x: &Rat) -> Self {
        Self::canonical(field.clone(), x.numer().clone(), BigInt::zero(), x.denom().clone())
    }

    pub fn sqrt_d(field: &Arc<QuadField>) -> Self {
        Self::canonical(field.clone(), BigInt::zero(), BigInt::one(), BigInt::one())
    }

    pub fn field(&self) -> &Arc<QuadField> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    /// Integer coordinates `(a, b, c)` of the canonical form.
    pub fn coords(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    pub fn rational_part(&self) -> Rat {
        Rat::new(self.a.clone(), self.c.clone())
    }

    pub fn sqrt_coeff(&self) -> Rat {
        Rat::new(self.b.clone(), self.c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rat> {
        self.b.is_zero().then(|| self.rational_part())
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedField)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        Ok(Self::canonical(
            self.field.clone(),
            &self.a * &o.c + &o.a * &self.c,
            &self.b * &o.c + &o.b * &self.c,
            &self.c * &o.c,
        ))
    }

    pub fn neg(&self) -> Self {
        QuadSurd {
            field: self.field.clone(),
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let d = &self.field.d;
        Ok(Self::canonical(
            self.field.clone(),
            &self.a * &o.a + &self.b * &o.b * d,
            &self.a * &o.b + &self.b * &o.a,
            &self.c * &o.c,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // c / (a + b√D) = c(a - b√D) / (a² - b²D)
        let n = &self.a * &self.a - &self.b * &self.b * &self.field.d;
        Ok(Self::canonical(
            self.field.clone(),
            &self.c * &self.a,
            -(&self.c * &self.b),
            n,
        ))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.recip()?)
    }

    pub fn add_rat(&self, x: &Rat) -> Self {
        Self::canonical(
            self.field.clone(),
            &self.a * x.denom() + x.numer() * &self.c,
            &self.b * x.denom(),
            &self.c * x.denom(),
        )
    }

    pub fn sub_rat(&self, x: &Rat) -> Self {
        self.add_rat(&-x)
    }

    pub fn mul_rat(&self, x: &Rat) -> Self {
        if x.is_zero() {
            return Self::from_rat(&self.field, x);
        }
        Self::canonical(
            self.field.clone(),
            &self.a * x.numer(),
            &self.b * x.numer(),
            &self.c * x.denom(),
        )
    }

    /// Galois conjugate `(a - b√D)/c` in the same embedding.
    pub fn conjugate(&self) -> Self {
        QuadSurd {
            field: self.field.clone(),
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        }
    }

    pub fn norm(&self) -> Rat {
        Rat::new(
            &self.a * &self.a - &self.b * &self.b * &self.field.d,
            &self.c * &self.c,
        )
    }

    pub fn trace(&self) -> Rat {
        Rat::new(&self.a * 2, self.c.clone())
    }

    /// `v_p` through the embedding, refining precision by doubling up to
    /// `budget` digits.
    pub fn vp(&self, budget: usize) -> Result<Valuation> {
        let p = self.field.p;
        if self.b.is_zero() {
            return Ok(match vp_int(&self.a, p) {
                Valuation::Infinite => Valuation::Infinite,
                v => v - vp_int(&self.c, p).unwrap_finite(),
            });
        }
        let vc = vp_int(&self.c, p).unwrap_finite();
        let budget = budget.max(1);
        let mut prec = budget.min(8);
        loop {
            let s = self.field.sqrt_mod(prec);
            let m = p_pow(p, prec as u32);
            let n = (&self.a + &self.b * s).mod_floor(&m);
            if !n.is_zero() {
                return Ok(vp_int(&n, p) - vc);
            }
            if prec >= budget {
                return Err(Error::PrecisionExhausted { budget });
            }
            prec = (prec * 2).min(budget);
        }
    }

    /// Real value under `√D > 0`; `None` for imaginary fields or overflow.
    pub fn to_f64(&self) -> Option<f64> {
        if !self.field.d.is_positive() {
            return None;
        }
        let a = self.a.to_f64()?;
        let b = self.b.to_f64()?;
        let c = self.c.to_f64()?;
        let d = self.field.d.to_f64()?;
        Some((a + b * d.sqrt()) / c)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({} {} {}*sqrt({}))/{}",
            self.a,
            sign,
            self.b.abs(),
            self.field.d,
            self.c
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{int, rat};

    fn q2() -> Arc<QuadField> {
        QuadField::new(BigInt::from(2), 7, Branch::Plus).unwrap()
    }

    #[test]
    fn norm_identity() {
        let f = q2();
        let x = QuadSurd::new(&f, &int(1), &int(1), &int(1)).unwrap();
        let y = QuadSurd::new(&f, &int(1), &int(-1), &int(1)).unwrap();
        assert_eq!(x.mul(&y).unwrap().as_rational(), Some(int(-1)));
    }

    #[test]
    fn rationalize() {
        let f = q2();
        let r = QuadSurd::sqrt_d(&f).recip().unwrap();
        assert_eq!(r, QuadSurd::new(&f, &int(0), &rat(1, 2), &int(1)).unwrap());
        assert_eq!(r.coords(), (&BigInt::from(0), &BigInt::from(1), &BigInt::from(2)));
    }

    #[test]
    fn content_removal() {
        let f = q2();
        let x = QuadSurd::new(&f, &int(2), &int(2), &int(2)).unwrap();
        let y = QuadSurd::new(&f, &int(1), &int(1), &int(1)).unwrap();
        assert_eq!(x, y);
        let z = QuadSurd::new(&f, &rat(1, 2), &rat(1, 2), &rat(1, 2)).unwrap();
        assert_eq!(z, y);
    }

    #[test]
    fn field_checks() {
        assert!(QuadField::new(BigInt::from(4), 5, Branch::Plus).is_err());
        // 2 is not a square mod 5
        assert!(matches!(
            QuadField::new(BigInt::from(2), 5, Branch::Plus),
            Err(Error::NotResidue { .. })
        ));
        assert!(QuadField::new(BigInt::from(-1), 5, Branch::Plus).is_ok());
        let other = QuadField::new(BigInt::from(2), 7, Branch::Minus).unwrap();
        let x = QuadSurd::sqrt_d(&q2());
        let y = QuadSurd::sqrt_d(&other);
        assert_eq!(x.add(&y), Err(Error::MixedField));
        assert_eq!(x.sub(&x).unwrap().recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn discriminant_split() {
        // 5^2 * 9 * 2 = 450
        let (f, s) = QuadField::from_discriminant(&BigInt::from(450), 7, Branch::Plus).unwrap();
        assert_eq!(f.d(), &BigInt::from(2));
        assert_eq!(s, BigInt::from(15));
        let (f, s) = QuadField::from_discriminant(&BigInt::from(2 * 49), 7, Branch::Plus).unwrap();
        assert_eq!(f.d(), &BigInt::from(2));
        assert_eq!(s, BigInt::from(7));
    }

    #[test]
    fn surd_valuation() {
        let f = q2();
        // √2 is a unit in Z_7
        assert_eq!(QuadSurd::sqrt_d(&f).vp(64).unwrap(), Valuation::Finite(0));
        // 3 - √2 vs 3 + √2: norm 7, exactly one of them is divisible by 7
        let plus = QuadSurd::new(&f, &int(3), &int(1), &int(1)).unwrap();
        let minus = QuadSurd::new(&f, &int(3), &int(-1), &int(1)).unwrap();
        let mut vs = [plus.vp(64).unwrap(), minus.vp(64).unwrap()];
        vs.sort();
        assert_eq!(vs, [Valuation::Finite(0), Valuation::Finite(1)]);
        let x = QuadSurd::new(&f, &int(3), &int(1), &int(49)).unwrap();
        assert!(x.vp(64).unwrap() <= Valuation::Finite(-1));
    }
}
