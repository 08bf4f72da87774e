use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::rational::{format_rat, vp_rat, Rat};
use super::surd::{QuadField, QuadSurd};
use super::Valuation;
use crate::error::{Error, Result};

/// An exact p-adic number the engine can iterate on: a rational, or an
/// irrational element of an embedded quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Number {
    Rat(Rat),
    Surd(QuadSurd),
}

impl Number {
    pub fn from_surd(x: QuadSurd) -> Number {
        match x.as_rational() {
            Some(r) => Number::Rat(r),
            None => Number::Surd(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Number::Rat(r) => r.is_zero(),
            Number::Surd(s) => s.is_zero(),
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Number::Rat(r) => Some(r),
            Number::Surd(_) => None,
        }
    }

    pub fn field(&self) -> Option<&Arc<QuadField>> {
        match self {
            Number::Rat(_) => None,
            Number::Surd(s) => Some(s.field()),
        }
    }

    /// `v_p(self)`. For surds the field's own prime must equal `p`.
    pub fn vp(&self, p: u64, budget: usize) -> Result<Valuation> {
        match self {
            Number::Rat(r) => Ok(vp_rat(r, p)),
            Number::Surd(s) => {
                if s.p() != p {
                    return Err(Error::MixedField);
                }
                s.vp(budget)
            }
        }
    }

    fn lift(&self, field: &Arc<QuadField>) -> QuadSurd {
        match self {
            Number::Rat(r) => QuadSurd::from_rat(field, r),
            Number::Surd(s) => s.clone(),
        }
    }

    fn binary(
        &self,
        o: &Number,
        on_rat: impl FnOnce(&Rat, &Rat) -> Result<Rat>,
        on_surd: impl FnOnce(&QuadSurd, &QuadSurd) -> Result<QuadSurd>,
    ) -> Result<Number> {
        match (self, o) {
            (Number::Rat(x), Number::Rat(y)) => on_rat(x, y).map(Number::Rat),
            (Number::Surd(s), _) => on_surd(s, &o.lift(s.field())).map(Number::from_surd),
            (_, Number::Surd(s)) => on_surd(&self.lift(s.field()), s).map(Number::from_surd),
        }
    }

    pub fn add(&self, o: &Number) -> Result<Number> {
        self.binary(o, |x, y| Ok(x + y), |x, y| x.add(y))
    }

    pub fn sub(&self, o: &Number) -> Result<Number> {
        self.binary(o, |x, y| Ok(x - y), |x, y| x.sub(y))
    }

    pub fn mul(&self, o: &Number) -> Result<Number> {
        self.binary(o, |x, y| Ok(x * y), |x, y| x.mul(y))
    }

    pub fn div(&self, o: &Number) -> Result<Number> {
        self.binary(
            o,
            |x, y| {
                if y.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(x / y)
                }
            },
            |x, y| x.div(y),
        )
    }

    pub fn recip(&self) -> Result<Number> {
        match self {
            Number::Rat(r) if r.is_zero() => Err(Error::DivisionByZero),
            Number::Rat(r) => Ok(Number::Rat(r.recip())),
            Number::Surd(s) => s.recip().map(Number::from_surd),
        }
    }

    pub fn neg(&self) -> Number {
        match self {
            Number::Rat(r) => Number::Rat(-r),
            Number::Surd(s) => Number::Surd(s.neg()),
        }
    }

    pub fn add_rat(&self, x: &Rat) -> Number {
        match self {
            Number::Rat(r) => Number::Rat(r + x),
            Number::Surd(s) => Number::Surd(s.add_rat(x)),
        }
    }

    pub fn sub_rat(&self, x: &Rat) -> Number {
        self.add_rat(&-x)
    }

    pub fn mul_rat(&self, x: &Rat) -> Number {
        match self {
            Number::Rat(r) => Number::Rat(r * x),
            Number::Surd(s) => Number::from_surd(s.mul_rat(x)),
        }
    }

    pub fn square(&self) -> Number {
        self.mul(self).expect("same field")
    }

    pub fn to_f64(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        match self {
            Number::Rat(r) => r.to_f64(),
            Number::Surd(s) => s.to_f64(),
        }
    }
}

impl serde::Serialize for Number {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<Rat> for Number {
    fn from(r: Rat) -> Self {
        Number::Rat(r)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rat(r) => f.write_str(&format_rat(r)),
            Number::Surd(s) => write!(f, "{s} [branch {}]", s.field().branch()),
        }
    }
}
