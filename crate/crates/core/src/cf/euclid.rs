use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::{Number, PartialQuotient, Rat, Valuation, DEFAULT_PRECISION};
use crate::floor::{floor, FloorKind};

/// One division `x = q·y + r` with `|r|_p < |y|_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidStep {
    pub x: Number,
    pub y: Number,
    pub q: PartialQuotient,
    pub r: Number,
}

/// Division with remainder in `Q_p`, with the quotient taken as the Browkin
/// floor of `x/y`.
pub fn euclid_divide(x: &Number, y: &Number, p: u64) -> Result<EuclidStep> {
    if y.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let q = floor(&x.div(y)?, p, FloorKind::Browkin)?;
    let r = x.sub(&y.mul_rat(&q.value(p)))?;
    Ok(EuclidStep {
        x: x.clone(),
        y: y.clone(),
        q,
        r,
    })
}

/// Iterated division from `(x0, x1)` until the remainder vanishes.
pub fn euclid_algorithm(x0: &Rat, x1: &Rat, p: u64) -> Result<Vec<EuclidStep>> {
    use crate::exact_arith::vp_rat;
    if num_traits::Zero::is_zero(x1) {
        return Err(Error::DivisionByZero);
    }
    if vp_rat(x0, p) > vp_rat(x1, p) {
        return Err(Error::InvalidInput("need |x0|_p >= |x1|_p".into()));
    }
    let mut steps = Vec::new();
    let mut x = Number::Rat(x0.clone());
    let mut y = Number::Rat(x1.clone());
    loop {
        let step = euclid_divide(&x, &y, p)?;
        debug_assert!(step.r.vp(p, DEFAULT_PRECISION)? > y.vp(p, DEFAULT_PRECISION)?);
        let done = step.r.is_zero();
        x = y;
        y = step.r.clone();
        steps.push(step);
        if done {
            return Ok(steps);
        }
    }
}

/// Whether `|r|_p < |y|_p` holds for a step.
pub fn remainder_shrinks(step: &EuclidStep, p: u64) -> Result<bool> {
    let vr = step.r.vp(p, DEFAULT_PRECISION)?;
    let vy = step.y.vp(p, DEFAULT_PRECISION)?;
    Ok(vr > vy || vr == Valuation::Infinite)
}
