//! Exact arithmetic over `Q`, `Z[1/p]` and quadratic fields embedded in `Q_p`.

pub mod modular;
mod number;
mod parse;
pub mod rational;
mod quotient;
mod surd;
mod valuation;

pub use number::Number;
pub use parse::{parse_number, parse_surd_parts, SurdParts};
pub use quotient::PartialQuotient;
pub use rational::{format_rat, parse_rat, vp_rat, Rat};
pub use surd::{Branch, QuadField, QuadSurd};
pub use valuation::Valuation;

/// Default p-adic digit budget for surd computations.
pub const DEFAULT_PRECISION: usize = 256;

/// `v_p(x)` at the default precision budget.
pub fn vp(x: &Number, p: u64) -> crate::Result<Valuation> {
    x.vp(p, DEFAULT_PRECISION)
}
