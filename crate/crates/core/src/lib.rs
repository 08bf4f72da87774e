pub mod error;
pub mod exact_arith;
pub mod padic_digits;

pub use error::{Error, ErrorCode, Result};
pub use exact_arith::{
    vp, Branch, Number, PartialQuotient, QuadField, QuadSurd, Rat, Valuation, DEFAULT_PRECISION,
};
pub use padic_digits::{digits_of_rat, digits_of_surd, hensel_sqrt, PAdicApprox};
pub mod floor;
pub use floor::{check_floor_contract, FloorContract, FloorKind};
pub mod cf;
pub mod families;
pub mod heights;
