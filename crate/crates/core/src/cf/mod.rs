//! Continued fraction engine: the floor-driven iteration, the p-adic
//! Euclidean algorithm, convergent tables and their valuation laws.

mod convergents;
mod euclid;
mod expansion;
mod laws;

pub use convergents::{convergents, ConvergentRow, ConvergentTable};
pub use euclid::{euclid_algorithm, euclid_divide, remainder_shrinks, EuclidStep};
pub use expansion::{expand, expand_rat, expand_traced, fold_quotients, CFExpansion, CfStatus, ExpandOptions, Trace};
pub use laws::{
    abs_from_valuation, archimedean_growth_check, check_valuation_laws, complete_quotient, shared_prefix_gap,
    GapReport, GrowthReport, LawReport, LawViolation,
};
