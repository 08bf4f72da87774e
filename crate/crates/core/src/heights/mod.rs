//! Quadratic relations of periodic expansions, naive and Weil heights, and
//! audits of the height bounds.

mod audit;
mod height;
mod periodic;

pub use audit::{
    check_h1_bound, check_h2_bound, fibonacci_term_count, format_poly, h2_polynomial, reference_example,
    relation_roots, AbsEntry, FibonacciCount, H1Details, H2Details, HeightCheck, HeightReport, ANNIHILATION_DIGITS,
    ANNIHILATION_TARGET, FIBONACCI_TERM_LIMIT,
};
pub use height::{
    check_remark_h, check_remark_rat, is_irreducible_quadratic, mahler_measure_deg2, naive_height,
    naive_height_rat, weil_height_deg2, MahlerBounds, RemarkReport, WeilHeight,
};
pub use periodic::{
    annihilation_valuation, candidate_roots, evaluate, is_well_cleared, periodic_to_relation, primitive_part,
    random_periodic_cf, relation_root, PeriodicCF, QuadraticRelation,
};
pub(crate) use periodic::QuotientRepr;
pub(crate) use audit::ser_poly;
