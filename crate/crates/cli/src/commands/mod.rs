pub mod cf;
pub mod family;
pub mod height;
pub mod sweep;

use std::path::Path;

use num_bigint::BigInt;
use padic_cf::exact_arith::parse_rat;
use padic_cf::{PartialQuotient, Rat};
use rand::Rng;
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::BadFile {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// A partial quotient written as a rational, e.g. `-3/125`.
pub fn parse_quotient(s: &str, p: u64) -> CliResult<PartialQuotient> {
    Ok(PartialQuotient::from_rat(&parse_rat(s)?, p)?)
}

pub fn join_human(qs: &[PartialQuotient], p: u64) -> String {
    qs.iter().map(|b| b.human(p)).collect::<Vec<_>>().join(", ")
}

pub fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Numerator in `[-bound, bound]`, denominator in `[1, bound]`.
pub fn random_rat<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rat {
    let n = rng.random_range(-bound..=bound);
    let d = rng.random_range(1..=bound);
    Rat::new(BigInt::from(n), BigInt::from(d))
}
