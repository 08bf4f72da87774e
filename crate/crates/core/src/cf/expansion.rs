use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::modular::check_prime;
use crate::exact_arith::{Number, PartialQuotient, Rat, DEFAULT_PRECISION};
use crate::floor::{floor_with_budget, FloorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CfStatus {
    Finite,
    TruncatedAtMaxSteps,
    PeriodDetected { preperiod_len: usize, period_len: usize },
}

impl fmt::Display for CfStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CfStatus::Finite => f.write_str("Finite"),
            CfStatus::TruncatedAtMaxSteps => f.write_str("TruncatedAtMaxSteps"),
            CfStatus::PeriodDetected {
                preperiod_len,
                period_len,
            } => write!(f, "PeriodDetected(preperiod {preperiod_len}, period {period_len})"),
        }
    }
}

/// A (possibly truncated or periodic) continued fraction `[b0, b1, …]`.
///
/// For `PeriodDetected { preperiod_len: s, period_len: t }` the stored
/// quotients are `b0 … b_{s+t-1}` and `b_{i+t} = b_i` for every `i ≥ s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFExpansion {
    pub p: u64,
    pub b0: PartialQuotient,
    pub tail: Vec<PartialQuotient>,
    pub status: CfStatus,
}

impl CFExpansion {
    /// Builds an expansion from explicit quotients, checking that every
    /// quotient after the first has negative valuation.
    pub fn from_quotients(p: u64, quotients: Vec<PartialQuotient>, status: CfStatus) -> Result<Self> {
        check_prime(p)?;
        let mut it = quotients.into_iter();
        let b0 = it.next().unwrap_or_else(PartialQuotient::zero);
        let tail: Vec<_> = it.collect();
        if let Some(i) = tail.iter().position(|b| b.exponent() == 0) {
            return Err(Error::InvalidInput(format!(
                "partial quotient b{} must have negative valuation",
                i + 1
            )));
        }
        if let CfStatus::PeriodDetected {
            preperiod_len,
            period_len,
        } = status
        {
            if period_len == 0 || preperiod_len + period_len != tail.len() + 1 {
                return Err(Error::InvalidInput("period does not match stored quotients".into()));
            }
        }
        Ok(CFExpansion { p, b0, tail, status })
    }

    /// Number of stored quotients, `b0` included.
    pub fn len(&self) -> usize {
        self.tail.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn quotients(&self) -> impl Iterator<Item = &PartialQuotient> {
        std::iter::once(&self.b0).chain(self.tail.iter())
    }

    /// `b_i`, following the period past the stored quotients.
    pub fn quotient(&self, i: usize) -> Option<&PartialQuotient> {
        if i == 0 {
            return Some(&self.b0);
        }
        if i < self.len() {
            return self.tail.get(i - 1);
        }
        match self.status {
            CfStatus::PeriodDetected {
                preperiod_len,
                period_len,
            } => {
                let j = preperiod_len + (i - preperiod_len) % period_len;
                self.quotient(j)
            }
            _ => None,
        }
    }

    /// The first `n` quotients (fewer if the expansion is finite or
    /// truncated earlier).
    pub fn unrolled(&self, n: usize) -> Vec<PartialQuotient> {
        (0..n).map_while(|i| self.quotient(i).cloned()).collect()
    }

    /// Exact value of `[b0, …, b_{n-1}]` by nested evaluation from the end.
    pub fn fold(&self, n: usize) -> Option<Rat> {
        fold_quotients(&self.unrolled(n), self.p)
    }

    /// Human notation, e.g. `[2, -3/5]`.
    pub fn human(&self) -> String {
        let parts: Vec<String> = self.quotients().map(|b| b.human(self.p)).collect();
        match self.status {
            CfStatus::PeriodDetected { preperiod_len, .. } => format!(
                "[{}; overline({})]",
                parts[..preperiod_len].join(", "),
                parts[preperiod_len..].join(", ")
            ),
            _ => format!("[{}]", parts.join(", ")),
        }
    }
}

/// Nested evaluation `b0 + 1/(b1 + 1/(… + 1/b_{n-1}))`; `None` on a zero
/// denominator.
pub fn fold_quotients(qs: &[PartialQuotient], p: u64) -> Option<Rat> {
    let mut it = qs.iter().rev();
    let mut acc = it.next()?.value(p);
    for b in it {
        if num_traits::Zero::is_zero(&acc) {
            return None;
        }
        acc = b.value(p) + num_traits::Inv::inv(acc);
    }
    Some(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandOptions {
    pub max_steps: usize,
    pub detect_period: bool,
    pub kind: FloorKind,
    /// Digit budget for surd valuations.
    pub precision: usize,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            max_steps: 10_000,
            detect_period: true,
            kind: FloorKind::Browkin,
            precision: DEFAULT_PRECISION,
        }
    }
}

impl ExpandOptions {
    pub fn with_kind(kind: FloorKind) -> Self {
        ExpandOptions {
            kind,
            ..Self::default()
        }
    }
}

/// An expansion together with the exact complete quotients `α_0, α_1, …`
/// that produced it (one per stored partial quotient).
#[derive(Clone, Debug)]
pub struct Trace {
    pub expansion: CFExpansion,
    pub complete: Vec<Number>,
}

pub fn expand_traced(alpha: &Number, p: u64, opts: &ExpandOptions) -> Result<Trace> {
    check_prime(p)?;
    if opts.max_steps == 0 {
        return Err(Error::InvalidInput("max_steps must be at least 1".into()));
    }
    if let Some(f) = alpha.field() {
        if f.p() != p {
            return Err(Error::MixedField);
        }
    }
    let mut seen: HashMap<Number, usize> = HashMap::new();
    let mut quotients = Vec::new();
    let mut complete = Vec::new();
    let mut current = alpha.clone();
    let mut status = CfStatus::TruncatedAtMaxSteps;
    for i in 0..opts.max_steps {
        if opts.detect_period {
            if let Some(&j) = seen.get(&current) {
                status = CfStatus::PeriodDetected {
                    preperiod_len: j,
                    period_len: i - j,
                };
                break;
            }
            seen.insert(current.clone(), i);
        }
        let b = floor_with_budget(&current, p, opts.kind, opts.precision)?;
        let rest = current.sub_rat(&b.value(p));
        quotients.push(b);
        complete.push(current);
        if rest.is_zero() {
            status = CfStatus::Finite;
            break;
        }
        current = rest.recip()?;
    }
    let expansion = CFExpansion::from_quotients_unchecked(p, quotients, status);
    Ok(Trace { expansion, complete })
}

/// Continued fraction expansion of `alpha` under the chosen floor.
pub fn expand(alpha: &Number, p: u64, opts: &ExpandOptions) -> Result<CFExpansion> {
    expand_traced(alpha, p, opts).map(|t| t.expansion)
}

/// Browkin expansion of a rational with default options.
pub fn expand_rat(x: &Rat, p: u64) -> Result<CFExpansion> {
    expand(&Number::Rat(x.clone()), p, &ExpandOptions::default())
}

impl CFExpansion {
    fn from_quotients_unchecked(p: u64, quotients: Vec<PartialQuotient>, status: CfStatus) -> Self {
        let mut it = quotients.into_iter();
        let b0 = it.next().unwrap_or_else(PartialQuotient::zero);
        CFExpansion {
            p,
            b0,
            tail: it.collect(),
            status,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{int, rat};

    #[test]
    fn one_third() {
        let cf = expand_rat(&rat(1, 3), 5).unwrap();
        assert_eq!(cf.status, CfStatus::Finite);
        assert_eq!(cf.human(), "[2, -3/5]");
        // 2 + 1/(-3/5) = 1/3
        assert_eq!(cf.fold(cf.len()).unwrap(), rat(1, 3));
    }

    #[test]
    fn zero_input() {
        let cf = expand_rat(&int(0), 7).unwrap();
        assert_eq!(cf.status, CfStatus::Finite);
        assert!(cf.b0.is_zero() && cf.tail.is_empty());
    }

    #[test]
    fn ruban_minus_p_cycles() {
        for p in [3u64, 5, 7] {
            let x = Number::Rat(int(-(p as i64)));
            let cf = expand(&x, p, &ExpandOptions::with_kind(FloorKind::Ruban)).unwrap();
            assert_eq!(
                cf.status,
                CfStatus::PeriodDetected {
                    preperiod_len: 1,
                    period_len: 1
                }
            );
            assert_eq!(expand(&x, p, &ExpandOptions::default()).unwrap().status, CfStatus::Finite);
        }
    }

    #[test]
    fn truncation() {
        let x = Number::Rat(int(-5));
        let opts = ExpandOptions {
            max_steps: 4,
            detect_period: false,
            ..ExpandOptions::with_kind(FloorKind::Ruban)
        };
        let cf = expand(&x, 5, &opts).unwrap();
        assert_eq!(cf.status, CfStatus::TruncatedAtMaxSteps);
        assert_eq!(cf.len(), 4);
    }

    #[test]
    fn json_shape() {
        let cf = expand_rat(&rat(1, 3), 5).unwrap();
        let v = serde_json::to_value(&cf).unwrap();
        assert_eq!(v["b0"]["u"], "2");
        assert_eq!(v["tail"][0]["a"], 1);
        assert_eq!(v["status"], "finite");
        let back: CFExpansion = serde_json::from_value(v).unwrap();
        assert_eq!(back, cf);
    }

    #[test]
    fn periodic_unroll() {
        let q = |u, a| PartialQuotient::from_small(u, a, 5).unwrap();
        let cf = CFExpansion::from_quotients(
            5,
            vec![PartialQuotient::zero(), q(4, 2), q(1, 1)],
            CfStatus::PeriodDetected {
                preperiod_len: 2,
                period_len: 1,
            },
        )
        .unwrap();
        assert_eq!(cf.unrolled(5).len(), 5);
        assert_eq!(cf.quotient(7), Some(&q(1, 1)));
        assert_eq!(cf.human(), "[0, 4/5^2; overline(1/5)]");
    }
}
