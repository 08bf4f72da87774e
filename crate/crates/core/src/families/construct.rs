//! The two run-based constructions: runs of `p^{-1}` and repeated blocks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hypothesis::hypothesis1_at;
use crate::error::{Error, Result};
use crate::exact_arith::modular::check_prime;
use crate::exact_arith::rational::{format_rat, rat_str};
use crate::exact_arith::{PartialQuotient, Rat};
use crate::heights::QuotientRepr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// Runs `b_{n_i} = … = b_{n_i + λ_i k_i - 1} = p^{-1}`.
    Qper,
    /// Runs `b_{h + k_i} = b_h` for `n_i ≤ h ≤ n_i + (λ_i - 1) k_i - 1`.
    Ooto,
}

impl Construction {
    /// Factor in front of `log D / log p` in the threshold for `C`.
    fn c_factor(self) -> i64 {
        match self {
            Construction::Qper => 2,
            Construction::Ooto => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    /// 1-based start index.
    pub n: usize,
    pub k: usize,
    pub lambda: usize,
    /// The repeated block of a block-repetition run; drawn from the pool when
    /// absent. Unused for runs of `p^{-1}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<Vec<PartialQuotient>>,
}

impl Run {
    /// Last index covered by the run.
    pub fn end(&self) -> usize {
        self.n + self.lambda * self.k - 1
    }
}

/// Parameters shared by both constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct FamilySpec {
    pub p: u64,
    /// `D_cap = p^{d_cap}` bounds every `|b_i|_p`.
    pub d_cap: u32,
    /// Finite stand-in for "the `k_i` are bounded".
    pub k_bound: usize,
    #[serde(with = "rat_str")]
    pub c: Rat,
    pub runs: Vec<Run>,
    pub pool: Vec<PartialQuotient>,
    /// Latest index from which `λ_i > C n_i` must hold.
    pub i0_cap: usize,
}

pub type QPerSpec = FamilySpec;
pub type OotoSpec = FamilySpec;

#[derive(Deserialize)]
struct RawRun {
    n: usize,
    #[serde(default)]
    k: Option<usize>,
    lambda: usize,
    #[serde(default)]
    block: Option<Vec<QuotientRepr>>,
}

#[derive(Deserialize)]
struct RawSpec {
    p: u64,
    d_cap: u32,
    k_bound: usize,
    #[serde(with = "rat_str")]
    c: Rat,
    runs: Vec<RawRun>,
    pool: Vec<QuotientRepr>,
    #[serde(default = "default_i0_cap")]
    i0_cap: usize,
}

fn default_i0_cap() -> usize {
    3
}

impl TryFrom<RawSpec> for FamilySpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let p = raw.p;
        let conv = |v: Vec<QuotientRepr>| -> Result<Vec<PartialQuotient>> {
            v.into_iter().map(|q| q.into_quotient(p)).collect()
        };
        let mut runs = Vec::with_capacity(raw.runs.len());
        for r in raw.runs {
            let block = r.block.map(conv).transpose()?;
            let k = match (&block, r.k) {
                (Some(b), Some(k)) if b.len() != k => {
                    return Err(Error::InvalidInput(format!("run at {}: block length {} ≠ k = {k}", r.n, b.len())))
                }
                (Some(b), _) => b.len(),
                (None, Some(k)) => k,
                (None, None) => return Err(Error::InvalidInput(format!("run at {} needs k or a block", r.n))),
            };
            runs.push(Run {
                n: r.n,
                k,
                lambda: r.lambda,
                block,
            });
        }
        Ok(FamilySpec {
            p,
            d_cap: raw.d_cap,
            k_bound: raw.k_bound,
            c: raw.c,
            runs,
            pool: conv(raw.pool)?,
            i0_cap: raw.i0_cap,
        })
    }
}

impl FamilySpec {
    /// A spec whose run lengths grow as `λ_i = ⌈C n_i⌉ + 1`, with each run
    /// starting right after the previous one.
    pub fn growing(p: u64, d_cap: u32, c: Rat, n0: usize, k: usize, count: usize, pool: Vec<PartialQuotient>) -> Self {
        let mut runs = Vec::with_capacity(count);
        let mut n = n0;
        for _ in 0..count {
            let lambda = (&c * Rat::from_integer(n.into())).ceil().to_integer();
            let lambda: usize = lambda.try_into().unwrap_or(0) + 1;
            runs.push(Run {
                n,
                k,
                lambda,
                block: None,
            });
            n += lambda * k;
        }
        FamilySpec {
            p,
            d_cap,
            k_bound: k,
            c,
            runs,
            pool,
            i0_cap: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateEntry {
    pub hypothesis: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub construction: Construction,
    pub length: usize,
    pub entries: Vec<CertificateEntry>,
}

impl Certificate {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn entry(&self, name: &str) -> Option<&CertificateEntry> {
        self.entries.iter().find(|e| e.hypothesis == name)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| !e.holds).map(|e| e.hypothesis.as_str()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyOutput {
    pub p: u64,
    /// `b_1 … b_N`.
    pub quotients: Vec<PartialQuotient>,
    pub certificate: Certificate,
}

pub fn gen_qper(spec: &QPerSpec, length: usize, seed: u64) -> Result<FamilyOutput> {
    generate(Construction::Qper, spec, length, seed)
}

pub fn gen_ooto(spec: &OotoSpec, length: usize, seed: u64) -> Result<FamilyOutput> {
    generate(Construction::Ooto, spec, length, seed)
}

/// Indices `L` whose prefixes `(b_1 … b_L)` must satisfy Hypothesis 1:
/// `n_{i-1}` for `i ≥ 1` for runs of `p^{-1}`, `n_i` for every `i` for
/// block repetition.
pub fn checkpoints(construction: Construction, spec: &FamilySpec, length: usize) -> Vec<usize> {
    let ns = spec.runs.iter().map(|r| r.n);
    let mut out: Vec<usize> = match construction {
        Construction::Qper => ns.take(spec.runs.len().saturating_sub(1)).collect(),
        Construction::Ooto => ns.collect(),
    };
    out.retain(|&l| l >= 1 && l <= length);
    out.sort_unstable();
    out.dedup();
    out
}

/// Fills positions with the runs first, then pool values in a seeded order,
/// keeping every checkpoint prefix inside Hypothesis 1.
fn generate(construction: Construction, spec: &FamilySpec, length: usize, seed: u64) -> Result<FamilyOutput> {
    check_prime(spec.p)?;
    let p = spec.p;
    if length == 0 {
        return Err(Error::InvalidInput("length must be positive".into()));
    }
    for b in &spec.pool {
        if b.exponent() == 0 || b.exponent() > spec.d_cap || !b.is_browkin_image(p) {
            return Err(Error::InfeasibleSpec(format!(
                "pool value {} must be a Browkin floor value with 1 ≤ a ≤ {}",
                b.human(p),
                spec.d_cap
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cps = checkpoints(construction, spec, length);
    let mut filler = Filler {
        p,
        cps: &cps,
        slots: vec![None; length + 1],
    };

    for run in &spec.runs {
        if run.n == 0 || run.k == 0 || run.lambda == 0 {
            return Err(Error::InfeasibleSpec(format!("run at {} has a zero parameter", run.n)));
        }
        match construction {
            Construction::Qper => {
                for h in run.n..=run.end().min(length) {
                    filler.place(h, PartialQuotient::inv_p_pow(1))?;
                }
            }
            Construction::Ooto => {
                for j in 0..run.k {
                    let positions: Vec<usize> = (0..run.lambda)
                        .map(|r| run.n + r * run.k + j)
                        .filter(|&h| h <= length)
                        .collect();
                    match &run.block {
                        Some(block) => {
                            for &h in &positions {
                                filler.place(h, block[j].clone())?;
                            }
                        }
                        None if positions.is_empty() => {}
                        None => {
                            let fixed = filler.slots[positions[0]].clone();
                            match fixed {
                                Some(v) => {
                                    for &h in &positions {
                                        filler.place(h, v.clone())?;
                                    }
                                }
                                None => filler.choose(&positions, &spec.pool, &mut rng)?,
                            }
                        }
                    }
                }
            }
        }
    }
    if let Some(l) = filler.first_broken_checkpoint() {
        return Err(Error::InfeasibleSpec(format!(
            "run contents violate Hypothesis 1 on the prefix of length {l}"
        )));
    }
    for h in 1..=length {
        if filler.slots[h].is_none() {
            filler.choose(&[h], &spec.pool, &mut rng)?;
        }
    }
    let quotients: Vec<PartialQuotient> = filler.slots.into_iter().skip(1).map(|b| b.expect("filled")).collect();
    let certificate = certify(construction, spec, &quotients);
    Ok(FamilyOutput {
        p,
        quotients,
        certificate,
    })
}

struct Filler<'a> {
    p: u64,
    cps: &'a [usize],
    /// 1-based; slot 0 unused.
    slots: Vec<Option<PartialQuotient>>,
}

impl Filler<'_> {
    fn place(&mut self, h: usize, v: PartialQuotient) -> Result<()> {
        match &self.slots[h] {
            Some(old) if *old != v => Err(Error::InfeasibleSpec(format!(
                "runs disagree at index {h}: {} vs {}",
                old.human(self.p),
                v.human(self.p)
            ))),
            _ => {
                self.slots[h] = Some(v);
                Ok(())
            }
        }
    }

    /// Whether every checkpoint prefix, restricted to the known entries,
    /// still meets Hypothesis 1 at its nominal length.
    fn consistent(&self) -> bool {
        self.first_broken_checkpoint().is_none()
    }

    fn first_broken_checkpoint(&self) -> Option<usize> {
        self.cps.iter().copied().find(|&l| {
            let known: Vec<(usize, &PartialQuotient)> =
                (1..=l).filter_map(|h| self.slots[h].as_ref().map(|b| (h, b))).collect();
            !hypothesis1_at(&known, l, self.p).passes
        })
    }

    /// Sets all `positions` to one pool value, trying values other than
    /// `p^{-1}` first in a seeded order.
    fn choose(&mut self, positions: &[usize], pool: &[PartialQuotient], rng: &mut ChaCha8Rng) -> Result<()> {
        let mut order: Vec<&PartialQuotient> = pool.iter().collect();
        order.shuffle(rng);
        order.sort_by_key(|b| b.is_inv_p());
        for cand in order {
            for &h in positions {
                self.slots[h] = Some(cand.clone());
            }
            if self.consistent() {
                return Ok(());
            }
        }
        for &h in positions {
            self.slots[h] = None;
        }
        Err(Error::InfeasibleSpec(format!(
            "no pool value fits index {} under Hypothesis 1",
            positions[0]
        )))
    }
}

fn entry(name: &str, holds: bool, margin: Option<String>, detail: String) -> CertificateEntry {
    CertificateEntry {
        hypothesis: name.to_string(),
        holds,
        margin,
        detail,
    }
}

/// Evaluates every hypothesis of the chosen construction on a finite
/// sequence `b_1 … b_N`. Works from the sequence alone, independently of how
/// it was produced.
pub fn certify(construction: Construction, spec: &FamilySpec, seq: &[PartialQuotient]) -> Certificate {
    let p = spec.p;
    let n_len = seq.len();
    let at = |h: usize| &seq[h - 1];
    let mut entries = Vec::new();

    let bad = (1..=n_len).find(|&h| at(h).exponent() == 0 || !at(h).is_browkin_image(p));
    entries.push(entry(
        "browkin_quotients",
        bad.is_none(),
        None,
        match bad {
            Some(h) => format!("b_{h} = {} is not a Browkin quotient of negative valuation", at(h).human(p)),
            None => "every b_i is a Browkin floor value with |b_i|_p ≥ p".into(),
        },
    ));

    let d = seq.iter().map(|b| b.exponent()).max().unwrap_or(0);
    entries.push(entry(
        "bounded",
        d <= spec.d_cap,
        Some((spec.d_cap as i64 - d as i64).to_string()),
        format!("max |b_i|_p = {p}^{d}, cap {p}^{}", spec.d_cap),
    ));

    let kmax = spec.runs.iter().map(|r| r.k).max().unwrap_or(0);
    entries.push(entry(
        "k_bounded",
        kmax <= spec.k_bound,
        Some((spec.k_bound as i64 - kmax as i64).to_string()),
        format!("max k_i = {kmax}, bound {}", spec.k_bound),
    ));

    let spacing: Vec<i64> = spec
        .runs
        .windows(2)
        .map(|w| w[1].n as i64 - (w[0].n + w[0].lambda * w[0].k) as i64)
        .collect();
    let worst = spacing.iter().copied().enumerate().min_by_key(|&(_, s)| s);
    entries.push(entry(
        "run_spacing",
        spacing.iter().all(|&s| s >= 0),
        worst.map(|(_, s)| s.to_string()),
        match worst {
            Some((i, s)) if s < 0 => format!("n_{} < n_{i} + λ_{i} k_{i}", i + 1),
            _ => "n_{i+1} ≥ n_i + λ_i k_i".into(),
        },
    ));

    // log D / log p is the integer d, so the threshold is exact
    let threshold = Rat::from_integer((construction.c_factor() * d as i64 - 1).into());
    entries.push(entry(
        "c_threshold",
        spec.c > threshold,
        Some(format_rat(&(&spec.c - &threshold))),
        format!("C = {} against {}·log D/log p - 1 = {}", format_rat(&spec.c), construction.c_factor(), format_rat(&threshold)),
    ));

    let grows: Vec<bool> = spec
        .runs
        .iter()
        .map(|r| Rat::from_integer(r.lambda.into()) > &spec.c * Rat::from_integer(r.n.into()))
        .collect();
    let i0 = (0..=grows.len()).find(|&i| grows[i..].iter().all(|&g| g));
    let i0 = i0.filter(|&i| i < grows.len() || grows.is_empty());
    entries.push(entry(
        "lambda_growth",
        i0.is_some_and(|i| i <= spec.i0_cap),
        i0.map(|i| (spec.i0_cap as i64 - i as i64).to_string()),
        match i0 {
            Some(i) => format!("λ_i > C n_i from i = {i} on (cap {})", spec.i0_cap),
            None => "λ_i > C n_i fails on the last run".into(),
        },
    ));

    entries.push(match construction {
        Construction::Qper => {
            let broken = spec
                .runs
                .iter()
                .flat_map(|r| r.n..=r.end())
                .filter(|&h| h >= 1 && h <= n_len)
                .find(|&h| !at(h).is_inv_p());
            entry(
                "inverse_p_runs",
                broken.is_none(),
                None,
                match broken {
                    Some(h) => format!("b_{h} = {} ≠ p^-1", at(h).human(p)),
                    None => "b_{n_i} = … = b_{n_i + λ_i k_i - 1} = p^-1".into(),
                },
            )
        }
        Construction::Ooto => {
            let broken = spec
                .runs
                .iter()
                .flat_map(|r| {
                    let last = (r.n + (r.lambda - 1) * r.k).saturating_sub(1);
                    (r.n..=last).map(move |h| (h, r.k))
                })
                .filter(|&(h, k)| h >= 1 && h + k <= n_len)
                .find(|&(h, k)| at(h + k) != at(h));
            entry(
                "block_repetition",
                broken.is_none(),
                None,
                match broken {
                    Some((h, k)) => format!("b_{} ≠ b_{h} at h = {h}", h + k),
                    None => "b_{h + k_i} = b_h on every run".into(),
                },
            )
        }
    });

    let cps = checkpoints(construction, spec, n_len);
    let failing: BTreeMap<usize, Vec<usize>> = cps
        .iter()
        .filter_map(|&l| {
            let items: Vec<(usize, &PartialQuotient)> = (1..=l).map(|h| (h, at(h))).collect();
            let r = hypothesis1_at(&items, l, p);
            (!r.passes).then_some((l, r.violations))
        })
        .collect();
    let which = match construction {
        Construction::Qper => "(b_1 … b_{n_{i-1}}), i ≥ 1",
        Construction::Ooto => "(b_1 … b_{n_i})",
    };
    entries.push(entry(
        "hypothesis1",
        failing.is_empty(),
        None,
        if failing.is_empty() {
            format!("{which} pass at lengths {cps:?}")
        } else {
            format!("{which} fail: {failing:?}")
        },
    ));

    Certificate {
        construction,
        length: n_len,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rational::{int, rat};

    fn q(u: i64, a: u32) -> PartialQuotient {
        PartialQuotient::from_small(u, a, 5).unwrap()
    }

    fn pool() -> Vec<PartialQuotient> {
        vec![q(1, 1), q(2, 2), q(-2, 2)]
    }

    #[test]
    fn qper_example_passes() {
        let spec = FamilySpec::growing(5, 2, int(4), 2, 1, 3, pool());
        let out = gen_qper(&spec, 60, 1).unwrap();
        assert_eq!(out.quotients.len(), 60);
        assert!(out.certificate.all_pass(), "{:?}", out.certificate);
        // oracle: the runs themselves
        for r in &spec.runs {
            for h in r.n..=r.end().min(60) {
                assert!(out.quotients[h - 1].is_inv_p());
            }
        }
    }

    #[test]
    fn low_c_is_flagged() {
        let mut spec = FamilySpec::growing(5, 2, int(4), 2, 1, 3, pool());
        spec.c = int(1);
        let out = gen_qper(&spec, 40, 1).unwrap();
        assert_eq!(out.certificate.failures(), vec!["c_threshold"]);
    }

    #[test]
    fn short_run_is_flagged() {
        let spec = FamilySpec::growing(5, 2, int(4), 2, 1, 3, pool());
        let mut out = gen_qper(&spec, 40, 1).unwrap();
        out.quotients[5] = q(2, 2);
        let cert = certify(Construction::Qper, &spec, &out.quotients);
        assert!(cert.failures().contains(&"inverse_p_runs"));
        assert!(cert.entry("inverse_p_runs").unwrap().detail.contains("b_6"));
    }

    #[test]
    fn ooto_block_example() {
        let block = vec![q(1, 1), q(-2, 2)];
        let spec = FamilySpec {
            p: 5,
            d_cap: 2,
            k_bound: 2,
            c: rat(15, 2),
            runs: vec![Run {
                n: 1,
                k: 2,
                lambda: 8,
                block: Some(block),
            }],
            pool: pool(),
            i0_cap: 3,
        };
        let out = gen_ooto(&spec, 16, 3).unwrap();
        assert!(out.certificate.all_pass(), "{:?}", out.certificate);
        let mut broken = out.quotients.clone();
        broken[8] = q(2, 2);
        let cert = certify(Construction::Ooto, &spec, &broken);
        assert_eq!(cert.failures(), vec!["block_repetition"]);
        assert!(cert.entry("block_repetition").unwrap().detail.contains("h = 7"));
    }

    #[test]
    fn unbounded_k_is_flagged() {
        let ones = |k| Some(vec![q(1, 1); k]);
        let spec = FamilySpec {
            p: 5,
            d_cap: 1,
            k_bound: 2,
            c: int(4),
            runs: vec![
                Run { n: 1, k: 1, lambda: 5, block: ones(1) },
                Run { n: 6, k: 3, lambda: 25, block: ones(3) },
            ],
            pool: vec![q(1, 1)],
            i0_cap: 3,
        };
        let out = gen_ooto(&spec, 80, 0).unwrap();
        assert_eq!(out.certificate.failures(), vec!["k_bounded"]);
    }

    #[test]
    fn pool_violating_hypothesis_is_infeasible() {
        let spec = FamilySpec {
            p: 5,
            d_cap: 2,
            k_bound: 1,
            c: int(4),
            runs: vec![
                Run { n: 2, k: 1, lambda: 9, block: None },
                Run { n: 11, k: 1, lambda: 45, block: None },
                Run { n: 56, k: 1, lambda: 225, block: None },
            ],
            pool: vec![q(2, 2)],
            i0_cap: 3,
        };
        assert!(matches!(gen_qper(&spec, 20, 0), Err(Error::InfeasibleSpec(_))));
    }

    #[test]
    fn spec_json_round_trip() {
        let json = r#"{"p":5,"d_cap":2,"k_bound":2,"c":"15/2",
            "runs":[{"n":1,"lambda":8,"block":["1/5","-2/25"]}],
            "pool":["1/5",{"u":"2","a":2}]}"#;
        let spec: FamilySpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.runs[0].k, 2);
        assert_eq!(spec.i0_cap, 3);
        assert_eq!(spec.pool[1], q(2, 2));
    }

    #[test]
    fn deterministic_in_seed() {
        let spec = FamilySpec::growing(5, 2, int(4), 3, 1, 2, pool());
        let a = gen_qper(&spec, 50, 9).unwrap();
        let b = gen_qper(&spec, 50, 9).unwrap();
        assert_eq!(a, b);
    }
}
