use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize};

use crate::cf::{expand, CFExpansion, CfStatus, ConvergentTable, ExpandOptions};
use crate::error::{Error, Result};
use crate::exact_arith::modular::{check_prime, exact_sqrt};
use crate::exact_arith::rational::{bigint_str, p_pow, parse_rat};
use crate::exact_arith::{vp_rat, Branch, Number, PartialQuotient, QuadField, QuadSurd, Rat, Valuation};

/// `[0, b_1, …, b_k, overline(b_{k+1}, …, b_{k+t+1})]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicCF {
    pub p: u64,
    /// `b_0 … b_k`, with `b_0 = 0` and `k ≥ 1`.
    pub preperiod: Vec<PartialQuotient>,
    /// `b_{k+1} … b_{k+t+1}`.
    pub period: Vec<PartialQuotient>,
}

impl PeriodicCF {
    pub fn new(p: u64, preperiod: Vec<PartialQuotient>, period: Vec<PartialQuotient>) -> Result<Self> {
        check_prime(p)?;
        if preperiod.len() < 2 {
            return Err(Error::InvalidInput("preperiod must contain b0 and at least b1".into()));
        }
        if !preperiod[0].is_zero() {
            return Err(Error::InvalidInput("b0 must be 0".into()));
        }
        if period.is_empty() {
            return Err(Error::InvalidInput("period must be nonempty".into()));
        }
        for (i, b) in preperiod.iter().chain(period.iter()).enumerate().skip(1) {
            if b.exponent() == 0 {
                return Err(Error::InvalidInput(format!("b{i} must have negative valuation")));
            }
            if !b.is_browkin_image(p) {
                return Err(Error::InvalidInput(format!("b{i} = {} is not a Browkin floor value", b.human(p))));
            }
        }
        Ok(PeriodicCF { p, preperiod, period })
    }

    /// Shorthand for `[0, b_1, …, b_k, overline(period)]`.
    pub fn with_prefix(p: u64, prefix: &[PartialQuotient], period: Vec<PartialQuotient>) -> Result<Self> {
        let mut pre = vec![PartialQuotient::zero()];
        pre.extend_from_slice(prefix);
        Self::new(p, pre, period)
    }

    /// `k`, the index of the last preperiodic quotient.
    pub fn k(&self) -> usize {
        self.preperiod.len() - 1
    }

    /// `t`, one less than the period length.
    pub fn t(&self) -> usize {
        self.period.len() - 1
    }

    pub fn quotient(&self, i: usize) -> &PartialQuotient {
        if i < self.preperiod.len() {
            &self.preperiod[i]
        } else {
            &self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn unrolled(&self, n: usize) -> Vec<PartialQuotient> {
        (0..n).map(|i| self.quotient(i).clone()).collect()
    }

    pub fn to_expansion(&self) -> CFExpansion {
        let mut qs = self.preperiod.clone();
        qs.extend(self.period.iter().cloned());
        CFExpansion::from_quotients(
            self.p,
            qs,
            CfStatus::PeriodDetected {
                preperiod_len: self.preperiod.len(),
                period_len: self.period.len(),
            },
        )
        .expect("validated on construction")
    }

    /// Convergent table of `b_0 … b_{n-1}`.
    pub fn table(&self, n: usize) -> ConvergentTable {
        ConvergentTable::build(&self.unrolled(n), self.p)
    }

    /// Human notation such as `[0, 4/5^2, -3/5^3, overline(1/5)]`.
    pub fn human(&self) -> String {
        let f = |v: &[PartialQuotient]| v.iter().map(|b| b.human(self.p)).collect::<Vec<_>>().join(", ");
        format!("[{}, overline({})]", f(&self.preperiod), f(&self.period))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum QuotientRepr {
    Obj {
        #[serde(with = "bigint_str")]
        u: BigInt,
        a: u32,
    },
    Str(String),
}

impl QuotientRepr {
    pub(crate) fn into_quotient(self, p: u64) -> Result<PartialQuotient> {
        match self {
            QuotientRepr::Obj { u, a } => PartialQuotient::new(u, a, p),
            QuotientRepr::Str(s) => PartialQuotient::from_rat(&parse_rat(&s)?, p),
        }
    }
}

impl<'de> Deserialize<'de> for PeriodicCF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: u64,
            preperiod: Vec<QuotientRepr>,
            period: Vec<QuotientRepr>,
        }
        let raw = Raw::deserialize(d)?;
        let conv = |v: Vec<QuotientRepr>| -> Result<Vec<PartialQuotient>> {
            v.into_iter().map(|q| q.into_quotient(raw.p)).collect()
        };
        let build = || PeriodicCF::new(raw.p, conv(raw.preperiod)?, conv(raw.period)?);
        build().map_err(serde::de::Error::custom)
    }
}

/// `C_0 α² + C_1 α + C_2 = 0` for a periodic expansion, before and after
/// clearing denominators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticRelation {
    pub p: u64,
    /// `C_0, C_1, C_2 ∈ Z[1/p]`.
    #[serde(serialize_with = "ser_rats")]
    pub coeffs: [Rat; 3],
    /// The individual summands `C_{ij}` of each coefficient.
    #[serde(skip)]
    pub summands: [Vec<Rat>; 3],
    /// `ẽ_t + 2 f_k - 1`.
    pub clearing_exponent: i64,
    /// `p^E · C_i`, as produced by the clearing step.
    #[serde(serialize_with = "ser_ints")]
    pub unreduced: [BigInt; 3],
    /// Whether every `p^E · C_{ij}` is an integer.
    pub summands_integral: bool,
    /// `gcd` of the unreduced coefficients.
    #[serde(with = "bigint_str")]
    pub content: BigInt,
    /// Coprime integers `c_0, c_1, c_2` (first nonzero one positive).
    #[serde(serialize_with = "ser_ints")]
    pub cleared: [BigInt; 3],
}

fn ser_rats<S: serde::Serializer>(v: &[Rat; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in v {
        seq.serialize_element(&crate::exact_arith::format_rat(x))?;
    }
    seq.end()
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Divides out the content and makes the first nonzero coefficient positive.
pub fn primitive_part(c: &[BigInt; 3]) -> Result<(BigInt, [BigInt; 3])> {
    let g = c[0].gcd(&c[1]).gcd(&c[2]);
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = c.clone().map(|x| x / &g);
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        out = out.map(|x| -x);
    }
    Ok((g, out))
}

/// The quadratic relation obtained by eliminating the purely periodic tail
/// `β = [overline(b_{k+1}, …)]` between `β`'s own fixed-point equation and the
/// Möbius map of the preperiod.
pub fn periodic_to_relation(cf: &PeriodicCF) -> Result<QuadraticRelation> {
    let p = cf.p;
    let k = cf.k() as i64;
    let t = cf.t() as i64;
    let pre = ConvergentTable::build(&cf.preperiod, p);
    let per = ConvergentTable::build(&cf.period, p);
    let (ak, ak1, bk, bk1) = (pre.a(k), pre.a(k - 1), pre.b(k), pre.b(k - 1));
    let (ta, ta1, tb, tb1) = (per.a(t), per.a(t - 1), per.b(t), per.b(t - 1));
    let two = Rat::from_integer(BigInt::from(2));

    let c0 = vec![-(ta1 * bk * bk), ta * bk * bk1, -(tb1 * bk * bk1), tb * bk1 * bk1];
    let c1 = vec![
        &two * ta1 * ak * bk,
        -(ta * ak1 * bk),
        tb1 * ak1 * bk,
        -(ta * ak * bk1),
        tb1 * ak * bk1,
        -(&two * tb * ak1 * bk1),
    ];
    let c2 = vec![-(ta1 * ak * ak), ta * ak * ak1, -(tb1 * ak * ak1), tb * ak1 * ak1];
    let summands = [c0, c1, c2];
    let coeffs = summands.clone().map(|v| v.into_iter().fold(Rat::zero(), |a, b| a + b));
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::DegenerateRelation);
    }

    let e_tilde_t = -per.row(t).e.unwrap_finite();
    let f_k = -pre.row(k).f.unwrap_finite();
    let clearing_exponent = e_tilde_t + 2 * f_k - 1;
    let scale = crate::exact_arith::rational::p_power_rat(p, clearing_exponent);
    let summands_integral = summands.iter().flatten().all(|c| (c * &scale).is_integer());
    let scaled = coeffs.clone().map(|c| c * &scale);
    let unreduced = if scaled.iter().all(|c| c.is_integer()) {
        scaled.map(|c| c.to_integer())
    } else {
        // fall back to the least power of p that clears all denominators
        let e = scaled.iter().filter_map(|c| vp_rat(c, p).finite()).map(|v| (-v).max(0)).max().unwrap_or(0);
        scaled.map(|c| (c * Rat::from_integer(p_pow(p, e as u32))).to_integer())
    };
    let (content, cleared) = primitive_part(&unreduced)?;
    Ok(QuadraticRelation {
        p,
        coeffs,
        summands,
        clearing_exponent,
        unreduced,
        summands_integral,
        content,
        cleared,
    })
}

/// `c_0 x² + c_1 x + c_2` evaluated at a p-adic number.
pub fn evaluate(c: &[BigInt; 3], x: &Number) -> Result<Number> {
    let r = |n: &BigInt| Rat::from_integer(n.clone());
    let lin = x.mul_rat(&r(&c[0])).add_rat(&r(&c[1]));
    Ok(lin.mul(x)?.add_rat(&r(&c[2])))
}

/// Both roots of `c_0 x² + c_1 x + c_2` as elements of `Q_p` (rational or in a
/// quadratic field with each of the two embeddings).
pub fn candidate_roots(c: &[BigInt; 3], p: u64) -> Result<Vec<Number>> {
    let [c0, c1, c2] = c;
    if c0.is_zero() {
        if c1.is_zero() {
            return Err(Error::DegenerateRelation);
        }
        return Ok(vec![Number::Rat(Rat::new(-c2, c1.clone()))]);
    }
    let disc = c1 * c1 - BigInt::from(4) * c0 * c2;
    let denom = Rat::from_integer(BigInt::from(2) * c0);
    if let Some(s) = exact_sqrt(&disc) {
        return Ok(vec![
            Number::Rat(Rat::from_integer(-c1 + &s) / &denom),
            Number::Rat(Rat::from_integer(-c1 - &s) / &denom),
        ]);
    }
    let mut out = Vec::new();
    for branch in [Branch::Plus, Branch::Minus] {
        let (field, s) = QuadField::from_discriminant(&disc, p, branch)?;
        let x = QuadSurd::new(&field, &Rat::from_integer(-c1), &Rat::from_integer(s), &denom)?;
        out.push(Number::from_surd(x));
    }
    Ok(out)
}

/// The root of the relation whose Browkin expansion reproduces `cf` for
/// `k + 2(t+1)` quotients past `b_0`.
pub fn relation_root(rel: &QuadraticRelation, cf: &PeriodicCF) -> Result<Number> {
    let n = cf.k() + 2 * (cf.t() + 1) + 1;
    let want = cf.unrolled(n);
    let opts = ExpandOptions {
        max_steps: n,
        ..ExpandOptions::default()
    };
    for x in candidate_roots(&rel.cleared, cf.p)? {
        let got = expand(&x, cf.p, &opts)?;
        if got.unrolled(n) == want {
            return Ok(x);
        }
    }
    Err(Error::BranchMismatch)
}

/// `v_p` of the relation evaluated at the first convergent that agrees with
/// the expansion to at least `digits` p-adic digits. The value depends only
/// on the quotients, not on the relation's roots.
pub fn annihilation_valuation(rel: &QuadraticRelation, cf: &PeriodicCF, digits: i64) -> Result<Valuation> {
    let mut n = cf.preperiod.len() + cf.period.len();
    loop {
        let t = cf.table(n + 1);
        let m = n as i64 - 1;
        let gap = -(t.row(m).f.unwrap_finite() + t.row(m + 1).f.unwrap_finite());
        if gap >= digits {
            let x = Number::Rat(t.convergent(m).expect("B_m nonzero"));
            return evaluate(&rel.cleared, &x)?.vp(cf.p, 0);
        }
        n += 1;
    }
}

/// `true` when the cleared coefficients are integers, coprime, and
/// `p^E C_{ij} ∈ Z` for every summand.
pub fn is_well_cleared(rel: &QuadraticRelation) -> bool {
    let g = rel.cleared[0].gcd(&rel.cleared[1]).gcd(&rel.cleared[2]);
    rel.summands_integral && g.is_one()
}

/// A random periodic expansion with `1 ≤ k ≤ max_k`, `0 ≤ t ≤ max_t` and
/// quotient exponents in `1..=max_exp`.
pub fn random_periodic_cf<R: rand::Rng + ?Sized>(
    rng: &mut R,
    p: u64,
    max_k: usize,
    max_t: usize,
    max_exp: u32,
) -> Result<PeriodicCF> {
    check_prime(p)?;
    let quotient = |rng: &mut R| -> Result<PartialQuotient> {
        let a = rng.random_range(1..=max_exp);
        let lim = (p_pow(p, a + 1) - 1u32) / 2u32;
        let lim: i64 = lim.try_into().map_err(|_| Error::InvalidInput("exponent too large".into()))?;
        loop {
            let u: i64 = rng.random_range(-lim..=lim);
            if u != 0 && !u.unsigned_abs().is_multiple_of(p) {
                return PartialQuotient::from_small(u, a, p);
            }
        }
    };
    let k = rng.random_range(1..=max_k);
    let t = rng.random_range(0..=max_t);
    let pre = (0..k).map(|_| quotient(rng)).collect::<Result<Vec<_>>>()?;
    let per = (0..=t).map(|_| quotient(rng)).collect::<Result<Vec<_>>>()?;
    PeriodicCF::with_prefix(p, &pre, per)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::fold_quotients;

    fn q(u: i64, a: u32) -> PartialQuotient {
        PartialQuotient::from_small(u, a, 5).unwrap()
    }

    fn ints(v: [i64; 3]) -> [BigInt; 3] {
        v.map(BigInt::from)
    }

    /// Oracle: compose 2×2 Möbius matrices. The period gives
    /// `β = (Pβ + Q)/(Rβ + S)`; the preperiod gives `α = (aβ + b)/(cβ + d)`.
    fn moebius_relation(cf: &PeriodicCF) -> [BigInt; 3] {
        let prod = |qs: &[PartialQuotient]| {
            let mut m = [Rat::one(), Rat::zero(), Rat::zero(), Rat::one()];
            for b in qs {
                let v = b.value(cf.p);
                m = [&m[0] * &v + &m[1], m[0].clone(), &m[2] * &v + &m[3], m[2].clone()];
            }
            m
        };
        let [pp, qq, rr, ss] = prod(&cf.period);
        let [a, b, c, d] = prod(&cf.preperiod);
        // Rβ² + (S-P)β - Q = 0 with β = (dα - b)/(a - cα)
        let (x0, x1) = (-&b, d.clone());
        let (y0, y1) = (a.clone(), -&c);
        let c2 = &rr * &x1 * &x1 + (&ss - &pp) * &x1 * &y1 - &qq * &y1 * &y1;
        let two = Rat::from_integer(2.into());
        let c1 = &two * &rr * &x0 * &x1 + (&ss - &pp) * (&x0 * &y1 + &x1 * &y0) - &two * &qq * &y0 * &y1;
        let c0 = &rr * &x0 * &x0 + (&ss - &pp) * &x0 * &y0 - &qq * &y0 * &y0;
        let l = c2.denom().lcm(c1.denom()).lcm(c0.denom());
        let c = [c2, c1, c0].map(|x| (x * Rat::from_integer(l.clone())).to_integer());
        primitive_part(&c).unwrap().1
    }

    #[test]
    fn worked_example() {
        let cf = crate::heights::reference_example();
        let rel = periodic_to_relation(&cf).unwrap();
        assert_eq!(rel.cleared, ints([9129469, 5530075, -9713125]));
        assert_eq!(rel.clearing_exponent, 10);
        assert!(is_well_cleared(&rel));
        assert_eq!(rel.cleared, moebius_relation(&cf));
    }

    #[test]
    fn pure_period() {
        let cf = PeriodicCF::with_prefix(5, &[q(1, 1)], vec![q(1, 1)]).unwrap();
        let rel = periodic_to_relation(&cf).unwrap();
        assert_eq!(rel.cleared, ints([5, 1, -5]));
    }

    #[test]
    fn relation_matches_moebius_oracle() {
        let cases = [
            (vec![q(2, 1)], vec![q(-1, 2), q(3, 1)]),
            (vec![q(-2, 3), q(1, 1), q(12, 2)], vec![q(7, 2)]),
            (vec![q(1, 4)], vec![q(2, 1), q(-2, 1), q(1, 3)]),
        ];
        for (pre, per) in cases {
            let cf = PeriodicCF::with_prefix(5, &pre, per).unwrap();
            let rel = periodic_to_relation(&cf).unwrap();
            assert_eq!(rel.cleared, moebius_relation(&cf), "{}", cf.human());
            assert!(rel.summands_integral);
            let root = relation_root(&rel, &cf).unwrap();
            assert!(evaluate(&rel.cleared, &root).unwrap().is_zero());
            assert!(annihilation_valuation(&rel, &cf, 64).unwrap() >= Valuation::Finite(60));
        }
    }

    #[test]
    fn convergents_approach_the_root() {
        let cf = crate::heights::reference_example();
        let rel = periodic_to_relation(&cf).unwrap();
        let x = fold_quotients(&cf.unrolled(30), 5).unwrap();
        let v = evaluate(&rel.cleared, &Number::Rat(x)).unwrap().vp(5, 0).unwrap();
        assert!(v >= Valuation::Finite(40));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PeriodicCF::with_prefix(5, &[q(3, 0)], vec![q(1, 1)]).is_err());
        assert!(PeriodicCF::with_prefix(5, &[q(13, 1)], vec![q(1, 1)]).is_err());
        assert!(PeriodicCF::with_prefix(5, &[q(1, 1)], vec![]).is_err());
        assert_eq!(primitive_part(&ints([0, 0, 0])), Err(Error::ZeroPolynomial));
        assert_eq!(primitive_part(&ints([-4, 6, 2])).unwrap(), (BigInt::from(2), ints([2, -3, -1])));
    }

    #[test]
    fn deserializes_both_quotient_forms() {
        let cf: PeriodicCF = serde_json::from_str(
            r#"{"p":5,"preperiod":["0","4/25",{"u":"-3","a":3}],"period":["1/5"]}"#,
        )
        .unwrap();
        assert_eq!(cf, crate::heights::reference_example());
        assert_eq!(cf.human(), "[0, 4/5^2, -3/5^3, overline(1/5)]");
    }
}
