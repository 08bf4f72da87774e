use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_arith::rational::rat_str;
use crate::exact_arith::{vp_rat, PartialQuotient, Rat, Valuation};

use super::CFExpansion;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergentRow {
    pub n: i64,
    #[serde(rename = "A", with = "rat_str")]
    pub a: Rat,
    #[serde(rename = "B", with = "rat_str")]
    pub b: Rat,
    /// `v_p(A_n)`.
    pub e: Valuation,
    /// `v_p(B_n)`.
    pub f: Valuation,
}

/// Numerators and denominators of the convergents, rows `n = -2, -1, 0, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergentTable {
    pub p: u64,
    rows: Vec<ConvergentRow>,
}

impl ConvergentTable {
    /// Runs the three-term recurrences over `quotients` (starting at `b0`).
    pub fn build(quotients: &[PartialQuotient], p: u64) -> Self {
        let seed = |n: i64, a: Rat, b: Rat| ConvergentRow {
            n,
            e: vp_rat(&a, p),
            f: vp_rat(&b, p),
            a,
            b,
        };
        let mut rows = vec![seed(-2, Rat::zero(), Rat::one()), seed(-1, Rat::one(), Rat::zero())];
        for (i, q) in quotients.iter().enumerate() {
            let bq = q.value(p);
            let (prev, prev2) = (&rows[i + 1], &rows[i]);
            let a = &bq * &prev.a + &prev2.a;
            let b = &bq * &prev.b + &prev2.b;
            rows.push(seed(i as i64, a, b));
        }
        ConvergentTable { p, rows }
    }

    pub fn rows(&self) -> &[ConvergentRow] {
        &self.rows
    }

    /// Largest `n` with a row; `-1` for a seed-only table.
    pub fn last_index(&self) -> i64 {
        self.rows.len() as i64 - 3
    }

    pub fn row(&self, n: i64) -> &ConvergentRow {
        &self.rows[(n + 2) as usize]
    }

    pub fn get(&self, n: i64) -> Option<&ConvergentRow> {
        if n < -2 {
            return None;
        }
        self.rows.get((n + 2) as usize)
    }

    pub fn a(&self, n: i64) -> &Rat {
        &self.row(n).a
    }

    pub fn b(&self, n: i64) -> &Rat {
        &self.row(n).b
    }

    /// `A_n / B_n`, `None` when `B_n = 0`.
    pub fn convergent(&self, n: i64) -> Option<Rat> {
        let r = self.row(n);
        (!r.b.is_zero()).then(|| &r.a / &r.b)
    }

    /// `A_n B_{n-1} - A_{n-1} B_n`.
    pub fn determinant(&self, n: i64) -> Rat {
        self.a(n) * self.b(n - 1) - self.a(n - 1) * self.b(n)
    }

    /// Indices `n ≥ -1` where the determinant differs from `(-1)^{n+1}`.
    pub fn determinant_failures(&self) -> Vec<i64> {
        (-1..=self.last_index())
            .filter(|&n| {
                let want = if (n + 1) % 2 == 0 { Rat::one() } else { -Rat::one() };
                self.determinant(n) != want
            })
            .collect()
    }
}

/// Convergent table of the first `n` quotients of `cf` (periodic expansions
/// are unrolled).
pub fn convergents(cf: &CFExpansion, n: usize) -> Result<ConvergentTable> {
    let qs = cf.unrolled(n);
    if qs.len() < n {
        return Err(Error::InvalidInput(format!(
            "requested {n} convergents but only {} partial quotients are available",
            qs.len()
        )));
    }
    Ok(ConvergentTable::build(&qs, cf.p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{fold_quotients, CfStatus};
    use crate::exact_arith::rational::rat;

    fn paper_prefix() -> CFExpansion {
        let q = |u, a| PartialQuotient::from_small(u, a, 5).unwrap();
        CFExpansion::from_quotients(5, vec![PartialQuotient::zero(), q(4, 2), q(-3, 3)], CfStatus::Finite)
            .unwrap()
    }

    #[test]
    fn reproduces_nested_value() {
        let cf = paper_prefix();
        let t = convergents(&cf, 3).unwrap();
        let nested = fold_quotients(&cf.unrolled(3), 5).unwrap();
        assert_eq!(t.convergent(2).unwrap(), nested);
        // 1/(4/25 + 1/(-3/125)) computed by hand
        assert_eq!(nested, rat(-75, 3113));
        assert!(t.determinant_failures().is_empty());
    }

    #[test]
    fn seed_rows_only() {
        let t = ConvergentTable::build(&[], 5);
        assert_eq!(t.rows().len(), 2);
        assert_eq!(t.last_index(), -1);
        assert_eq!(t.f_seed(), (Valuation::Finite(0), Valuation::Infinite));
    }

    #[test]
    fn too_many_requested() {
        assert!(convergents(&paper_prefix(), 4).is_err());
    }

    impl ConvergentTable {
        fn f_seed(&self) -> (Valuation, Valuation) {
            (self.row(-2).f, self.row(-1).f)
        }
    }
}
