use serde::Serialize;

use super::{ElementId, FinitePoset};
use crate::error::Result;

/// The values `mu(base, b)` for every `b` in the poset (zero when `base` is not below `b`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobiusTable {
    pub base: ElementId,
    pub values: Vec<i64>,
}

impl MobiusTable {
    pub fn get(&self, b: ElementId) -> i64 {
        self.values[b]
    }
}

impl FinitePoset {
    fn mobius_row(&self, a: ElementId) -> &[i64] {
        self.mobius_rows[a].get_or_init(|| {
            let mut mu = vec![0i64; self.len()];
            mu[a] = 1;
            for &b in &self.linear {
                if b == a || !self.up[a].contains(b) {
                    continue;
                }
                // every c in [a, b) precedes b in the linear extension
                let mut sum = 0;
                for c in self.up[a].intersection(&self.down[b]) {
                    if c != b {
                        sum += mu[c];
                    }
                }
                mu[b] = -sum;
            }
            mu
        })
    }

    fn mobius_col(&self, b: ElementId) -> &[i64] {
        self.mobius_cols[b].get_or_init(|| {
            let mut mu = vec![0i64; self.len()];
            mu[b] = 1;
            for &a in self.linear.iter().rev() {
                if a == b || !self.down[b].contains(a) {
                    continue;
                }
                let mut sum = 0;
                for c in self.up[a].intersection(&self.down[b]) {
                    if c != a {
                        sum += mu[c];
                    }
                }
                mu[a] = -sum;
            }
            mu
        })
    }

    /// `mu(a, b)` by the recursion `mu(a, b) = -sum_{a <= c < b} mu(a, c)`; zero when `a` is not below `b`.
    pub fn mobius(&self, a: ElementId, b: ElementId) -> Result<i64> {
        self.check_id(a)?;
        self.check_id(b)?;
        Ok(self.mobius_row(a)[b])
    }

    /// Every value `mu(a, -)`.
    pub fn mobius_from(&self, a: ElementId) -> Result<MobiusTable> {
        self.check_id(a)?;
        Ok(MobiusTable {
            base: a,
            values: self.mobius_row(a).to_vec(),
        })
    }

    /// Every value `mu(-, b)`, computed by the dual recursion.
    pub fn mobius_to(&self, b: ElementId) -> Result<Vec<i64>> {
        self.check_id(b)?;
        Ok(self.mobius_col(b).to_vec())
    }

    /// `mu(P)` of a bounded poset, i.e. `mu(bottom, top)`.
    pub fn mobius_of_bounds(&self) -> Result<i64> {
        let (b, t) = self.bounds()?;
        Ok(self.mobius_row(b)[t])
    }

    /// The Möbius number: `mu` of the poset with a fresh bottom and top adjoined.
    ///
    /// The empty poset gives the 2-chain and so returns -1. Any poset that
    /// already has a bottom or a top returns 0.
    pub fn mobius_number(&self) -> i64 {
        if self.is_empty() {
            return -1;
        }
        let hat = self.with_fresh_bounds("0̂", "1̂");
        hat.mobius_row(self.len())[self.len() + 1]
    }
}

/// Möbius number of the subposet induced on `ids`.
pub fn mobius_number_of(poset: &FinitePoset, ids: &[ElementId]) -> i64 {
    if ids.is_empty() {
        return -1;
    }
    poset.induced(ids).mobius_number()
}

#[cfg(test)]
mod tests {
    use crate::fixtures::disconnected_rank_four as disconnected_fixture;
    use super::*;

    #[test]
    fn trivial_interval() {
        let p = FinitePoset::chain(3);
        for x in 0..3 {
            assert_eq!(p.mobius(x, x).unwrap(), 1);
        }
    }

    #[test]
    fn disconnected_fixture_labels() {
        let p = disconnected_fixture();
        let zero = p.find_label("0").unwrap();
        let expected = [
            ("a1", -1), ("a2", -1), ("a3", -1),
            ("b1", 0), ("b2", 0), ("b3", 1), ("b4", 1),
            ("c1", 0), ("c2", -1), ("c3", 0),
            ("1", 1),
        ];
        for (label, mu) in expected {
            let x = p.find_label(label).unwrap();
            assert_eq!(p.mobius(zero, x).unwrap(), mu, "mu(0, {label})");
        }
        assert_eq!(p.mobius_of_bounds().unwrap(), 1);
    }

    #[test]
    fn boolean_lattice_b3() {
        let b3 = FinitePoset::boolean_lattice(3);
        assert_eq!(b3.mobius(0, 7).unwrap(), -1);
    }

    #[test]
    fn dual_recursion_agrees() {
        let p = disconnected_fixture();
        for b in 0..p.len() {
            let col = p.mobius_to(b).unwrap();
            for a in 0..p.len() {
                assert_eq!(col[a], p.mobius(a, b).unwrap());
            }
        }
    }

    #[test]
    fn recursion_identity_holds() {
        let p = disconnected_fixture();
        for a in 0..p.len() {
            for b in p.up_set(a).ones() {
                if a == b {
                    continue;
                }
                let total: i64 = p.interval_ids(a, b).iter().map(|&c| p.mobius(a, c).unwrap()).sum();
                assert_eq!(total, 0);
            }
        }
    }

    #[test]
    fn mobius_numbers() {
        assert_eq!(FinitePoset::chain(1).mobius_number(), 0);
        assert_eq!(FinitePoset::chain(2).mobius_number(), 0);
        assert_eq!(FinitePoset::antichain(2).mobius_number(), 1);
        assert_eq!(FinitePoset::antichain(0).mobius_number(), -1);
    }

    #[test]
    fn unknown_ids_rejected() {
        assert!(FinitePoset::chain(2).mobius(0, 5).is_err());
    }
}
