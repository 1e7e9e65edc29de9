use serde::Serialize;

use super::{ElementId, FinitePoset};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankInfo {
    /// Length of the longest chain from a minimal element.
    pub rank_of: Vec<usize>,
    pub poset_rank: usize,
    pub is_pure: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub rank: RankInfo,
    pub interior_disconnected: bool,
    /// Components of the interior; empty unless the interior is disconnected.
    pub components: Vec<Vec<ElementId>>,
}

impl FinitePoset {
    pub fn rank_info(&self) -> RankInfo {
        let rank_of = self.heights();
        let poset_rank = rank_of.iter().copied().max().unwrap_or(0);
        let covers_unit = self.covers().all(|(a, b)| rank_of[b] == rank_of[a] + 1);
        let maxima_level = self.maximal_elements().iter().all(|&m| rank_of[m] == poset_rank);
        RankInfo {
            rank_of,
            poset_rank,
            is_pure: covers_unit && maxima_level,
        }
    }

    /// Rank data plus interior connectivity. An empty interior (rank below 2)
    /// counts as not disconnected.
    pub fn structure_report(&self) -> Result<StructureReport> {
        let interior = self.interior_ids()?;
        let comps = self.components_of(&interior);
        let disconnected = comps.len() >= 2;
        Ok(StructureReport {
            rank: self.rank_info(),
            interior_disconnected: disconnected,
            components: if disconnected { comps } else { Vec::new() },
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures::disconnected_rank_four as disconnected_fixture;
    use super::*;

    #[test]
    fn disconnected_fixture_structure() {
        let r = disconnected_fixture().structure_report().unwrap();
        assert_eq!(r.rank.poset_rank, 4);
        assert!(r.rank.is_pure);
        assert!(r.interior_disconnected);
        let mut sizes: Vec<_> = r.components.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 6]);
    }

    #[test]
    fn two_chain_is_connected() {
        let r = FinitePoset::chain(2).structure_report().unwrap();
        assert_eq!(r.rank.poset_rank, 1);
        assert!(r.rank.is_pure);
        assert!(!r.interior_disconnected);
    }

    #[test]
    fn boolean_lattice_connected() {
        let r = FinitePoset::boolean_lattice(3).structure_report().unwrap();
        assert_eq!(r.rank.poset_rank, 3);
        assert!(r.rank.is_pure);
        assert!(!r.interior_disconnected);
    }

    #[test]
    fn impure_detected() {
        // 0 < a < b < 1 and 0 < c < 1
        let p = FinitePoset::from_comparabilities(
            ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect(),
            &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
        )
        .unwrap();
        assert!(!p.rank_info().is_pure);
    }

    #[test]
    fn unbounded_rejected() {
        assert!(FinitePoset::antichain(2).structure_report().is_err());
    }
}
