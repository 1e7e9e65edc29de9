use fixedbitset::FixedBitSet;

use super::{ElementId, FinitePoset, Limits};
use crate::error::{Error, Result};

/// Reduced Euler characteristic of the order complex of the interior of a
/// bounded poset, by explicit chain enumeration.
///
/// Each chain `c` (the empty chain included) contributes `(-1)^(|c| + 1)`,
/// so the empty chain gives -1 and the result equals `mu(bottom, top)`.
pub fn reduced_euler_characteristic(poset: &FinitePoset, limits: &Limits) -> Result<i64> {
    let interior = poset.interior_ids()?;
    chain_sum(poset, &interior, limits)
}

/// The same chain sum over every element of `poset`; equals its Möbius number.
pub fn order_complex_euler(poset: &FinitePoset, limits: &Limits) -> Result<i64> {
    let all: Vec<_> = (0..poset.len()).collect();
    chain_sum(poset, &all, limits)
}

fn chain_sum(poset: &FinitePoset, ids: &[ElementId], limits: &Limits) -> Result<i64> {
    if ids.len() > limits.max_chain_interior {
        return Err(Error::SizeGuard {
            what: "order complex",
            size: ids.len(),
            limit: limits.max_chain_interior,
        });
    }
    let mut member = FixedBitSet::with_capacity(poset.len());
    for &x in ids {
        member.insert(x);
    }
    // chains are extended upwards from their top element
    fn extend(poset: &FinitePoset, member: &FixedBitSet, top: ElementId, len: usize, total: &mut i64) {
        *total += if len % 2 == 1 { 1 } else { -1 };
        for y in poset.up_set(top).ones() {
            if y != top && member.contains(y) {
                extend(poset, member, y, len + 1, total);
            }
        }
    }
    let mut total = -1;
    for &x in ids {
        extend(poset, &member, x, 1, &mut total);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use crate::fixtures::disconnected_rank_four as disconnected_fixture;
    use super::*;

    #[test]
    fn two_chain_gives_minus_one() {
        assert_eq!(reduced_euler_characteristic(&FinitePoset::chain(2), &Limits::default()).unwrap(), -1);
    }

    #[test]
    fn disconnected_fixture_gives_one() {
        assert_eq!(reduced_euler_characteristic(&disconnected_fixture(), &Limits::default()).unwrap(), 1);
    }

    #[test]
    fn boolean_lattice_gives_minus_one() {
        let b3 = FinitePoset::boolean_lattice(3);
        assert_eq!(reduced_euler_characteristic(&b3, &Limits::default()).unwrap(), -1);
    }

    #[test]
    fn whole_complex_matches_mobius_number() {
        for p in [FinitePoset::antichain(3), FinitePoset::chain(3), disconnected_fixture()] {
            assert_eq!(order_complex_euler(&p, &Limits::default()).unwrap(), p.mobius_number());
        }
    }

    #[test]
    fn guard_trips() {
        let limits = Limits { max_chain_interior: 2, ..Limits::default() };
        let err = reduced_euler_characteristic(&FinitePoset::boolean_lattice(3), &limits).unwrap_err();
        assert!(matches!(err, Error::SizeGuard { .. }));
    }
}
