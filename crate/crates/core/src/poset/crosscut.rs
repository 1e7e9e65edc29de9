use fixedbitset::FixedBitSet;

use super::{FinitePoset, Limits};
use crate::error::{Error, Result};

/// `mu(bottom, top)` by the crosscut theorem on the atom set:
/// the sum of `(-1)^|S|` over nonempty atom subsets `S` whose join is the top.
///
/// Every nonempty subset must have a join; a subset with several minimal
/// upper bounds is reported as [`Error::CrosscutInapplicable`]. In the
/// 2-chain the only atom is the top itself, giving -1. A one-element poset
/// gives 1.
pub fn crosscut_mobius(poset: &FinitePoset, limits: &Limits) -> Result<i64> {
    let (bottom, top) = poset.bounds()?;
    if bottom == top {
        return Ok(1);
    }
    let atoms = poset.upper_covers(bottom).to_vec();
    if atoms.len() > limits.max_chain_interior {
        return Err(Error::SizeGuard {
            what: "atom set",
            size: atoms.len(),
            limit: limits.max_chain_interior,
        });
    }
    let n = poset.len();
    let mut total = 0i64;
    for mask in 1u64..(1u64 << atoms.len()) {
        let mut upper = FixedBitSet::with_capacity(n);
        upper.insert_range(..);
        let mut chosen = Vec::new();
        for (i, &a) in atoms.iter().enumerate() {
            if mask & (1 << i) != 0 {
                upper.intersect_with(poset.up_set(a));
                chosen.push(a);
            }
        }
        let minimal: Vec<_> = upper
            .ones()
            .filter(|&u| poset.lower_covers(u).iter().all(|&l| !upper.contains(l)))
            .collect();
        if minimal.len() != 1 {
            return Err(Error::CrosscutInapplicable {
                atoms: chosen,
                minimal_upper_bounds: minimal.len(),
            });
        }
        if minimal[0] == top {
            total += if chosen.len() % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(total)
}
