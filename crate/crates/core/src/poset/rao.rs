//! Recursive atom orderings.
//!
//! A rooted interval is identified by its root chain `c = (bottom, c_1, ..., alpha)`.
//! Condition R1 asks that the atoms of `alpha` covering something ordered
//! before `alpha` (among the atoms of the previous chain element) come first.
//! Condition R2 asks that for `i < j` and any `y` above `a_i` and `a_j` there
//! is some `k < j` and an atom `z` of `a_j` with `a_k < z <= y`.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{ElementId, FinitePoset, Limits};
use crate::error::{input, Error, Result};

/// Supplies the atom order of every rooted interval.
pub trait AtomOrdering {
    /// Orders `atoms`, the atoms of `[alpha, top]` with `alpha = chain.last()`.
    fn order(&self, poset: &FinitePoset, chain: &[ElementId], atoms: &[ElementId]) -> Result<Vec<ElementId>>;

    /// True when `order` ignores everything in `chain` except its last element.
    fn chain_independent(&self) -> bool {
        false
    }
}

/// A linear order on all elements; every atom list is sorted by it.
#[derive(Clone, Debug)]
pub struct LinearOrder {
    position: Vec<usize>,
}

impl LinearOrder {
    /// `sequence` lists every element id exactly once, earliest first.
    pub fn new(sequence: &[ElementId], size: usize) -> Result<Self> {
        let mut position = vec![usize::MAX; size];
        for (i, &x) in sequence.iter().enumerate() {
            if x >= size {
                return Err(Error::UnknownElement(x));
            }
            if position[x] != usize::MAX {
                return input(format!("element {x} appears twice in the linear order"));
            }
            position[x] = i;
        }
        if let Some(missing) = position.iter().position(|&p| p == usize::MAX) {
            return input(format!("linear order does not cover element {missing}"));
        }
        Ok(LinearOrder { position })
    }

    /// Orders elements by a sort key, ties broken by id.
    pub fn by_key<K: Ord>(size: usize, key: impl Fn(ElementId) -> K) -> Self {
        let mut ids: Vec<_> = (0..size).collect();
        ids.sort_by(|&a, &b| key(a).cmp(&key(b)).then(a.cmp(&b)));
        Self::new(&ids, size).expect("permutation of ids")
    }

    pub fn position(&self, x: ElementId) -> usize {
        self.position[x]
    }

    pub fn sequence(&self) -> Vec<ElementId> {
        let mut ids: Vec<_> = (0..self.position.len()).collect();
        ids.sort_by_key(|&x| self.position[x]);
        ids
    }
}

impl AtomOrdering for LinearOrder {
    fn order(&self, poset: &FinitePoset, _chain: &[ElementId], atoms: &[ElementId]) -> Result<Vec<ElementId>> {
        if self.position.len() != poset.len() {
            return input("linear order size does not match the poset");
        }
        let mut out = atoms.to_vec();
        out.sort_by_key(|&a| self.position[a]);
        Ok(out)
    }

    fn chain_independent(&self) -> bool {
        true
    }
}

/// Atom orders listed per root chain.
#[derive(Clone, Debug, Default)]
pub struct ExplicitOrdering {
    pub orders: HashMap<Vec<ElementId>, Vec<ElementId>>,
}

impl AtomOrdering for ExplicitOrdering {
    fn order(&self, poset: &FinitePoset, chain: &[ElementId], _atoms: &[ElementId]) -> Result<Vec<ElementId>> {
        self.orders
            .get(chain)
            .cloned()
            .ok_or_else(|| Error::MissingOrdering(chain_label(poset, chain)))
    }
}

/// Atom orders chosen per element, independent of the root chain.
#[derive(Clone, Debug, Default)]
pub struct ElementOrdering {
    pub orders: HashMap<ElementId, Vec<ElementId>>,
}

impl AtomOrdering for ElementOrdering {
    fn order(&self, poset: &FinitePoset, chain: &[ElementId], _atoms: &[ElementId]) -> Result<Vec<ElementId>> {
        let alpha = *chain.last().expect("nonempty chain");
        self.orders
            .get(&alpha)
            .cloned()
            .ok_or_else(|| Error::MissingOrdering(chain_label(poset, chain)))
    }

    fn chain_independent(&self) -> bool {
        true
    }
}

/// Wraps a closure as an [`AtomOrdering`].
pub struct FnOrdering<F>(pub F);

impl<F> AtomOrdering for FnOrdering<F>
where
    F: Fn(&FinitePoset, &[ElementId], &[ElementId]) -> Result<Vec<ElementId>>,
{
    fn order(&self, poset: &FinitePoset, chain: &[ElementId], atoms: &[ElementId]) -> Result<Vec<ElementId>> {
        (self.0)(poset, chain, atoms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaoCertificate {
    /// Rooted intervals examined (with chain-independent orders, distinct cover edges into each root).
    pub rooted_intervals: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum RaoViolation {
    R1 {
        chain: Vec<ElementId>,
        order: Vec<ElementId>,
        omega: Vec<ElementId>,
        /// A non-omega atom placed before `omega_atom`.
        early: ElementId,
        omega_atom: ElementId,
    },
    R2 {
        chain: Vec<ElementId>,
        order: Vec<ElementId>,
        a_i: ElementId,
        a_j: ElementId,
        y: ElementId,
    },
}

impl RaoViolation {
    pub fn describe(&self, poset: &FinitePoset) -> String {
        let l = |x: &ElementId| poset.label(*x).to_string();
        match self {
            RaoViolation::R1 { chain, early, omega_atom, .. } => format!(
                "R1 fails at {}: {} is ordered before {} which must come first",
                chain_label(poset, chain),
                l(early),
                l(omega_atom)
            ),
            RaoViolation::R2 { chain, a_i, a_j, y, .. } => format!(
                "R2 fails at {}: atoms {} < {} below {} with no earlier atom reaching an atom of {} under {}",
                chain_label(poset, chain),
                l(a_i),
                l(a_j),
                l(y),
                l(a_j),
                l(y)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome")]
pub enum RaoOutcome {
    Pass(RaoCertificate),
    Violation(RaoViolation),
}

impl RaoOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, RaoOutcome::Pass(_))
    }
}

pub(crate) fn chain_label(poset: &FinitePoset, chain: &[ElementId]) -> String {
    let parts: Vec<_> = chain.iter().map(|&x| poset.label(x).to_string()).collect();
    format!("[{}]", parts.join(" < "))
}

fn validate_order(poset: &FinitePoset, chain: &[ElementId], atoms: &[ElementId], order: &[ElementId]) -> Result<()> {
    let mut a = atoms.to_vec();
    let mut o = order.to_vec();
    a.sort_unstable();
    o.sort_unstable();
    if a != o {
        return Err(Error::MissingOrdering(chain_label(poset, chain)));
    }
    Ok(())
}

/// The atoms of `alpha` covering an element of `before`.
fn omega(poset: &FinitePoset, alpha: ElementId, before: &[ElementId]) -> Vec<ElementId> {
    poset
        .upper_covers(alpha)
        .iter()
        .copied()
        .filter(|&a| poset.lower_covers(a).iter().any(|l| before.contains(l)))
        .collect()
}

fn check_r1(chain: &[ElementId], order: &[ElementId], omega: &[ElementId]) -> Option<RaoViolation> {
    let mut seen_other = None;
    for &a in order {
        if omega.contains(&a) {
            if let Some(early) = seen_other {
                return Some(RaoViolation::R1 {
                    chain: chain.to_vec(),
                    order: order.to_vec(),
                    omega: omega.to_vec(),
                    early,
                    omega_atom: a,
                });
            }
        } else if seen_other.is_none() {
            seen_other = Some(a);
        }
    }
    None
}

fn check_r2(poset: &FinitePoset, chain: &[ElementId], order: &[ElementId]) -> Option<RaoViolation> {
    let n = poset.len();
    // strictly above some earlier atom
    let mut above_earlier = FixedBitSet::with_capacity(n);
    for (j, &aj) in order.iter().enumerate() {
        if j > 0 {
            let mut reachable = FixedBitSet::with_capacity(n);
            for &z in poset.upper_covers(aj) {
                if above_earlier.contains(z) {
                    reachable.union_with(poset.up_set(z));
                }
            }
            for &ai in &order[..j] {
                let mut common = poset.up_set(ai).clone();
                common.intersect_with(poset.up_set(aj));
                if let Some(y) = common.difference(&reachable).next() {
                    return Some(RaoViolation::R2 {
                        chain: chain.to_vec(),
                        order: order.to_vec(),
                        a_i: ai,
                        a_j: aj,
                        y,
                    });
                }
            }
        }
        for y in poset.up_set(aj).ones() {
            if y != aj {
                above_earlier.insert(y);
            }
        }
    }
    None
}

/// Checks R1 and R2 on every rooted interval reachable from the bottom and
/// returns the first violation found.
///
/// For chain-independent orderings each (parent, root) pair is visited once,
/// since both conditions depend on nothing else.
pub fn check_rao(poset: &FinitePoset, ordering: &dyn AtomOrdering, limits: &Limits) -> Result<RaoOutcome> {
    let (visited, mut violations) = walk(poset, ordering, limits, true)?;
    Ok(match violations.pop() {
        Some(v) => RaoOutcome::Violation(v),
        None => RaoOutcome::Pass(RaoCertificate { rooted_intervals: visited }),
    })
}

/// Like [`check_rao`] but keeps going and returns every violation.
pub fn rao_violations(poset: &FinitePoset, ordering: &dyn AtomOrdering, limits: &Limits) -> Result<Vec<RaoViolation>> {
    Ok(walk(poset, ordering, limits, false)?.1)
}

/// R2 on the single rooted interval above `alpha` with the given atom order.
pub fn check_r2_at(poset: &FinitePoset, alpha: ElementId, order: &[ElementId]) -> Option<RaoViolation> {
    check_r2(poset, &[alpha], order)
}

/// For atoms `a_i` before `a_j` in `order` and `y` above both, an earlier atom
/// `a_k` and an atom `z` of `a_j` with `a_k < z <= y`, if one exists.
pub fn r2_witness(
    poset: &FinitePoset,
    order: &[ElementId],
    a_j: ElementId,
    y: ElementId,
) -> Option<(ElementId, ElementId)> {
    let j = order.iter().position(|&x| x == a_j)?;
    for &a_k in &order[..j] {
        for &z in poset.upper_covers(a_j) {
            if poset.lt(a_k, z) && poset.leq(z, y) {
                return Some((a_k, z));
            }
        }
    }
    None
}

fn walk(
    poset: &FinitePoset,
    ordering: &dyn AtomOrdering,
    limits: &Limits,
    stop_early: bool,
) -> Result<(usize, Vec<RaoViolation>)> {
    let (bottom, top) = poset.bounds()?;
    if !poset.rank_info().is_pure {
        return input("recursive atom orderings are only checked on pure posets");
    }
    let mut violations = Vec::new();
    let mut visited = 0usize;
    let mut orders: HashMap<ElementId, Vec<ElementId>> = HashMap::new();
    let mut seen_edges: HashSet<(ElementId, ElementId)> = HashSet::new();
    let independent = ordering.chain_independent();

    // explicit stack of chains; each entry carries its parent's atom order
    let mut stack: Vec<(Vec<ElementId>, Option<Vec<ElementId>>)> = vec![(vec![bottom], None)];
    while let Some((chain, parent_order)) = stack.pop() {
        let alpha = *chain.last().expect("nonempty chain");
        if alpha == top {
            continue;
        }
        visited += 1;
        if visited > limits.max_rooted_intervals {
            return Err(Error::SizeGuard {
                what: "rooted interval count",
                size: visited,
                limit: limits.max_rooted_intervals,
            });
        }
        let atoms = poset.upper_covers(alpha);
        let cached = if independent { orders.get(&alpha).cloned() } else { None };
        let order = match cached {
            Some(o) => o,
            None => {
                let o = ordering.order(poset, &chain, atoms)?;
                validate_order(poset, &chain, atoms, &o)?;
                if let Some(v) = check_r2(poset, &chain, &o) {
                    violations.push(v);
                    if stop_early {
                        return Ok((visited, violations));
                    }
                }
                if independent {
                    orders.insert(alpha, o.clone());
                }
                o
            }
        };
        if let Some(parent_order) = &parent_order {
            let pos = parent_order.iter().position(|&x| x == alpha).expect("alpha is a parent atom");
            let om = omega(poset, alpha, &parent_order[..pos]);
            if let Some(v) = check_r1(&chain, &order, &om) {
                violations.push(v);
                if stop_early {
                    return Ok((visited, violations));
                }
            }
        }
        for &a in order.iter().rev() {
            if a == top {
                continue;
            }
            if independent && !seen_edges.insert((alpha, a)) {
                continue;
            }
            let mut next = chain.clone();
            next.push(a);
            stack.push((next, Some(order.clone())));
        }
    }
    Ok((visited, violations))
}

/// Exhaustive search for a recursive atom ordering.
///
/// Whether a rooted interval can be completed depends only on its root and
/// the set of atoms R1 forces to the front, so the search is memoized on
/// that pair. Refuses posets whose interior exceeds `limits.max_rao_interior`.
pub fn find_rao(poset: &FinitePoset, limits: &Limits) -> Result<Option<ExplicitOrdering>> {
    let (bottom, top) = poset.bounds()?;
    let interior = poset.len().saturating_sub(2);
    if interior > limits.max_rao_interior {
        return Err(Error::SizeGuard {
            what: "interior for exhaustive RAO search",
            size: interior,
            limit: limits.max_rao_interior,
        });
    }
    if !poset.rank_info().is_pure {
        return input("recursive atom orderings are only searched on pure posets");
    }
    let mut search = Search {
        poset,
        top,
        memo: HashMap::new(),
    };
    if search.feasible(bottom, &[]).is_none() {
        return Ok(None);
    }
    let mut out = ExplicitOrdering::default();
    search.emit(vec![bottom], Vec::new(), &mut out);
    Ok(Some(out))
}

struct Search<'a> {
    poset: &'a FinitePoset,
    top: ElementId,
    memo: HashMap<(ElementId, Vec<ElementId>), Option<Vec<ElementId>>>,
}

impl Search<'_> {
    fn feasible(&mut self, alpha: ElementId, omega_set: &[ElementId]) -> Option<Vec<ElementId>> {
        if alpha == self.top {
            return Some(Vec::new());
        }
        let key = (alpha, omega_set.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let atoms = self.poset.upper_covers(alpha).to_vec();
        let (front, back): (Vec<_>, Vec<_>) = atoms.iter().partition(|a| omega_set.contains(a));
        let mut found = None;
        'perm: for f in permutations(&front) {
            for b in permutations(&back) {
                let order: Vec<_> = f.iter().chain(b.iter()).copied().collect();
                if check_r2(self.poset, &[alpha], &order).is_some() {
                    continue;
                }
                let mut ok = true;
                for (j, &a) in order.iter().enumerate() {
                    let om = omega(self.poset, a, &order[..j]);
                    if self.feasible(a, &om).is_none() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    found = Some(order);
                    break 'perm;
                }
            }
        }
        self.memo.insert(key, found.clone());
        found
    }

    fn emit(&mut self, chain: Vec<ElementId>, omega_set: Vec<ElementId>, out: &mut ExplicitOrdering) {
        let alpha = *chain.last().expect("nonempty chain");
        if alpha == self.top {
            return;
        }
        let order = self.feasible(alpha, &omega_set).expect("feasible by construction");
        for (j, &a) in order.iter().enumerate() {
            let om = omega(self.poset, a, &order[..j]);
            let mut next = chain.clone();
            next.push(a);
            self.emit(next, om, out);
        }
        out.orders.insert(chain, order);
    }
}

fn permutations(items: &[ElementId]) -> Vec<Vec<ElementId>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every chain-independent ordering (one permutation of the atoms per element).
pub fn all_element_orderings(poset: &FinitePoset) -> Vec<ElementOrdering> {
    let mut result = vec![ElementOrdering::default()];
    for x in 0..poset.len() {
        let perms = permutations(poset.upper_covers(x));
        let mut next = Vec::with_capacity(result.len() * perms.len());
        for base in &result {
            for p in &perms {
                let mut o = base.clone();
                o.orders.insert(x, p.clone());
                next.push(o);
            }
        }
        result = next;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn by_label(p: &FinitePoset, labels: &[&str]) -> LinearOrder {
        let seq: Vec<_> = labels.iter().map(|l| p.find_label(l).unwrap()).collect();
        LinearOrder::new(&seq, p.len()).unwrap()
    }

    const LABEL_ORDER: [&str; 10] = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10"];

    #[test]
    fn labelled_order_local_conditions() {
        let p = fixtures::shelling_source();
        let id = |l: &str| p.find_label(l).unwrap();
        let order = by_label(&p, &LABEL_ORDER);
        let two = id("2");
        let atoms = order.order(&p, &[id("1"), two], p.upper_covers(two)).unwrap();
        assert_eq!(atoms, vec![id("4"), id("5"), id("7")]);
        assert!(check_r2_at(&p, two, &atoms).is_none());
        assert_eq!(r2_witness(&p, &atoms, id("7"), id("10")), Some((id("5"), id("9"))));
    }

    #[test]
    fn labelled_order_fails_only_at_the_bottom() {
        // [1, 9] has the disconnected interior {2, 5, 7} + {3, 6}
        let p = fixtures::shelling_source();
        let id = |l: &str| p.find_label(l).unwrap();
        let order = by_label(&p, &LABEL_ORDER);
        let all = rao_violations(&p, &order, &Limits::default()).unwrap();
        assert_eq!(
            all,
            vec![RaoViolation::R2 {
                chain: vec![id("1")],
                order: vec![id("2"), id("3")],
                a_i: id("2"),
                a_j: id("3"),
                y: id("9"),
            }]
        );
        assert!(find_rao(&p, &Limits::default()).unwrap().is_none());
    }

    #[test]
    fn swapped_atoms_violate_r2() {
        let p = fixtures::shelling_source();
        let id = |l: &str| p.find_label(l).unwrap();
        let swapped = [id("4"), id("7"), id("5")];
        match check_r2_at(&p, id("2"), &swapped) {
            Some(RaoViolation::R2 { a_i, a_j, y, .. }) => {
                assert_eq!((a_i, a_j, y), (id("4"), id("7"), id("10")));
            }
            other => panic!("expected an R2 violation, got {other:?}"),
        }
        assert_eq!(r2_witness(&p, &swapped, id("7"), id("10")), None);
    }

    #[test]
    fn omega_forces_order() {
        let p = fixtures::shelling_source();
        let id = |l: &str| p.find_label(l).unwrap();
        let om = omega(&p, id("3"), &[id("2")]);
        assert_eq!(om, vec![id("4")]);
        // putting 6 before 4 breaks R1 at the root chain 1 < 3
        let order = by_label(&p, &["1", "2", "3", "6", "5", "4", "7", "8", "9", "10"]);
        let all = rao_violations(&p, &order, &Limits::default()).unwrap();
        assert!(all.iter().any(|v| matches!(v, RaoViolation::R1 { chain, .. } if chain == &vec![id("1"), id("3")])));
    }

    #[test]
    fn disconnected_poset_has_no_rao() {
        let p = fixtures::disconnected_rank_four();
        assert!(find_rao(&p, &Limits::default()).unwrap().is_none());
        for o in all_element_orderings(&p) {
            assert!(!check_rao(&p, &o, &Limits::default()).unwrap().passed());
        }
    }

    #[test]
    fn found_orderings_verify() {
        for p in [FinitePoset::boolean_lattice(3), fixtures::shelling_target()] {
            let found = find_rao(&p, &Limits::default()).unwrap().expect("shellable");
            assert!(check_rao(&p, &found, &Limits::default()).unwrap().passed());
        }
    }

    #[test]
    fn missing_ordering_is_an_error() {
        let p = FinitePoset::boolean_lattice(2);
        let err = check_rao(&p, &ExplicitOrdering::default(), &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::MissingOrdering(_)));
    }

    #[test]
    fn explicit_matches_linear() {
        let p = FinitePoset::boolean_lattice(3);
        let lin = LinearOrder::by_key(p.len(), |x| x);
        let explicit = FnOrdering(|q: &FinitePoset, c: &[ElementId], a: &[ElementId]| lin.order(q, c, a));
        assert_eq!(
            check_rao(&p, &lin, &Limits::default()).unwrap().passed(),
            check_rao(&p, &explicit, &Limits::default()).unwrap().passed()
        );
    }
}
