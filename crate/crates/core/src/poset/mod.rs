//! Finite posets stored as an explicit Hasse diagram plus its transitive closure.
//!
//! Elements are opaque `usize` ids with display labels. Every constructor
//! validates the input and computes the closure and the cover relation
//! centrally, so downstream code never has to trust that a builder emitted
//! a minimal cover set.

mod crosscut;
mod euler;
mod io;
mod mobius;
mod rao;
mod structure;

use std::collections::VecDeque;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{input, Error, Result};

pub use crosscut::crosscut_mobius;
pub use euler::{order_complex_euler, reduced_euler_characteristic};
pub use io::{ElementJson, PosetJson};
pub use mobius::{mobius_number_of, MobiusTable};
pub use rao::{
    all_element_orderings, check_r2_at, check_rao, find_rao, r2_witness, rao_violations, AtomOrdering,
    ElementOrdering, ExplicitOrdering, FnOrdering, LinearOrder, RaoCertificate, RaoOutcome, RaoViolation,
};
pub use structure::{RankInfo, StructureReport};

pub type ElementId = usize;

/// Size guards for the exponential routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest interior for which chains are enumerated explicitly.
    pub max_chain_interior: usize,
    /// Largest interior for which all atom orderings are searched.
    pub max_rao_interior: usize,
    /// Cap on the number of rooted intervals visited by `check_rao`.
    pub max_rooted_intervals: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_chain_interior: 20,
            max_rao_interior: 14,
            max_rooted_intervals: 5_000_000,
        }
    }
}

impl Limits {
    pub const ENV_VAR: &'static str = "PATPOS_MAX_INTERIOR";

    /// Defaults, with both interior guards replaced by `PATPOS_MAX_INTERIOR` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
        {
            limits.max_chain_interior = v;
            limits.max_rao_interior = v;
        }
        limits
    }
}

#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    /// `up[x]` holds every `y` with `x <= y` (reflexive).
    up: Vec<FixedBitSet>,
    /// `down[y]` holds every `x` with `x <= y` (reflexive).
    down: Vec<FixedBitSet>,
    upper_covers: Vec<Vec<ElementId>>,
    lower_covers: Vec<Vec<ElementId>>,
    /// A linear extension: every element appears after everything below it.
    linear: Vec<ElementId>,
    bottom: Option<ElementId>,
    top: Option<ElementId>,
    /// Lazily computed rows `mu(a, -)` and columns `mu(-, b)`.
    mobius_rows: Vec<OnceLock<Vec<i64>>>,
    mobius_cols: Vec<OnceLock<Vec<i64>>>,
}

impl FinitePoset {
    /// Builds a poset from an order predicate `leq(a, b)`.
    ///
    /// The predicate is evaluated on every ordered pair; reflexivity is
    /// implied, antisymmetry and transitivity are checked.
    pub fn from_leq<F>(labels: Vec<String>, mut leq: F) -> Result<Self>
    where
        F: FnMut(ElementId, ElementId) -> bool,
    {
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            up[a].insert(a);
            for b in 0..n {
                if a != b && leq(a, b) {
                    up[a].insert(b);
                }
            }
        }
        for a in 0..n {
            for b in up[a].ones() {
                if b != a && up[b].contains(a) {
                    return input(format!(
                        "relation is not antisymmetric on {:?} and {:?}",
                        labels[a], labels[b]
                    ));
                }
                if !up[b].is_subset(&up[a]) {
                    return input(format!(
                        "relation is not transitive through {:?} <= {:?}",
                        labels[a], labels[b]
                    ));
                }
            }
        }
        Ok(Self::from_closure(labels, up))
    }

    /// Builds a poset from raw strict comparabilities `(lower, upper)`,
    /// taking the transitive closure and reduction.
    pub fn from_comparabilities(labels: Vec<String>, pairs: &[(ElementId, ElementId)]) -> Result<Self> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(a.max(b)));
            }
            if a == b {
                return input(format!("reflexive pair on {:?} is not a strict comparability", labels[a]));
            }
            succ[a].push(b);
        }
        let order = topological_order(&succ).ok_or_else(|| Error::Input("comparabilities contain a cycle".into()))?;
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &x in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &succ[x] {
                set.union_with(&up[y]);
            }
            up[x] = set;
        }
        Ok(Self::from_closure(labels, up))
    }

    /// Builds a poset from an explicit Hasse diagram and validates it:
    /// acyclic, no cover implied by the others, and declared bounds really are bounds.
    pub fn from_covers(
        labels: Vec<String>,
        covers: &[(ElementId, ElementId)],
        bottom: Option<ElementId>,
        top: Option<ElementId>,
    ) -> Result<Self> {
        let poset = Self::from_comparabilities(labels, covers)?;
        for &(a, b) in covers {
            if !poset.upper_covers[a].contains(&b) {
                return input(format!(
                    "cover {:?} < {:?} is implied by other covers (diagram is not Hasse-minimal)",
                    poset.labels[a], poset.labels[b]
                ));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in covers {
            if !seen.insert((a, b)) {
                return input(format!("duplicate cover {:?} < {:?}", poset.labels[a], poset.labels[b]));
            }
        }
        if let Some(b) = bottom {
            poset.check_id(b)?;
            if poset.up[b].count_ones(..) != poset.len() {
                return input(format!("declared bottom {:?} is not below every element", poset.labels[b]));
            }
        }
        if let Some(t) = top {
            poset.check_id(t)?;
            if poset.down[t].count_ones(..) != poset.len() {
                return input(format!("declared top {:?} is not above every element", poset.labels[t]));
            }
        }
        Ok(poset)
    }

    fn from_closure(labels: Vec<String>, up: Vec<FixedBitSet>) -> Self {
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, set) in up.iter().enumerate() {
            for b in set.ones() {
                down[b].insert(a);
            }
        }
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for a in 0..n {
            for b in up[a].ones() {
                if a == b {
                    continue;
                }
                // a < b is a cover iff [a, b] = {a, b}
                let between = up[a].intersection(&down[b]).count();
                if between == 2 {
                    upper_covers[a].push(b);
                    lower_covers[b].push(a);
                }
            }
        }
        let mut linear: Vec<ElementId> = (0..n).collect();
        linear.sort_by_key(|&x| (down[x].count_ones(..), x));
        let bottom = (0..n).find(|&x| up[x].count_ones(..) == n);
        let top = (0..n).find(|&x| down[x].count_ones(..) == n);
        FinitePoset {
            labels,
            up,
            down,
            upper_covers,
            lower_covers,
            linear,
            bottom,
            top,
            mobius_rows: (0..n).map(|_| OnceLock::new()).collect(),
            mobius_cols: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    /// A chain with `len` elements labelled `0..len`.
    pub fn chain(len: usize) -> Self {
        let labels = (0..len).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_comparabilities(labels, &covers).expect("chain is acyclic")
    }

    /// An antichain with `len` elements.
    pub fn antichain(len: usize) -> Self {
        Self::from_comparabilities((0..len).map(|i| i.to_string()).collect(), &[]).expect("antichain")
    }

    /// The boolean lattice of subsets of `{1..rank}`, labelled by subset.
    pub fn boolean_lattice(rank: usize) -> Self {
        let n = 1usize << rank;
        let labels = (0..n)
            .map(|mask| {
                let s: Vec<String> = (0..rank).filter(|i| mask & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", s.join(","))
            })
            .collect();
        Self::from_leq(labels, |a, b| a & b == a).expect("subset order")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn bottom(&self) -> Option<ElementId> {
        self.bottom
    }

    pub fn top(&self) -> Option<ElementId> {
        self.top
    }

    pub fn is_bounded(&self) -> bool {
        self.bottom.is_some() && self.top.is_some()
    }

    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.up[a].contains(b)
    }

    pub fn up_set(&self, x: ElementId) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn down_set(&self, x: ElementId) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn upper_covers(&self, x: ElementId) -> &[ElementId] {
        &self.upper_covers[x]
    }

    pub fn lower_covers(&self, x: ElementId) -> &[ElementId] {
        &self.lower_covers[x]
    }

    pub fn covers(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.upper_covers
            .iter()
            .enumerate()
            .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
    }

    pub fn cover_count(&self) -> usize {
        self.upper_covers.iter().map(Vec::len).sum()
    }

    pub fn linear_extension(&self) -> &[ElementId] {
        &self.linear
    }

    pub fn minimal_elements(&self) -> Vec<ElementId> {
        (0..self.len()).filter(|&x| self.lower_covers[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<ElementId> {
        (0..self.len()).filter(|&x| self.upper_covers[x].is_empty()).collect()
    }

    pub(crate) fn check_id(&self, x: ElementId) -> Result<()> {
        if x < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(x))
        }
    }

    /// Induced subposet on `ids` (in the given order); element `i` of the
    /// result corresponds to `ids[i]`.
    pub fn induced(&self, ids: &[ElementId]) -> FinitePoset {
        let n = ids.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, &a) in ids.iter().enumerate() {
            for (j, &b) in ids.iter().enumerate() {
                if self.leq(a, b) {
                    up[i].insert(j);
                }
            }
        }
        let labels = ids.iter().map(|&x| self.labels[x].clone()).collect();
        Self::from_closure(labels, up)
    }

    /// `P̂`: a copy with a fresh bottom (id `len`) and fresh top (id `len + 1`).
    pub fn with_fresh_bounds(&self, bottom_label: &str, top_label: &str) -> FinitePoset {
        let n = self.len();
        let m = n + 2;
        let mut up = vec![FixedBitSet::with_capacity(m); m];
        for a in 0..n {
            for b in self.up[a].ones() {
                up[a].insert(b);
            }
            up[a].insert(n + 1);
        }
        up[n].insert_range(..);
        up[n + 1].insert(n + 1);
        let mut labels = self.labels.clone();
        labels.push(bottom_label.to_string());
        labels.push(top_label.to_string());
        Self::from_closure(labels, up)
    }

    /// Elements strictly between the bottom and top, in id order.
    pub fn interior_ids(&self) -> Result<Vec<ElementId>> {
        let (b, t) = self.bounds()?;
        Ok((0..self.len()).filter(|&x| x != b && x != t).collect())
    }

    pub(crate) fn bounds(&self) -> Result<(ElementId, ElementId)> {
        match (self.bottom, self.top) {
            (Some(b), Some(t)) => Ok((b, t)),
            _ => input("operation requires a bounded poset"),
        }
    }

    /// Elements of the closed interval `[a, b]`.
    pub fn interval_ids(&self, a: ElementId, b: ElementId) -> Vec<ElementId> {
        let mut set = self.up[a].clone();
        set.intersect_with(&self.down[b]);
        set.ones().collect()
    }

    /// Connected components of the comparability graph restricted to `ids`.
    pub fn components_of(&self, ids: &[ElementId]) -> Vec<Vec<ElementId>> {
        let mut member = FixedBitSet::with_capacity(self.len());
        for &x in ids {
            member.insert(x);
        }
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut comps = Vec::new();
        for &start in ids {
            if seen.contains(start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &y in self.upper_covers[x].iter().chain(self.lower_covers[x].iter()) {
                    if member.contains(y) && !seen.contains(y) {
                        seen.insert(y);
                        queue.push_back(y);
                    }
                }
                // comparabilities that skip non-members still connect components
                for y in self.up[x].ones().chain(self.down[x].ones()) {
                    if member.contains(y) && !seen.contains(y) {
                        seen.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Connected components of the whole poset.
    pub fn components(&self) -> Vec<Vec<ElementId>> {
        let ids: Vec<_> = (0..self.len()).collect();
        self.components_of(&ids)
    }

    /// True when the poset has at least two connected components.
    pub fn is_disconnected(&self) -> bool {
        self.components().len() >= 2
    }

    /// Length of the longest chain ending at each element, from the minimal elements.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for &x in &self.linear {
            for &y in &self.lower_covers[x] {
                h[x] = h[x].max(h[y] + 1);
            }
        }
        h
    }

    /// True when `other` is order-isomorphic to `self` (backtracking search, small posets only).
    pub fn is_isomorphic(&self, other: &FinitePoset) -> bool {
        if self.len() != other.len() || self.cover_count() != other.cover_count() {
            return false;
        }
        let sig = |p: &FinitePoset, x: ElementId| {
            (
                p.up[x].count_ones(..),
                p.down[x].count_ones(..),
                p.upper_covers[x].len(),
                p.lower_covers[x].len(),
            )
        };
        let order: Vec<ElementId> = self.linear.clone();
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        fn go(
            i: usize,
            order: &[ElementId],
            a: &FinitePoset,
            b: &FinitePoset,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            sig: &dyn Fn(&FinitePoset, ElementId) -> (usize, usize, usize, usize),
        ) -> bool {
            if i == order.len() {
                return true;
            }
            let x = order[i];
            let sx = sig(a, x);
            for y in 0..b.len() {
                if used[y] || sig(b, y) != sx {
                    continue;
                }
                let consistent = order[..i].iter().all(|&p| {
                    let q = map[p];
                    a.leq(p, x) == b.leq(q, y) && a.leq(x, p) == b.leq(y, q)
                });
                if !consistent {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(i + 1, order, a, b, map, used, sig) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
            false
        }
        go(0, &order, self, other, &mut map, &mut used, &sig)
    }
}

fn topological_order(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for outs in succ {
        for &b in outs {
            indeg[b] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push_back(y);
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_reduction() {
        let p = FinitePoset::from_comparabilities(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.upper_covers(0), &[1]);
        assert_eq!(p.cover_count(), 2);
        assert_eq!(p.bottom(), Some(0));
        assert_eq!(p.top(), Some(2));
    }

    #[test]
    fn non_minimal_cover_set_rejected() {
        let err = FinitePoset::from_covers(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 1), (1, 2), (0, 2)],
            None,
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("Hasse"));
    }

    #[test]
    fn cycles_rejected() {
        assert!(FinitePoset::from_comparabilities(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn bad_bounds_rejected() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(FinitePoset::from_covers(labels.clone(), &[], Some(0), None).is_err());
        assert!(FinitePoset::from_covers(labels, &[(0, 1)], Some(0), Some(1)).is_ok());
    }

    #[test]
    fn non_transitive_predicate_rejected() {
        let err = FinitePoset::from_leq(vec!["a".into(), "b".into(), "c".into()], |a, b| b == a + 1).unwrap_err();
        assert!(err.to_string().contains("transitive"));
    }

    #[test]
    fn fresh_bounds_and_interior() {
        let p = FinitePoset::antichain(2).with_fresh_bounds("0", "1");
        assert_eq!(p.len(), 4);
        assert_eq!(p.bottom(), Some(2));
        assert_eq!(p.top(), Some(3));
        assert_eq!(p.interior_ids().unwrap(), vec![0, 1]);
    }

    #[test]
    fn boolean_lattice_shape() {
        let b3 = FinitePoset::boolean_lattice(3);
        assert_eq!(b3.len(), 8);
        assert_eq!(b3.cover_count(), 12);
        assert!(b3.is_bounded());
    }

    #[test]
    fn isomorphism_check() {
        let a = FinitePoset::boolean_lattice(2);
        let b = FinitePoset::antichain(2).with_fresh_bounds("x", "y");
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&FinitePoset::chain(4)));
    }

    #[test]
    fn disconnected_fixture_components() {
        let p = crate::fixtures::disconnected_rank_four();
        let interior = p.interior_ids().unwrap();
        let mut sizes: Vec<_> = p.components_of(&interior).iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 6]);
    }
}
