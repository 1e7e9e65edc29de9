//! Embeddings of one element in another, adjacencies, and the normal and
//! representative filters used by the fibration formulas.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::system::{Kind, PatternSystem, Slot};
use crate::word::Word;

/// One occurrence written out over the base: dashes at unused positions.
///
/// Permutation kinds store the base letters at used positions (`-56--3`);
/// word kinds store the pattern letters (`121--` in `13211`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Embedding {
    base: Word,
    slots: Vec<Slot>,
    pattern: Word,
}

/// Empty positions of an embedding, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ZeroSet(pub BTreeSet<usize>);

impl fmt::Display for ZeroSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Embedding {
    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// The element obtained by deleting dashes, in canonical form.
    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_dash(&self, i: usize) -> bool {
        self.slots[i] == Slot::Dash
    }

    /// Used positions, 0-based.
    pub fn positions(&self) -> Vec<usize> {
        (0..self.slots.len()).filter(|&i| !self.is_dash(i)).collect()
    }

    /// Dash positions, 0-based.
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.slots.len()).filter(|&i| self.is_dash(i)).collect()
    }

    pub fn zero_set(&self) -> ZeroSet {
        ZeroSet(self.zeros().into_iter().map(|i| i + 1).collect())
    }

    /// The embedding of the base in itself.
    pub fn full(sys: &PatternSystem, base: &Word) -> Embedding {
        Embedding {
            base: base.clone(),
            slots: base.letters().iter().map(|&l| Slot::Letter(l)).collect(),
            pattern: sys.canonical(base.letters()),
        }
    }

    fn letters(&self) -> Vec<u32> {
        self.slots
            .iter()
            .filter_map(|s| match s {
                Slot::Letter(l) => Some(*l),
                Slot::Dash => None,
            })
            .collect()
    }

    /// Builds and validates an embedding from explicit slots.
    pub fn from_slots(sys: &PatternSystem, base: &Word, slots: Vec<Slot>) -> Result<Embedding> {
        sys.validate(base)?;
        if slots.len() != base.len() {
            return input(format!("embedding has {} slots but {base} has length {}", slots.len(), base.len()));
        }
        let positions: Vec<usize> = (0..slots.len()).filter(|&i| slots[i] != Slot::Dash).collect();
        if !sys.positions_allowed(&positions) {
            return input(format!("used positions of {} violate the position condition", text(&slots)));
        }
        for &i in &positions {
            let Slot::Letter(l) = slots[i] else { unreachable!() };
            let ok = if sys.kind().is_permutation() {
                l == base.letters()[i]
            } else {
                sys.letter_fits(l, base.letters()[i])
            };
            if !ok {
                return input(format!("slot {l} at position {} does not fit under {base}", i + 1));
            }
        }
        let e = Embedding {
            base: base.clone(),
            pattern: Word(Vec::new()),
            slots,
        };
        let pattern = sys.canonical(&e.letters());
        sys.validate(&pattern)?;
        Ok(Embedding { pattern, ..e })
    }

    /// Parses the text form (`-31--5`, or comma-separated when letters exceed 9).
    pub fn parse(sys: &PatternSystem, base: &Word, s: &str) -> Result<Embedding> {
        let s = s.trim();
        let tokens: Vec<String> = if s.contains(',') {
            s.split(',').map(|t| t.trim().to_string()).collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        let slots = tokens
            .iter()
            .map(|t| match t.as_str() {
                "-" => Ok(Slot::Dash),
                t => t
                    .parse::<u32>()
                    .map(Slot::Letter)
                    .map_err(|_| Error::Input(format!("bad embedding slot {t:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Embedding::from_slots(sys, base, slots)
    }
}

fn text(slots: &[Slot]) -> String {
    let wide = slots.iter().any(|s| matches!(s, Slot::Letter(l) if *l > 9));
    let parts: Vec<String> = slots.iter().map(Slot::to_string).collect();
    parts.join(if wide { "," } else { "" })
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text(&self.slots))
    }
}

fn from_occurrence(sys: &PatternSystem, a: &Word, b: &Word, occ: &[usize]) -> Embedding {
    let mut slots = vec![Slot::Dash; b.len()];
    for (j, &i) in occ.iter().enumerate() {
        slots[i] = Slot::Letter(if sys.kind().is_permutation() { b.letters()[i] } else { a.letters()[j] });
    }
    Embedding {
        base: b.clone(),
        slots,
        pattern: a.clone(),
    }
}

/// Every embedding of `a` in `b`, in position-lexicographic order. Empty when `a` is not below `b`.
pub fn embeddings(sys: &PatternSystem, a: &Word, b: &Word) -> Result<Vec<Embedding>> {
    Ok(sys
        .occurrences(a, b)?
        .iter()
        .map(|occ| from_occurrence(sys, a, b, occ))
        .collect())
}

pub(crate) fn embeddings_unchecked(sys: &PatternSystem, a: &Word, b: &Word) -> Vec<Embedding> {
    sys.occurrences_unchecked(a, b)
        .iter()
        .map(|occ| from_occurrence(sys, a, b, occ))
        .collect()
}

/// Maximal runs of positions whose single decreases all give the same element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyDecomposition {
    /// Half-open `[start, end)` ranges of 0-based positions, in order.
    pub blocks: Vec<(usize, usize)>,
}

impl AdjacencyDecomposition {
    /// 0-based tail positions: every position of a non-trivial block except its first.
    pub fn tails(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|&(s, e)| (s + 1)..e).collect()
    }

    pub fn is_tail(&self, i: usize) -> bool {
        self.blocks.iter().any(|&(s, e)| i > s && i < e)
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.iter().copied().filter(|&(s, e)| e - s > 1)
    }

    /// Blocks as subwords of `p`.
    pub fn block_words(&self, p: &Word) -> Vec<Word> {
        self.blocks
            .iter()
            .map(|&(s, e)| Word(p.letters()[s..e].to_vec()))
            .collect()
    }
}

/// Adjacencies by the definition: compare the results of every single decrease.
pub fn adjacency_decomposition(sys: &PatternSystem, p: &Word) -> Result<AdjacencyDecomposition> {
    sys.require_closed("adjacency decomposition")?;
    sys.validate(p)?;
    let decreased: Vec<Word> = (0..p.len()).map(|i| sys.decrease(p, i)).collect::<Result<_>>()?;
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=p.len() {
        if i == p.len() || decreased[i] != decreased[start] {
            blocks.push((start, i));
            start = i;
        }
    }
    Ok(AdjacencyDecomposition { blocks })
}

/// Per-kind shortcut for adjacencies: equal dash-child letters for word kinds,
/// values differing by one for classical permutations.
pub fn adjacency_shortcut(sys: &PatternSystem, p: &Word) -> Result<AdjacencyDecomposition> {
    let tree = sys.require_closed("adjacency decomposition")?;
    let l = p.letters();
    let joined = |i: usize| match sys.kind() {
        Kind::Classical => l[i].abs_diff(l[i + 1]) == 1,
        _ => l[i] == l[i + 1] && tree.parent(l[i]) == Slot::Dash,
    };
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=l.len() {
        if i == l.len() || !joined(i - 1) {
            blocks.push((start, i));
            start = i;
        }
    }
    Ok(AdjacencyDecomposition { blocks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositionClass {
    /// Slot equals the base letter.
    Full,
    /// One up-step reaches the base letter.
    Fillable,
    /// A dash that is not fillable.
    Empty,
    Other,
}

pub fn classify_positions(sys: &PatternSystem, e: &Embedding) -> Result<Vec<PositionClass>> {
    let tree = sys.require_closed("position classification")?;
    Ok(e.slots
        .iter()
        .zip(e.base.letters())
        .map(|(&slot, &b)| {
            if slot == Slot::Letter(b) {
                PositionClass::Full
            } else if tree.parent(b) == slot {
                PositionClass::Fillable
            } else if slot == Slot::Dash {
                PositionClass::Empty
            } else {
                PositionClass::Other
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalPolicy {
    /// Tails full, every other position full or fillable.
    #[default]
    Standard,
    /// Tails full, every other position fillable.
    Literal,
}

impl FromStr for NormalPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(NormalPolicy::Standard),
            "literal" => Ok(NormalPolicy::Literal),
            other => input(format!("unknown normal policy {other:?}; use standard or literal")),
        }
    }
}

pub fn is_normal(sys: &PatternSystem, adj: &AdjacencyDecomposition, e: &Embedding, policy: NormalPolicy) -> Result<bool> {
    let classes = classify_positions(sys, e)?;
    Ok(classes.iter().enumerate().all(|(i, &c)| {
        if adj.is_tail(i) {
            c == PositionClass::Full
        } else {
            match policy {
                NormalPolicy::Standard => matches!(c, PositionClass::Full | PositionClass::Fillable),
                NormalPolicy::Literal => c == PositionClass::Fillable,
            }
        }
    }))
}

pub fn normal_embeddings(sys: &PatternSystem, a: &Word, b: &Word, policy: NormalPolicy) -> Result<Vec<Embedding>> {
    let adj = adjacency_decomposition(sys, b)?;
    let mut out = Vec::new();
    for e in embeddings(sys, a, b)? {
        if is_normal(sys, &adj, &e, policy)? {
            out.push(e);
        }
    }
    Ok(out)
}

/// Number of normal embeddings under the standard policy.
pub fn normal_count(sys: &PatternSystem, a: &Word, b: &Word) -> Result<usize> {
    Ok(normal_embeddings(sys, a, b, NormalPolicy::Standard)?.len())
}

/// Within each block: dashes, then at most one partial slot, then full slots.
pub fn is_representative(sys: &PatternSystem, adj: &AdjacencyDecomposition, e: &Embedding) -> Result<bool> {
    let classes = classify_positions(sys, e)?;
    Ok(adj.blocks.iter().all(|&(s, end)| {
        // dashes, then at most one partial slot, then full slots
        let mut stage = 0;
        for i in s..end {
            let next = if e.is_dash(i) {
                0
            } else if classes[i] == PositionClass::Full {
                2
            } else {
                1
            };
            let ok = match next {
                0 | 1 => stage == 0,
                _ => true,
            };
            if !ok {
                return false;
            }
            stage = next;
        }
        true
    }))
}

pub fn representative_embeddings(sys: &PatternSystem, a: &Word, b: &Word) -> Result<Vec<Embedding>> {
    let adj = adjacency_decomposition(sys, b)?;
    let mut out = Vec::new();
    for e in embeddings(sys, a, b)? {
        if is_representative(sys, &adj, &e)? {
            out.push(e);
        }
    }
    Ok(out)
}

/// Moves the dashes of every adjacency to its left end, keeping the other slots in order.
pub fn rp(sys: &PatternSystem, e: &Embedding) -> Result<Embedding> {
    let adj = adjacency_decomposition(sys, &e.base)?;
    rp_with(sys, &adj, e)
}

pub(crate) fn rp_with(sys: &PatternSystem, adj: &AdjacencyDecomposition, e: &Embedding) -> Result<Embedding> {
    let mut slots = e.slots.clone();
    for &(s, end) in &adj.blocks {
        let kept: Vec<Slot> = e.slots[s..end].iter().copied().filter(|&x| x != Slot::Dash).collect();
        let dashes = (end - s) - kept.len();
        for (k, i) in (s..end).enumerate() {
            slots[i] = if k < dashes {
                Slot::Dash
            } else if sys.kind().is_permutation() {
                Slot::Letter(e.base.letters()[i])
            } else {
                kept[k - dashes]
            };
        }
    }
    let moved = Embedding::from_slots(sys, &e.base, slots)
        .map_err(|err| Error::Invariant(format!("rp({e}) is not an embedding: {err}")))?;
    if moved.pattern != e.pattern {
        return Err(Error::Invariant(format!(
            "rp({e}) = {moved} changes the pattern from {} to {}",
            e.pattern, moved.pattern
        )));
    }
    Ok(moved)
}

fn same_base(e: &Embedding, f: &Embedding) -> Result<()> {
    if e.base != f.base {
        return input(format!("embeddings {e} and {f} have different bases {} and {}", e.base, f.base));
    }
    Ok(())
}

/// Order on embeddings of the same base. Closed systems compare slot by slot
/// in the alphabet tree; other systems use [`embedding_leq_literal`].
pub fn embedding_leq(sys: &PatternSystem, e: &Embedding, f: &Embedding) -> Result<bool> {
    same_base(e, f)?;
    Ok(leq_unchecked(sys, e, f))
}

pub(crate) fn leq_unchecked(sys: &PatternSystem, e: &Embedding, f: &Embedding) -> bool {
    match (sys.tree(), sys.is_closed()) {
        (Some(tree), true) => e.slots.iter().zip(&f.slots).all(|(&x, &y)| tree.leq(x, y)),
        _ => literal_unchecked(sys, e, f),
    }
}

/// `Z(e) ⊇ Z(f)` and the pattern of `e` lies below the pattern of `f`.
pub fn embedding_leq_literal(sys: &PatternSystem, e: &Embedding, f: &Embedding) -> Result<bool> {
    same_base(e, f)?;
    Ok(literal_unchecked(sys, e, f))
}

fn literal_unchecked(sys: &PatternSystem, e: &Embedding, f: &Embedding) -> bool {
    (0..e.len()).all(|i| !f.is_dash(i) || e.is_dash(i)) && sys.leq_unchecked(&e.pattern, &f.pattern)
}

/// The join in a fully-closed system: the embedding whose zero set is `Z(e) ∩ Z(f)`.
pub fn join_fully_closed(sys: &PatternSystem, e: &Embedding, f: &Embedding) -> Result<Embedding> {
    same_base(e, f)?;
    if !sys.is_fully_closed() {
        return Err(Error::Unsupported(format!("join needs a fully-closed pattern poset, {} is not", sys.kind().name())));
    }
    let slots = (0..e.len())
        .map(|i| {
            if e.is_dash(i) && f.is_dash(i) {
                Slot::Dash
            } else {
                Slot::Letter(e.base.letters()[i])
            }
        })
        .collect();
    Embedding::from_slots(sys, &e.base, slots)
}

/// The unique embedding of a fully-closed system with the given 0-based used positions.
pub(crate) fn from_positions(sys: &PatternSystem, base: &Word, positions: &[usize]) -> Embedding {
    let mut slots = vec![Slot::Dash; base.len()];
    for &i in positions {
        slots[i] = Slot::Letter(base.letters()[i]);
    }
    Embedding {
        pattern: sys.canonical(&base.restrict(positions).0),
        base: base.clone(),
        slots,
    }
}
