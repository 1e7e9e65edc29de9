//! Pattern systems: a ground set of words or permutations plus the occurrence relation.
//!
//! Every system is described by a letter relation (equality, tree order, or
//! equal reduced form) and a position condition (none, contiguity of all
//! positions, or contiguity at masked gaps).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::poset::{ElementId, FinitePoset};
use crate::word::{self, reduce, reduce_distinct, Word};

/// One slot of an embedding, or a node of the alphabet tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Dash,
    Letter(u32),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Dash => write!(f, "-"),
            Slot::Letter(l) => write!(f, "{l}"),
        }
    }
}

/// The alphabet with a dash adjoined, arranged as a tree rooted at the dash.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphabetTree {
    /// Every letter is a child of the dash.
    Antichain,
    /// `1 < 2 < ... < max` stacked above the dash.
    Chain { max: u32 },
    /// Parent of each letter; `None` is the dash.
    Explicit { parent: BTreeMap<u32, Option<u32>> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Down,
    Up,
}

impl AlphabetTree {
    /// Builds an explicit tree and checks every letter reaches the dash.
    pub fn explicit(parent: BTreeMap<u32, Option<u32>>) -> Result<Self> {
        for &letter in parent.keys() {
            let mut cur = Some(letter);
            let mut steps = 0;
            while let Some(x) = cur {
                cur = *parent
                    .get(&x)
                    .ok_or_else(|| Error::Input(format!("tree parent {x} is not a letter of the tree")))?;
                steps += 1;
                if steps > parent.len() {
                    return input(format!("alphabet tree has a cycle through {letter}"));
                }
            }
        }
        Ok(AlphabetTree::Explicit { parent })
    }

    pub fn contains(&self, letter: u32) -> bool {
        match self {
            AlphabetTree::Antichain => true,
            AlphabetTree::Chain { max } => (1..=*max).contains(&letter),
            AlphabetTree::Explicit { parent } => parent.contains_key(&letter),
        }
    }

    pub fn parent(&self, letter: u32) -> Slot {
        match self {
            AlphabetTree::Antichain => Slot::Dash,
            AlphabetTree::Chain { .. } => {
                if letter <= 1 {
                    Slot::Dash
                } else {
                    Slot::Letter(letter - 1)
                }
            }
            AlphabetTree::Explicit { parent } => match parent.get(&letter).copied().flatten() {
                Some(p) => Slot::Letter(p),
                None => Slot::Dash,
            },
        }
    }

    /// Children of `node`; `letters` bounds an antichain tree.
    pub fn children(&self, node: Slot, letters: &[u32]) -> Vec<Slot> {
        match (self, node) {
            (AlphabetTree::Antichain, Slot::Dash) => letters.iter().map(|&l| Slot::Letter(l)).collect(),
            (AlphabetTree::Antichain, Slot::Letter(_)) => Vec::new(),
            (AlphabetTree::Chain { max }, Slot::Dash) => {
                if *max >= 1 {
                    vec![Slot::Letter(1)]
                } else {
                    Vec::new()
                }
            }
            (AlphabetTree::Chain { max }, Slot::Letter(l)) => {
                if l < *max {
                    vec![Slot::Letter(l + 1)]
                } else {
                    Vec::new()
                }
            }
            (AlphabetTree::Explicit { parent }, node) => parent
                .iter()
                .filter(|(_, p)| match (node, p) {
                    (Slot::Dash, None) => true,
                    (Slot::Letter(x), Some(q)) => x == *q,
                    _ => false,
                })
                .map(|(&c, _)| Slot::Letter(c))
                .collect(),
        }
    }

    /// Ancestor-or-equal in the tree; the dash is below everything.
    pub fn leq(&self, x: Slot, y: Slot) -> bool {
        match (x, y) {
            (Slot::Dash, _) => true,
            (Slot::Letter(_), Slot::Dash) => false,
            (Slot::Letter(a), Slot::Letter(b)) => {
                let mut cur = Slot::Letter(b);
                loop {
                    if cur == Slot::Letter(a) {
                        return true;
                    }
                    match cur {
                        Slot::Dash => return false,
                        Slot::Letter(c) => cur = self.parent(c),
                    }
                }
            }
        }
    }

    /// Number of up-steps from the dash.
    pub fn depth(&self, x: Slot) -> usize {
        let mut d = 0;
        let mut cur = x;
        while let Slot::Letter(c) = cur {
            d += 1;
            cur = self.parent(c);
        }
        d
    }

    /// The child of `x` on the path to `target`, when `x` lies strictly below it.
    pub fn step_toward(&self, x: Slot, target: u32) -> Option<Slot> {
        let mut cur = Slot::Letter(target);
        if !self.leq(x, cur) || x == cur {
            return None;
        }
        loop {
            let Slot::Letter(c) = cur else { return None };
            let p = self.parent(c);
            if p == x {
                return Some(cur);
            }
            cur = p;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    NotClosed,
    Closed,
    FullyClosed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Subword,
    GeneralizedSubword,
    Composition,
    Classical,
    Consecutive,
    Vincular,
    Dyck,
}

impl Kind {
    pub const NAMES: [&'static str; 7] = [
        "subword",
        "generalized-subword",
        "composition",
        "classical",
        "consecutive",
        "vincular",
        "dyck",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Subword => "subword",
            Kind::GeneralizedSubword => "generalized-subword",
            Kind::Composition => "composition",
            Kind::Classical => "classical",
            Kind::Consecutive => "consecutive",
            Kind::Vincular => "vincular",
            Kind::Dyck => "dyck",
        }
    }

    pub fn parse(s: &str) -> Result<Kind> {
        Ok(match s {
            "subword" => Kind::Subword,
            "generalized-subword" | "gsubword" => Kind::GeneralizedSubword,
            "composition" => Kind::Composition,
            "classical" | "classical-perm" => Kind::Classical,
            "consecutive" | "consecutive-perm" => Kind::Consecutive,
            "vincular" => Kind::Vincular,
            "dyck" => Kind::Dyck,
            other => {
                return input(format!(
                    "unknown poset kind {other:?}; supported: {}",
                    Kind::NAMES.join(", ")
                ))
            }
        })
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self, Kind::Classical | Kind::Consecutive)
    }
}

/// A concrete pattern poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSystem {
    kind: Kind,
    /// Letters for word kinds, sorted; empty for permutation kinds.
    alphabet: Vec<u32>,
    tree: Option<AlphabetTree>,
    /// Gap `j` (between occurrence letters `j` and `j + 1`) must be contiguous when set.
    mask: Vec<bool>,
}

impl PatternSystem {
    pub fn subword(alphabet: &[u32]) -> Result<Self> {
        Ok(PatternSystem {
            kind: Kind::Subword,
            alphabet: normalize_alphabet(alphabet)?,
            tree: Some(AlphabetTree::Antichain),
            mask: Vec::new(),
        })
    }

    /// Subword order over `{1, ..., size}`.
    pub fn subword_of_size(size: u32) -> Self {
        Self::subword(&(1..=size).collect::<Vec<_>>()).expect("nonempty alphabet")
    }

    pub fn composition(max_letter: u32) -> Result<Self> {
        if max_letter == 0 {
            return input("composition alphabet needs at least the letter 1");
        }
        Ok(PatternSystem {
            kind: Kind::Composition,
            alphabet: (1..=max_letter).collect(),
            tree: Some(AlphabetTree::Chain { max: max_letter }),
            mask: Vec::new(),
        })
    }

    pub fn generalized_subword(tree: AlphabetTree) -> Result<Self> {
        let alphabet: Vec<u32> = match &tree {
            AlphabetTree::Explicit { parent } => parent.keys().copied().collect(),
            AlphabetTree::Chain { max } => (1..=*max).collect(),
            AlphabetTree::Antichain => return input("generalized subword order needs a finite tree"),
        };
        Ok(PatternSystem {
            kind: Kind::GeneralizedSubword,
            alphabet: normalize_alphabet(&alphabet)?,
            tree: Some(tree),
            mask: Vec::new(),
        })
    }

    pub fn classical() -> Self {
        PatternSystem {
            kind: Kind::Classical,
            alphabet: Vec::new(),
            tree: Some(AlphabetTree::Antichain),
            mask: Vec::new(),
        }
    }

    pub fn consecutive() -> Self {
        PatternSystem {
            kind: Kind::Consecutive,
            alphabet: Vec::new(),
            tree: None,
            mask: Vec::new(),
        }
    }

    pub fn vincular(alphabet: &[u32], mask: Vec<bool>) -> Result<Self> {
        Ok(PatternSystem {
            kind: Kind::Vincular,
            alphabet: normalize_alphabet(alphabet)?,
            tree: None,
            mask,
        })
    }

    pub fn dyck() -> Self {
        PatternSystem {
            kind: Kind::Dyck,
            alphabet: vec![0, 1],
            tree: None,
            mask: Vec::new(),
        }
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn alphabet(&self) -> &[u32] {
        &self.alphabet
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn tree(&self) -> Option<&AlphabetTree> {
        self.tree.as_ref()
    }

    pub fn closure(&self) -> Closure {
        match self.kind {
            Kind::Subword | Kind::Classical => Closure::FullyClosed,
            Kind::Composition | Kind::GeneralizedSubword => Closure::Closed,
            Kind::Consecutive | Kind::Vincular | Kind::Dyck => Closure::NotClosed,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closure() != Closure::NotClosed
    }

    pub fn is_fully_closed(&self) -> bool {
        self.closure() == Closure::FullyClosed
    }

    pub(crate) fn require_closed(&self, what: &str) -> Result<&AlphabetTree> {
        match (&self.tree, self.is_closed()) {
            (Some(t), true) => Ok(t),
            _ => Err(Error::Unsupported(format!("{what} needs a closed pattern poset, {} is not closed", self.kind.name()))),
        }
    }

    /// Checks ground-set membership.
    pub fn validate(&self, w: &Word) -> Result<()> {
        let ok = match self.kind {
            Kind::Classical | Kind::Consecutive => word::is_reduced_permutation(w.letters()),
            Kind::Dyck => word::is_dyck(w.letters()),
            Kind::Composition | Kind::GeneralizedSubword => {
                let tree = self.tree.as_ref().expect("closed kind has a tree");
                w.letters().iter().all(|&l| tree.contains(l))
            }
            Kind::Subword | Kind::Vincular => w.letters().iter().all(|l| self.alphabet.binary_search(l).is_ok()),
        };
        if ok {
            Ok(())
        } else {
            input(format!("{w} is not an element of the {} poset", self.kind.name()))
        }
    }

    /// Parses an element; permutations with distinct letters are reduced first.
    pub fn parse_element(&self, s: &str) -> Result<Word> {
        let mut w: Word = s.parse()?;
        if self.kind.is_permutation() {
            w = Word(reduce(w.letters())?);
        }
        self.validate(&w)?;
        Ok(w)
    }

    /// Canonical element for a subsequence taken from an element.
    pub fn canonical(&self, letters: &[u32]) -> Word {
        if self.kind.is_permutation() {
            Word(reduce_distinct(letters))
        } else {
            Word(letters.to_vec())
        }
    }

    /// Letter relation for the word kinds.
    pub(crate) fn letter_fits(&self, small: u32, big: u32) -> bool {
        match self.kind {
            Kind::Composition | Kind::GeneralizedSubword => self
                .tree
                .as_ref()
                .expect("tree")
                .leq(Slot::Letter(small), Slot::Letter(big)),
            _ => small == big,
        }
    }

    fn gap_must_be_contiguous(&self, gap: usize) -> bool {
        match self.kind {
            Kind::Consecutive => true,
            Kind::Vincular => self.mask.get(gap).copied().unwrap_or(false),
            _ => false,
        }
    }

    /// Whether 0-based positions meet the contiguity condition.
    pub(crate) fn positions_allowed(&self, positions: &[usize]) -> bool {
        positions
            .windows(2)
            .enumerate()
            .all(|(g, w)| !self.gap_must_be_contiguous(g) || w[1] == w[0] + 1)
    }

    fn search(&self, a: &[u32], b: &[u32], first_only: bool, out: &mut Vec<Vec<usize>>) {
        let mut chosen = Vec::with_capacity(a.len());
        self.extend(a, b, &mut chosen, first_only, out);
    }

    fn extend(&self, a: &[u32], b: &[u32], chosen: &mut Vec<usize>, first_only: bool, out: &mut Vec<Vec<usize>>) -> bool {
        let j = chosen.len();
        if j == a.len() {
            out.push(chosen.clone());
            return first_only;
        }
        let start = chosen.last().map_or(0, |&p| p + 1);
        let end = b.len() + j + 1 - a.len();
        let contiguous = j > 0 && self.gap_must_be_contiguous(j - 1);
        for i in start..end {
            if contiguous && i != start {
                break;
            }
            let fits = if self.kind.is_permutation() {
                chosen
                    .iter()
                    .enumerate()
                    .all(|(k, &p)| (a[k] < a[j]) == (b[p] < b[i]))
            } else {
                self.letter_fits(a[j], b[i])
            };
            if fits {
                chosen.push(i);
                let done = self.extend(a, b, chosen, first_only, out);
                chosen.pop();
                if done {
                    return true;
                }
            }
        }
        false
    }

    /// Every occurrence of `a` in `b` as 0-based increasing positions, in lexicographic order.
    pub fn occurrences(&self, a: &Word, b: &Word) -> Result<Vec<Vec<usize>>> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.occurrences_unchecked(a, b))
    }

    pub(crate) fn occurrences_unchecked(&self, a: &Word, b: &Word) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if a.len() <= b.len() {
            self.search(a.letters(), b.letters(), false, &mut out);
        }
        out
    }

    pub fn leq(&self, a: &Word, b: &Word) -> Result<bool> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.leq_unchecked(a, b))
    }

    pub(crate) fn leq_unchecked(&self, a: &Word, b: &Word) -> bool {
        if a.len() > b.len() {
            return false;
        }
        if a.len() == b.len() && !matches!(self.kind, Kind::Composition | Kind::GeneralizedSubword) {
            return a == b;
        }
        let mut out = Vec::new();
        self.search(a.letters(), b.letters(), true, &mut out);
        !out.is_empty()
    }

    /// Decreases the letter at position `i` one step in the alphabet tree,
    /// deleting it when the step reaches the dash.
    pub fn decrease(&self, w: &Word, i: usize) -> Result<Word> {
        let tree = self.require_closed("decreasing a letter")?;
        Ok(self.decrease_with(tree, w, i))
    }

    fn decrease_with(&self, tree: &AlphabetTree, w: &Word, i: usize) -> Word {
        match tree.parent(w.letters()[i]) {
            Slot::Dash if self.kind.is_permutation() => Word(reduce_distinct(w.without(i).letters())),
            Slot::Dash => w.without(i),
            Slot::Letter(p) => {
                let mut v = w.0.clone();
                v[i] = p;
                Word(v)
            }
        }
    }

    /// Every element obtained by one decrease, deduplicated.
    pub fn decreases(&self, w: &Word) -> Result<BTreeSet<Word>> {
        let tree = self.require_closed("decreasing a letter")?;
        Ok((0..w.len()).map(|i| self.decrease_with(tree, w, i)).collect())
    }

    /// Every element below `b`, including `b` and the empty element.
    pub fn sub_elements(&self, b: &Word) -> Result<BTreeSet<Word>> {
        self.validate(b)?;
        let mut seen = BTreeSet::new();
        seen.insert(b.clone());
        if let (Some(tree), true) = (&self.tree, self.is_closed()) {
            let mut frontier = vec![b.clone()];
            while let Some(w) = frontier.pop() {
                for i in 0..w.len() {
                    let d = self.decrease_with(tree, &w, i);
                    if seen.insert(d.clone()) {
                        frontier.push(d);
                    }
                }
            }
        } else {
            let n = b.len();
            if n > 24 {
                return Err(Error::SizeGuard { what: "element length", size: n, limit: 24 });
            }
            for mask in 0u32..(1u32 << n) {
                let positions: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                if !self.positions_allowed(&positions) {
                    continue;
                }
                let cand = self.canonical(&b.restrict(&positions).0);
                if self.validate(&cand).is_ok() {
                    seen.insert(cand);
                }
            }
        }
        Ok(seen)
    }

    /// The closed interval `[a, b]` with covers computed by transitive reduction.
    pub fn build_interval(&self, a: &Word, b: &Word) -> Result<Interval> {
        self.validate(a)?;
        self.validate(b)?;
        if !self.leq_unchecked(a, b) {
            return input(format!("{a} is not below {b} in the {} poset", self.kind.name()));
        }
        let elements: Vec<Word> = self
            .sub_elements(b)?
            .into_iter()
            .filter(|w| self.leq_unchecked(a, w))
            .collect();
        Interval::new(self, elements, a, b)
    }

    /// All elements of the given length.
    pub fn elements_of_size(&self, n: usize) -> Vec<Word> {
        match self.kind {
            Kind::Classical | Kind::Consecutive => word::permutations(n),
            Kind::Dyck => word::dyck_words(n),
            _ => word::words(&self.alphabet, n),
        }
    }

    pub fn elements_up_to(&self, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|n| self.elements_of_size(n)).collect()
    }

    /// Exhaustive reflexivity, antisymmetry and transitivity check on all elements up to `size_bound`.
    pub fn verify_poset_axioms(&self, size_bound: usize) -> Result<AxiomReport> {
        const LIMIT: usize = 400;
        let elems = self.elements_up_to(size_bound);
        if elems.len() > LIMIT {
            return Err(Error::SizeGuard { what: "ground set for axiom check", size: elems.len(), limit: LIMIT });
        }
        let m = elems.len();
        let rel: Vec<Vec<bool>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| self.leq_unchecked(a, b)).collect())
            .collect();
        let mut report = AxiomReport {
            elements: m,
            ..AxiomReport::default()
        };
        for i in 0..m {
            if !rel[i][i] {
                report.reflexivity.push(elems[i].to_string());
            }
            for j in 0..m {
                if i != j && rel[i][j] && rel[j][i] {
                    report.antisymmetry.push([elems[i].to_string(), elems[j].to_string()]);
                }
                if !rel[i][j] {
                    continue;
                }
                for k in 0..m {
                    if rel[j][k] && !rel[i][k] {
                        report
                            .transitivity
                            .push([elems[i].to_string(), elems[j].to_string(), elems[k].to_string()]);
                    }
                }
            }
        }
        report.pass = report.reflexivity.is_empty() && report.antisymmetry.is_empty() && report.transitivity.is_empty();
        Ok(report)
    }

    /// One step in the alphabet tree. Down gives the parent; up gives the
    /// children, or the single child toward `target` when one is supplied.
    pub fn step_letter(&self, x: Slot, direction: Direction, target: Option<u32>) -> Result<Vec<Slot>> {
        let tree = self.require_closed("stepping a letter")?;
        match direction {
            Direction::Down => match x {
                Slot::Dash => input("the dash has no letter below it"),
                Slot::Letter(l) => Ok(vec![tree.parent(l)]),
            },
            Direction::Up => {
                if let Some(t) = target {
                    return Ok(tree.step_toward(x, t).into_iter().collect());
                }
                if self.kind.is_permutation() && x == Slot::Dash {
                    return Err(Error::Unsupported(
                        "permutation letters are unbounded; supply a target letter".into(),
                    ));
                }
                Ok(tree.children(x, &self.alphabet))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            Kind::Classical | Kind::Consecutive | Kind::Dyck => self.kind.name().to_string(),
            Kind::Vincular => {
                let m: String = self.mask.iter().map(|&b| if b { '1' } else { '0' }).collect();
                format!("vincular(mask {m}, alphabet {:?})", self.alphabet)
            }
            _ => format!("{}(alphabet {:?})", self.kind.name(), self.alphabet),
        }
    }
}

fn normalize_alphabet(alphabet: &[u32]) -> Result<Vec<u32>> {
    let mut a = alphabet.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() {
        return input("alphabet is empty");
    }
    Ok(a)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub elements: usize,
    pub reflexivity: Vec<String>,
    pub antisymmetry: Vec<[String; 2]>,
    pub transitivity: Vec<[String; 3]>,
    pub pass: bool,
}

/// An interval of a pattern poset together with its elements.
#[derive(Clone, Debug)]
pub struct Interval {
    pub poset: FinitePoset,
    /// Elements sorted by length then lexicographically; index = element id.
    pub elements: Vec<Word>,
    index: HashMap<Word, ElementId>,
}

impl Interval {
    fn new(sys: &PatternSystem, mut elements: Vec<Word>, a: &Word, b: &Word) -> Result<Self> {
        elements.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        let labels = elements.iter().map(Word::to_string).collect();
        let poset = FinitePoset::from_leq(labels, |i, j| sys.leq_unchecked(&elements[i], &elements[j]))?;
        let index: HashMap<Word, ElementId> = elements.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        if poset.bottom() != index.get(a).copied() || poset.top() != index.get(b).copied() {
            return Err(Error::Invariant(format!("interval [{a}, {b}] is not bounded by its ends")));
        }
        Ok(Interval { poset, elements, index })
    }

    pub fn id(&self, w: &Word) -> Option<ElementId> {
        self.index.get(w).copied()
    }

    pub fn bottom(&self) -> &Word {
        &self.elements[self.poset.bottom().expect("bounded")]
    }

    pub fn top(&self) -> &Word {
        &self.elements[self.poset.top().expect("bounded")]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Ids of the sub-interval `[x, y]`.
    pub fn sub_interval(&self, x: ElementId, y: ElementId) -> Vec<ElementId> {
        self.poset.interval_ids(x, y)
    }

    /// Rank of each element above the bottom (longest chain).
    pub fn ranks(&self) -> Vec<usize> {
        self.poset.heights()
    }

    /// Elements of a given rank, as words, in display order.
    pub fn row(&self, rank: usize) -> Vec<Word> {
        let h = self.ranks();
        self.poset
            .display_order()
            .into_iter()
            .filter(|&x| h[x] == rank)
            .map(|x| self.elements[x].clone())
            .collect()
    }
}
