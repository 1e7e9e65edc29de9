//! Zero splits and disconnection, the atom-ordering construction over
//! representative embeddings, and the subword Möbius formula.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::Embedding;
use crate::error::{input, Error, Result};
use crate::fibration::EmbeddingSpace;
use crate::poset::{check_r2_at, check_rao, ElementId, FinitePoset, FnOrdering, Limits, RaoOutcome};
use crate::system::{Kind, PatternSystem, Slot};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    Plain,
    Representative,
    Strong,
}

impl FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(SplitMode::Plain),
            "rep" | "representative" => Ok(SplitMode::Representative),
            "strong" => Ok(SplitMode::Strong),
            other => input(format!("unknown split mode {other:?}; use plain, rep or strong")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroSplitPartition {
    pub mode: SplitMode,
    pub part_one: Vec<Embedding>,
    pub part_two: Vec<Embedding>,
}

impl ZeroSplitPartition {
    /// Union of the 0-based zero sets of one part.
    pub fn zeros(part: &[Embedding]) -> BTreeSet<usize> {
        part.iter().flat_map(|e| e.zeros()).collect()
    }
}

/// Length of the longest chain from `a` to `b`.
pub(crate) fn rank_between(poset: &FinitePoset, a: ElementId, b: ElementId) -> usize {
    let ids: BTreeSet<_> = poset.interval_ids(a, b).into_iter().collect();
    let mut len = vec![0usize; poset.len()];
    for &x in poset.linear_extension() {
        if !ids.contains(&x) || x == a {
            continue;
        }
        len[x] = poset
            .lower_covers(x)
            .iter()
            .filter(|y| ids.contains(y))
            .map(|&y| len[y] + 1)
            .max()
            .unwrap_or(0);
    }
    len[b]
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Pattern of the embedding whose zero set is that of `e` minus `z`.
fn undash(sys: &PatternSystem, e: &Embedding, z: usize) -> Word {
    let mut positions = e.positions();
    positions.push(z);
    positions.sort_unstable();
    crate::embedding::from_positions(sys, e.base(), &positions).pattern().clone()
}

impl EmbeddingSpace {
    fn interval_rank(&self, sigma: ElementId) -> usize {
        rank_between(&self.interval.poset, sigma, self.top_id())
    }

    /// Zero split of `[σ, top]` by components of the zero-set intersection graph.
    pub fn zero_split(&self, sigma: ElementId, mode: SplitMode) -> Result<Option<ZeroSplitPartition>> {
        let sys = self.system();
        match mode {
            SplitMode::Strong if !sys.is_fully_closed() => {
                return Err(Error::Unsupported(format!(
                    "strong zero split needs a fully-closed pattern poset, {} is not",
                    sys.kind().name()
                )))
            }
            SplitMode::Representative => {
                sys.require_closed("representative zero split")?;
            }
            _ => {}
        }
        if self.interval_rank(sigma) < 2 {
            return Ok(None);
        }
        let ids: Vec<usize> = self.by_pattern[sigma]
            .iter()
            .copied()
            .filter(|&e| mode != SplitMode::Representative || self.is_representative(e))
            .collect();
        let es: Vec<&Embedding> = ids.iter().map(|&e| &self.embeddings[e]).collect();
        let zeros: Vec<BTreeSet<usize>> = es.iter().map(|e| e.zeros().into_iter().collect()).collect();
        let mut uf = UnionFind::new(es.len());
        for i in 0..es.len() {
            for j in (i + 1)..es.len() {
                if !zeros[i].is_disjoint(&zeros[j]) {
                    uf.union(i, j);
                }
            }
        }
        if mode == SplitMode::Strong {
            let undashed: Vec<Vec<Word>> = es
                .iter()
                .zip(&zeros)
                .map(|(e, z)| z.iter().map(|&p| undash(sys, e, p)).collect())
                .collect();
            for i in 0..es.len() {
                for j in (i + 1)..es.len() {
                    if uf.find(i) != uf.find(j) && undashed[i].iter().any(|l| undashed[j].contains(l)) {
                        uf.union(i, j);
                    }
                }
            }
        }
        if es.is_empty() {
            return Ok(None);
        }
        let root = uf.find(0);
        let (mut one, mut two) = (Vec::new(), Vec::new());
        for (i, e) in es.iter().enumerate() {
            if uf.find(i) == root {
                one.push((*e).clone());
            } else {
                two.push((*e).clone());
            }
        }
        Ok((!two.is_empty()).then_some(ZeroSplitPartition {
            mode,
            part_one: one,
            part_two: two,
        }))
    }

    /// Whether the interior of `[σ, top]` is disconnected, with its components as words.
    pub fn interior_components(&self, sigma: ElementId) -> Vec<BTreeSet<Word>> {
        let ip = &self.interval.poset;
        let top = self.top_id();
        let interior: Vec<_> = ip
            .interval_ids(sigma, top)
            .into_iter()
            .filter(|&x| x != sigma && x != top)
            .collect();
        ip.components_of(&interior)
            .into_iter()
            .map(|c| c.into_iter().map(|x| self.interval.elements[x].clone()).collect())
            .collect()
    }

    pub fn disconnection(&self, sigma: ElementId) -> Result<DisconnectionReport> {
        let sys = self.system();
        if !sys.is_fully_closed() {
            return Err(Error::Unsupported("disconnection check needs a fully-closed pattern poset".into()));
        }
        let rank = self.interval_rank(sigma);
        if rank < 3 {
            return Err(Error::Unsupported(format!("disconnection check needs rank at least 3, got {rank}")));
        }
        let actual = self.interior_components(sigma);
        let split = self.zero_split(sigma, SplitMode::Strong)?;
        let disconnected = actual.len() >= 2;
        let mut predicted = None;
        let mut predicted_match = None;
        if let Some(p) = &split {
            let parts = [ZeroSplitPartition::zeros(&p.part_one), ZeroSplitPartition::zeros(&p.part_two)];
            let interior: BTreeSet<Word> = actual.iter().flatten().cloned().collect();
            let predict = |zs: &BTreeSet<usize>| -> BTreeSet<Word> {
                interior
                    .iter()
                    .filter(|l| {
                        let id = self.interval.id(l).expect("interior element");
                        self.by_pattern[id].iter().any(|&e| self.embeddings[e].zeros().iter().all(|z| zs.contains(z)))
                    })
                    .cloned()
                    .collect()
            };
            let p1 = predict(&parts[0]);
            let p2 = predict(&parts[1]);
            let ok = p1.is_disjoint(&p2)
                && p1.union(&p2).cloned().collect::<BTreeSet<_>>() == interior
                && actual.iter().all(|c| c.is_subset(&p1) || c.is_subset(&p2));
            predicted_match = Some(ok);
            predicted = Some([p1, p2]);
        }
        let biconditional = disconnected == split.is_some();
        Ok(DisconnectionReport {
            interval: format!("[{},{}]", self.interval.elements[sigma], self.top()),
            rank,
            disconnected,
            components: actual,
            strongly_zero_split: split.is_some(),
            predicted,
            predicted_match,
            pass: biconditional && predicted_match.unwrap_or(true),
            biconditional,
        })
    }

    pub fn equivalences(&self, sigma: ElementId) -> Result<EquivalenceReport> {
        let sys = self.system();
        if !sys.is_fully_closed() {
            return Err(Error::Unsupported("the equivalence suite needs a fully-closed pattern poset".into()));
        }
        let rank = self.interval_rank(sigma);
        if rank < 2 {
            return Err(Error::Unsupported(format!("the equivalence suite needs rank at least 2, got {rank}")));
        }
        let disconnected = |strict: bool, rep: bool| {
            let ids = self.ids_above(sigma, strict, rep);
            self.poset.components_of(&ids).len() >= 2
        };
        let mut conditions = vec![
            ("zero split".to_string(), self.zero_split(sigma, SplitMode::Plain)?.is_some()),
            ("A* disconnected".to_string(), disconnected(false, false)),
            ("rep-zero split".to_string(), self.zero_split(sigma, SplitMode::Representative)?.is_some()),
            ("R* disconnected".to_string(), disconnected(false, true)),
        ];
        if rank >= 3 {
            conditions.push(("A disconnected".to_string(), disconnected(true, false)));
            conditions.push(("R disconnected".to_string(), disconnected(true, true)));
        }
        let first = conditions[0].1;
        Ok(EquivalenceReport {
            interval: format!("[{},{}]", self.interval.elements[sigma], self.top()),
            rank,
            pass: conditions.iter().all(|c| c.1 == first),
            conditions,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisconnectionReport {
    pub interval: String,
    pub rank: usize,
    pub disconnected: bool,
    pub components: Vec<BTreeSet<Word>>,
    pub strongly_zero_split: bool,
    /// Components predicted from a strong zero split.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<[BTreeSet<Word>; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_match: Option<bool>,
    pub biconditional: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub interval: String,
    pub rank: usize,
    pub conditions: Vec<(String, bool)>,
    pub pass: bool,
}

pub fn find_zero_split(sys: &PatternSystem, a: &Word, b: &Word, mode: SplitMode) -> Result<Option<ZeroSplitPartition>> {
    let space = EmbeddingSpace::new(sys, a, b)?;
    space.zero_split(0, mode)
}

pub fn disconnection_check(sys: &PatternSystem, a: &Word, b: &Word) -> Result<DisconnectionReport> {
    if !sys.is_fully_closed() {
        return Err(Error::Unsupported("disconnection check needs a fully-closed pattern poset".into()));
    }
    EmbeddingSpace::new(sys, a, b)?.disconnection(0)
}

pub fn equivalence_suite(sys: &PatternSystem, a: &Word, b: &Word) -> Result<EquivalenceReport> {
    if !sys.is_fully_closed() {
        return Err(Error::Unsupported("the equivalence suite needs a fully-closed pattern poset".into()));
    }
    EmbeddingSpace::new(sys, a, b)?.equivalences(0)
}

/// Used positions of an embedding, 1-based and increasing.
pub fn position_word(e: &Embedding) -> Vec<usize> {
    e.positions().into_iter().map(|i| i + 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatCond2Report {
    pub interval: String,
    /// Representative embeddings of the bottom, in the supplied order.
    pub order: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2_violation: Option<String>,
    /// Outcome of verifying the constructed ordering; absent when R2 fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rao_violation: Option<String>,
    pub rao_verified: bool,
    /// Embeddings whose atoms are all forced first.
    pub v_set: Vec<String>,
    pub mu_r_star: i64,
    /// `(-1)^(|π|-|σ|-1) |V|`, compared only on fully-closed systems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<i64>,
    pub pass: bool,
}

impl EmbeddingSpace {
    /// Checks R2 for `key` on the representative embeddings of `σ`, builds the
    /// induced atom ordering of `R̂*(σ, top)`, verifies it, and collects `V`.
    pub fn satcond2<K: Ord>(&self, sigma: ElementId, key: impl Fn(&Embedding) -> K, limits: &Limits) -> Result<SatCond2Report> {
        let sys = self.system();
        sys.require_closed("the representative atom ordering")?;
        if sigma == self.top_id() {
            return input("the atom ordering needs sigma strictly below the top");
        }
        let ids = self.ids_above(sigma, false, true);
        let n = ids.len();
        let hat = self.poset.induced(&ids).with_fresh_bounds("0̂", &self.top().to_string());
        let (zero, top) = (n, n + 1);
        let slots = |x: ElementId| -> Option<&Embedding> { (x < n).then(|| &self.embeddings[ids[x]]) };

        let mut bottom_atoms: Vec<ElementId> = hat.upper_covers(zero).to_vec();
        bottom_atoms.sort_by(|&a, &b| key(slots(a).expect("embedding")).cmp(&key(slots(b).expect("embedding"))).then(a.cmp(&b)));
        let order_text: Vec<String> = bottom_atoms.iter().map(|&a| hat.label(a).to_string()).collect();

        let r2_violation = check_r2_at(&hat, zero, &bottom_atoms).map(|v| v.describe(&hat));
        let rank_gap = self.top().len() as i64 - self.interval.elements[sigma].len() as i64;
        let mu_r_star = hat.mobius_of_bounds()?;
        let fully = sys.is_fully_closed();

        // the position increased to go from x up to its cover y
        let filling = |x: ElementId, y: ElementId| -> usize {
            let e = slots(x).expect("embedding below the top");
            match slots(y) {
                Some(f) => (0..e.len()).find(|&i| e.slots()[i] != f.slots()[i]).expect("covers differ"),
                None => (0..e.len())
                    .find(|&i| e.slots()[i] != Slot::Letter(e.base().letters()[i]))
                    .expect("non-full position"),
            }
        };
        let adjacency = self.adjacency().expect("closed system").clone();
        let block_of = |i: usize| adjacency.blocks.iter().position(|&(s, e)| i >= s && i < e).expect("block");
        let rank_of = |x: ElementId| bottom_atoms.iter().position(|&a| a == x);
        let omega = |phi: ElementId| -> Vec<ElementId> {
            let pos = rank_of(phi).expect("bottom atom");
            hat.upper_covers(phi)
                .iter()
                .copied()
                .filter(|&a| bottom_atoms[..pos].iter().any(|&psi| hat.lt(psi, a) && hat.upper_covers(psi).contains(&a)))
                .collect()
        };

        let (rao_violation, rao_verified, v_set) = if r2_violation.is_some() {
            (None, false, Vec::new())
        } else {
            let ordering = FnOrdering(|_: &FinitePoset, chain: &[ElementId], atoms: &[ElementId]| -> Result<Vec<ElementId>> {
                let alpha = *chain.last().expect("root");
                let mut out = atoms.to_vec();
                match chain.len() {
                    1 => {
                        out.sort_by_key(|&a| rank_of(a));
                    }
                    2 => {
                        let om = omega(alpha);
                        out.sort_by_key(|&a| (!om.contains(&a), filling(alpha, a)));
                    }
                    _ => {
                        let c1 = chain[1];
                        let mut c1_atoms: Vec<ElementId> = hat.upper_covers(c1).to_vec();
                        let om = omega(c1);
                        c1_atoms.sort_by_key(|&a| (!om.contains(&a), filling(c1, a)));
                        let block_rank: Vec<usize> = c1_atoms.iter().map(|&a| block_of(filling(c1, a))).collect();
                        out.sort_by_key(|&a| {
                            let b = block_of(filling(alpha, a));
                            (block_rank.iter().position(|&x| x == b).unwrap_or(usize::MAX), filling(alpha, a))
                        });
                    }
                }
                Ok(out)
            });
            let outcome = check_rao(&hat, &ordering, limits)?;
            let violation = match outcome {
                RaoOutcome::Pass(_) => None,
                RaoOutcome::Violation(v) => Some(v.describe(&hat)),
            };
            let v_set: Vec<String> = bottom_atoms
                .iter()
                .filter(|&&phi| {
                    let om: BTreeSet<_> = omega(phi).into_iter().collect();
                    let at: BTreeSet<_> = hat.upper_covers(phi).iter().copied().collect();
                    om == at
                })
                .map(|&phi| hat.label(phi).to_string())
                .collect();
            (violation.clone(), violation.is_none(), v_set)
        };
        let _ = top;
        let formula = (fully && r2_violation.is_none()).then(|| {
            let sign = if (rank_gap - 1).rem_euclid(2) == 0 { 1 } else { -1 };
            sign * v_set.len() as i64
        });
        let pass = r2_violation.is_none() && rao_verified && formula.is_none_or(|f| f == mu_r_star);
        Ok(SatCond2Report {
            interval: format!("[{},{}]", self.interval.elements[sigma], self.top()),
            order: order_text,
            r2_violation,
            rao_violation,
            rao_verified,
            v_set,
            mu_r_star,
            formula,
            pass,
        })
    }
}

/// Runs [`EmbeddingSpace::satcond2`] on `[a, b]` with the position-word lexicographic order.
pub fn satcond2_analysis(sys: &PatternSystem, a: &Word, b: &Word, limits: &Limits) -> Result<SatCond2Report> {
    sys.require_closed("the representative atom ordering")?;
    EmbeddingSpace::new(sys, a, b)?.satcond2(0, position_word, limits)
}

/// `(-1)^{|w|-|u|}·NE(u, w)` in subword order; 0 when `u` is not below `w`.
pub fn bjorner_mobius(sys: &PatternSystem, u: &Word, w: &Word) -> Result<i64> {
    if *sys.kind() != Kind::Subword {
        return Err(Error::Unsupported("the normal-embedding formula is for subword order".into()));
    }
    if !sys.leq(u, w)? {
        return Ok(0);
    }
    let ne = crate::embedding::normal_count(sys, u, w)? as i64;
    Ok(if (w.len() - u.len()) % 2 == 0 { ne } else { -ne })
}
