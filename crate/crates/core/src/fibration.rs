//! Total spaces of embeddings over an interval, the projection onto the
//! interval, and the Möbius identities that follow from it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::embedding::{self, AdjacencyDecomposition, Embedding, NormalPolicy};
use crate::error::{input, Error, Result};
use crate::poset::{check_rao, mobius_number_of, ElementId, FinitePoset, Limits, LinearOrder, RaoOutcome};
use crate::report::{Term, VerificationReport};
use crate::system::{Interval, PatternSystem, Slot};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Embeddings of the open interval.
    A,
    /// Embeddings of the half-open interval, bottom included.
    AStar,
    /// Representative embeddings of the open interval.
    R,
    /// Representative embeddings of the half-open interval.
    RStar,
}

impl Variant {
    pub fn includes_bottom(self) -> bool {
        matches!(self, Variant::AStar | Variant::RStar)
    }

    pub fn representative_only(self) -> bool {
        matches!(self, Variant::R | Variant::RStar)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::A => "A",
            Variant::AStar => "A*",
            Variant::R => "R",
            Variant::RStar => "R*",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "A*" | "a*" | "Astar" | "astar" => Ok(Variant::AStar),
            "R" | "r" => Ok(Variant::R),
            "R*" | "r*" | "Rstar" | "rstar" => Ok(Variant::RStar),
            other => input(format!("unknown space variant {other:?}; use A, A*, R or R*")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Equation {
    Eq1,
    Eq2,
    Eq3,
    Eq4,
}

impl Equation {
    pub const ALL: [Equation; 4] = [Equation::Eq1, Equation::Eq2, Equation::Eq3, Equation::Eq4];

    pub fn name(self) -> &'static str {
        match self {
            Equation::Eq1 => "eq1",
            Equation::Eq2 => "eq2",
            Equation::Eq3 => "eq3",
            Equation::Eq4 => "eq4",
        }
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim_start_matches("eq").trim_start_matches("Eq") {
            "1" => Ok(Equation::Eq1),
            "2" => Ok(Equation::Eq2),
            "3" => Ok(Equation::Eq3),
            "4" => Ok(Equation::Eq4),
            _ => input(format!("unknown equation {s:?}; use eq1, eq2, eq3 or eq4")),
        }
    }
}

/// Every embedding into `top` of every element of `[bottom, top]`, ordered
/// as embeddings, with cached Möbius numbers of the starred spaces.
pub struct EmbeddingSpace {
    sys: PatternSystem,
    pub interval: Interval,
    pub embeddings: Vec<Embedding>,
    /// Interval id of each embedding's pattern.
    pub pattern_id: Vec<ElementId>,
    /// Embedding ids grouped by interval id of their pattern.
    pub by_pattern: Vec<Vec<usize>>,
    pub poset: FinitePoset,
    adjacency: Option<AdjacencyDecomposition>,
    representative: Vec<bool>,
    normal: Vec<bool>,
    astar: Vec<OnceLock<i64>>,
    rstar: Vec<OnceLock<i64>>,
}

impl EmbeddingSpace {
    pub fn new(sys: &PatternSystem, bottom: &Word, top: &Word) -> Result<Self> {
        let interval = sys.build_interval(bottom, top)?;
        let mut embeddings = Vec::new();
        let mut pattern_id = Vec::new();
        let mut by_pattern = vec![Vec::new(); interval.len()];
        for (pid, lambda) in interval.elements.iter().enumerate() {
            for e in embedding::embeddings_unchecked(sys, lambda, top) {
                by_pattern[pid].push(embeddings.len());
                pattern_id.push(pid);
                embeddings.push(e);
            }
        }
        let closed = sys.is_closed();
        let poset = FinitePoset::from_leq(embeddings.iter().map(Embedding::to_string).collect(), |i, j| {
            if closed {
                embedding::leq_unchecked(sys, &embeddings[i], &embeddings[j])
            } else {
                (0..top.len()).all(|p| !embeddings[j].is_dash(p) || embeddings[i].is_dash(p))
                    && interval.poset.leq(pattern_id[i], pattern_id[j])
            }
        })?;
        let (adjacency, representative, normal) = if closed {
            let adj = embedding::adjacency_decomposition(sys, top)?;
            let rep = embeddings
                .iter()
                .map(|e| embedding::is_representative(sys, &adj, e))
                .collect::<Result<Vec<_>>>()?;
            let norm = embeddings
                .iter()
                .map(|e| embedding::is_normal(sys, &adj, e, NormalPolicy::Standard))
                .collect::<Result<Vec<_>>>()?;
            (Some(adj), rep, norm)
        } else {
            (None, vec![false; embeddings.len()], vec![false; embeddings.len()])
        };
        let n = interval.len();
        Ok(EmbeddingSpace {
            sys: sys.clone(),
            interval,
            embeddings,
            pattern_id,
            by_pattern,
            poset,
            adjacency,
            representative,
            normal,
            astar: (0..n).map(|_| OnceLock::new()).collect(),
            rstar: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn system(&self) -> &PatternSystem {
        &self.sys
    }

    pub fn top_id(&self) -> ElementId {
        self.interval.poset.top().expect("interval is bounded")
    }

    pub fn top(&self) -> &Word {
        self.interval.top()
    }

    pub fn adjacency(&self) -> Option<&AdjacencyDecomposition> {
        self.adjacency.as_ref()
    }

    pub fn is_representative(&self, e: usize) -> bool {
        self.representative[e]
    }

    pub fn is_normal(&self, e: usize) -> bool {
        self.normal[e]
    }

    /// The embedding of the top in itself.
    pub fn full_embedding(&self) -> usize {
        self.by_pattern[self.top_id()][0]
    }

    pub fn id_of(&self, w: &Word) -> Result<ElementId> {
        self.interval
            .id(w)
            .ok_or_else(|| Error::Input(format!("{w} is not in the interval [{}, {}]", self.interval.bottom(), self.top())))
    }

    /// Embedding ids whose pattern lies in `[lo, top)` (or `(lo, top)` when `strict`).
    pub fn ids_above(&self, lo: ElementId, strict: bool, representative_only: bool) -> Vec<usize> {
        let top = self.top_id();
        let ip = &self.interval.poset;
        (0..self.embeddings.len())
            .filter(|&e| {
                let p = self.pattern_id[e];
                p != top
                    && ip.leq(lo, p)
                    && (!strict || p != lo)
                    && (!representative_only || self.representative[e])
            })
            .collect()
    }

    fn require_closed(&self, what: &str) -> Result<()> {
        self.sys.require_closed(what).map(|_| ())
    }

    /// `μ(Â*(λ, top))`.
    pub fn mu_a_star(&self, lambda: ElementId) -> i64 {
        *self.astar[lambda].get_or_init(|| mobius_number_of(&self.poset, &self.ids_above(lambda, false, false)))
    }

    /// `μ(R̂*(λ, top))`.
    pub fn mu_r_star(&self, lambda: ElementId) -> Result<i64> {
        self.require_closed("representative spaces")?;
        Ok(*self.rstar[lambda].get_or_init(|| mobius_number_of(&self.poset, &self.ids_above(lambda, false, true))))
    }

    /// `μ(Â(σ, top))`.
    pub fn mu_a(&self, sigma: ElementId) -> i64 {
        mobius_number_of(&self.poset, &self.ids_above(sigma, true, false))
    }

    /// `μ(R̂(σ, top))`.
    pub fn mu_r(&self, sigma: ElementId) -> Result<i64> {
        self.require_closed("representative spaces")?;
        Ok(mobius_number_of(&self.poset, &self.ids_above(sigma, true, true)))
    }

    /// `Σ_{η ∈ E^{σ,top}} μ(η, top)`, each computed inside the embedding poset.
    pub fn sum_mu_embeddings(&self, sigma: ElementId) -> Result<i64> {
        let full = self.full_embedding();
        let mut total = 0;
        for &e in &self.by_pattern[sigma] {
            total += self.poset.mobius(e, full)?;
        }
        Ok(total)
    }

    pub fn embedding_count(&self, sigma: ElementId) -> usize {
        self.by_pattern[sigma].len()
    }

    pub fn normal_count(&self, sigma: ElementId) -> Result<usize> {
        self.require_closed("normal embeddings")?;
        Ok(self.by_pattern[sigma].iter().filter(|&&e| self.normal[e]).count())
    }

    /// `μ(σ, top)` in the pattern poset.
    pub fn mu_to_top(&self, sigma: ElementId) -> Result<i64> {
        self.interval.poset.mobius(sigma, self.top_id())
    }

    /// Intermediate elements of `[σ, top)` (or `(σ, top)`), highest rank first, then by word.
    fn lambdas(&self, sigma: ElementId, include_sigma: bool) -> Vec<ElementId> {
        let ip = &self.interval.poset;
        let h = ip.heights();
        let top = self.top_id();
        let mut ids: Vec<_> = (0..self.interval.len())
            .filter(|&l| l != top && ip.leq(sigma, l) && (include_sigma || l != sigma))
            .collect();
        ids.sort_by(|&a, &b| h[b].cmp(&h[a]).then_with(|| self.interval.elements[a].cmp(&self.interval.elements[b])));
        ids
    }

    /// Evaluates one of the four decompositions of `μ(σ, top)`.
    pub fn decomposition(&self, sigma: ElementId, eq: Equation) -> Result<VerificationReport> {
        let top = self.top_id();
        if sigma == top || !self.interval.poset.leq(sigma, top) {
            return input("decompositions need sigma strictly below the top");
        }
        let s = &self.interval.elements[sigma];
        let p = self.top();
        let sign = if (p.len() - s.len()) % 2 == 0 { 1 } else { -1 };
        let mu_base = self.interval.poset.mobius_from(sigma)?;
        let lhs = mu_base.get(top);
        let mut terms = Vec::new();
        let (include_sigma, star): (bool, &str) = match eq {
            Equation::Eq1 => {
                terms.push(Term::new(format!("μ(Â({s},{p}))"), self.mu_a(sigma)));
                (false, "Â*")
            }
            Equation::Eq2 => {
                terms.push(Term::new(format!("Σ_η μ(η,{p}) over E({s},{p})"), self.sum_mu_embeddings(sigma)?));
                (true, "Â*")
            }
            Equation::Eq3 => {
                if !self.sys.is_fully_closed() {
                    return Err(Error::Unsupported(format!(
                        "eq3 needs a fully-closed pattern poset, {} is not",
                        self.sys.kind().name()
                    )));
                }
                let e = self.embedding_count(sigma) as i64;
                terms.push(Term::new(format!("(-1)^{}·E({s},{p})", p.len() - s.len()), sign * e));
                (true, "Â*")
            }
            Equation::Eq4 => {
                self.require_closed("eq4")?;
                let ne = self.normal_count(sigma)? as i64;
                terms.push(Term::new(format!("(-1)^{}·NE({s},{p})", p.len() - s.len()), sign * ne));
                (true, "R̂*")
            }
        };
        for l in self.lambdas(sigma, include_sigma) {
            let m = mu_base.get(l);
            let space = if eq == Equation::Eq4 { self.mu_r_star(l)? } else { self.mu_a_star(l) };
            let lw = &self.interval.elements[l];
            terms.push(Term::at(format!("μ({s},{lw})·μ({star}({lw},{p}))"), m * space, lw.to_string()));
        }
        Ok(VerificationReport::new(
            self.sys.describe(),
            format!("[{s},{p}]"),
            eq.name(),
            lhs,
            terms,
        ))
    }
}

/// Evaluates a decomposition of `μ(a, b)` for a single interval.
pub fn mobius_decomposition(sys: &PatternSystem, a: &Word, b: &Word, eq: Equation) -> Result<VerificationReport> {
    match eq {
        Equation::Eq3 if !sys.is_fully_closed() => {
            return Err(Error::Unsupported(format!("eq3 needs a fully-closed pattern poset, {} is not", sys.kind().name())))
        }
        Equation::Eq4 => {
            sys.require_closed("eq4")?;
        }
        _ => {}
    }
    let space = EmbeddingSpace::new(sys, a, b)?;
    space.decomposition(space.interval.poset.bottom().expect("bounded"), eq)
}

/// An order-preserving map between finite posets, indexed by source id.
#[derive(Clone, Debug)]
pub struct PosetMap {
    pub source: FinitePoset,
    pub target: FinitePoset,
    pub map: Vec<ElementId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibrationCheck {
    pub surjective: bool,
    pub order_preserving: bool,
    pub rank_preserving: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub source_pure: bool,
    pub target_pure: bool,
    /// First RAO violation of the order on the source, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_violation: Option<String>,
    /// Fibres `f⁻¹(Q_{>q})` on which the order fails, with the first violation.
    pub fiber_failures: Vec<String>,
    /// Fibres `f⁻¹(Q_{≥q})` for interior `q` on which the order fails (reported only).
    pub star_fiber_failures: Vec<String>,
    /// `f⁻¹(Q_{<q}) = P_{<r(q)}` for every `q`.
    pub preimage_lower_condition: bool,
    /// `Q_{<q} = f(P_{<r(q)})` for every `q`.
    pub image_lower_condition: bool,
    pub hypotheses_pass: bool,
    /// Target labels in the induced earliest-preimage order.
    pub induced_order: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion_violation: Option<String>,
    pub conclusion_pass: bool,
    /// The hypotheses hold but the conclusion fails.
    pub refutation_candidate: bool,
}

impl PosetMap {
    pub fn new(source: FinitePoset, target: FinitePoset, map: Vec<ElementId>) -> Result<Self> {
        if map.len() != source.len() {
            return input(format!("map has {} entries for {} source elements", map.len(), source.len()));
        }
        if let Some(&bad) = map.iter().find(|&&q| q >= target.len()) {
            return Err(Error::UnknownElement(bad));
        }
        Ok(PosetMap { source, target, map })
    }

    pub fn preimage(&self, pred: impl Fn(ElementId) -> bool) -> Vec<ElementId> {
        (0..self.source.len()).filter(|&p| pred(self.map[p])).collect()
    }

    /// Surjectivity, order preservation and rank (height) preservation.
    pub fn verify(&self) -> FibrationCheck {
        let mut first = None;
        let mut hit = vec![false; self.target.len()];
        for &q in &self.map {
            hit[q] = true;
        }
        let surjective = match hit.iter().position(|h| !h) {
            Some(q) => {
                first.get_or_insert_with(|| format!("{} has no preimage", self.target.label(q)));
                false
            }
            None => true,
        };
        let mut order_preserving = true;
        'outer: for a in 0..self.source.len() {
            for b in self.source.up_set(a).ones() {
                if !self.target.leq(self.map[a], self.map[b]) {
                    first.get_or_insert_with(|| {
                        format!(
                            "{} <= {} but {} is not below {}",
                            self.source.label(a),
                            self.source.label(b),
                            self.target.label(self.map[a]),
                            self.target.label(self.map[b])
                        )
                    });
                    order_preserving = false;
                    break 'outer;
                }
            }
        }
        let hs = self.source.heights();
        let ht = self.target.heights();
        let rank_preserving = match (0..self.source.len()).find(|&p| hs[p] != ht[self.map[p]]) {
            Some(p) => {
                first.get_or_insert_with(|| {
                    format!(
                        "{} has rank {} but its image {} has rank {}",
                        self.source.label(p),
                        hs[p],
                        self.target.label(self.map[p]),
                        ht[self.map[p]]
                    )
                });
                false
            }
            None => true,
        };
        FibrationCheck {
            surjective,
            order_preserving,
            rank_preserving,
            pass: surjective && order_preserving && rank_preserving,
            first_violation: first,
        }
    }

    /// `μ̂(Q) = μ̂(P) + Σ_q μ̂(Q_{<q}) μ̂(f⁻¹(Q_{≥q}))`.
    pub fn walker_identity(&self, system: String, interval: String, variant: &str) -> VerificationReport {
        let q_all: Vec<_> = (0..self.target.len()).collect();
        let p_all: Vec<_> = (0..self.source.len()).collect();
        let lhs = mobius_number_of(&self.target, &q_all);
        let mut terms = vec![Term::new("μ̂(P)", mobius_number_of(&self.source, &p_all))];
        for q in 0..self.target.len() {
            let below: Vec<_> = (0..self.target.len()).filter(|&x| self.target.lt(x, q)).collect();
            let fiber = self.preimage(|x| self.target.leq(q, x));
            let value = mobius_number_of(&self.target, &below) * mobius_number_of(&self.source, &fiber);
            let label = self.target.label(q).to_string();
            terms.push(Term::at(format!("μ̂(Q<{label})·μ̂(f⁻¹(Q≥{label}))"), value, label));
        }
        VerificationReport::new(system, interval, format!("walker-{variant}"), lhs, terms)
    }

    /// Checks the hypotheses and conclusion of the shelling transfer for a
    /// linear order on a bounded source mapped onto a bounded target.
    pub fn shelling_transfer(&self, order: &LinearOrder, limits: &Limits) -> Result<TransferReport> {
        self.source.bounds()?;
        self.target.bounds()?;
        let check = self.verify();
        if !check.surjective {
            return input(format!("the map is not surjective: {}", check.first_violation.unwrap_or_default()));
        }
        let source_pure = self.source.rank_info().is_pure;
        let target_pure = self.target.rank_info().is_pure;
        let source_violation = rao_status(&self.source, order, limits)?;

        let top_q = self.target.top().expect("bounded");
        let mut fiber_failures = Vec::new();
        let mut star_fiber_failures = Vec::new();
        for q in 0..self.target.len() {
            if q == top_q {
                continue;
            }
            let strict = self.preimage(|x| self.target.lt(q, x));
            if let Some(v) = self.fiber_rao(&strict, order, limits)? {
                fiber_failures.push(format!("f⁻¹(Q>{}): {v}", self.target.label(q)));
            }
            if Some(q) != self.target.bottom() {
                let weak = self.preimage(|x| self.target.leq(q, x));
                if let Some(v) = self.fiber_rao(&weak, order, limits)? {
                    star_fiber_failures.push(format!("f⁻¹(Q≥{}): {v}", self.target.label(q)));
                }
            }
        }

        // r(q): the earliest preimage of q
        let rep: Vec<ElementId> = (0..self.target.len())
            .map(|q| {
                self.preimage(|x| x == q)
                    .into_iter()
                    .min_by_key(|&p| order.position(p))
                    .expect("surjective")
            })
            .collect();
        let mut preimage_lower_condition = true;
        let mut image_lower_condition = true;
        for q in 0..self.target.len() {
            let below_r: BTreeSet<_> = (0..self.source.len()).filter(|&p| self.source.lt(p, rep[q])).collect();
            let pre: BTreeSet<_> = self.preimage(|x| self.target.lt(x, q)).into_iter().collect();
            preimage_lower_condition &= pre == below_r;
            let image: BTreeSet<_> = below_r.iter().map(|&p| self.map[p]).collect();
            let lower: BTreeSet<_> = (0..self.target.len()).filter(|&x| self.target.lt(x, q)).collect();
            image_lower_condition &= image == lower;
        }
        let hypotheses_pass = source_pure
            && target_pure
            && source_violation.is_none()
            && fiber_failures.is_empty()
            && (preimage_lower_condition || image_lower_condition);

        let induced = LinearOrder::by_key(self.target.len(), |q| order.position(rep[q]));
        let induced_order = induced
            .sequence()
            .into_iter()
            .map(|q| self.target.label(q).to_string())
            .collect();
        let conclusion_violation = rao_status(&self.target, &induced, limits)?;
        let conclusion_pass = conclusion_violation.is_none();
        Ok(TransferReport {
            source_pure,
            target_pure,
            source_violation,
            fiber_failures,
            star_fiber_failures,
            preimage_lower_condition,
            image_lower_condition,
            hypotheses_pass,
            induced_order,
            conclusion_violation,
            conclusion_pass,
            refutation_candidate: hypotheses_pass && !conclusion_pass,
        })
    }

    /// The order restricted to a fibre with a fresh bottom; the source top is
    /// replaced by a fresh top so the fibre is bounded.
    fn fiber_rao(&self, ids: &[ElementId], order: &LinearOrder, limits: &Limits) -> Result<Option<String>> {
        let top = self.source.top().expect("bounded");
        let inner: Vec<_> = ids.iter().copied().filter(|&p| p != top).collect();
        let fiber = self.source.induced(&inner).with_fresh_bounds("0̂", self.source.label(top));
        let n = inner.len();
        let restricted = LinearOrder::by_key(n + 2, |i| if i < n { order.position(inner[i]) } else { usize::MAX - (n + 1 - i) });
        rao_status(&fiber, &restricted, limits)
    }
}

/// First RAO violation of `order` on `poset`; an impure poset counts as a violation.
fn rao_status(poset: &FinitePoset, order: &LinearOrder, limits: &Limits) -> Result<Option<String>> {
    if !poset.rank_info().is_pure {
        return Ok(Some("the poset is not pure".into()));
    }
    Ok(match check_rao(poset, order, limits)? {
        RaoOutcome::Pass(_) => None,
        RaoOutcome::Violation(v) => Some(v.describe(poset)),
    })
}

/// One of the spaces `A`, `A*`, `R`, `R*` over `[bottom, top]`, optionally with
/// a fresh bottom `0̂` and the top embedding adjoined.
#[derive(Clone, Debug)]
pub struct TotalSpace {
    pub variant: Variant,
    pub hatted: bool,
    pub bottom: Word,
    pub top: Word,
    /// Element `i` of the poset for `i < embeddings.len()`.
    pub embeddings: Vec<Embedding>,
    pub poset: FinitePoset,
    /// Pattern of each embedding.
    pub fiber_of: Vec<Word>,
    base: Interval,
    base_ids: Vec<ElementId>,
}

impl TotalSpace {
    /// The base interval `[bottom, top]`.
    pub fn base_interval(&self) -> &Interval {
        &self.base
    }

    /// Element ids of the `0̂` and top elements in a hatted space.
    pub fn hat_ids(&self) -> Option<(ElementId, ElementId)> {
        let n = self.embeddings.len();
        self.hatted.then_some((n, n + 1))
    }

    /// The projection onto the base: the open or half-open interval when
    /// unhatted, the closed interval when hatted.
    pub fn fibration(&self) -> Result<PosetMap> {
        let ip = &self.base.poset;
        let (b, t) = (ip.bottom().expect("bounded"), ip.top().expect("bounded"));
        if self.hatted {
            let mut map = self.base_ids.clone();
            map.push(b);
            map.push(t);
            return PosetMap::new(self.poset.clone(), ip.clone(), map);
        }
        let targets: Vec<ElementId> = (0..self.base.len())
            .filter(|&x| x != t && (x != b || self.variant.includes_bottom()))
            .collect();
        let target = ip.induced(&targets);
        let map = self
            .base_ids
            .iter()
            .map(|x| targets.iter().position(|y| y == x).expect("pattern in the base"))
            .collect();
        PosetMap::new(self.poset.clone(), target, map)
    }

    /// A linear order on the space from a key on embeddings; `0̂` comes first and the top last.
    pub fn order_by_key<K: Ord>(&self, key: impl Fn(&Embedding) -> K) -> LinearOrder {
        let n = self.embeddings.len();
        let size = self.poset.len();
        let mut ids: Vec<usize> = (0..n).collect();
        ids.sort_by(|&a, &b| key(&self.embeddings[a]).cmp(&key(&self.embeddings[b])).then(a.cmp(&b)));
        let mut seq = Vec::with_capacity(size);
        if self.hatted {
            seq.push(n);
        }
        seq.extend(ids);
        if self.hatted {
            seq.push(n + 1);
        }
        LinearOrder::new(&seq, size).expect("permutation of ids")
    }
}

impl EmbeddingSpace {
    /// The total space over `[bottom, top]` of this space.
    pub fn total(&self, variant: Variant, hatted: bool) -> Result<TotalSpace> {
        if variant.representative_only() {
            self.require_closed("representative spaces")?;
        }
        let bottom = self.interval.poset.bottom().expect("bounded");
        let ids = self.ids_above(bottom, !variant.includes_bottom(), variant.representative_only());
        let mut poset = self.poset.induced(&ids);
        if hatted {
            poset = poset.with_fresh_bounds("0̂", &self.top().to_string());
        }
        Ok(TotalSpace {
            variant,
            hatted,
            bottom: self.interval.bottom().clone(),
            top: self.top().clone(),
            embeddings: ids.iter().map(|&e| self.embeddings[e].clone()).collect(),
            fiber_of: ids.iter().map(|&e| self.interval.elements[self.pattern_id[e]].clone()).collect(),
            base_ids: ids.iter().map(|&e| self.pattern_id[e]).collect(),
            base: self.interval.clone(),
            poset,
        })
    }
}

pub fn build_space(sys: &PatternSystem, a: &Word, b: &Word, variant: Variant, hatted: bool) -> Result<TotalSpace> {
    if variant.representative_only() {
        sys.require_closed("representative spaces")?;
    }
    EmbeddingSpace::new(sys, a, b)?.total(variant, hatted)
}

/// Projection check on an unhatted space.
pub fn verify_fibration(space: &TotalSpace) -> Result<FibrationCheck> {
    if space.hatted {
        return input("verify_fibration expects an unhatted space");
    }
    Ok(space.fibration()?.verify())
}

pub fn walker_identity_check(sys: &PatternSystem, space: &TotalSpace) -> Result<VerificationReport> {
    if space.hatted {
        return input("the Walker identity is checked on an unhatted space");
    }
    let map = space.fibration()?;
    Ok(map.walker_identity(sys.describe(), format!("[{},{}]", space.bottom, space.top), space.variant.name()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerIdealReport {
    pub checked: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// For each `ℓ` over `λ ∈ (a, b)`, the image of the strict down-set of `ℓ` in
/// the space equals `(a, λ)`; done for `A` and, on closed systems, `R`.
pub fn lower_ideal_check(sys: &PatternSystem, a: &Word, b: &Word) -> Result<LowerIdealReport> {
    let space = EmbeddingSpace::new(sys, a, b)?;
    lower_ideal_in(&space)
}

pub(crate) fn lower_ideal_in(space: &EmbeddingSpace) -> Result<LowerIdealReport> {
    let ip = &space.interval.poset;
    let bottom = ip.bottom().expect("bounded");
    let mut variants = vec![false];
    if space.sys.is_closed() {
        variants.push(true);
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for rep in variants {
        let ids = space.ids_above(bottom, true, rep);
        for &l in &ids {
            let lambda = space.pattern_id[l];
            let image: BTreeSet<ElementId> = ids
                .iter()
                .filter(|&&e| space.poset.lt(e, l))
                .map(|&e| space.pattern_id[e])
                .collect();
            let expected: BTreeSet<ElementId> = (0..space.interval.len())
                .filter(|&x| x != bottom && x != lambda && ip.leq(bottom, x) && ip.leq(x, lambda))
                .collect();
            checked += 1;
            if image != expected {
                failures.push(format!(
                    "{} in {}: image of the down-set differs from the open interval below {}",
                    space.embeddings[l],
                    if rep { "R" } else { "A" },
                    space.interval.elements[lambda]
                ));
            }
        }
    }
    Ok(LowerIdealReport {
        checked,
        pass: failures.is_empty(),
        failures,
    })
}

/// Shelling transfer for a hatted `A` or `R` space over `[a, b]` with the
/// embeddings ordered by `key`.
pub fn shelling_transfer_check<K: Ord>(
    sys: &PatternSystem,
    a: &Word,
    b: &Word,
    variant: Variant,
    key: impl Fn(&Embedding) -> K,
    limits: &Limits,
) -> Result<TransferReport> {
    if variant.includes_bottom() {
        return input("shelling transfer uses the A or R space");
    }
    let space = build_space(sys, a, b, variant, true)?;
    let order = space.order_by_key(key);
    space.fibration()?.shelling_transfer(&order, limits)
}

/// Text form of a slot sequence, for reports.
pub fn slots_text(slots: &[Slot]) -> String {
    slots.iter().map(Slot::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn eq4_on_1_13254() {
        let sys = PatternSystem::classical();
        let r = mobius_decomposition(&sys, &w("1"), &w("13254"), Equation::Eq4).unwrap();
        assert_eq!(r.lhs, 1);
        assert_eq!(r.terms[0].value, 0);
        assert_eq!(r.term_for("132"), Some(1));
        assert_eq!(r.term_for("12"), Some(0));
        assert_eq!(r.term_for("21"), Some(0));
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn all_equations_on_1_13254() {
        let sys = PatternSystem::classical();
        let space = EmbeddingSpace::new(&sys, &w("1"), &w("13254")).unwrap();
        for eq in Equation::ALL {
            let r = space.decomposition(0, eq).unwrap();
            assert!(r.pass, "{eq:?}: {r:?}");
        }
    }

    #[test]
    fn rank_one_interval() {
        let sys = PatternSystem::classical();
        let r = mobius_decomposition(&sys, &w("12"), &w("123"), Equation::Eq1).unwrap();
        assert_eq!(r.lhs, -1);
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.terms[0].value, -1);
        let space = build_space(&sys, &w("12"), &w("123"), Variant::A, false).unwrap();
        assert!(space.poset.is_empty());
    }

    #[test]
    fn equation_needs_closure() {
        let sys = PatternSystem::consecutive();
        assert!(matches!(
            mobius_decomposition(&sys, &w("1"), &w("123"), Equation::Eq4),
            Err(Error::Unsupported(_))
        ));
        let comp = PatternSystem::composition(3).unwrap();
        assert!(matches!(
            mobius_decomposition(&comp, &w("1"), &w("12"), Equation::Eq3),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(build_space(&sys, &w("1"), &w("123"), Variant::R, false), Err(Error::Unsupported(_))));
    }

    #[test]
    fn a_star_size_for_subword_example() {
        let sys = PatternSystem::subword_of_size(3);
        let (a, b) = (w("2122"), w("2313232"));
        let space = build_space(&sys, &a, &b, Variant::AStar, true).unwrap();
        let iv = sys.build_interval(&a, &b).unwrap();
        let expected: usize = iv
            .elements
            .iter()
            .filter(|l| **l != b)
            .map(|l| sys.occurrences(l, &b).unwrap().len())
            .sum();
        assert_eq!(space.poset.len(), expected + 2);
    }

    #[test]
    fn fibrations_and_walker_on_1_13254() {
        let sys = PatternSystem::classical();
        for variant in [Variant::A, Variant::AStar, Variant::R, Variant::RStar] {
            let space = build_space(&sys, &w("1"), &w("13254"), variant, false).unwrap();
            let check = verify_fibration(&space).unwrap();
            assert!(check.pass, "{variant}: {check:?}");
            if !variant.includes_bottom() {
                assert!(walker_identity_check(&sys, &space).unwrap().pass);
            }
        }
    }

    #[test]
    fn walker_on_rank_one_degenerates() {
        let sys = PatternSystem::classical();
        let space = build_space(&sys, &w("1"), &w("12"), Variant::A, false).unwrap();
        let r = walker_identity_check(&sys, &space).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert!(r.pass);
    }

    #[test]
    fn lower_ideal_on_1_13254() {
        let r = lower_ideal_check(&PatternSystem::classical(), &w("1"), &w("13254")).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.checked > 0);
    }

    #[test]
    fn shelling_fixture_transfer_is_reported_honestly() {
        let map = PosetMap::new(fixtures::shelling_source(), fixtures::shelling_target(), fixtures::shelling_projection()).unwrap();
        assert!(map.verify().pass);
        let order = LinearOrder::new(&(0..10).collect::<Vec<_>>(), 10).unwrap();
        let r = map.shelling_transfer(&order, &Limits::default()).unwrap();
        assert_eq!(
            r.induced_order,
            ["1", "12", "21", "123", "213", "2143", "1243", "13254"].map(String::from)
        );
        assert!(r.source_violation.is_some());
        assert!(!r.hypotheses_pass);
        assert!(!r.refutation_candidate);
    }

    #[test]
    fn variant_and_equation_parse() {
        assert_eq!("R*".parse::<Variant>().unwrap(), Variant::RStar);
        assert_eq!("eq3".parse::<Equation>().unwrap(), Equation::Eq3);
        assert!("B".parse::<Variant>().is_err());
    }
}
