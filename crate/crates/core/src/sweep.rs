//! Exhaustive checks over every interval of a pattern poset up to a size bound.
//!
//! Tops are enumerated in length-then-word order and every bottom below a top
//! is visited once. Tops are processed in parallel; results keep the sequential order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::fibration::{EmbeddingSpace, Equation, Variant, walker_identity_check};
use crate::poset::{crosscut_mobius, reduced_euler_characteristic, ElementId, Limits};
use crate::system::{Kind, PatternSystem, Slot};
use crate::topology::position_word;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Subword Möbius values against signed normal-embedding counts.
    Bjorner,
    Equation(Equation),
    Walker,
    /// Zero-split equivalences (rank ≥ 2) and the disconnection biconditional (rank ≥ 3).
    ZeroSplit,
    /// Position-word order on representative embeddings of subword intervals.
    Satcond2,
    Consecutive,
    /// Intervals above an embedding are products of chains.
    Structure,
    /// Recursive Möbius against Euler characteristic and crosscuts.
    Oracles,
    LowerIdeal,
}

impl Theorem {
    pub const NAMES: [&'static str; 12] = [
        "bjorner", "eq1", "eq2", "eq3", "eq4", "walker", "zerosplit", "satcond2", "consecutive", "structure", "oracles",
        "lower-ideal",
    ];
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::Bjorner => "bjorner",
            Theorem::Equation(e) => e.name(),
            Theorem::Walker => "walker",
            Theorem::ZeroSplit => "zerosplit",
            Theorem::Satcond2 => "satcond2",
            Theorem::Consecutive => "consecutive",
            Theorem::Structure => "structure",
            Theorem::Oracles => "oracles",
            Theorem::LowerIdeal => "lower-ideal",
        };
        f.write_str(s)
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bjorner" => Theorem::Bjorner,
            "walker" => Theorem::Walker,
            "zerosplit" | "zero-split" => Theorem::ZeroSplit,
            "satcond2" => Theorem::Satcond2,
            "consecutive" => Theorem::Consecutive,
            "structure" => Theorem::Structure,
            "oracles" => Theorem::Oracles,
            "lower-ideal" => Theorem::LowerIdeal,
            other => match other.parse::<Equation>() {
                Ok(e) => Theorem::Equation(e),
                Err(_) => {
                    return input(format!("unknown theorem {other:?}; expected one of {}", Theorem::NAMES.join(", ")))
                }
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalOutcome {
    pub interval: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub theorem: String,
    pub system: String,
    pub max_n: usize,
    pub checked: usize,
    pub failed: usize,
    pub outcomes: Vec<IntervalOutcome>,
    pub pass: bool,
}

impl SweepSummary {
    pub fn tally(&self) -> String {
        if self.pass {
            format!("{} on {} up to {}: {} intervals, all pass", self.theorem, self.system, self.max_n, self.checked)
        } else {
            format!(
                "{} on {} up to {}: {} intervals, {} failed",
                self.theorem, self.system, self.max_n, self.checked, self.failed
            )
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &IntervalOutcome> {
        self.outcomes.iter().filter(|o| !o.pass)
    }
}

/// Least element every sweep interval starts from.
pub fn sweep_bottom(sys: &PatternSystem) -> Word {
    match sys.kind() {
        Kind::Consecutive => Word(vec![1]),
        _ => Word::empty(),
    }
}

/// Runs `check` on every `[σ, π]` with `π` of length at most `max_n` and
/// `σ` at or above the sweep bottom; `None` skips an interval.
pub fn for_each_interval<T, F>(sys: &PatternSystem, max_n: usize, check: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&EmbeddingSpace, ElementId) -> Result<Option<T>> + Sync,
{
    let bottom = sweep_bottom(sys);
    let tops: Vec<Word> = sys
        .elements_up_to(max_n)
        .into_iter()
        .filter(|t| t.len() >= bottom.len())
        .collect();
    let per_top: Vec<Result<Vec<T>>> = tops
        .par_iter()
        .map(|top| {
            let space = EmbeddingSpace::new(sys, &bottom, top)?;
            let mut out = Vec::new();
            for sigma in 0..space.interval.len() {
                if let Some(t) = check(&space, sigma)? {
                    out.push(t);
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_top {
        all.extend(r?);
    }
    Ok(all)
}

fn label(space: &EmbeddingSpace, sigma: ElementId) -> String {
    format!("[{},{}]", space.interval.elements[sigma], space.top())
}

fn outcome(space: &EmbeddingSpace, sigma: ElementId, pass: bool, detail: String) -> Option<IntervalOutcome> {
    Some(IntervalOutcome {
        interval: label(space, sigma),
        pass,
        detail,
    })
}

fn rank(space: &EmbeddingSpace, sigma: ElementId) -> usize {
    crate::topology::rank_between(&space.interval.poset, sigma, space.top_id())
}

/// `[η, top]` is a product of chains with one chain per position, of the
/// length needed to climb from the slot to the base letter.
pub fn product_of_chains_above(space: &EmbeddingSpace, e: usize) -> bool {
    let sys = space.system();
    let Some(tree) = sys.tree() else { return false };
    let eta = &space.embeddings[e];
    let coord = |f: &crate::embedding::Embedding| -> Vec<usize> { f.slots().iter().map(|&s| tree.depth(s)).collect() };
    let start = coord(eta);
    let lengths: Vec<usize> = (0..eta.len())
        .map(|i| tree.depth(Slot::Letter(eta.base().letters()[i])) - start[i])
        .collect();
    let above: Vec<usize> = (0..space.embeddings.len()).filter(|&f| space.poset.leq(e, f)).collect();
    let expected: usize = lengths.iter().map(|l| l + 1).product();
    if above.len() != expected {
        return false;
    }
    let coords: Vec<Vec<usize>> = above.iter().map(|&f| coord(&space.embeddings[f])).collect();
    let mut seen = coords.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != coords.len() {
        return false;
    }
    let inside = coords.iter().all(|c| c.iter().zip(&start).zip(&lengths).all(|((x, s), l)| *x >= *s && *x <= s + l));
    inside
        && above.iter().enumerate().all(|(i, &f)| {
            above.iter().enumerate().all(|(j, &g)| {
                space.poset.leq(f, g) == coords[i].iter().zip(&coords[j]).all(|(x, y)| x <= y)
            })
        })
}

fn check_one(theorem: Theorem, space: &EmbeddingSpace, sigma: ElementId, limits: &Limits) -> Result<Option<IntervalOutcome>> {
    let sys = space.system();
    let top = space.top_id();
    let below_top = sigma != top;
    Ok(match theorem {
        Theorem::Bjorner => {
            let mu = space.mu_to_top(sigma)?;
            let ne = space.normal_count(sigma)? as i64;
            let gap = space.top().len() - space.interval.elements[sigma].len();
            let formula = if gap % 2 == 0 { ne } else { -ne };
            outcome(space, sigma, mu == formula, format!("mu {mu}, signed NE {formula}"))
        }
        Theorem::Equation(eq) if below_top => {
            let r = space.decomposition(sigma, eq)?;
            outcome(space, sigma, r.pass, format!("lhs {} rhs {}", r.lhs, r.rhs))
        }
        Theorem::Walker if below_top => {
            let mut variants = vec![Variant::A];
            if sys.is_closed() {
                variants.push(Variant::R);
            }
            let mut detail = Vec::new();
            let mut pass = true;
            for v in variants {
                let sub = EmbeddingSpace::new(sys, &space.interval.elements[sigma], space.top())?;
                let r = walker_identity_check(sys, &sub.total(v, false)?)?;
                pass &= r.pass;
                detail.push(format!("{} lhs {} rhs {}", v, r.lhs, r.rhs));
            }
            outcome(space, sigma, pass, detail.join("; "))
        }
        Theorem::ZeroSplit if below_top && rank(space, sigma) >= 2 => {
            let eq = space.equivalences(sigma)?;
            let mut pass = eq.pass;
            let mut detail = eq.conditions.iter().map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(", ");
            if eq.rank >= 3 {
                let d = space.disconnection(sigma)?;
                pass &= d.pass;
                detail.push_str(&format!(
                    "; disconnected={} strong={} predicted={:?}",
                    d.disconnected, d.strongly_zero_split, d.predicted_match
                ));
            }
            outcome(space, sigma, pass, detail)
        }
        Theorem::Satcond2 if below_top => {
            let r = space.satcond2(sigma, position_word, limits)?;
            let pass = r.pass && r.v_set.is_empty() && r.mu_r_star == 0;
            let detail = match &r.r2_violation {
                Some(v) => format!("R2 fails: {v}"),
                None => format!("rao {} |V| {} mu {}", r.rao_verified, r.v_set.len(), r.mu_r_star),
            };
            outcome(space, sigma, pass, detail)
        }
        Theorem::Consecutive => {
            let r = space.consecutive_check(sigma, limits)?;
            let detail = format!("mu {} formula {} assembled {} cases {:?}", r.recursive, r.formula, r.assembled, r.cases);
            outcome(space, sigma, r.pass, detail)
        }
        Theorem::Structure => {
            let failures: Vec<String> = space.by_pattern[sigma]
                .iter()
                .filter(|&&e| !product_of_chains_above(space, e))
                .map(|&e| space.embeddings[e].to_string())
                .collect();
            outcome(space, sigma, failures.is_empty(), failures.join(" "))
        }
        Theorem::Oracles if below_top => {
            let ids = space.interval.poset.interval_ids(sigma, top);
            let sub = space.interval.poset.induced(&ids);
            let mu = space.mu_to_top(sigma)?;
            let euler = match reduced_euler_characteristic(&sub, limits) {
                Ok(v) => Some(v),
                Err(Error::SizeGuard { .. }) => None,
                Err(e) => return Err(e),
            };
            let crosscut = match crosscut_mobius(&sub, limits) {
                Ok(v) => Some(v),
                Err(Error::CrosscutInapplicable { .. }) | Err(Error::SizeGuard { .. }) => None,
                Err(e) => return Err(e),
            };
            let pass = euler.is_none_or(|v| v == mu) && crosscut.is_none_or(|v| v == mu);
            outcome(space, sigma, pass, format!("mu {mu} euler {euler:?} crosscut {crosscut:?}"))
        }
        Theorem::LowerIdeal if sigma == space.interval.poset.bottom().expect("bounded") => {
            let r = crate::fibration::lower_ideal_in(space)?;
            outcome(space, sigma, r.pass, r.failures.join("; "))
        }
        _ => None,
    })
}

fn require(theorem: Theorem, sys: &PatternSystem) -> Result<()> {
    let ok = match theorem {
        Theorem::Bjorner => *sys.kind() == Kind::Subword,
        Theorem::Equation(Equation::Eq3) | Theorem::ZeroSplit => sys.is_fully_closed(),
        Theorem::Equation(Equation::Eq4) | Theorem::Structure | Theorem::Satcond2 => sys.is_closed(),
        Theorem::Consecutive => *sys.kind() == Kind::Consecutive,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{theorem} does not apply to {}", sys.kind().name())))
    }
}

/// Checks one theorem on every interval up to `max_n`.
pub fn run_sweep(theorem: Theorem, sys: &PatternSystem, max_n: usize, limits: &Limits) -> Result<SweepSummary> {
    require(theorem, sys)?;
    let outcomes = for_each_interval(sys, max_n, |space, sigma| check_one(theorem, space, sigma, limits))?;
    Ok(summarize(theorem.to_string(), sys, max_n, outcomes))
}

/// Runs only on the listed intervals.
pub fn run_on(theorem: Theorem, sys: &PatternSystem, intervals: &[(Word, Word)], limits: &Limits) -> Result<SweepSummary> {
    require(theorem, sys)?;
    let results: Vec<Result<Option<IntervalOutcome>>> = intervals
        .par_iter()
        .map(|(a, b)| {
            let space = EmbeddingSpace::new(sys, a, b)?;
            check_one(theorem, &space, 0, limits)
        })
        .collect();
    let mut outcomes = Vec::new();
    for r in results {
        outcomes.extend(r?);
    }
    let max_n = intervals.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
    Ok(summarize(theorem.to_string(), sys, max_n, outcomes))
}

fn summarize(theorem: String, sys: &PatternSystem, max_n: usize, outcomes: Vec<IntervalOutcome>) -> SweepSummary {
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    SweepSummary {
        theorem,
        system: sys.describe(),
        max_n,
        checked: outcomes.len(),
        failed,
        pass: failed == 0,
        outcomes,
    }
}

/// Every interval `[σ, π]` with `σ < π` up to `max_n`, in sweep order.
pub fn all_intervals(sys: &PatternSystem, max_n: usize) -> Result<Vec<(Word, Word)>> {
    for_each_interval(sys, max_n, |space, sigma| {
        Ok((sigma != space.top_id()).then(|| (space.interval.elements[sigma].clone(), space.top().clone())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_names_round_trip() {
        for n in Theorem::NAMES {
            assert_eq!(n.parse::<Theorem>().unwrap().to_string(), n);
        }
        assert!("nope".parse::<Theorem>().is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        let limits = Limits::default();
        let sub = PatternSystem::subword_of_size(2);
        assert!(run_sweep(Theorem::Bjorner, &sub, 4, &limits).unwrap().pass);
        assert!(run_sweep(Theorem::Satcond2, &sub, 4, &limits).unwrap().pass);
        assert!(run_sweep(Theorem::Structure, &sub, 4, &limits).unwrap().pass);
        let cl = PatternSystem::classical();
        assert!(run_sweep(Theorem::Equation(Equation::Eq4), &cl, 4, &limits).unwrap().pass);
        assert!(run_sweep(Theorem::ZeroSplit, &cl, 4, &limits).unwrap().pass);
        let comp = PatternSystem::composition(2).unwrap();
        assert!(run_sweep(Theorem::Structure, &comp, 3, &limits).unwrap().pass);
    }

    #[test]
    fn sweep_order_is_deterministic() {
        let sys = PatternSystem::classical();
        let a = run_sweep(Theorem::Equation(Equation::Eq1), &sys, 4, &Limits::default()).unwrap();
        let b = run_sweep(Theorem::Equation(Equation::Eq1), &sys, 4, &Limits::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.outcomes[0].interval, "[ε,1]");
    }

    #[test]
    fn inapplicable_theorems_are_rejected() {
        let cl = PatternSystem::classical();
        assert!(run_sweep(Theorem::Bjorner, &cl, 3, &Limits::default()).is_err());
        assert!(run_sweep(Theorem::Structure, &PatternSystem::consecutive(), 3, &Limits::default()).is_err());
    }

    #[test]
    fn interval_enumeration() {
        let sys = PatternSystem::classical();
        let all = all_intervals(&sys, 2).unwrap();
        assert_eq!(all.len(), 1 + 2 * 2);
    }
}
