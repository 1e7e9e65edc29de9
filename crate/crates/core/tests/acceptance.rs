//! Acceptance criteria, one line each. Values are exact; each criterion also
//! has a wall-clock budget that counts as part of its pass condition.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use patpos::consecutive::sw_mobius_formula;
use patpos::embedding::{
    adjacency_decomposition, embedding_leq, embeddings, normal_embeddings, representative_embeddings, Embedding,
    NormalPolicy,
};
use patpos::fibration::{mobius_decomposition, Equation, PosetMap};
use patpos::fixtures;
use patpos::poset::{check_r2_at, check_rao, crosscut_mobius, reduced_euler_characteristic, LinearOrder, RaoViolation};
use patpos::sweep::{all_intervals, run_on, run_sweep, SweepSummary, Theorem};
use patpos::system::PatternSystem;
use patpos::topology::{disconnection_check, find_zero_split, SplitMode};
use patpos::word::{reduce, Word};
use patpos::{FinitePoset, Limits, Result};

/// Criteria that are expected to fail, with the reason. A listed criterion
/// that passes is reported as unexpected so the list cannot go stale.
const KNOWN_RED: &[(&str, &str)] = &[(
    "AC8",
    "the ten-element shelling fixture contains [1,9] with disconnected interior {2,5,7} | {3,6}, so no atom ordering of it is recursive",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn w(s: &str) -> Word {
    s.parse().expect("word literal")
}

fn texts(es: &[Embedding]) -> BTreeSet<String> {
    es.iter().map(|e| e.to_string()).collect()
}

fn sweeps(list: &[Result<SweepSummary>]) -> (bool, String) {
    let mut pass = true;
    let mut parts = Vec::new();
    for s in list {
        match s {
            Ok(s) => {
                pass &= s.pass;
                let mut part = format!("{} {}/{}", s.theorem, s.checked - s.failed, s.checked);
                if let Some(f) = s.failures().next() {
                    part.push_str(&format!(" (first failure {} {})", f.interval, f.detail));
                }
                parts.push(part);
            }
            Err(e) => {
                pass = false;
                parts.push(format!("error: {e}"));
            }
        }
    }
    (pass, parts.join(", "))
}

fn ac1() -> Result<Outcome> {
    let p = fixtures::disconnected_rank_four();
    let zero = p.find_label("0").expect("bottom");
    let expected = [
        ("a1", -1), ("a2", -1), ("a3", -1),
        ("b1", 0), ("b2", 0), ("b3", 1), ("b4", 1),
        ("c1", 0), ("c2", -1), ("c3", 0),
    ];
    let mut bad = Vec::new();
    for (label, mu) in expected {
        let got = p.mobius(zero, p.find_label(label).expect("label"))?;
        if got != mu {
            bad.push(format!("{label}: {got} != {mu}"));
        }
    }
    let mu = p.mobius_of_bounds()?;
    let s = p.structure_report()?;
    let pass = bad.is_empty() && mu == 1 && s.interior_disconnected && s.rank.is_pure && s.rank.poset_rank == 4;
    ok(
        pass,
        format!(
            "labels {} mu(P)={mu} disconnected={} pure={} rank={}",
            if bad.is_empty() { "match".to_string() } else { bad.join(" ") },
            s.interior_disconnected,
            s.rank.is_pure,
            s.rank.poset_rank
        ),
    )
}

fn ac2() -> Result<Outcome> {
    let cl = PatternSystem::classical();
    let (a, b) = (w("213"), w("231645"));
    let all = texts(&embeddings(&cl, &a, &b)?);
    let reps = texts(&representative_embeddings(&cl, &a, &b)?);
    let normal = texts(&normal_embeddings(&cl, &a, &b, NormalPolicy::Standard)?);
    let expect = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let mut checks = vec![
        ("embeddings", all == expect(&["2-16--", "-316--", "2-1-4-", "-31-4-", "2-1--5", "-31--5"])),
        ("representatives", reps == expect(&["-316--", "-31--5"])),
        ("normal", normal == expect(&["-31--5"])),
    ];
    let adj = adjacency_decomposition(&cl, &w("2341657"))?;
    let words: Vec<String> = adj.block_words(&w("2341657")).iter().map(|x| x.to_string()).collect();
    checks.push(("adjacencies", words == ["234", "1", "65", "7"]));
    // 0-based tails 1,2,5 are the letters 3,4 and 5
    checks.push(("tails", adj.tails() == vec![1, 2, 5]));
    let comp = PatternSystem::composition(3)?;
    let c = w("321122");
    let cadj = adjacency_decomposition(&comp, &c)?;
    let nontrivial: Vec<String> = cadj
        .nontrivial()
        .map(|(s, e)| Word(c.letters()[s..e].to_vec()).to_string())
        .collect();
    checks.push(("composition adjacency", nontrivial == ["11"]));
    let base = w("243516");
    let e1 = Embedding::parse(&cl, &base, "-435--")?;
    let e2 = Embedding::parse(&cl, &base, "-435-6")?;
    let e3 = Embedding::parse(&cl, &base, "-4--16")?;
    checks.push(("comparabilities", embedding_leq(&cl, &e1, &e2)? && !embedding_leq(&cl, &e3, &e2)?));
    checks.push(("reduce", reduce(&[2, 6, 4])? == vec![1, 3, 2]));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    ok(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} checks match", checks.len())
        } else {
            format!("mismatch: {}", failed.join(", "))
        },
    )
}

fn ac3() -> Result<Outcome> {
    let cl = PatternSystem::classical();
    let r = mobius_decomposition(&cl, &w("1"), &w("13254"), Equation::Eq4)?;
    let ne = r.terms[0].value;
    let by = |l: &str| r.term_for(l);
    let pass = r.pass
        && r.lhs == 1
        && ne == 0
        && by("132") == Some(1)
        && by("12") == Some(0)
        && by("21") == Some(0)
        && r.terms.iter().skip(1).map(|t| t.value).sum::<i64>() == 1;
    ok(
        pass,
        format!(
            "mu={} NE-term={ne} 132:{:?} 12:{:?} 21:{:?} rhs={}",
            r.lhs,
            by("132"),
            by("12"),
            by("21"),
            r.rhs
        ),
    )
}

fn ac4() -> Result<Outcome> {
    let limits = Limits::default();
    let (pass, detail) = sweeps(&[
        run_sweep(Theorem::Bjorner, &PatternSystem::subword_of_size(2), 7, &limits),
        run_sweep(Theorem::Bjorner, &PatternSystem::subword_of_size(3), 6, &limits),
    ]);
    ok(pass, detail)
}

fn ac5() -> Result<Outcome> {
    let limits = Limits::default();
    let sub = PatternSystem::subword_of_size(2);
    let cl = PatternSystem::classical();
    let con = PatternSystem::consecutive();
    let dyck = PatternSystem::dyck();
    let mut runs = Vec::new();
    for eq in [Equation::Eq1, Equation::Eq2] {
        runs.push(run_sweep(Theorem::Equation(eq), &sub, 6, &limits));
        runs.push(run_sweep(Theorem::Equation(eq), &cl, 6, &limits));
        runs.push(run_sweep(Theorem::Equation(eq), &con, 7, &limits));
        runs.push(run_sweep(Theorem::Equation(eq), &dyck, 8, &limits));
    }
    for eq in [Equation::Eq3, Equation::Eq4] {
        runs.push(run_sweep(Theorem::Equation(eq), &sub, 6, &limits));
        runs.push(run_sweep(Theorem::Equation(eq), &cl, 6, &limits));
    }
    let (pass, detail) = sweeps(&runs);
    ok(pass, detail)
}

fn sample(all: Vec<(Word, Word)>, want: usize) -> Vec<(Word, Word)> {
    let stride = (all.len() / want).max(1);
    all.into_iter().step_by(stride).collect()
}

fn ac6() -> Result<Outcome> {
    let limits = Limits::default();
    let cl = PatternSystem::classical();
    let sub = PatternSystem::subword_of_size(2);
    let cl_sample = sample(all_intervals(&cl, 5)?, 150);
    let sub_sample = sample(all_intervals(&sub, 5)?, 100);
    let total = cl_sample.len() + sub_sample.len();
    let (pass, detail) = sweeps(&[
        run_on(Theorem::Walker, &cl, &cl_sample, &limits),
        run_on(Theorem::Walker, &sub, &sub_sample, &limits),
    ]);
    ok(pass && total >= 200, format!("{total} intervals, A and R: {detail}"))
}

fn ac7() -> Result<Outcome> {
    let cl = PatternSystem::classical();
    let (a, b) = (w("41253"), w("41627385"));
    let plain = find_zero_split(&cl, &a, &b, SplitMode::Plain)?;
    let strong = find_zero_split(&cl, &a, &b, SplitMode::Strong)?;
    let d = disconnection_check(&cl, &a, &b)?;
    let parts = plain.as_ref().map(|p| {
        let mut v = vec![texts(&p.part_one), texts(&p.part_two)];
        v.sort();
        v
    });
    let expected_parts = {
        let mut v = vec![
            ["41-273--".to_string()].into_iter().collect::<BTreeSet<_>>(),
            ["--62-385".to_string()].into_iter().collect(),
        ];
        v.sort();
        v
    };
    let example = parts.as_ref() == Some(&expected_parts) && strong.is_none() && !d.disconnected;
    let (pass, detail) = sweeps(&[run_sweep(Theorem::ZeroSplit, &cl, 6, &Limits::default())]);
    ok(
        example && pass,
        format!(
            "example split={} strong={} interior connected={}; {detail}",
            plain.is_some(),
            strong.is_some(),
            !d.disconnected
        ),
    )
}

fn ac8() -> Result<Outcome> {
    let limits = Limits::default();
    let p = fixtures::shelling_source();
    let id = |l: &str| p.find_label(l).expect("label");
    let seq: Vec<_> = (1..=10).map(|i| id(&i.to_string())).collect();
    let order = LinearOrder::new(&seq, p.len())?;
    let rao = check_rao(&p, &order, &limits)?;
    let map = PosetMap::new(p.clone(), fixtures::shelling_target(), fixtures::shelling_projection())?;
    let transfer = map.shelling_transfer(&order, &limits)?;
    let swapped = [id("4"), id("7"), id("5")];
    let swap_rejected = matches!(
        check_r2_at(&p, id("2"), &swapped),
        Some(RaoViolation::R2 { a_i, a_j, .. }) if (a_i, a_j) == (id("4"), id("7"))
    );
    let (sub_pass, sub_detail) = sweeps(&[run_sweep(Theorem::Satcond2, &PatternSystem::subword_of_size(2), 6, &limits)]);
    let fixture_rao = rao.passed();
    let fixture_transfer = transfer.hypotheses_pass && transfer.conclusion_pass;
    let detail = format!(
        "fixture rao={} ({}), transfer={} ; swap rejected={swap_rejected}; {sub_detail}",
        fixture_rao,
        match &transfer.source_violation {
            Some(v) => v.clone(),
            None => "no violation".into(),
        },
        fixture_transfer
    );
    ok(fixture_rao && fixture_transfer && swap_rejected && sub_pass, detail)
}

fn ac9() -> Result<Outcome> {
    let con = PatternSystem::consecutive();
    let (pass, detail) = sweeps(&[run_sweep(Theorem::Consecutive, &con, 7, &Limits::default())]);
    let example = sw_mobius_formula(&con, &w("1"), &w("213"))? == 1;
    ok(pass && example, format!("(1,213)->1: {example}; {detail}"))
}

fn ac10() -> Result<Outcome> {
    let limits = Limits {
        max_chain_interior: 12,
        ..Limits::default()
    };
    let mut fixtures_checked = 0;
    let mut bad = Vec::new();
    let mut bounded: Vec<(&str, FinitePoset)> = vec![
        ("disconnected rank four", fixtures::disconnected_rank_four()),
        ("shelling source", fixtures::shelling_source()),
        ("shelling target", fixtures::shelling_target()),
        ("chain 5", FinitePoset::chain(5)),
    ];
    for r in 1..=3 {
        bounded.push(("boolean lattice", FinitePoset::boolean_lattice(r)));
    }
    for (name, p) in &bounded {
        let mu = p.mobius_of_bounds()?;
        if let Ok(chi) = reduced_euler_characteristic(p, &limits) {
            fixtures_checked += 1;
            if chi != mu {
                bad.push(format!("{name}: euler {chi} mu {mu}"));
            }
        }
        if let Ok(c) = crosscut_mobius(p, &limits) {
            if c != mu {
                bad.push(format!("{name}: crosscut {c} mu {mu}"));
            }
        }
    }
    let (pass, detail) = sweeps(&[
        run_sweep(Theorem::Oracles, &PatternSystem::classical(), 5, &limits),
        run_sweep(Theorem::Oracles, &PatternSystem::subword_of_size(2), 6, &limits),
        run_sweep(Theorem::Structure, &PatternSystem::classical(), 6, &limits),
        run_sweep(Theorem::Structure, &PatternSystem::subword_of_size(2), 6, &limits),
        run_sweep(Theorem::Structure, &PatternSystem::composition(2)?, 5, &limits),
    ]);
    ok(
        bad.is_empty() && pass,
        format!("{fixtures_checked} fixtures {}; {detail}", if bad.is_empty() { "agree".to_string() } else { bad.join(" ") }),
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", ac1, Duration::from_secs(1)),
        ("AC2", ac2, Duration::from_secs(1)),
        ("AC3", ac3, Duration::from_secs(1)),
        ("AC4", ac4, Duration::from_secs(120)),
        ("AC5", ac5, Duration::from_secs(300)),
        ("AC6", ac6, Duration::from_secs(60)),
        ("AC7", ac7, Duration::from_secs(180)),
        ("AC8", ac8, Duration::from_secs(120)),
        ("AC9", ac9, Duration::from_secs(120)),
        ("AC10", ac10, Duration::from_secs(120)),
    ];
    let mut unexpected = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let known = KNOWN_RED.iter().find(|(n, _)| *n == name);
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{name} {status} [{:.2}s, budget {}s] {detail}", elapsed.as_secs_f64(), budget.as_secs());
        match (pass, known) {
            (false, Some((_, why))) => println!("{name} known red: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("{name} listed as known red but passed");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
