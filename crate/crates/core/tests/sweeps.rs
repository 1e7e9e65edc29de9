use patpos::fibration::{mobius_decomposition, Equation};
use patpos::sweep::{run_sweep, Theorem};
use patpos::system::PatternSystem;
use patpos::word::Word;
use patpos::Limits;

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn sweep(theorem: &str, sys: &PatternSystem, max_n: usize) {
    let summary = run_sweep(theorem.parse().unwrap(), sys, max_n, &Limits::default()).unwrap();
    assert!(summary.checked > 0, "{theorem}: nothing checked");
    let failed: Vec<_> = summary.failures().map(|o| o.interval.clone()).collect();
    assert!(summary.pass, "{theorem} on {}: {failed:?}", summary.system);
}

#[test]
fn binary_subword_sweeps() {
    let sys = PatternSystem::subword_of_size(2);
    for t in ["bjorner", "eq1", "eq2", "eq3", "eq4", "walker", "satcond2", "structure", "oracles"] {
        sweep(t, &sys, 5);
    }
}

#[test]
fn classical_sweeps() {
    let sys = PatternSystem::classical();
    for t in ["eq1", "eq2", "eq3", "walker", "zerosplit", "structure", "oracles", "lower-ideal"] {
        sweep(t, &sys, 5);
    }
}

#[test]
fn consecutive_sweep() {
    sweep("consecutive", &PatternSystem::consecutive(), 6);
}

#[test]
fn composition_sweep() {
    sweep("eq1", &PatternSystem::composition(3).unwrap(), 4);
}

#[test]
fn theorem_names_round_trip() {
    for name in Theorem::NAMES {
        assert_eq!(name.parse::<Theorem>().unwrap().to_string(), name);
    }
    assert!("nonsense".parse::<Theorem>().is_err());
}

#[test]
fn decomposition_terms_sum_to_the_value() {
    let sys = PatternSystem::classical();
    for eq in Equation::ALL {
        let r = mobius_decomposition(&sys, &w("1"), &w("13254"), eq).unwrap();
        assert_eq!(r.lhs, 1, "{}", eq.name());
        assert_eq!(r.rhs, r.terms.iter().map(|t| t.value).sum::<i64>());
        assert!(r.pass, "{}", eq.name());
    }
}
