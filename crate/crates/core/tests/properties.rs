use proptest::prelude::*;

use patpos::embedding::{embeddings, rp};
use patpos::poset::{crosscut_mobius, reduced_euler_characteristic};
use patpos::system::PatternSystem;
use patpos::word::{is_reduced_permutation, reduce, Word};
use patpos::{Error, FinitePoset, Limits};

fn permutation(max: usize) -> impl Strategy<Value = Word> {
    (1..=max)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(Word::new)
}

fn binary_word(min: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1u32..=2, min..=max).prop_map(Word::new)
}

/// Subsequence count by dynamic programming.
fn subsequence_count(a: &[u32], b: &[u32]) -> usize {
    let mut ways = vec![0usize; a.len() + 1];
    ways[0] = 1;
    for &x in b {
        for i in (0..a.len()).rev() {
            if a[i] == x {
                ways[i + 1] += ways[i];
            }
        }
    }
    ways[a.len()]
}

/// A random permutation and a pattern obtained by deleting some of its positions.
fn pattern_pair() -> impl Strategy<Value = (Word, Word)> {
    permutation(7).prop_flat_map(|pi| {
        let n = pi.len();
        prop::collection::vec(any::<bool>(), n).prop_map(move |keep| {
            let kept: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
            let kept = if kept.is_empty() { vec![0] } else { kept };
            let sigma = Word::new(reduce(pi.restrict(&kept).letters()).unwrap());
            (sigma, pi.clone())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent(letters in prop::collection::hash_set(1u32..100, 0..10)) {
        let letters: Vec<u32> = letters.into_iter().collect();
        let once = reduce(&letters).unwrap();
        prop_assert!(is_reduced_permutation(&once));
        prop_assert_eq!(reduce(&once).unwrap(), once);
    }

    #[test]
    fn subword_embeddings_match_subsequence_count(a in binary_word(0, 4), b in binary_word(0, 8)) {
        let sys = PatternSystem::subword_of_size(2);
        let found = embeddings(&sys, &a, &b).unwrap();
        prop_assert_eq!(found.len(), subsequence_count(a.letters(), b.letters()));
        for e in &found {
            prop_assert_eq!(e.pattern(), &a);
            prop_assert_eq!(e.zeros().len(), b.len() - a.len());
        }
    }

    #[test]
    fn classical_embeddings_are_occurrences((sigma, pi) in pattern_pair()) {
        let sys = PatternSystem::classical();
        let occ = sys.occurrences(&sigma, &pi).unwrap();
        let emb = embeddings(&sys, &sigma, &pi).unwrap();
        prop_assert!(!occ.is_empty());
        prop_assert_eq!(occ.len(), emb.len());
        for (o, e) in occ.iter().zip(&emb) {
            prop_assert_eq!(&e.positions(), o);
            prop_assert_eq!(Word::new(reduce(pi.restrict(o).letters()).unwrap()), sigma.clone());
        }
    }

    #[test]
    fn rp_is_idempotent((sigma, pi) in pattern_pair()) {
        let sys = PatternSystem::classical();
        for e in embeddings(&sys, &sigma, &pi).unwrap() {
            let r = rp(&sys, &e).unwrap();
            prop_assert_eq!(r.zeros().len(), e.zeros().len());
            prop_assert_eq!(r.pattern(), e.pattern());
            prop_assert_eq!(rp(&sys, &r).unwrap(), r);
        }
    }

    #[test]
    fn subword_rp_keeps_the_pattern(a in binary_word(1, 3), b in binary_word(3, 7)) {
        let sys = PatternSystem::subword_of_size(2);
        for e in embeddings(&sys, &a, &b).unwrap() {
            let r = rp(&sys, &e).unwrap();
            prop_assert_eq!(r.pattern(), &a);
            prop_assert_eq!(rp(&sys, &r).unwrap(), r);
        }
    }

    #[test]
    fn interval_mobius_agrees_with_topology((sigma, pi) in pattern_pair()) {
        prop_assume!(sigma != pi);
        let sys = PatternSystem::classical();
        let iv = sys.build_interval(&sigma, &pi).unwrap();
        let limits = Limits::default();
        prop_assume!(iv.len() <= limits.max_chain_interior);
        let mu = iv.poset.mobius_of_bounds().unwrap();
        prop_assert_eq!(mu, reduced_euler_characteristic(&iv.poset, &limits).unwrap());
        match crosscut_mobius(&iv.poset, &limits) {
            Ok(c) => prop_assert_eq!(mu, c),
            Err(e) => prop_assert!(matches!(e, Error::CrosscutInapplicable { .. }), "{e}"),
        }
    }

    #[test]
    fn mobius_sums_vanish((sigma, pi) in pattern_pair()) {
        let sys = PatternSystem::classical();
        let p = sys.build_interval(&sigma, &pi).unwrap().poset;
        let bottom = p.bottom().unwrap();
        let row = p.mobius_from(bottom).unwrap();
        for y in 0..p.len() {
            let total: i64 = p.interval_ids(bottom, y).into_iter().map(|z| row.get(z)).sum();
            prop_assert_eq!(total, i64::from(y == bottom));
        }
    }

    #[test]
    fn poset_json_round_trips((sigma, pi) in pattern_pair()) {
        let p = PatternSystem::classical().build_interval(&sigma, &pi).unwrap().poset;
        let back = FinitePoset::from_json(&p.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.labels(), p.labels());
        prop_assert_eq!(back.cover_count(), p.cover_count());
        prop_assert!(back.is_isomorphic(&p));
    }
}
