//! Small hand-built posets used by tests, the acceptance suite and the CLI.

use crate::poset::{ElementId, FinitePoset};

fn build(labels: &[&str], edges: &[(&str, &str)], bottom: &str, top: &str) -> FinitePoset {
    let id = |s: &str| labels.iter().position(|l| *l == s).expect("known label");
    let covers: Vec<_> = edges.iter().map(|&(a, b)| (id(a), id(b))).collect();
    FinitePoset::from_covers(
        labels.iter().map(|s| s.to_string()).collect(),
        &covers,
        Some(id(bottom)),
        Some(id(top)),
    )
    .expect("fixture is a valid Hasse diagram")
}

/// A bounded pure rank-4 poset with Möbius value 1 whose interior splits
/// into two components. Labels: `0`, `a1..a3`, `b1..b4`, `c1..c3`, `1`.
pub fn disconnected_rank_four() -> FinitePoset {
    build(
        &["0", "a1", "a2", "a3", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "1"],
        &[
            ("0", "a1"), ("a1", "b1"), ("a1", "b2"), ("b1", "c1"), ("b2", "c1"), ("c1", "1"),
            ("0", "a2"), ("0", "a3"), ("a2", "b3"), ("a2", "b4"), ("a3", "b3"), ("a3", "b4"),
            ("b3", "c2"), ("b4", "c2"), ("b4", "c3"), ("c2", "1"), ("c3", "1"),
        ],
        "0",
        "1",
    )
}

/// Ten-element rank-4 poset labelled `1..10`; the labels give the intended linear order.
pub fn shelling_source() -> FinitePoset {
    build(
        &["1", "2", "3", "4", "5", "6", "7", "8", "9", "10"],
        &[
            ("1", "2"), ("1", "3"),
            ("2", "4"), ("2", "5"), ("2", "7"),
            ("3", "4"), ("3", "6"),
            ("4", "8"),
            ("5", "8"), ("5", "9"),
            ("6", "8"), ("6", "9"),
            ("7", "9"),
            ("8", "10"), ("9", "10"),
        ],
        "1",
        "10",
    )
}

/// An eight-element rank-4 poset labelled by permutations, which `shelling_source` projects onto.
/// Listing its labels in declaration order gives the order induced by earliest preimages.
pub fn shelling_target() -> FinitePoset {
    build(
        &["1", "12", "21", "123", "213", "2143", "1243", "13254"],
        &[
            ("1", "12"), ("1", "21"),
            ("12", "123"), ("21", "123"), ("21", "213"),
            ("123", "1243"), ("213", "1243"), ("123", "2143"), ("213", "2143"),
            ("1243", "13254"), ("2143", "13254"),
        ],
        "1",
        "13254",
    )
}

/// The projection from `shelling_source` to `shelling_target`, indexed by source id.
pub fn shelling_projection() -> Vec<ElementId> {
    let source = shelling_source();
    let target = shelling_target();
    let image = |l: &str| match l {
        "1" => "1",
        "2" => "12",
        "3" => "21",
        "4" | "5" | "7" => "123",
        "6" => "213",
        "8" => "2143",
        "9" => "1243",
        "10" => "13254",
        _ => unreachable!(),
    };
    (0..source.len())
        .map(|x| target.find_label(image(source.label(x))).expect("target label"))
        .collect()
}
