use std::process::{Command, Output};

use patpos::system::PatternSystem;
use patpos::FinitePoset;

fn patpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patpos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn mobius_of_worked_example() {
    let o = patpos(&["mobius", "--poset", "classical", "--sigma", "1", "--pi", "13254"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn normal_embeddings_listed() {
    let o = patpos(&["embeddings", "--poset", "classical", "--sigma", "213", "--pi", "231645", "--normal"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-31--5\n");
}

#[test]
fn embeddings_are_position_sorted() {
    let o = patpos(&["embeddings", "--poset", "classical", "--sigma", "213", "--pi", "231645"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines, ["2-16--", "2-1-4-", "2-1--5", "-316--", "-31-4-", "-31--5"]);
}

#[test]
fn verify_sweep_tallies() {
    let o = patpos(&["verify", "--poset", "subword", "--alphabet-size", "2", "--max-n", "5", "--theorem", "bjorner"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().last().unwrap().ends_with("all pass"), "{out}");
    assert!(out.lines().count() > 10);
}

#[test]
fn verify_json_summary() {
    let o = patpos(&[
        "verify", "--poset", "classical", "--max-n", "4", "--theorem", "eq4", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["checked"].as_u64().unwrap() > 0);
}

#[test]
fn unknown_poset_kind_is_an_input_error() {
    let o = patpos(&["mobius", "--poset", "bogus", "--sigma", "1", "--pi", "12"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--poset") && err.contains("classical, consecutive"), "{err}");
}

#[test]
fn bad_element_names_the_flag() {
    let o = patpos(&["mobius", "--poset", "classical", "--sigma", "1", "--pi", "122"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("--pi"));
}

#[test]
fn failing_report_exits_one() {
    let order = "1,2,3,4,5,6,7,8,9,10";
    let o = patpos(&["rao", "--fixture", "shelling-source", "--order", order]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("R2 fails"));
}

#[test]
fn passing_rao_on_subword() {
    let o = patpos(&["rao", "--poset", "subword", "--alphabet-size", "2", "--sigma", "121", "--pi", "12211"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("V: empty"));
}

#[test]
fn consecutive_formula() {
    let o = patpos(&["consec", "mobius", "--sigma", "1", "--pi", "213"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
    let o = patpos(&["consec", "mobius", "--verify", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn zero_split_example() {
    let o = patpos(&["zerosplit", "--poset", "classical", "--sigma", "41253", "--pi", "41627385", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("part 1: 41-273--") && out.contains("part 2: --62-385"), "{out}");
    assert!(out.contains("disconnected: false strongly zero split: false"));
    let o = patpos(&["zerosplit", "--poset", "classical", "--sigma", "41253", "--pi", "41627385", "--mode", "strong"]);
    assert_eq!(stdout(&o), "no zero split\n");
}

#[test]
fn dot_export_of_classical_interval() {
    let o = patpos(&["export", "--poset", "classical", "--sigma", "21", "--pi", "41253", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 10);
    assert_eq!(dot.matches(" -> ").count(), 16);
}

#[test]
fn dot_export_of_a_chain() {
    let o = patpos(&["export", "--poset", "classical", "--sigma", "1", "--pi", "12", "--format", "dot"]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 2);
    assert_eq!(dot.matches(" -> ").count(), 1);
}

#[test]
fn json_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("interval.json");
    let o = patpos(&[
        "export", "--poset", "classical", "--sigma", "21", "--pi", "41253", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let back = FinitePoset::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let iv = PatternSystem::classical()
        .build_interval(&"21".parse().unwrap(), &"41253".parse().unwrap())
        .unwrap();
    assert!(back.is_isomorphic(&iv.poset));
}

#[test]
fn fixture_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.json");
    let o = patpos(&["export", "--fixture", "disconnected-rank-four", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let back = FinitePoset::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(back.is_isomorphic(&patpos::fixtures::disconnected_rank_four()));
    let o = patpos(&["rao", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no recursive atom ordering exists\n");
}

#[test]
fn unwritable_output_path() {
    let o = patpos(&[
        "export", "--fixture", "shelling-target", "--format", "json", "--out", "/nonexistent/dir/out.json",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn total_space_export_uses_dash_labels() {
    let o = patpos(&[
        "export", "--poset", "classical", "--sigma", "1", "--pi", "132", "--variant", "R", "--format", "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "rank 0: -32 1-2\n");
}

#[test]
fn fibration_and_walker() {
    let o = patpos(&["fibration", "--poset", "classical", "--sigma", "1", "--pi", "13254", "--variant", "R"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("walker: lhs 1 rhs 1"));
}

#[test]
fn dot_rejected_where_meaningless() {
    let o = patpos(&["mobius", "--poset", "classical", "--sigma", "1", "--pi", "12", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
}
