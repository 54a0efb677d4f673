use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn peng(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peng")).args(args).output().expect("run peng")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn translate_prints_the_listing() {
    let o = peng(&["translate", &path("family.cnl")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), golden("family.lp"));
}

#[test]
fn translate_of_an_empty_file_is_empty() {
    let o = peng(&["translate", &path("empty.cnl")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn solve_prints_program_then_answer_sets() {
    let o = peng(&["solve", &path("family.cnl")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("family.lp") + &golden("family.answersets"));
}

#[test]
fn translate_matches_the_session_pane() {
    let doc = peng::text::Document::parse(&golden("family.cnl")).unwrap();
    let s = peng::Session::from_document("t", peng::Parser::default_fragment(), &doc).unwrap();
    let pane = s.response(peng::Status::Ready).asp;
    assert_eq!(stdout(&peng(&["translate", &path("family.cnl")])), pane);

    let o = peng(&["--json", "solve", &path("family.cnl")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["asp"], pane);
    assert_eq!(v["answersets"].as_array().unwrap().len(), 1);
}

#[test]
fn parse_failure_reports_the_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cnl");
    std::fs::write(&bad, "Sam is a child.\nJohn is a is.\n").unwrap();
    let o = peng(&["translate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("sentence 2, position 4"), "{err}");
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(peng(&["translate", "/no/such/file.cnl"]).status.code(), Some(2));
    assert_eq!(peng(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(peng(&["lookahead", &path("family.cnl"), "--at", "x"]).status.code(), Some(2));
}

#[test]
fn lookahead_at_a_position() {
    let o = peng(&["lookahead", &path("family.cnl"), "--at", "1:3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("determiner:") && l.contains("a")), "{out}");

    let o = peng(&["--json", "lookahead", &path("family.cnl"), "--at", "9:1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["snum"], 9);
    assert!(v["ana"].as_array().unwrap().iter().any(|a| a == "the child"));
}

#[test]
fn limit_caps_the_answer_sets() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("x.cnl");
    std::fs::write(&lp, "Sam is a child.\n").unwrap();
    let o = peng(&["--limit", "0", "solve", lp.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "child(sam).\n");
}
