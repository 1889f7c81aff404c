use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn lambek(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambek")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_slice(&lambek(&full).stdout).unwrap()
}

#[test]
fn decide_member_and_non_member() {
    let o = lambek(&["decide", &corpus("anbn.cfg"), "aabb"]);
    assert_eq!(stdout(&o), "member\n");
    assert_eq!(o.status.code(), Some(0));
    let o = lambek(&["decide", &corpus("anbn.cfg"), "aab"]);
    assert_eq!(stdout(&o), "non-member\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn decide_with_proof_from_lexicon() {
    let o = lambek(&["decide", &corpus("anbn.lex"), "a a b b", "--proof"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("member\n"));
    assert!(text.contains("S/B/S, S/B, B, B -> S  [/L]"), "{text}");
}

#[test]
fn crosscheck_grammar_against_lexicon() {
    let o = lambek(&["crosscheck", &corpus("anbn.cfg"), &corpus("anbn.lex"), "--max-len", "8"]);
    assert_eq!(stdout(&o), "510 strings, 0 disagreements\n");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn crosscheck_reports_disagreement() {
    let o = lambek(&["crosscheck", &corpus("a.cfg"), &corpus("aplus.cfg"), "--max-len", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first at \"aa\""));
}

#[test]
fn prove_axiom() {
    let o = lambek(&["prove", "A -> A"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A -> A  [Ax]"));
}

#[test]
fn prove_respects_rules() {
    let o = lambek(&["prove", "A -> B/(A\\B)", "--rules", "/L,\\L"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lambek(&["prove", "A -> B/(A\\B)"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn enumerate_lists_members() {
    let o = lambek(&["enumerate", &corpus("anbn.cfg"), "--max-len", "6"]);
    assert_eq!(stdout(&o), "ab\naabb\naaabbb\n");
}

#[test]
fn convert_and_gnf_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("out.lex");
    let lex = lex.to_str().unwrap();
    let o = lambek(&["convert", "--to", "lambek", &corpus("dyck.cfg"), "-o", lex]);
    assert_eq!(o.status.code(), Some(0));
    let o = lambek(&["crosscheck", &corpus("dyck.cfg"), lex, "--max-len", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let gnf = dir.path().join("out.cfg");
    let gnf = gnf.to_str().unwrap();
    assert_eq!(lambek(&["gnf", &corpus("dyck.cfg"), "-o", gnf]).status.code(), Some(0));
    let v = json(&["classify", gnf]);
    assert_eq!(v["report"]["is_gnf"], Value::Bool(true));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "terminals: a\nS -> a Q\n").unwrap();
    let o = lambek(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.cfg:2:8:"), "{err}");

    // precondition: a lexicon where a grammar is required
    assert_eq!(lambek(&["gnf", &corpus("anbn.lex")]).status.code(), Some(3));
    assert_eq!(lambek(&["convert", "--to", "reg", &corpus("anbn.lex")]).status.code(), Some(3));
    assert_eq!(lambek(&["prove", "A ->"]).status.code(), Some(2));
}

#[test]
fn json_reports_are_versioned() {
    let v = json(&["crosscheck", &corpus("anbn.cfg"), &corpus("anbn.lex"), "--max-len", "8"]);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["report"]["strings_tested"], 510);
    assert_eq!(v["report"]["agreements"], 510);

    let v = json(&["decide", &corpus("anbn.lex"), "ab", "--proof"]);
    assert_eq!(v["report"]["member"], true);
    assert_eq!(v["report"]["proof"]["rule"], "/L");

    let v = json(&["prove", "A -> A"]);
    assert_eq!(v["report"]["proof"]["rule"], "Ax");

    let v = json(&["gnf", &corpus("anbn.lex")]);
    assert_eq!(v["ok"], false);
    assert_eq!(v["exit_code"], 3);
}
