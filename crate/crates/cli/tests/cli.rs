use std::path::PathBuf;
use std::process::{Command, Output};

fn plk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn decide_exit_codes() {
    let yes = plk(&["decide", "p -> q, p => q"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(stdout(&yes).trim(), "provable");

    let no = plk(&["decide", "p => q", "--certificate"]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).starts_with("unprovable"));
    assert!(stdout(&no).contains("no shared variable"));
}

#[test]
fn parse_error_points_at_offset() {
    let o = plk(&["decide", "p & => q"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("offset 4"), "{err}");
    assert!(err.contains("\n      ^"), "{err}");
}

#[test]
fn unicode_input_is_accepted() {
    let o = plk(&["decide", "p ∧ q ⇒ q ∨ ¬p"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn prove_then_transform_and_render() {
    let file = scratch("em.json");
    let o = plk(&["prove", "=> p | ~p", "-o", &file]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("CR"));

    let out = scratch("em_cuts.json");
    let t = plk(&["transform", &file, "eliminate-contraction", "-o", &out]);
    assert_eq!(t.status.code(), Some(0), "{}", stderr(&t));
    let after = stderr(&t);
    let after = after.lines().find(|l| l.starts_with("after")).unwrap();
    assert!(
        after.contains("CutAdditive") && !after.contains(" CR"),
        "{after}"
    );

    let r = plk(&["render", &out, "--ascii"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).starts_with("=> p | ~p  [CutAdditive]"));

    // Every proof of excluded middle contracts or cuts.
    let all = plk(&["transform", &file, "eliminate-all"]);
    assert_eq!(all.status.code(), Some(1));
    let none = plk(&["prove", "=> p | ~p", "--contraction-cut-free"]);
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn invert_bad_position_is_an_input_error() {
    let file = scratch("conj.json");
    assert_eq!(
        plk(&["prove", "p & q => p", "-o", &file]).status.code(),
        Some(0)
    );
    let ok = plk(&["transform", &file, "invert", "3", "--position", "0"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let bad = plk(&["transform", &file, "invert", "3", "--position", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn missing_and_malformed_files() {
    assert_eq!(
        plk(&["render", "/nonexistent/proof.json"]).status.code(),
        Some(2)
    );
    let file = scratch("bad.json");
    std::fs::write(&file, "{\"rule\": \"Axiom\"}").unwrap();
    assert_eq!(plk(&["render", &file]).status.code(), Some(2));
}

#[test]
fn identity_formats() {
    let latex = plk(&["identity", "p -> q", "--format", "latex"]);
    assert_eq!(latex.status.code(), Some(0));
    assert!(stdout(&latex).contains("\\UnaryInfC{$ p \\to q \\Rightarrow p \\to q $}"));
    let json = plk(&["identity", "~p"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["rule"], "NegR");
}

#[test]
fn verify_suites() {
    let n = plk(&["verify", "nonelim"]);
    assert_eq!(n.status.code(), Some(0));
    assert!(stdout(&n).contains("12/12 required"));

    let z = plk(&["verify", "plk0", "--json"]);
    assert_eq!(z.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&z)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 21);

    let nss = plk(&["verify", "nss-witness", "--trials", "300"]);
    assert_eq!(nss.status.code(), Some(0), "{}", stdout(&nss));

    let t = plk(&["verify", "abss-theorem", "--trials", "100", "--json"]);
    assert_eq!(t.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&t)).unwrap();
    assert_eq!(v["counterexamples"], 0);
}

#[test]
fn abss_commands() {
    let f = fixture("chain.json");
    assert_eq!(stdout(&plk(&["abss", "closure", &f])).trim(), "a b c d");
    assert_eq!(
        stdout(&plk(&["abss", "closure", &f, "--exclude", "Step"])).trim(),
        "a c d"
    );
    assert_eq!(
        plk(&["abss", "eliminable", &f, "Jump"]).status.code(),
        Some(0)
    );
    assert_eq!(
        plk(&["abss", "eliminable", &f, "Late"]).status.code(),
        Some(1)
    );
    assert_eq!(
        plk(&["abss", "closure", &f, "--exclude", "Nope"])
            .status
            .code(),
        Some(2)
    );

    let check = plk(&[
        "abss",
        "check",
        &f,
        "Jump",
        "--relation",
        &fixture("chain_relation.json"),
        "--valuation",
        &fixture("chain_valuation.json"),
    ]);
    assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));

    let conv = plk(&["abss", "converse", &f, "Jump"]);
    assert_eq!(conv.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&conv)).unwrap();
    assert_eq!(v["valuation"]["v"]["c"], 2);
    assert_eq!(
        plk(&["abss", "converse", &f, "Late"]).status.code(),
        Some(1)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(plk(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        plk(&["render", "x.json", "--ascii", "--latex"])
            .status
            .code(),
        Some(2)
    );
}
