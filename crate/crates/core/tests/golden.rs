//! Outputs frozen after review. Set `PLK_BLESS=1` to rewrite them.

use std::path::PathBuf;

use plk_core::abss::{generate_random_abss, AbssParams};
use plk_core::identity_proof;
use plk_core::render::{render_ascii, render_latex};

fn golden(name: &str, actual: &str) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    if std::env::var_os("PLK_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} differs");
}

#[test]
fn identity_implication_latex() {
    golden(
        "identity_impl.tex",
        &render_latex(&identity_proof(&"p -> q".parse().unwrap())),
    );
}

#[test]
fn identity_mixed_ascii() {
    golden(
        "identity_mixed.txt",
        &render_ascii(&identity_proof(&"~(p & q) | r".parse().unwrap())),
    );
}

#[test]
fn random_structure_seed_zero() {
    let params = AbssParams {
        tokens: 5,
        rules: 3,
        instances_per_rule: 3,
        ..AbssParams::default()
    };
    golden(
        "abss_seed0.json",
        &(generate_random_abss(0, &params).to_json() + "\n"),
    );
}
