//! Every corpus file reproduces its recorded JSON report byte for byte.
//! Set `NCDP_BLESS=1` to rewrite the expected files.

mod common;

use common::{corpus_files, expected_path, json_report};

#[test]
fn corpus_reports_match() {
    let bless = std::env::var("NCDP_BLESS").is_ok_and(|v| v == "1");
    let mut mismatched = Vec::new();
    for path in corpus_files() {
        let got = json_report(&path);
        let exp = expected_path(&path);
        if bless {
            std::fs::write(&exp, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&exp).unwrap_or_else(|_| panic!("missing {}", exp.display()));
        if got != want {
            mismatched.push(path.display().to_string());
        }
    }
    assert!(mismatched.is_empty(), "reports differ: {mismatched:?}");
}

#[test]
fn reports_are_deterministic() {
    for path in corpus_files() {
        assert_eq!(json_report(&path), json_report(&path), "{}", path.display());
    }
}
