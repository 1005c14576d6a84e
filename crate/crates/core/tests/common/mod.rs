#![allow(dead_code)]

pub mod gen;

use std::path::{Path, PathBuf};

use ncdp::double_poisson::NondegMode;
use ncdp::dsl::{parse, run, Options};
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_files() -> Vec<PathBuf> {
    let mut v: Vec<_> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "ncdp"))
        .collect();
    v.sort();
    v
}

/// Options from a leading `# options:` comment, timing off.
pub fn options_for(src: &str) -> Options {
    let mut opts = Options::default();
    if let Some(line) = src.lines().find_map(|l| l.strip_prefix("# options:")) {
        let words: Vec<_> = line.split_whitespace().collect();
        for w in words.windows(2) {
            match w {
                ["--mode", "fiberwise"] => opts.mode = NondegMode::Fiberwise,
                ["--max-weight", n] => opts.max_weight = n.parse().ok(),
                _ => {}
            }
        }
    }
    opts
}

pub fn json_report(path: &Path) -> String {
    let src = std::fs::read_to_string(path).unwrap();
    let file = parse(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    run(&file, &options_for(&src)).to_json()
}

pub fn expected_path(path: &Path) -> PathBuf {
    path.with_extension("expected.json")
}

/// Token-level mutation: delete, duplicate, swap or replace one token-ish
/// chunk of the source.
pub fn mutate<R: Rng>(src: &str, rng: &mut R) -> String {
    let pieces: Vec<&str> = src.split_inclusive(|c: char| c.is_whitespace() || "{}()[];:,=+-*.".contains(c)).collect();
    if pieces.is_empty() {
        return "{".into();
    }
    let mut v: Vec<String> = pieces.iter().map(|s| s.to_string()).collect();
    let i = rng.gen_range(0..v.len());
    const JUNK: [&str; 12] = ["{", "}", "{{", "}}", ";", "(", ")", "ox", "-", "1/0", "theta(", "$"];
    match rng.gen_range(0..4) {
        0 => {
            v.remove(i);
        }
        1 => {
            let t = v[i].clone();
            v.insert(i, t);
        }
        2 if v.len() > 1 => {
            let j = (i + 1) % v.len();
            v.swap(i, j);
        }
        _ => v[i] = JUNK[rng.gen_range(0..JUNK.len())].to_string(),
    }
    v.concat()
}
