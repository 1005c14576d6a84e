mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use common::{corpus_files, mutate, options_for};
use ncdp::algebra::{Elem, Grading, Sym, Tensor, Word};
use ncdp::dsl::{parse, parse_value, run, serialize_value, to_source, Value};
use ncdp::necklace::Cyclic;
use ncdp::scalar::{rat, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names() -> Vec<String> {
    vec!["x".into(), "xi".into(), "y".into()]
}

fn random_word(rng: &mut ChaCha8Rng) -> Word {
    let len = rng.gen_range(0..4);
    Word(
        (0..len)
            .map(|_| {
                let i = rng.gen_range(0..3);
                match rng.gen_range(0..3) {
                    0 => Sym::X(i),
                    1 => Sym::D(i),
                    _ => Sym::X(i),
                }
            })
            .collect(),
    )
}

fn random_elem(rng: &mut ChaCha8Rng) -> Elem<Rational> {
    let mut e = Elem::zero();
    for _ in 0..rng.gen_range(0..5) {
        e.add_term(random_word(rng), rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
    }
    e
}

#[test]
fn value_text_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = Grading::new(vec![0, 1, 1], -1);
    for _ in 0..100 {
        let e = random_elem(&mut rng);
        let mut t = Tensor::zero(2);
        for _ in 0..rng.gen_range(0..4) {
            let f = vec![random_word(&mut rng), random_word(&mut rng)].into_iter().map(|w| Word(w.0.into_iter().filter(|s| matches!(s, Sym::X(_))).collect())).collect();
            t.add_term(f, rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)));
        }
        let values = [Value::Element(e.clone()), Value::Necklace(Cyclic::project(&e, &g)), Value::Tensor(t)];
        for v in values {
            let text = serialize_value(&v, &names());
            let back = parse_value(&text, &names(), &g).unwrap_or_else(|err| panic!("{text}: {err}"));
            assert_eq!(serialize_value(&back, &names()), text);
            if !matches!(v, Value::Tensor(ref t) if t.is_zero()) {
                assert_eq!(back, v, "{text}");
            }
        }
    }
    assert_eq!(serialize_value(&Value::Element(Elem::zero()), &names()), "0");
    let w = Word(vec![Sym::D(0), Sym::D(1)]);
    assert_eq!(serialize_value(&Value::Necklace(Cyclic::project(&Elem::word(w), &g)), &names()), "cyc: d(x).d(xi)");
}

#[test]
fn source_round_trips() {
    for path in corpus_files() {
        let src = std::fs::read_to_string(&path).unwrap();
        let once = to_source(&parse(&src).unwrap());
        let twice = to_source(&parse(&once).unwrap_or_else(|e| panic!("{}: {e}\n{once}", path.display())));
        assert_eq!(once, twice, "{}", path.display());
        // the canonical text runs to the same verdicts
        let a = run(&parse(&src).unwrap(), &options_for(&src));
        let b = run(&parse(&once).unwrap(), &options_for(&src));
        let verdicts = |r: &ncdp::dsl::Report| r.records.iter().map(|x| (x.directive.clone(), x.verdict)).collect::<Vec<_>>();
        assert_eq!(verdicts(&a), verdicts(&b), "{}", path.display());
    }
}

#[test]
fn duplicate_generator_is_positioned() {
    let r = run(&parse("algebra A { gen x : degree 0; gen x : degree 1; }").unwrap(), &Default::default());
    assert_eq!(r.records.len(), 1);
    assert!(r.records[0].details["error"].as_str().unwrap().starts_with("1:35: DuplicateGenerator"));
    assert!(run(&parse("").unwrap(), &Default::default()).records.is_empty());
}

/// Mutants whose integers are small enough to run quickly.
fn cheap(src: &str) -> bool {
    src.split(|c: char| !c.is_ascii_digit()).filter(|s| !s.is_empty()).all(|s| s.len() < 2)
}

#[test]
fn fuzzed_inputs_never_crash() {
    let sources: Vec<String> = corpus_files().iter().map(|p| std::fs::read_to_string(p).unwrap()).filter(|s| !s.is_empty()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut rejected, mut accepted) = (0, 0);
    for i in 0..1000 {
        let base = &sources[i % sources.len()];
        let mut m = mutate(base, &mut rng);
        if rng.gen_bool(0.3) {
            m = mutate(&m, &mut rng);
        }
        let lines = m.lines().count().max(1);
        let outcome = catch_unwind(AssertUnwindSafe(|| match parse(&m) {
            Err(e) => {
                assert!(e.pos.line >= 1 && e.pos.line <= lines + 1 && e.pos.col >= 1, "bad position {e:?}");
                assert!(e.to_string().starts_with(&format!("{}:{}:", e.pos.line, e.pos.col)));
                false
            }
            Ok(f) => {
                if cheap(&m) {
                    let r = run(&f, &options_for(&m));
                    for rec in &r.records {
                        if let Some(msg) = rec.details.get("error") {
                            let msg = msg.as_str().unwrap();
                            assert!(msg.split(':').take(2).all(|p| p.parse::<usize>().is_ok()), "unpositioned: {msg}");
                        }
                    }
                }
                true
            }
        }));
        match outcome {
            Ok(true) => accepted += 1,
            Ok(false) => rejected += 1,
            Err(_) => panic!("crash on mutant:\n{m}"),
        }
    }
    assert!(rejected > 300 && accepted > 50, "rejected {rejected}, accepted {accepted}");
}

#[test]
fn cli_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_ncdp");
    let dir = common::corpus_dir();
    let ok = Command::new(exe).args(["check", "--no-timing", "--json"]).arg(dir.join("shifted_cotangent.ncdp")).output().unwrap();
    assert!(ok.status.success());
    let want = std::fs::read_to_string(dir.join("shifted_cotangent.expected.json")).unwrap();
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), want);
    let fail = Command::new(exe).args(["check", "--no-timing"]).arg(dir.join("scaled_form.ncdp")).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let tmp = std::env::temp_dir().join("ncdp_cli_syntax.ncdp");
    std::fs::write(&tmp, "algebra A { gen x degree 0; }").unwrap();
    let bad = Command::new(exe).arg("check").arg(&tmp).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8(bad.stderr).unwrap().contains(":1:19: expected `:`"));
    let env = Command::new(exe).args(["check", "--no-timing"]).env("NCDP_MODE", "fiberwise").arg(dir.join("strict_inapplicable.ncdp")).output().unwrap();
    assert!(env.status.success(), "NCDP_MODE selects fiberwise mode");
}
