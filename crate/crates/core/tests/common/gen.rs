//! Random samplers shared by the property and acceptance suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use ncdp::algebra::{Elem, Presentation, Sym, Tensor, Word};
use ncdp::double_poisson::KBracket;
use ncdp::necklace::Cyclic;
use ncdp::polyvector::PolAlgebra;
use ncdp::scalar::{rat, Rational};
use rand::Rng;

pub type E = Elem<Rational>;

pub fn coeff<R: Rng>(rng: &mut R) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-3..=3);
    }
    rat(n, rng.gen_range(1..=2))
}

/// Free and non-free presentations with at most four generators.
pub fn presentations() -> Vec<Presentation<Rational>> {
    let x = |i: usize| E::x(i);
    let mut out = vec![
        Presentation::free(&[("x", 0), ("y", 1)]),
        Presentation::free(&[("x", 0), ("y", 0), ("z", -1), ("w", 2)]),
        Presentation::free(&[("a", 1), ("b", -1), ("c", 0)]),
    ];
    // δe = x², δu = ex − xe
    out.push(
        Presentation::new(
            vec![("x".into(), 0), ("y".into(), 0), ("e".into(), 1), ("u".into(), 2)],
            vec![("e".into(), &x(0) * &x(0)), ("u".into(), &(&x(2) * &x(0)) - &(&x(0) * &x(2)))],
        )
        .unwrap(),
    );
    // δξ = 3x²
    out.push(Presentation::new(vec![("x".into(), 0), ("xi".into(), 1)], vec![("xi".into(), (&x(0) * &x(0)).scale(&rat(3, 1)))]).unwrap());
    out
}

fn letter<R: Rng>(rng: &mut R, rank: usize, kinds: &[u8]) -> Sym {
    let i = rng.gen_range(0..rank) as u32;
    match kinds[rng.gen_range(0..kinds.len())] {
        0 => Sym::X(i),
        1 => Sym::D(i),
        _ => Sym::T(i),
    }
}

/// A random form: words in `x_i` and `dx_i` of length 1 to `max_len`.
pub fn random_form<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> E {
    let mut e = E::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let len = rng.gen_range(1..=max_len);
        let w = Word((0..len).map(|_| letter(rng, rank, &[0, 1])).collect());
        e.add_term(w, coeff(rng));
    }
    e
}

/// A random polyvector word with exactly `weight` θ letters and up to
/// `extra` algebra letters, in random order.
pub fn random_poly_word<R: Rng>(rng: &mut R, rank: usize, weight: usize, extra: usize) -> Word {
    let mut w: Vec<Sym> = (0..weight).map(|_| letter(rng, rank, &[2])).collect();
    for _ in 0..rng.gen_range(0..=extra) {
        let at = rng.gen_range(0..=w.len());
        w.insert(at, letter(rng, rank, &[0]));
    }
    Word(w)
}

pub fn random_necklace<R: Rng>(rng: &mut R, pol: &PolAlgebra<Rational>, weight: usize, extra: usize) -> Cyclic<Rational> {
    let mut e = E::zero();
    for _ in 0..rng.gen_range(1..=3) {
        e.add_term(random_poly_word(rng, pol.rank(), weight, extra), coeff(rng));
    }
    Cyclic::project(&e, pol.grading())
}

/// A homogeneous random necklace of the given θ-weight and degree, or
/// `None` if no sampled word has that degree.
pub fn homogeneous_necklace<R: Rng>(rng: &mut R, pol: &PolAlgebra<Rational>, weight: usize, extra: usize, degree: i64) -> Option<Cyclic<Rational>> {
    let g = pol.grading();
    let mut e = E::zero();
    for _ in 0..40 {
        let w = random_poly_word(rng, pol.rank(), weight, extra);
        if g.word_degree(&w) == degree {
            e.add_term(w, coeff(rng));
        }
    }
    let c = Cyclic::project(&e, g);
    (!c.is_zero()).then_some(c)
}

/// All pure words of length at most `max_len` in the algebra generators.
fn pure_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut layer = vec![Word::unit()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..rank {
                let mut v = w.0.clone();
                v.push(Sym::X(i as u32));
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A random 2-bracket with constant, linear and quadratic values, completed
/// by the cyclic rule. Sparse coefficients make Maurer–Cartan samples common.
pub fn random_two_bracket<R: Rng>(rng: &mut R, pol: &Arc<PolAlgebra<Rational>>) -> Option<KBracket<Rational>> {
    let r = pol.rank();
    let g = pol.grading();
    let words = pure_words(r, 2);
    let mut declared = BTreeMap::new();
    for i in 0..r {
        for j in i..r {
            let target = g.degrees()[i] + g.degrees()[j] + pol.bracket_degree() - 1;
            let mut v = Tensor::zero(2);
            for u in &words {
                for w in &words {
                    if u.len() + w.len() <= 2 && g.word_degree(u) + g.word_degree(w) == target && rng.gen_bool(0.6) {
                        v.add_term(vec![u.clone(), w.clone()], rat(rng.gen_range(-2..=2), 1));
                    }
                }
            }
            declared.insert(vec![i, j], v);
        }
    }
    KBracket::complete(pol.clone(), 2, declared).ok()
}

pub fn random_degrees<R: Rng>(rng: &mut R, max_rank: usize) -> Vec<(String, i64)> {
    let r = rng.gen_range(1..=max_rank);
    (0..r).map(|i| (format!("g{i}"), rng.gen_range(-1..=1))).collect()
}

pub fn free_pol<R: Rng>(rng: &mut R, max_rank: usize) -> Arc<PolAlgebra<Rational>> {
    let gens = random_degrees(rng, max_rank);
    let p = Presentation::new(gens, Vec::new()).unwrap();
    Arc::new(PolAlgebra::new(&p, rng.gen_range(-2..=2)))
}

/// A homogeneous cyclic 2-form built from words `a dx b dy c`.
pub fn random_two_form<R: Rng>(rng: &mut R, pol: &PolAlgebra<Rational>) -> Option<Cyclic<Rational>> {
    let r = pol.rank();
    let g = pol.grading();
    let mut e = E::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut w = Vec::new();
        for slot in 0..5 {
            if slot % 2 == 1 {
                w.push(Sym::D(rng.gen_range(0..r) as u32));
            } else if rng.gen_bool(0.3) {
                w.push(Sym::X(rng.gen_range(0..r) as u32));
            }
        }
        e.add_term(Word(w), coeff(rng));
    }
    let first = e.split_by(|w| g.word_degree(w)).into_values().next()?;
    let c = Cyclic::project(&first, g);
    (!c.is_zero()).then_some(c)
}
