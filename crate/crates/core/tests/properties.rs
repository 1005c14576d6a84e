mod common;

use std::sync::Arc;

use common::gen::*;
use ncdp::algebra::{Grading, Sym, Tensor, Word};
use ncdp::compat::{flat_of_mu, validate_key_identities};
use ncdp::double_poisson::{double_jacobi_oracle, mc_check, DoublePoisson, KBracket};
use ncdp::forms::{cyclic_project, de_rham_d, hochschild_b, internal_delta, total_d};
use ncdp::necklace::Cyclic;
use ncdp::polyvector::PolAlgebra;
use ncdp::scalar::{rat, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sign(odd: i64) -> Rational {
    rat(if odd.rem_euclid(2) == 0 { 1 } else { -1 }, 1)
}

/// A form on a presentation from `presentations()`: word letters are
/// `(is_dx, generator)` pairs reduced modulo the rank.
fn form_strategy() -> impl Strategy<Value = (usize, E)> {
    let word = prop::collection::vec((any::<bool>(), 0..4u32), 1..=6);
    let terms = prop::collection::vec((word, -3i64..=3), 1..=4);
    (0..presentations().len(), terms).prop_map(|(k, terms)| {
        let rank = presentations()[k].rank() as u32;
        let mut e = E::zero();
        for (w, c) in terms {
            let w = Word(w.into_iter().map(|(d, i)| if d { Sym::D(i % rank) } else { Sym::X(i % rank) }).collect());
            e.add_term(w, rat(c, 1));
        }
        (k, e)
    })
}

fn pol_strategy(max_rank: usize) -> impl Strategy<Value = Arc<PolAlgebra<Rational>>> {
    (prop::collection::vec(-1i64..=1, 1..=max_rank), -2i64..=2).prop_map(|(degrees, n)| {
        let gens = degrees.iter().enumerate().map(|(i, &d)| (format!("g{i}"), d)).collect();
        Arc::new(PolAlgebra::new(&ncdp::Presentation::new(gens, Vec::new()).unwrap(), n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn differentials_square_to_zero((k, e) in form_strategy()) {
        let p = &presentations()[k];
        let g = p.grading(0);
        prop_assert!(de_rham_d(&de_rham_d(&e, &g), &g).is_zero());
        prop_assert!(internal_delta(p, &internal_delta(p, &e)).is_zero());
        prop_assert!(total_d(p, &total_d(p, &e)).is_zero());
        let anti = &de_rham_d(&internal_delta(p, &e), &g) + &internal_delta(p, &de_rham_d(&e, &g));
        prop_assert!(anti.is_zero());
    }

    #[test]
    fn hochschild_b_squares_to_zero_and_dies_on_necklaces((k, e) in form_strategy()) {
        let g = presentations()[k].grading(0);
        let b = hochschild_b(&e, &g);
        prop_assert!(hochschild_b(&b, &g).is_zero());
        prop_assert!(cyclic_project(&b, &g).is_zero());
    }

    #[test]
    fn cyclic_projection_is_idempotent((k, e) in form_strategy()) {
        let g = presentations()[k].grading(0);
        let c = Cyclic::project(&e, &g);
        prop_assert_eq!(Cyclic::project(c.lift(), &g), c.clone());
        // every rotation of a word has the same class up to its Koszul sign
        for (w, _) in e.terms() {
            for r in 1..w.len() {
                let rot = ncdp::necklace::rotate(w, r);
                let s = sign(ncdp::necklace::rotation_parity(w, r, &g) as i64);
                prop_assert_eq!(Cyclic::word(&rot, &g), Cyclic::word(w, &g).scale(&s));
            }
        }
    }

    #[test]
    fn multiplication_is_associative((k, a) in form_strategy(), (_, b) in form_strategy(), (_, c) in form_strategy()) {
        let _ = k;
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn dgla_antisymmetry_jacobi_and_weights(pol in pol_strategy(2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = pol.grading().clone();
        let nn = pol.bracket_degree();
        let mut h = Vec::new();
        for _ in 0..3 {
            let weight = rand::Rng::gen_range(&mut rng, 1..=3);
            let w = random_poly_word(&mut rng, pol.rank(), weight, 1);
            h.push((Cyclic::word(&w, &g), g.word_degree(&w), weight));
        }
        let [(a, da, wa), (b, db, wb), (c, _, _)] = [h[0].clone(), h[1].clone(), h[2].clone()];
        let ab = pol.dgla(&a, &b);
        prop_assert!(ab.add(&pol.dgla(&b, &a).scale(&sign((da + nn) * (db + nn)))).is_zero());
        let jac = pol
            .dgla(&a, &pol.dgla(&b, &c))
            .sub(&pol.dgla(&ab, &c))
            .sub(&pol.dgla(&b, &pol.dgla(&a, &c)).scale(&sign((da + nn) * (db + nn))));
        prop_assert!(jac.is_zero());
        prop_assert!(ab.terms().all(|(w, _)| w.theta_weight() + 1 == wa + wb));
    }

    #[test]
    fn polyvector_delta_squares_to_zero(k in 0..presentations().len(), n in -2i64..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pol = PolAlgebra::new(&presentations()[k], n);
        let weight = rand::Rng::gen_range(&mut rng, 1..=2);
        let p = random_necklace(&mut rng, &pol, weight, 2);
        prop_assert!(pol.delta_cyc(&pol.delta_cyc(&p)).is_zero());
        prop_assert!(pol.delta(&pol.delta(p.lift())).is_zero());
    }

    #[test]
    fn mc_residue_is_the_signed_double_jacobiator(pol in pol_strategy(3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = pol.shift();
        let Some(p) = homogeneous_necklace(&mut rng, &pol, 2, 2, -n - 2) else { return Ok(()) };
        let b = KBracket::from_polyvector(pol.clone(), &p, 2).unwrap();
        let report = mc_check(&DoublePoisson::new(pol.clone(), vec![b.clone()]).unwrap());
        let residue = report.residue(2);
        let d = |i: usize| pol.grading().degrees()[i];
        let r = pol.rank();
        let mut all_zero = true;
        for a in 0..r {
            for bb in 0..r {
                for c in 0..r {
                    let oracle = double_jacobi_oracle(&b, a, bb, c).unwrap();
                    let s = -sign(n * (d(a) + 1) + (n + 1) * d(bb));
                    prop_assert_eq!(pol.evaluate_on_generators(&residue, &[a, bb, c]), oracle.scale(&s));
                    all_zero &= oracle.is_zero();
                }
            }
        }
        prop_assert_eq!(all_zero, report.passed());
    }

    #[test]
    fn tensor_rotation_has_order_arity(seed in any::<u64>(), arity in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Grading::new(vec![0, 1, -1], 1);
        let mut t = Tensor::zero(arity);
        for _ in 0..3 {
            let f = (0..arity).map(|_| random_poly_word(&mut rng, 3, 0, 2)).collect();
            t.add_term(f, coeff(&mut rng));
        }
        let mut r = t.clone();
        for _ in 0..arity {
            r = r.rotate(&g);
        }
        prop_assert_eq!(r, t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn key_identities_hold(k in 0..presentations().len(), n in -2i64..=2, weight in 2usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pol = PolAlgebra::new(&presentations()[k], n);
        let Some(pi) = homogeneous_necklace(&mut rng, &pol, weight, 1, -n - 2) else { return Ok(()) };
        let omega = random_form(&mut rng, pol.rank(), 3);
        let report = validate_key_identities(&pol, &omega, &pi);
        prop_assert!(report.first_residue().is_zero());
        prop_assert!(report.second_residue().is_zero());
    }

    #[test]
    fn flat_identity_holds(k in 0..presentations().len(), n in -2i64..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pol = PolAlgebra::new(&presentations()[k], n);
        let omega = random_two_form(&mut rng, &pol);
        let Some(pi2) = homogeneous_necklace(&mut rng, &pol, 2, 1, -n - 2) else { return Ok(()) };
        let Some(omega) = omega else { return Ok(()) };
        prop_assert!(flat_of_mu(&pol, &omega, &pi2).unwrap().difference.is_zero());
    }
}
