//! Shifted non-commutative polyvectors.
//!
//! For a free algebra `A = ℚ⟨x_i⟩` the polyvectors are the free algebra on
//! `x_i` and `θ_i`, where `|θ_i| = −|x_i| − n − 1`. The double Schouten
//! bracket has degree `N = n + 1` and is determined by `{{x_i, θ_j}} = δ_ij 1⊗1`,
//! `{{x, x}} = {{θ, θ}} = 0`, the outer Leibniz rule in the second slot
//!
//! `{{a, bc}} = {{a, b}} c + (−1)^{(|a|+N)|b|} b {{a, c}}`
//!
//! and cyclic antisymmetry `{{a, b}} = −(−1)^{(|a|+N)(|b|+N)} τ{{b, a}}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use thiserror::Error;

use crate::algebra::{Elem, Grading, Presentation, Sym, Tensor, Word};
use crate::necklace::Cyclic;
use crate::scalar::{odd, Coeff};

/// An element of the polyvector algebra.
pub type Polyvector<C> = Elem<C>;
/// A cyclic polyvector.
pub type CyclicPolyvector<C> = Cyclic<C>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyvectorError {
    #[error("component of θ-weight {0} below 2")]
    WeightBelowTwo(usize),
    #[error("polyvector is not of pure θ-weight")]
    MixedWeights,
    #[error("symbol outside the polyvector algebra")]
    MixedAlgebras,
}

/// The algebra `Pol(A, n)` with its double Schouten bracket.
pub struct PolAlgebra<C> {
    base: Presentation<C>,
    grading: Grading,
    h: Cyclic<C>,
    memo: Mutex<HashMap<(Word, Word), Tensor<C>>>,
}

impl<C: Coeff> Clone for PolAlgebra<C> {
    fn clone(&self) -> Self {
        PolAlgebra {
            base: self.base.clone(),
            grading: self.grading.clone(),
            h: self.h.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl<C: std::fmt::Debug> std::fmt::Debug for PolAlgebra<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolAlgebra").field("base", &self.base).field("shift", &self.grading.shift()).finish()
    }
}

impl<C: Coeff> PolAlgebra<C> {
    pub fn new(base: &Presentation<C>, shift: i64) -> Self {
        let mut pol = PolAlgebra {
            base: base.clone(),
            grading: base.grading(shift),
            h: Cyclic::zero(),
            memo: Mutex::new(HashMap::new()),
        };
        pol.h = pol.hamiltonian();
        pol
    }

    pub fn base(&self) -> &Presentation<C> {
        &self.base
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn shift(&self) -> i64 {
        self.grading.shift()
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// Degree of the double bracket.
    pub fn bracket_degree(&self) -> i64 {
        self.shift() + 1
    }

    /// Names for printing: generators and, via `theta(..)`, their duals.
    pub fn names(&self) -> &[String] {
        self.base.names()
    }

    /// The cyclic polyvector `h` with `{h, −}^⌣ = δ`, so that `δ` on
    /// polyvectors is the derivation whose value on `x_i` is `δx_i`.
    fn hamiltonian(&self) -> Cyclic<C> {
        let mut h = Cyclic::zero();
        for i in 0..self.rank() {
            let dx = self.base.differential_of(i);
            if dx.is_zero() {
                continue;
            }
            let t = Cyclic::project(&(&Elem::theta(i) * dx), &self.grading);
            let s = self.smile(&t, &Elem::x(i));
            let (w, c) = dx.terms().next().expect("nonzero");
            let k = s.coeff(w) / c.clone();
            debug_assert_eq!(s, dx.scale(&k));
            h.add_scaled(&t, &(C::one() / k));
        }
        h
    }

    pub fn hamiltonian_element(&self) -> &Cyclic<C> {
        &self.h
    }

    pub fn parity(&self, w: &Word) -> bool {
        self.grading.word_parity(w)
    }

    fn shifted_parity(&self, w: &Word) -> bool {
        self.parity(w) ^ odd(self.bracket_degree())
    }

    /// `τ(u⊗v) = (−1)^{|u||v|} v⊗u`.
    pub fn tau(&self, t: &Tensor<C>) -> Tensor<C> {
        t.rotate(&self.grading)
    }

    /// Double Schouten bracket of two words.
    pub fn schouten_words(&self, u: &Word, v: &Word) -> Tensor<C> {
        if u.is_empty() || v.is_empty() {
            return Tensor::zero(2);
        }
        let key = (u.clone(), v.clone());
        if let Some(t) = self.memo.lock().expect("memo").get(&key) {
            return t.clone();
        }
        let out = if v.len() >= 2 {
            let b = v.slice(0, 1);
            let c = v.slice(1, v.len());
            let mut t = self.schouten_words(u, &b).right_mul(&Elem::word(c.clone()));
            let s = C::sign(self.shifted_parity(u) && self.parity(&b));
            t.add_scaled(&self.schouten_words(u, &c).left_mul(&Elem::word(b)), &s);
            t
        } else if u.len() == 1 {
            match (u.0[0], v.0[0]) {
                (Sym::X(i), Sym::T(j)) if i == j => Tensor::units(2, C::one()),
                (Sym::T(_), Sym::X(_)) => self.antisymmetric_swap(u, v),
                _ => Tensor::zero(2),
            }
        } else {
            self.antisymmetric_swap(u, v)
        };
        self.memo.lock().expect("memo").insert(key, out.clone());
        out
    }

    fn antisymmetric_swap(&self, u: &Word, v: &Word) -> Tensor<C> {
        let s = C::sign(self.shifted_parity(u) && self.shifted_parity(v));
        self.tau(&self.schouten_words(v, u)).scale(&-s)
    }

    /// `{{P, Q}}`, bilinear.
    pub fn double_schouten(&self, p: &Elem<C>, q: &Elem<C>) -> Tensor<C> {
        let mut t = Tensor::zero(2);
        for (u, a) in p.terms() {
            for (v, b) in q.terms() {
                t.add_scaled(&self.schouten_words(u, v), &(a.clone() * b.clone()));
            }
        }
        t
    }

    /// The associated Loday bracket `{P, Q} = m{{P, Q}}`.
    pub fn loday(&self, p: &Elem<C>, q: &Elem<C>) -> Elem<C> {
        self.double_schouten(p, q).multiply()
    }

    pub fn trace(&self, p: &Elem<C>) -> Cyclic<C> {
        Cyclic::project(p, &self.grading)
    }

    /// `{π, Q}^⌣`: the lift of the Lie bracket to a derivation of polyvectors.
    pub fn smile(&self, pi: &Cyclic<C>, q: &Elem<C>) -> Elem<C> {
        self.loday(pi.lift(), q)
    }

    /// The Lie bracket on cyclic polyvectors.
    pub fn dgla(&self, pi: &Cyclic<C>, rho: &Cyclic<C>) -> Cyclic<C> {
        self.trace(&self.smile(pi, rho.lift()))
    }

    /// `δ` on polyvectors.
    pub fn delta(&self, q: &Elem<C>) -> Elem<C> {
        self.smile(&self.h, q)
    }

    /// `δ` on cyclic polyvectors.
    pub fn delta_cyc(&self, pi: &Cyclic<C>) -> Cyclic<C> {
        self.dgla(&self.h, pi)
    }

    /// `δ_π = {δ + π, −}^⌣`.
    pub fn delta_twisted(&self, pi: &Cyclic<C>, q: &Elem<C>) -> Elem<C> {
        self.smile(&self.h.add(pi), q)
    }

    /// `δ_π` descended to cyclic polyvectors.
    pub fn delta_twisted_cyc(&self, pi: &Cyclic<C>, rho: &Cyclic<C>) -> Cyclic<C> {
        self.dgla(&self.h.add(pi), rho)
    }

    /// `κ(π) = {δ, π} + ½{π, π}`.
    pub fn kappa(&self, pi: &Cyclic<C>) -> Cyclic<C> {
        let half = C::frac(1, 2);
        self.delta_cyc(pi).add(&self.dgla(pi, pi).scale(&half))
    }

    /// Splits by θ-weight.
    pub fn weights(&self, pi: &Cyclic<C>) -> BTreeMap<usize, Cyclic<C>> {
        pi.lift().split_by(Word::theta_weight).into_iter().map(|(k, e)| (k, Cyclic::project(&e, &self.grading))).collect()
    }

    /// `σ(π) = Σ (i − 1) π_i`.
    pub fn sigma(&self, pi: &Cyclic<C>) -> Result<Cyclic<C>, PolyvectorError> {
        let mut out = Cyclic::zero();
        for (k, part) in self.weights(pi) {
            if k < 2 {
                return Err(PolyvectorError::WeightBelowTwo(k));
            }
            out.add_scaled(&part, &C::int(k as i64 - 1));
        }
        Ok(out)
    }

    /// Checks that every symbol lies in this algebra.
    pub fn check(&self, e: &Elem<C>) -> Result<(), PolyvectorError> {
        let ok = e.terms().all(|(w, _)| w.0.iter().all(|s| !matches!(s, Sym::D(_)) && s.index() < self.rank()));
        if ok {
            Ok(())
        } else {
            Err(PolyvectorError::MixedAlgebras)
        }
    }

    /// Positional contraction of the last `θ` of each word against `x_a`:
    /// `U θ_a V ↦ (−1)^{(|x_a|+N)|U|} U ⊗ V` where `V` contains no `θ`.
    pub fn contract_last(&self, e: &Elem<C>, a: usize) -> Tensor<C> {
        let xa = Word::letter(Sym::X(a as u32));
        let mut t = Tensor::zero(2);
        for (w, c) in e.terms() {
            let Some(pos) = w.0.iter().rposition(|s| matches!(s, Sym::T(_))) else { continue };
            if w.0[pos] != Sym::T(a as u32) {
                continue;
            }
            let u = w.slice(0, pos);
            let v = w.slice(pos + 1, w.len());
            let s = C::sign(self.shifted_parity(&xa) && self.parity(&u));
            t.add_term(vec![u, v], c.clone() * s);
        }
        t
    }

    /// Value of the k-bracket associated with a θ-weight-k polyvector on a
    /// tuple of generators: `P(x_{a_1}, …, x_{a_k})`, obtained by
    /// contracting `{P, x_{a_k}}^⌣` positionally against the rest.
    pub fn evaluate_on_generators(&self, p: &Cyclic<C>, args: &[usize]) -> Tensor<C> {
        let k = args.len();
        let first = self.smile(p, &Elem::x(args[k - 1]));
        let mut acc = lift_to_tensor(&first);
        for j in (0..k - 1).rev() {
            let a = args[j];
            acc = acc.flat_map(k - j, |fs| {
                let head = self.contract_last(&Elem::word(fs[0].clone()), a);
                let tail = Tensor::pure(fs[1..].to_vec(), C::one());
                head.tensor(&tail)
            });
        }
        acc
    }
}

fn lift_to_tensor<C: Coeff>(e: &Elem<C>) -> Tensor<C> {
    let mut t = Tensor::zero(1);
    for (w, c) in e.terms() {
        t.add_term(vec![w.clone()], c.clone());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type E = Elem<Rational>;

    fn w(s: &[Sym]) -> E {
        E::word(Word(s.to_vec()))
    }

    fn cotangent(n: i64) -> PolAlgebra<Rational> {
        PolAlgebra::new(&Presentation::free(&[("x", 0), ("xi", -n)]), n)
    }

    #[test]
    fn generator_table() {
        let pol = cotangent(-1);
        assert_eq!(pol.double_schouten(&E::x(0), &E::theta(0)), Tensor::units(2, rat(1, 1)));
        assert!(pol.double_schouten(&E::x(0), &E::x(1)).is_zero());
        assert!(pol.double_schouten(&E::theta(0), &E::theta(1)).is_zero());
    }

    #[test]
    fn leibniz_on_theta_square() {
        // degree-0 x at n = -1: θ_x has degree 0
        let pol = cotangent(-1);
        let t = pol.double_schouten(&E::x(0), &w(&[Sym::T(0), Sym::T(0)]));
        let mut expected = Tensor::pure(vec![Word::unit(), Word::letter(Sym::T(0))], rat(1, 1));
        expected.add_term(vec![Word::letter(Sym::T(0)), Word::unit()], rat(1, 1));
        assert_eq!(t, expected);
    }

    #[test]
    fn tautological_bracket() {
        let pol = cotangent(-1);
        let g = pol.grading().clone();
        let pi = Cyclic::project(&w(&[Sym::T(0), Sym::T(1)]), &g);
        assert_eq!(pol.evaluate_on_generators(&pi, &[0, 1]), Tensor::units(2, rat(1, 1)));
        assert!(pol.evaluate_on_generators(&pi, &[0, 0]).is_zero());
        assert!(pol.evaluate_on_generators(&pi, &[1, 1]).is_zero());
        assert!(pol.dgla(&pi, &pi).is_zero());
        let cut = pol.dgla(&pi, &Cyclic::project(&E::x(0), &g));
        assert_eq!(cut.len(), 1);
        assert_eq!(pol.sigma(&pi).unwrap(), pi);
    }
}
