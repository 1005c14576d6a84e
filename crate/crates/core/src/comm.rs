//! Graded-commutative polynomials: the image of a free algebra after killing
//! graded commutators as an ideal.

use std::collections::BTreeMap;

use crate::algebra::{Elem, Grading, Sym, Word};
use crate::scalar::Coeff;

/// A combination of sorted monomials; odd symbols appear at most once.
#[derive(Clone, PartialEq, Debug)]
pub struct CommPoly<C> {
    terms: BTreeMap<Vec<Sym>, C>,
}

/// Sorts a word into a commutative monomial, returning the Koszul parity of
/// the permutation, or `None` if an odd symbol repeats.
pub fn sort_monomial(w: &[Sym], g: &Grading) -> Option<(Vec<Sym>, bool)> {
    let mut v = w.to_vec();
    let mut parity = false;
    // insertion sort, tracking transpositions of odd neighbours
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            parity ^= g.parity(v[j - 1]) && g.parity(v[j]);
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|p| p[0] == p[1] && g.parity(p[0])) {
        return None;
    }
    Some((v, parity))
}

impl<C: Coeff> Default for CommPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> CommPoly<C> {
    pub fn zero() -> Self {
        CommPoly { terms: BTreeMap::new() }
    }

    pub fn scalar(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn add_term(&mut self, m: Vec<Sym>, c: C) {
        if c.is_zero() {
            return;
        }
        let s = self.terms.get(&m).cloned().unwrap_or_else(C::zero) + c;
        if s.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, s);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v.clone() * c.clone());
        }
    }

    /// Image of a noncommutative element.
    pub fn from_elem(e: &Elem<C>, g: &Grading) -> Self {
        let mut p = Self::zero();
        for (w, c) in e.terms() {
            if let Some((m, par)) = sort_monomial(&w.0, g) {
                p.add_term(m, c.clone() * C::sign(par));
            }
        }
        p
    }

    pub fn mul(&self, other: &Self, g: &Grading) -> Self {
        let mut p = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                if let Some((m, par)) = sort_monomial(&w, g) {
                    p.add_term(m, ca.clone() * cb.clone() * C::sign(par));
                }
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Sym>, &C)> {
        self.terms.iter()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut p = self.clone();
        p.add_scaled(other, &-C::one());
        p
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut p = Self::zero();
        p.add_scaled(self, c);
        p
    }

    /// The monomials viewed as (sorted) words, for printing.
    pub fn as_elem(&self) -> Elem<C> {
        Elem::from_terms(self.terms.iter().map(|(m, c)| (Word(m.clone()), c.clone())))
    }

    /// Applies a graded derivation given on symbols (Koszul signs from the
    /// symbols it passes).
    pub fn derive<F: Fn(Sym) -> CommPoly<C>>(&self, g: &Grading, der_odd: bool, on_sym: F) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut prefix = false;
            for (t, &s) in m.iter().enumerate() {
                let img = on_sym(s);
                if !img.is_zero() {
                    let mut left = Self::zero();
                    left.add_term(m[..t].to_vec(), C::one());
                    let mut right = Self::zero();
                    right.add_term(m[t + 1..].to_vec(), C::one());
                    let piece = left.mul(&img, g).mul(&right, g);
                    out.add_scaled(&piece, &(c.clone() * C::sign(der_odd && prefix)));
                }
                prefix ^= g.parity(s);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn exterior_and_polynomial_parts() {
        let g = Grading::new(vec![0, 1], 0);
        let (m, p) = sort_monomial(&[Sym::X(1), Sym::X(0), Sym::X(0)], &g).unwrap();
        assert_eq!(m, vec![Sym::X(0), Sym::X(0), Sym::X(1)]);
        assert!(!p);
        assert!(sort_monomial(&[Sym::X(1), Sym::X(1)], &g).is_none());
        // dξ has even total parity, dx odd
        assert!(sort_monomial(&[Sym::D(1), Sym::D(0), Sym::D(0)], &g).is_none());
        let (m, p) = sort_monomial(&[Sym::D(1), Sym::D(1), Sym::D(0)], &g).unwrap();
        assert_eq!(m, vec![Sym::D(0), Sym::D(1), Sym::D(1)]);
        assert!(!p);
        let e = &Elem::<Rational>::dx(0) * &Elem::x(1);
        let f = &Elem::<Rational>::x(1) * &Elem::dx(0);
        assert_eq!(CommPoly::from_elem(&e, &g), CommPoly::from_elem(&f, &g).scale(&rat(-1, 1)));
    }
}
