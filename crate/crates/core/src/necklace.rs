//! Graded cyclic words: the quotient of a free algebra by graded commutators.

use crate::algebra::{Elem, Grading, Word};
use crate::scalar::Coeff;
use crate::serialize::elem_to_string;

/// Sign parity of rotating `w` so that its suffix starting at `k` moves to
/// the front: `u·v ↦ (−1)^{|u||v|} v·u`.
pub fn rotation_parity(w: &Word, k: usize, g: &Grading) -> bool {
    g.slice_parity(&w.0[..k]) && g.slice_parity(&w.0[k..])
}

pub fn rotate(w: &Word, k: usize) -> Word {
    let mut v = w.0[k..].to_vec();
    v.extend_from_slice(&w.0[..k]);
    Word(v)
}

/// Lexicographically least rotation of `w` and the Koszul parity of reaching
/// it, or `None` when some rotation fixes the word with a minus sign (such a
/// necklace equals its own negative).
pub fn canonical_rotation(w: &Word, g: &Grading) -> Option<(Word, bool)> {
    let n = w.len();
    if n <= 1 {
        return Some((w.clone(), false));
    }
    let mut best = w.clone();
    let mut best_parity = false;
    for k in 1..n {
        let r = rotate(w, k);
        let p = rotation_parity(w, k, g);
        if r == *w {
            if p {
                return None;
            }
            continue;
        }
        if r < best {
            best = r;
            best_parity = p;
        }
    }
    Some((best, best_parity))
}

/// A combination of necklaces, stored as canonical representatives.
#[derive(Clone, PartialEq, Debug)]
pub struct Cyclic<C> {
    reps: Elem<C>,
}

/// A cyclic (necklace) form or polyvector.
pub type Necklace<C> = Cyclic<C>;

impl<C: Coeff> Cyclic<C> {
    pub fn zero() -> Self {
        Cyclic { reps: Elem::zero() }
    }

    /// Projection `A → A/[A,A]`.
    pub fn project(e: &Elem<C>, g: &Grading) -> Self {
        let mut reps = Elem::zero();
        for (w, c) in e.terms() {
            if let Some((r, p)) = canonical_rotation(w, g) {
                reps.add_term(r, c.clone() * C::sign(p));
            }
        }
        Cyclic { reps }
    }

    /// Wraps representatives that are already canonical (e.g. a piece of
    /// another necklace combination).
    pub(crate) fn from_canonical(reps: Elem<C>) -> Self {
        Cyclic { reps }
    }

    pub fn word(w: &Word, g: &Grading) -> Self {
        Self::project(&Elem::word(w.clone()), g)
    }

    /// The stored representatives (a section of the projection).
    pub fn lift(&self) -> &Elem<C> {
        &self.reps
    }

    pub fn into_lift(self) -> Elem<C> {
        self.reps
    }

    /// Sum over all rotations with Koszul signs: the cyclically invariant
    /// element representing the necklace.
    pub fn symmetrize(&self, g: &Grading) -> Elem<C> {
        self.reps.flat_map(|w| {
            let mut out = Elem::zero();
            if w.is_empty() {
                out.add_term(w.clone(), C::one());
            }
            for k in 0..w.len() {
                out.add_term(rotate(w, k), C::sign(rotation_parity(w, k, g)));
            }
            out
        })
    }

    pub fn is_zero(&self) -> bool {
        self.reps.is_zero()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.reps.terms()
    }

    pub fn add(&self, other: &Self) -> Self {
        Cyclic { reps: &self.reps + &other.reps }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Cyclic { reps: &self.reps - &other.reps }
    }

    pub fn scale(&self, c: &C) -> Self {
        Cyclic { reps: self.reps.scale(c) }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        self.reps.add_scaled(&other.reps, c);
    }

    pub fn filter<F: Fn(&Word) -> bool>(&self, keep: F) -> Self {
        Cyclic { reps: self.reps.filter(keep) }
    }

    pub fn to_text(&self, names: &[String]) -> String {
        format!("cyc: {}", elem_to_string(&self.reps, names))
    }
}
