//! Free graded associative algebras over a coefficient ring.
//!
//! One monomial type serves algebra elements, non-commutative forms (words
//! that also contain `d`-symbols) and polyvectors (words that also contain
//! `θ`-symbols). Degrees and Koszul parities are supplied by a [`Grading`].

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{odd, Coeff};

/// A letter of a word: an algebra generator `x_i`, its differential `dx_i`,
/// or its dual polyvector symbol `θ_i`.
///
/// The derived order (all `x` before all `d`, before all `θ`, each by
/// declaration index) is the lexicographic order used for canonical forms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sym {
    X(u32),
    D(u32),
    T(u32),
}

impl Sym {
    pub fn index(self) -> usize {
        match self {
            Sym::X(i) | Sym::D(i) | Sym::T(i) => i as usize,
        }
    }
}

/// A finite sequence of symbols; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(pub Vec<Sym>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(s: Sym) -> Self {
        Word(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Number of `d`-symbols (form weight).
    pub fn form_weight(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, Sym::D(_))).count()
    }

    /// Number of `θ`-symbols (polyvector weight).
    pub fn theta_weight(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, Sym::T(_))).count()
    }

    pub fn is_pure(&self) -> bool {
        self.0.iter().all(|s| matches!(s, Sym::X(_)))
    }
}

/// Degrees of the generators of a presentation together with the ambient
/// polyvector shift `n`.
///
/// * `x_i` has chain degree `|x_i|` and parity `|x_i|`;
/// * `dx_i` has chain degree `|x_i|` and parity `|x_i| + 1` (total degree);
/// * `θ_i` has chain degree `-|x_i| - n - 1` and the same parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    degrees: Vec<i64>,
    shift: i64,
}

impl Grading {
    pub fn new(degrees: Vec<i64>, shift: i64) -> Self {
        Grading { degrees, shift }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn with_shift(&self, shift: i64) -> Grading {
        Grading { degrees: self.degrees.clone(), shift }
    }

    pub fn degree(&self, s: Sym) -> i64 {
        match s {
            Sym::X(i) | Sym::D(i) => self.degrees[i as usize],
            Sym::T(i) => -self.degrees[i as usize] - self.shift - 1,
        }
    }

    pub fn parity(&self, s: Sym) -> bool {
        match s {
            Sym::D(i) => odd(self.degrees[i as usize] + 1),
            _ => odd(self.degree(s)),
        }
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        w.0.iter().map(|&s| self.degree(s)).sum()
    }

    pub fn word_parity(&self, w: &Word) -> bool {
        self.slice_parity(&w.0)
    }

    pub fn slice_parity(&self, s: &[Sym]) -> bool {
        s.iter().fold(false, |acc, &x| acc ^ self.parity(x))
    }
}

/// A finitely supported combination of words. No zero coefficient is ever
/// stored, and terms iterate in lexicographic word order.
#[derive(Clone, PartialEq, Debug)]
pub struct Elem<C> {
    terms: BTreeMap<Word, C>,
}

/// An element of a free algebra.
pub type FreeElement<C> = Elem<C>;

impl<C: Coeff> Default for Elem<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Elem<C> {
    pub fn zero() -> Self {
        Elem { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(c: C) -> Self {
        Self::term(Word::unit(), c)
    }

    pub fn term(w: Word, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, C::one())
    }

    pub fn sym(s: Sym) -> Self {
        Self::word(Word::letter(s))
    }

    pub fn x(i: usize) -> Self {
        Self::sym(Sym::X(i as u32))
    }

    pub fn dx(i: usize) -> Self {
        Self::sym(Sym::D(i as u32))
    }

    pub fn theta(i: usize) -> Self {
        Self::sym(Sym::T(i as u32))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Elem<C>, c: &C) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v.clone() * c.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Elem { terms: self.terms.iter().map(|(w, v)| (w.clone(), v.clone() * c.clone())).collect() }
    }

    /// Applies a linear map given on words.
    pub fn flat_map<F: FnMut(&Word) -> Elem<C>>(&self, mut f: F) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }

    pub fn filter<F: Fn(&Word) -> bool>(&self, keep: F) -> Self {
        Elem { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    /// Splits into pieces of fixed key (e.g. form weight), in key order.
    pub fn split_by<K: Ord, F: Fn(&Word) -> K>(&self, key: F) -> BTreeMap<K, Elem<C>> {
        let mut out: BTreeMap<K, Elem<C>> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(key(w)).or_default().add_term(w.clone(), c.clone());
        }
        out
    }

    /// Degree of a homogeneous element, `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self, g: &Grading) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| g.word_degree(w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Word::unit())
    }

    /// Canonical sparse form. Construction already maintains it, so this is
    /// a rebuild that must return an equal value.
    pub fn normalized(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }
}

impl<C: Coeff> Add for &Elem<C> {
    type Output = Elem<C>;
    fn add(self, rhs: &Elem<C>) -> Elem<C> {
        let mut out = self.clone();
        out.add_scaled(rhs, &C::one());
        out
    }
}

impl<C: Coeff> Sub for &Elem<C> {
    type Output = Elem<C>;
    fn sub(self, rhs: &Elem<C>) -> Elem<C> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-C::one());
        out
    }
}

impl<C: Coeff> Neg for &Elem<C> {
    type Output = Elem<C>;
    fn neg(self) -> Elem<C> {
        self.scale(&-C::one())
    }
}

/// Concatenation product; bilinear, no signs (elements, not operators).
impl<C: Coeff> Mul for &Elem<C> {
    type Output = Elem<C>;
    fn mul(self, rhs: &Elem<C>) -> Elem<C> {
        let mut out = Elem::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Add for Elem<C> {
    type Output = Elem<C>;
    fn add(self, rhs: Elem<C>) -> Elem<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for Elem<C> {
    type Output = Elem<C>;
    fn sub(self, rhs: Elem<C>) -> Elem<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for Elem<C> {
    type Output = Elem<C>;
    fn mul(self, rhs: Elem<C>) -> Elem<C> {
        &self * &rhs
    }
}

/// Applies a graded derivation of parity `der_odd` determined by its values
/// on single symbols: `D(s_1…s_m) = Σ_t (−1)^{der·|s_1…s_{t−1}|} s_1…D(s_t)…s_m`.
pub fn apply_derivation<C: Coeff, F>(e: &Elem<C>, g: &Grading, der_odd: bool, on_sym: F) -> Elem<C>
where
    F: Fn(Sym) -> Elem<C>,
{
    e.flat_map(|w| {
        let mut out = Elem::zero();
        let mut prefix_odd = false;
        for (t, &s) in w.0.iter().enumerate() {
            let image = on_sym(s);
            if !image.is_zero() {
                let left = Elem::word(w.slice(0, t));
                let right = Elem::word(w.slice(t + 1, w.len()));
                let piece = &(&left * &image) * &right;
                out.add_scaled(&piece, &C::sign(der_odd && prefix_odd));
            }
            prefix_odd ^= g.parity(s);
        }
        out
    })
}

/// Applies an algebra morphism determined by its values on single symbols.
pub fn apply_morphism<C: Coeff, F>(e: &Elem<C>, on_sym: F) -> Elem<C>
where
    F: Fn(Sym) -> Elem<C>,
{
    e.flat_map(|w| {
        let mut acc = Elem::one();
        for &s in &w.0 {
            acc = &acc * &on_sym(s);
            if acc.is_zero() {
                break;
            }
        }
        acc
    })
}

/// An element of `A^{⊗k}`: a combination of `k`-tuples of words.
#[derive(Clone, PartialEq, Debug)]
pub struct Tensor<C> {
    arity: usize,
    terms: BTreeMap<Vec<Word>, C>,
}

/// Alias matching the terminology of bracket codomains.
pub type TensorValue<C> = Tensor<C>;

impl<C: Coeff> Tensor<C> {
    pub fn zero(arity: usize) -> Self {
        Tensor { arity, terms: BTreeMap::new() }
    }

    /// `c · 1⊗…⊗1`.
    pub fn units(arity: usize, c: C) -> Self {
        let mut t = Self::zero(arity);
        t.add_term(vec![Word::unit(); arity], c);
        t
    }

    pub fn pure(factors: Vec<Word>, c: C) -> Self {
        let mut t = Self::zero(factors.len());
        t.add_term(factors, c);
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn add_term(&mut self, factors: Vec<Word>, c: C) {
        debug_assert_eq!(factors.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&factors) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&factors);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(factors, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor<C>, c: &C) {
        assert_eq!(self.arity, other.arity, "tensor arity mismatch");
        if c.is_zero() {
            return;
        }
        for (f, v) in &other.terms {
            self.add_term(f.clone(), v.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut t = Self::zero(self.arity);
        t.add_scaled(self, c);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, factors: &[Word]) -> C {
        self.terms.get(factors).cloned().unwrap_or_else(C::zero)
    }

    /// Outer left action `a·(u₁⊗…⊗u_k) = (a·u₁)⊗…⊗u_k`.
    pub fn left_mul(&self, a: &Elem<C>) -> Self {
        let mut t = Self::zero(self.arity);
        for (f, c) in &self.terms {
            for (w, ca) in a.terms() {
                let mut nf = f.clone();
                nf[0] = w.concat(&nf[0]);
                t.add_term(nf, c.clone() * ca.clone());
            }
        }
        t
    }

    /// Outer right action `(u₁⊗…⊗u_k)·b = u₁⊗…⊗(u_k·b)`.
    pub fn right_mul(&self, b: &Elem<C>) -> Self {
        let mut t = Self::zero(self.arity);
        let last = self.arity - 1;
        for (f, c) in &self.terms {
            for (w, cb) in b.terms() {
                let mut nf = f.clone();
                nf[last] = nf[last].concat(w);
                t.add_term(nf, c.clone() * cb.clone());
            }
        }
        t
    }

    /// Multiplies a single slot by elements on both sides (no signs: the
    /// caller accounts for Koszul signs of moving the multipliers).
    pub fn slot_mul(&self, slot: usize, left: &Word, right: &Word) -> Self {
        let mut t = Self::zero(self.arity);
        for (f, c) in &self.terms {
            let mut nf = f.clone();
            nf[slot] = left.concat(&nf[slot]).concat(right);
            t.add_term(nf, c.clone());
        }
        t
    }

    /// The multiplication map `A^{⊗k} → A`.
    pub fn multiply(&self) -> Elem<C> {
        let mut e = Elem::zero();
        for (f, c) in &self.terms {
            let w = f.iter().fold(Word::unit(), |acc, u| acc.concat(u));
            e.add_term(w, c.clone());
        }
        e
    }

    /// Cyclic permutation `u₁⊗…⊗u_k ↦ ± u_k⊗u₁⊗…⊗u_{k−1}` with Koszul sign.
    pub fn rotate(&self, g: &Grading) -> Self {
        let mut t = Self::zero(self.arity);
        for (f, c) in &self.terms {
            let k = f.len();
            let last_odd = g.word_parity(&f[k - 1]);
            let rest_odd = f[..k - 1].iter().fold(false, |a, w| a ^ g.word_parity(w));
            let mut nf = Vec::with_capacity(k);
            nf.push(f[k - 1].clone());
            nf.extend_from_slice(&f[..k - 1]);
            t.add_term(nf, c.clone() * C::sign(last_odd && rest_odd));
        }
        t
    }

    /// Tensor product `self ⊗ other` (concatenation of factor lists).
    pub fn tensor(&self, other: &Tensor<C>) -> Self {
        let mut t = Self::zero(self.arity + other.arity);
        for (f, a) in &self.terms {
            for (h, b) in &other.terms {
                let mut nf = f.clone();
                nf.extend(h.iter().cloned());
                t.add_term(nf, a.clone() * b.clone());
            }
        }
        t
    }

    /// Applies a linear map to each term, producing tensors of a common arity.
    pub fn flat_map<F: FnMut(&[Word]) -> Tensor<C>>(&self, arity: usize, mut f: F) -> Self {
        let mut t = Self::zero(arity);
        for (fs, c) in &self.terms {
            t.add_scaled(&f(fs), c);
        }
        t
    }

    /// Keeps only the terms whose factors are all empty words.
    pub fn augmentation(&self) -> C {
        self.coeff(&vec![Word::unit(); self.arity])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|f| f.iter().all(Word::is_empty))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("differential of `{generator}` has degree {found}, expected {expected}")]
    DegreeMismatch { generator: String, expected: i64, found: i64 },
    #[error("differential does not square to zero on `{generator}`: remainder {remainder}")]
    DifferentialNotSquareZero { generator: String, remainder: String },
    #[error("element uses symbols outside the presentation")]
    MixedPresentations,
}

/// A quasi-free graded algebra `ℚ⟨x_1,…,x_r⟩` with a differential given on
/// generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation<C> {
    names: Vec<String>,
    degrees: Vec<i64>,
    differential: Vec<Elem<C>>,
}

impl<C: Coeff> Presentation<C> {
    /// Validates degrees and `δ² = 0` on every generator.
    pub fn new(generators: Vec<(String, i64)>, differential: Vec<(String, Elem<C>)>) -> Result<Self, AlgebraError> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for (n, d) in generators {
            if names.contains(&n) {
                return Err(AlgebraError::DuplicateGenerator(n));
            }
            names.push(n);
            degrees.push(d);
        }
        let mut diff = vec![Elem::zero(); names.len()];
        for (n, e) in differential {
            let i = names.iter().position(|m| *m == n).ok_or_else(|| AlgebraError::UnknownGenerator(n.clone()))?;
            diff[i] = e;
        }
        let p = Presentation { names, degrees, differential: diff };
        p.validate()?;
        Ok(p)
    }

    /// A presentation with zero differential.
    pub fn free(generators: &[(&str, i64)]) -> Self {
        Self::new(generators.iter().map(|(n, d)| (n.to_string(), *d)).collect(), Vec::new())
            .expect("free presentation")
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let g = self.grading(0);
        for (i, e) in self.differential.iter().enumerate() {
            if !e.terms().all(|(w, _)| w.is_pure() && w.0.iter().all(|s| s.index() < self.rank())) {
                return Err(AlgebraError::MixedPresentations);
            }
            for (w, _) in e.terms() {
                let found = g.word_degree(w);
                if found != self.degrees[i] - 1 {
                    return Err(AlgebraError::DegreeMismatch {
                        generator: self.names[i].clone(),
                        expected: self.degrees[i] - 1,
                        found,
                    });
                }
            }
        }
        for i in 0..self.rank() {
            let rem = self.delta(&self.differential[i]);
            if !rem.is_zero() {
                return Err(AlgebraError::DifferentialNotSquareZero {
                    generator: self.names[i].clone(),
                    remainder: crate::serialize::elem_to_string(&rem, &self.names),
                });
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn differential_of(&self, i: usize) -> &Elem<C> {
        &self.differential[i]
    }

    pub fn has_zero_differential(&self) -> bool {
        self.differential.iter().all(Elem::is_zero)
    }

    pub fn grading(&self, shift: i64) -> Grading {
        Grading::new(self.degrees.clone(), shift)
    }

    pub fn gen(&self, name: &str) -> Elem<C> {
        Elem::x(self.index_of(name).unwrap_or_else(|| panic!("no generator {name}")))
    }

    /// Checks that every symbol of `e` is an algebra generator of `self`.
    pub fn check_element(&self, e: &Elem<C>) -> Result<(), AlgebraError> {
        if e.terms().all(|(w, _)| w.0.iter().all(|s| matches!(s, Sym::X(i) if (*i as usize) < self.rank()))) {
            Ok(())
        } else {
            Err(AlgebraError::MixedPresentations)
        }
    }

    /// Checked product of two algebra elements.
    pub fn multiply(&self, a: &Elem<C>, b: &Elem<C>) -> Result<Elem<C>, AlgebraError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(a * b)
    }

    /// The differential extended as a degree −1 derivation:
    /// `δ(uv) = δ(u)v + (−1)^{|u|} u δ(v)`.
    pub fn delta(&self, e: &Elem<C>) -> Elem<C> {
        let g = self.grading(0);
        apply_derivation(e, &g, true, |s| match s {
            Sym::X(i) => self.differential[i as usize].clone(),
            _ => Elem::zero(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type E = Elem<Rational>;

    fn cotangent_cubic() -> Presentation<Rational> {
        let x = E::x(0);
        Presentation::new(vec![("x".into(), 0), ("xi".into(), 1)], vec![("xi".into(), (&x * &x).scale(&rat(3, 1)))])
            .unwrap()
    }

    #[test]
    fn products() {
        let x = E::x(0);
        let y = E::x(1);
        assert_eq!(&x * &y, E::word(Word(vec![Sym::X(0), Sym::X(1)])));
        let lhs = &(&x + &y) * &x;
        assert_eq!(lhs, &(&x * &x) + &(&y * &x));
        assert_eq!(&E::one() * &x, x);
    }

    #[test]
    fn delta_leibniz_example() {
        let p = cotangent_cubic();
        let x = E::x(0);
        let xi = E::x(1);
        let expected = (&(&x * &x) * &x).scale(&rat(3, 1));
        assert_eq!(p.delta(&(&x * &xi)), expected);
        assert!(p.delta(&E::one()).is_zero());
    }

    #[test]
    fn construction_errors() {
        let dup = Presentation::<Rational>::new(vec![("x".into(), 0), ("x".into(), 1)], vec![]);
        assert_eq!(dup.unwrap_err(), AlgebraError::DuplicateGenerator("x".into()));
        let bad = Presentation::<Rational>::new(vec![("x".into(), 0), ("xi".into(), 1)], vec![("xi".into(), E::x(1))]);
        assert!(matches!(bad, Err(AlgebraError::DegreeMismatch { .. })));
        // δy = x·x with |x| = 1, |y| = 3 gives δ²y = δx·x − x·δx ≠ 0 when δx = z.
        let z = E::x(2);
        let nonsq = Presentation::<Rational>::new(
            vec![("x".into(), 1), ("y".into(), 2), ("z".into(), 0)],
            vec![("x".into(), z.clone()), ("y".into(), E::x(0))],
        );
        assert!(matches!(nonsq, Err(AlgebraError::DifferentialNotSquareZero { .. })));
        let ok = Presentation::<Rational>::new(vec![("x".into(), 0), ("xi".into(), 1)], vec![("xi".into(), E::x(0))]);
        assert!(ok.is_ok());
    }

    #[test]
    fn tensor_actions_and_rotation() {
        let g = Grading::new(vec![1, 0], 0);
        let a = Word::letter(Sym::X(0));
        let b = Word::letter(Sym::X(1));
        let t = Tensor::<Rational>::pure(vec![a.clone(), a.clone()], rat(1, 1));
        // swapping two odd factors gives a sign
        assert_eq!(t.rotate(&g), t.scale(&rat(-1, 1)));
        let s = Tensor::<Rational>::pure(vec![a.clone(), b.clone()], rat(1, 1));
        let l = s.left_mul(&E::x(1)).right_mul(&E::x(0));
        assert_eq!(l, Tensor::pure(vec![b.concat(&a), b.concat(&a)], rat(1, 1)));
        assert_eq!(s.multiply(), E::word(a.concat(&b)));
    }
}
