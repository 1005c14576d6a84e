//! Shifted k-brackets, the Maurer–Cartan check and non-degeneracy.
//!
//! A k-bracket is stored by its values on generator tuples and, in parallel,
//! by the cyclic polyvector of θ-weight k it comes from. The two are tied by
//! [`to_bracket`]: the value on `(x_{a_1}, …, x_{a_k})` is obtained from
//! `{P, x_{a_k}}^⌣` by contracting the remaining θ-symbols positionally.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Elem, Presentation, Sym, Tensor, Word};
use crate::linalg::Matrix;
use crate::necklace::Cyclic;
use crate::polyvector::PolAlgebra;
use crate::scalar::{odd, Coeff};

/// Sign relating positional contraction to bracket values on
/// `(x_{a_1}, …, x_{a_k})`: `−(−1)^e` with
/// `e = n|x_{a_{k−1}}| + Σ_{i<k} (k−1−i)|x_{a_i}|`.
///
/// With it the canonical bracket `{{x_i, ξ_i}} = 1⊗1` of a shifted cotangent
/// algebra is compatible with `Σ dx_i dξ_i` for every shift and degree, and
/// k-brackets satisfy the cyclic rule used by [`KBracket::evaluate`].
fn contraction_sign<C: Coeff>(pol: &PolAlgebra<C>, tuple: &[usize]) -> C {
    let g = pol.grading();
    let k = tuple.len();
    let deg = |i: usize| g.degrees()[tuple[i]];
    let mut e = pol.shift() * deg(k - 2);
    for i in 0..k - 1 {
        e += (k as i64 - 2 - i as i64) * deg(i);
    }
    -C::sign(odd(e))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("bracket of arity {expected} applied to {found} arguments")]
    ArityMismatch { expected: usize, found: usize },
    #[error("arity must be at least 1, got {0}")]
    BadArity(usize),
    #[error("generator index {0} out of range")]
    UnknownGenerator(usize),
    #[error("value on {tuple} has degree {found}, expected {expected}")]
    DegreeMismatch { tuple: String, expected: i64, found: i64 },
    #[error("value on {0} is not built from algebra generators")]
    NotInAlgebra(String),
    #[error("table is not the bracket of any cyclic polyvector (violates the cyclic relation or the derivation rule)")]
    NotCyclic,
    #[error("polyvector is not of pure θ-weight {0}")]
    MixedWeights(usize),
    #[error("brackets have different shifts or algebras")]
    Incompatible,
    #[error("structure is not Maurer–Cartan")]
    NotMaurerCartan,
}

/// The k-bracket of a cyclic polyvector of θ-weight k on all generator
/// tuples, keeping only nonzero values.
pub fn to_bracket<C: Coeff>(pol: &PolAlgebra<C>, p: &Cyclic<C>, k: usize) -> BTreeMap<Vec<usize>, Tensor<C>> {
    let mut out: BTreeMap<Vec<usize>, Tensor<C>> = BTreeMap::new();
    // split by θ-label multiset so only matching tuples are evaluated
    let groups = p.lift().split_by(|w| {
        let mut labels: Vec<usize> = w.0.iter().filter(|s| matches!(s, Sym::T(_))).map(|s| s.index()).collect();
        labels.sort();
        labels
    });
    for (labels, part) in groups {
        if labels.len() != k {
            continue;
        }
        let piece = Cyclic::project(&part, pol.grading());
        for tuple in distinct_permutations(&labels) {
            let v = pol.evaluate_on_generators(&piece, &tuple).scale(&contraction_sign(pol, &tuple));
            if !v.is_zero() {
                let e = out.entry(tuple).or_insert_with(|| Tensor::zero(k));
                e.add_scaled(&v, &C::one());
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn distinct_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    permute(items.to_vec(), 0, &mut out);
    out.into_iter().collect()
}

fn permute(mut v: Vec<usize>, i: usize, out: &mut BTreeSet<Vec<usize>>) {
    if i == v.len() {
        out.insert(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v.clone(), i + 1, out);
        v.swap(i, j);
    }
}

/// Candidate necklaces whose brackets can produce a table term.
fn candidates<C: Coeff>(pol: &PolAlgebra<C>, tuple: &[usize], factors: &[Word]) -> Vec<Word> {
    let k = tuple.len();
    let mut out = BTreeSet::new();
    for labels in distinct_permutations(tuple) {
        for r in 0..k {
            let mut w = Vec::new();
            for (t, &l) in labels.iter().enumerate() {
                w.push(Sym::T(l as u32));
                w.extend_from_slice(&factors[(t + r) % k].0);
            }
            if let Some((rep, _)) = crate::necklace::canonical_rotation(&Word(w), pol.grading()) {
                out.insert(rep);
            }
        }
    }
    out.into_iter().collect()
}

/// Finds a cyclic polyvector whose bracket agrees with `table` on the tuples
/// in `rows` (every tuple when `rows` is `None`).
fn encode<C: Coeff>(
    pol: &PolAlgebra<C>,
    k: usize,
    table: &BTreeMap<Vec<usize>, Tensor<C>>,
    rows: Option<&BTreeSet<Vec<usize>>>,
) -> Option<Cyclic<C>> {
    let mut cands = BTreeSet::new();
    for (tuple, t) in table {
        for (factors, _) in t.terms() {
            cands.extend(candidates(pol, tuple, factors));
        }
    }
    let cands: Vec<Word> = cands.into_iter().collect();
    let images: Vec<BTreeMap<Vec<usize>, Tensor<C>>> =
        cands.iter().map(|w| to_bracket(pol, &Cyclic::word(w, pol.grading()), k)).collect();
    let keep = |tuple: &Vec<usize>| rows.is_none_or(|r| r.contains(tuple));
    let mut keys: BTreeSet<(Vec<usize>, Vec<Word>)> = BTreeSet::new();
    for (tuple, t) in table.iter().chain(images.iter().flat_map(|m| m.iter())) {
        if keep(tuple) {
            keys.extend(t.terms().map(|(f, _)| (tuple.clone(), f.clone())));
        }
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let mut m = Matrix::zeros(keys.len(), cands.len());
    let mut rhs = vec![C::zero(); keys.len()];
    for (i, (tuple, f)) in keys.iter().enumerate() {
        rhs[i] = table.get(tuple).map_or_else(C::zero, |t| t.coeff(f));
        for (j, img) in images.iter().enumerate() {
            m[(i, j)] = img.get(tuple).map_or_else(C::zero, |t| t.coeff(f));
        }
    }
    let x = m.solve(&rhs)?;
    let mut p = Cyclic::zero();
    for (w, c) in cands.iter().zip(x) {
        p.add_scaled(&Cyclic::word(w, pol.grading()), &c);
    }
    Some(p)
}

/// An n-shifted k-bracket on a free algebra.
#[derive(Clone, Debug)]
pub struct KBracket<C> {
    arity: usize,
    pol: Arc<PolAlgebra<C>>,
    table: BTreeMap<Vec<usize>, Tensor<C>>,
    necklace: Cyclic<C>,
}

impl<C: Coeff> PartialEq for KBracket<C> {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.shift() == other.shift() && self.table == other.table
    }
}

impl<C: Coeff> KBracket<C> {
    /// Validates a full table: every tuple not listed is zero.
    pub fn new(
        pol: Arc<PolAlgebra<C>>,
        arity: usize,
        table: BTreeMap<Vec<usize>, Tensor<C>>,
    ) -> Result<Self, BracketError> {
        Self::check_table(&pol, arity, &table)?;
        let table: BTreeMap<_, _> = table.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let necklace = encode(&pol, arity, &table, None).ok_or(BracketError::NotCyclic)?;
        if to_bracket(&pol, &necklace, arity) != table {
            return Err(BracketError::NotCyclic);
        }
        Ok(KBracket { arity, pol, table, necklace })
    }

    /// Builds the bracket determined by the declared tuples; tuples not
    /// declared are whatever the cyclic relation forces (zero if free).
    pub fn complete(
        pol: Arc<PolAlgebra<C>>,
        arity: usize,
        declared: BTreeMap<Vec<usize>, Tensor<C>>,
    ) -> Result<Self, BracketError> {
        Self::check_table(&pol, arity, &declared)?;
        let rows: BTreeSet<Vec<usize>> = declared.keys().cloned().collect();
        let necklace = encode(&pol, arity, &declared, Some(&rows)).ok_or(BracketError::NotCyclic)?;
        let table = to_bracket(&pol, &necklace, arity);
        for (tuple, v) in &declared {
            if table.get(tuple).map_or(!v.is_zero(), |t| t != v) {
                return Err(BracketError::NotCyclic);
            }
        }
        Ok(KBracket { arity, pol, table, necklace })
    }

    pub fn from_polyvector(pol: Arc<PolAlgebra<C>>, p: &Cyclic<C>, arity: usize) -> Result<Self, BracketError> {
        if p.terms().any(|(w, _)| w.theta_weight() != arity) {
            return Err(BracketError::MixedWeights(arity));
        }
        let table = to_bracket(&pol, p, arity);
        Ok(KBracket { arity, necklace: p.clone(), pol, table })
    }

    pub fn zero(pol: Arc<PolAlgebra<C>>, arity: usize) -> Self {
        KBracket { arity, pol, table: BTreeMap::new(), necklace: Cyclic::zero() }
    }

    fn check_table(pol: &PolAlgebra<C>, arity: usize, table: &BTreeMap<Vec<usize>, Tensor<C>>) -> Result<(), BracketError> {
        if arity == 0 {
            return Err(BracketError::BadArity(0));
        }
        let g = pol.grading();
        let n1 = pol.bracket_degree();
        for (tuple, v) in table {
            if tuple.len() != arity || v.arity() != arity {
                return Err(BracketError::ArityMismatch { expected: arity, found: tuple.len() });
            }
            if let Some(&i) = tuple.iter().find(|&&i| i >= pol.rank()) {
                return Err(BracketError::UnknownGenerator(i));
            }
            let expected: i64 = tuple.iter().map(|&i| g.degrees()[i]).sum::<i64>() + (arity as i64 - 1) * n1 - 1;
            for (f, _) in v.terms() {
                if !f.iter().all(|w| w.is_pure() && w.0.iter().all(|s| s.index() < pol.rank())) {
                    return Err(BracketError::NotInAlgebra(format!("{tuple:?}")));
                }
                let found: i64 = f.iter().map(|w| g.word_degree(w)).sum();
                if found != expected {
                    return Err(BracketError::DegreeMismatch { tuple: format!("{tuple:?}"), expected, found });
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn shift(&self) -> i64 {
        self.pol.shift()
    }

    pub fn pol(&self) -> &Arc<PolAlgebra<C>> {
        &self.pol
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, Tensor<C>> {
        &self.table
    }

    /// The cyclic polyvector of θ-weight `k` encoding the bracket.
    pub fn necklace(&self) -> &Cyclic<C> {
        &self.necklace
    }

    pub fn value(&self, tuple: &[usize]) -> Tensor<C> {
        self.table.get(tuple).cloned().unwrap_or_else(|| Tensor::zero(self.arity))
    }

    /// Degree of the bracket as an operator, `(k − 1)(n + 1) − 1`.
    pub fn operator_degree(&self) -> i64 {
        (self.arity as i64 - 1) * self.pol.bracket_degree() - 1
    }

    /// Evaluates on arbitrary elements using only the generator table: the
    /// outer Leibniz rule in the last slot and, for other slots, the cyclic
    /// relation
    /// `π(a_1, …, a_k) = (−1)^{k+1} (−1)^{ā_1(ā_2+…+ā_k)} ρ π(a_2, …, a_k, a_1)`
    /// with `ā = |a| + n` and `ρ` moving the last tensor factor to the front.
    pub fn evaluate(&self, args: &[Elem<C>]) -> Result<Tensor<C>, BracketError> {
        if args.len() != self.arity {
            return Err(BracketError::ArityMismatch { expected: self.arity, found: args.len() });
        }
        let mut out = Tensor::zero(self.arity);
        let mut stack: Vec<(Vec<Word>, C)> = vec![(Vec::new(), C::one())];
        for a in args {
            let mut next = Vec::new();
            for (ws, c) in &stack {
                for (w, ca) in a.terms() {
                    let mut v = ws.clone();
                    v.push(w.clone());
                    next.push((v, c.clone() * ca.clone()));
                }
            }
            stack = next;
        }
        for (ws, c) in stack {
            out.add_scaled(&self.eval_words(&ws), &c);
        }
        Ok(out)
    }

    fn eval_words(&self, ws: &[Word]) -> Tensor<C> {
        let k = self.arity;
        if ws.iter().any(Word::is_empty) {
            return Tensor::zero(k);
        }
        let g = self.pol.grading();
        let last = &ws[k - 1];
        if last.len() >= 2 {
            let b = last.slice(0, 1);
            let c = last.slice(1, last.len());
            let mut head = ws.to_vec();
            head[k - 1] = b.clone();
            let mut t = self.eval_words(&head).right_mul(&Elem::word(c.clone()));
            let mut tail = ws.to_vec();
            tail[k - 1] = c;
            let passed = self.operator_degree() + ws[..k - 1].iter().map(|w| g.word_degree(w)).sum::<i64>();
            let s = C::sign(odd(passed) && g.word_parity(&b));
            t.add_scaled(&self.eval_words(&tail).left_mul(&Elem::word(b)), &s);
            return t;
        }
        if ws.iter().all(|w| w.len() == 1) {
            let tuple: Vec<usize> = ws.iter().map(|w| w.0[0].index()).collect();
            return self.value(&tuple);
        }
        let mut rotated = ws[1..].to_vec();
        rotated.push(ws[0].clone());
        // π(a_1, …, a_k) = (−1)^{(k−1)(n+1) + |a_1|(|a_2| + … + |a_k|)} ρ π(a_2, …, a_k, a_1)
        let rest = ws[1..].iter().fold(false, |acc, w| acc ^ g.word_parity(w));
        let s = C::sign(odd((k as i64 - 1) * (self.shift() + 1)) ^ (g.word_parity(&ws[0]) && rest));
        self.eval_words(&rotated).rotate(g).scale(&s)
    }

    /// The Loday bracket `m ∘ π` of a 2-bracket.
    pub fn loday(&self, a: &Elem<C>, b: &Elem<C>) -> Result<Elem<C>, BracketError> {
        if self.arity != 2 {
            return Err(BracketError::ArityMismatch { expected: 2, found: self.arity });
        }
        Ok(self.evaluate(&[a.clone(), b.clone()])?.multiply())
    }

    /// Rank-`r` matrix of `π^♭` with entries `π(x_i, x_j)`.
    pub fn flat_matrix(&self) -> Vec<Vec<Tensor<C>>> {
        let r = self.pol.rank();
        (0..r).map(|i| (0..r).map(|j| self.value(&[i, j])).collect()).collect()
    }
}

/// `π = π_2 + … + π_N`.
#[derive(Clone, Debug)]
pub struct DoublePoisson<C> {
    pol: Arc<PolAlgebra<C>>,
    brackets: BTreeMap<usize, KBracket<C>>,
}

impl<C: Coeff> DoublePoisson<C> {
    pub fn new(pol: Arc<PolAlgebra<C>>, brackets: Vec<KBracket<C>>) -> Result<Self, BracketError> {
        let mut map: BTreeMap<usize, KBracket<C>> = BTreeMap::new();
        for b in brackets {
            if b.shift() != pol.shift() || b.pol.base() != pol.base() {
                return Err(BracketError::Incompatible);
            }
            if b.arity < 2 {
                return Err(BracketError::BadArity(b.arity));
            }
            match map.get_mut(&b.arity) {
                Some(existing) => {
                    let sum = existing.necklace.add(&b.necklace);
                    *existing = KBracket::from_polyvector(pol.clone(), &sum, b.arity)?;
                }
                None => {
                    map.insert(b.arity, b);
                }
            }
        }
        Ok(DoublePoisson { pol, brackets: map })
    }

    /// Splits a cyclic polyvector by θ-weight.
    pub fn from_polyvector(pol: Arc<PolAlgebra<C>>, p: &Cyclic<C>) -> Result<Self, BracketError> {
        let mut v = Vec::new();
        for (k, part) in pol.weights(p) {
            v.push(KBracket::from_polyvector(pol.clone(), &part, k)?);
        }
        Self::new(pol, v)
    }

    pub fn pol(&self) -> &Arc<PolAlgebra<C>> {
        &self.pol
    }

    pub fn bracket(&self, k: usize) -> Option<&KBracket<C>> {
        self.brackets.get(&k)
    }

    pub fn top(&self) -> usize {
        self.brackets.keys().next_back().copied().unwrap_or(0)
    }

    pub fn polyvector(&self) -> Cyclic<C> {
        let mut p = Cyclic::zero();
        for b in self.brackets.values() {
            p.add_scaled(&b.necklace, &C::one());
        }
        p
    }
}

/// Per-weight residues of `κ(π) = δπ + ½{π, π}`.
#[derive(Clone, Debug, PartialEq)]
pub struct McReport<C> {
    pub residues: Vec<(usize, Cyclic<C>)>,
}

impl<C: Coeff> McReport<C> {
    pub fn passed(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn residue(&self, weight: usize) -> Cyclic<C> {
        self.residues.iter().find(|(w, _)| *w == weight).map_or_else(Cyclic::zero, |(_, r)| r.clone())
    }
}

/// Checks `δπ_i + ½ Σ_{j+k=i+1} {π_j, π_k} = 0` for `i = 2, …, 2N − 2`.
/// The residue labelled `i` has θ-weight `i + 1`.
pub fn mc_check<C: Coeff>(pi: &DoublePoisson<C>) -> McReport<C> {
    let kappa = pi.pol.kappa(&pi.polyvector());
    let residues = pi.pol.weights(&kappa).into_iter().filter(|(_, r)| !r.is_zero()).map(|(w, r)| (w - 1, r)).collect();
    McReport { residues }
}

/// The double Jacobiator of a 2-bracket on three generators, expanded
/// directly from the table:
/// `{{a,{{b,c}}}}_L + ε₁ τ{{b,{{c,a}}}}_L + ε₂ τ²{{c,{{a,b}}}}_L`
/// with `{{a, u⊗v}}_L = {{a, u}}⊗v`, `τ(u⊗v⊗w) = ±w⊗u⊗v`,
/// `ε₁ = (−1)^{|a|(|b|+|c|) + n(|a|+|b|)}` and `ε₂ = (−1)^{|c|(|a|+|b|) + n(|a|+|c|)}`.
pub fn double_jacobi_oracle<C: Coeff>(pi: &KBracket<C>, a: usize, b: usize, c: usize) -> Result<Tensor<C>, BracketError> {
    if pi.arity != 2 {
        return Err(BracketError::ArityMismatch { expected: 2, found: pi.arity });
    }
    let g = pi.pol.grading();
    let n = pi.shift();
    let p = |i: usize| odd(g.degrees()[i]);
    let inner = |x: usize, y: usize, z: usize| -> Tensor<C> {
        let yz = pi.value(&[y, z]);
        let mut t = Tensor::zero(3);
        for (f, coef) in yz.terms() {
            let left = pi.evaluate(&[Elem::x(x), Elem::word(f[0].clone())]).expect("arity 2");
            let right = Tensor::pure(vec![f[1].clone()], C::one());
            t.add_scaled(&left.tensor(&right), coef);
        }
        t
    };
    let mut out = inner(a, b, c);
    let e1 = C::sign((p(a) && (p(b) ^ p(c))) ^ (odd(n) && (p(a) ^ p(b))));
    out.add_scaled(&inner(b, c, a).rotate(g), &e1);
    let e2 = C::sign((p(c) && (p(a) ^ p(b))) ^ (odd(n) && (p(a) ^ p(c))));
    out.add_scaled(&inner(c, a, b).rotate(g).rotate(g), &e2);
    Ok(out)
}

/// `δ_π(Q) = δQ + {π, Q}^⌣`; requires `π` to be Maurer–Cartan.
pub fn twisted_differential<C: Coeff>(pi: &DoublePoisson<C>, q: &Elem<C>) -> Result<Elem<C>, BracketError> {
    if !mc_check(pi).passed() {
        return Err(BracketError::NotMaurerCartan);
    }
    Ok(pi.pol.delta_twisted(&pi.polyvector(), q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NondegMode {
    Strict,
    Fiberwise,
}

impl NondegMode {
    pub fn name(self) -> &'static str {
        match self {
            NondegMode::Strict => "strict",
            NondegMode::Fiberwise => "fiberwise",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NondegReport<C> {
    pub mode: NondegMode,
    pub matrix: Vec<Vec<Tensor<C>>>,
    pub scalar_matrix: Option<Matrix<C>>,
    pub passed: bool,
    pub reason: Option<String>,
}

/// Strict: every entry of `π^♭` is a rational multiple of `1⊗1` and the
/// rational matrix is invertible. Fiberwise: the augmentation of `π^♭`
/// (all generators sent to 0) is invertible.
pub fn nondeg_check<C: Coeff>(pi2: &KBracket<C>, mode: NondegMode) -> NondegReport<C> {
    let matrix = pi2.flat_matrix();
    let r = matrix.len();
    let strict_ok = matrix.iter().flatten().all(Tensor::is_constant);
    if mode == NondegMode::Strict && !strict_ok {
        return NondegReport {
            mode,
            matrix,
            scalar_matrix: None,
            passed: false,
            reason: Some("entries are not constant; strict mode inapplicable".into()),
        };
    }
    let scalar = Matrix::from_rows(matrix.iter().map(|row| row.iter().map(Tensor::augmentation).collect()).collect());
    let scalar = if r == 0 { Matrix::zeros(0, 0) } else { scalar };
    let passed = scalar.inverse().is_some();
    NondegReport {
        mode,
        matrix,
        scalar_matrix: Some(scalar),
        passed,
        reason: (!passed).then(|| "matrix is singular".into()),
    }
}

/// A presentation-level convenience: the canonical bracket on a shifted
/// cotangent algebra `ℚ⟨x_1,…,x_r, ξ_1,…,ξ_r⟩`, `{{x_i, ξ_i}} = 1⊗1`.
pub fn canonical_cotangent_bracket<C: Coeff>(pol: Arc<PolAlgebra<C>>, pairs: &[(usize, usize)]) -> Result<KBracket<C>, BracketError> {
    let declared = pairs.iter().map(|&(x, xi)| (vec![x, xi], Tensor::units(2, C::one()))).collect();
    KBracket::complete(pol, 2, declared)
}

/// The shifted cotangent presentation on `degrees`: generators `x_i` of the
/// given degrees followed by `ξ_i` of degree `−n − |x_i|`.
pub fn cotangent_presentation<C: Coeff>(degrees: &[i64], shift: i64) -> Presentation<C> {
    let mut gens: Vec<(String, i64)> = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        gens.push((format!("x{}", i + 1), d));
    }
    for (i, &d) in degrees.iter().enumerate() {
        gens.push((format!("xi{}", i + 1), -shift - d));
    }
    Presentation::new(gens, Vec::new()).expect("distinct names")
}
