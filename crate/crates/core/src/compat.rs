//! Contractions of forms against polyvectors, compatibility of pairs and the
//! Legendre correspondence between non-degenerate 2-forms and 2-brackets.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{apply_morphism, Elem, Grading, Sym, Tensor, Word};
use crate::double_poisson::{mc_check, nondeg_check, BracketError, DoublePoisson, KBracket, NondegMode, NondegReport};
use crate::forms::{check_pre_bisymplectic, de_rham_d, total_d, PreBisymplecticDatum};
use crate::linalg::Matrix;
use crate::necklace::Cyclic;
use crate::polyvector::PolAlgebra;
use crate::scalar::Coeff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompatError {
    #[error("shift mismatch: form has shift {form}, bracket has shift {bracket}")]
    ShiftMismatch { form: i64, bracket: i64 },
    #[error("not strictly non-degenerate: {0}")]
    NotStrictlyNondegenerate(String),
    #[error("components above weight 2 are present")]
    HigherComponentsPresent,
    #[error("the inverse bracket fails the Maurer–Cartan check")]
    McFailure,
    #[error("form or bracket is not of weight 2")]
    NotWeightTwo,
    #[error("form or bracket is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// `μ(−, π)`: the algebra morphism from forms to polyvectors with
/// `μ(a) = a` and `μ(df) = {π, f}^⌣`.
pub fn mu<C: Coeff>(pol: &PolAlgebra<C>, alpha: &Elem<C>, pi: &Cyclic<C>) -> Elem<C> {
    let images: Vec<Elem<C>> = (0..pol.rank()).map(|i| pol.smile(pi, &Elem::x(i))).collect();
    apply_morphism(alpha, |s| match s {
        Sym::X(i) => Elem::x(i as usize),
        Sym::D(i) => images[i as usize].clone(),
        Sym::T(_) => panic!("μ applied to a polyvector"),
    })
}

/// `ν(−, π, b)`: the derivation over `μ(−, π)` with `ν(a) = 0` and
/// `ν(df) = {b, f}^⌣`, i.e. the coefficient of `ε` in `μ(−, π + εb)` for a
/// formal `ε` of degree `|π| − |b|` written on the left:
/// `ν(αβ) = ν(α)μ(β) + (−1)^{|ε||α|} μ(α)ν(β)`.
///
/// A zero `π` is given the Maurer–Cartan degree `−n − 2`.
pub fn nu<C: Coeff>(pol: &PolAlgebra<C>, alpha: &Elem<C>, pi: &Cyclic<C>, b: &Cyclic<C>) -> Elem<C> {
    let g = pol.grading();
    let Some(db) = b.lift().homogeneous_degree(g) else {
        // split b into homogeneous parts
        let mut out = Elem::zero();
        for part in b.lift().split_by(|w| g.word_degree(w)).into_values() {
            out = &out + &nu(pol, alpha, pi, &Cyclic::from_canonical(part));
        }
        return out;
    };
    let dpi = pi.lift().homogeneous_degree(g).unwrap_or(-pol.shift() - 2);
    let eps_odd = (dpi - db).rem_euclid(2) == 1;
    let mus: Vec<Elem<C>> = (0..pol.rank()).map(|i| pol.smile(pi, &Elem::x(i))).collect();
    let nus: Vec<Elem<C>> = (0..pol.rank()).map(|i| pol.smile(b, &Elem::x(i))).collect();
    let mu_sym = |s: Sym| match s {
        Sym::X(i) => Elem::x(i as usize),
        Sym::D(i) => mus[i as usize].clone(),
        Sym::T(_) => panic!("ν applied to a polyvector"),
    };
    alpha.flat_map(|w| {
        let mut out = Elem::zero();
        for (t, &s) in w.0.iter().enumerate() {
            let Sym::D(i) = s else { continue };
            let prefix = w.slice(0, t);
            let left = apply_morphism(&Elem::word(prefix.clone()), mu_sym);
            let right = apply_morphism(&Elem::word(w.slice(t + 1, w.len())), mu_sym);
            let sign = C::sign(eps_odd && g.word_parity(&prefix));
            out.add_scaled(&(&(&left * &nus[i as usize]) * &right), &sign);
        }
        out
    })
}

/// Both sides of the two key identities
///
/// `{π, μ(ω, π)}^⌣ = μ(dω, π) + ½ ν(ω, π, {π, π})` and
/// `δ_π μ(ω, π) = μ(Dω, π) + ν(ω, π, κ(π))`,
///
/// with their residues.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyIdentityReport<C> {
    pub first: (Elem<C>, Elem<C>),
    pub second: (Elem<C>, Elem<C>),
}

impl<C: Coeff> KeyIdentityReport<C> {
    pub fn first_residue(&self) -> Elem<C> {
        &self.first.0 - &self.first.1
    }

    pub fn second_residue(&self) -> Elem<C> {
        &self.second.0 - &self.second.1
    }

    pub fn passed(&self) -> bool {
        self.first_residue().is_zero() && self.second_residue().is_zero()
    }
}

pub fn validate_key_identities<C: Coeff>(pol: &PolAlgebra<C>, omega: &Elem<C>, pi: &Cyclic<C>) -> KeyIdentityReport<C> {
    let g = pol.grading();
    let m = mu(pol, omega, pi);
    let pipi = pol.dgla(pi, pi);
    let lhs1 = pol.smile(pi, &m);
    let mut rhs1 = mu(pol, &de_rham_d(omega, g), pi);
    rhs1.add_scaled(&nu(pol, omega, pi, &pipi), &C::frac(1, 2));
    let lhs2 = pol.delta_twisted(pi, &m);
    let rhs2 = &mu(pol, &total_d(pol.base(), omega), pi) + &nu(pol, omega, pi, &pol.kappa(pi));
    KeyIdentityReport { first: (lhs1, rhs1), second: (lhs2, rhs2) }
}

/// Verdict of a compatibility check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompatVerdict {
    PassStrict,
    PassWitnessed,
    Fail,
}

impl CompatVerdict {
    pub fn name(self) -> &'static str {
        match self {
            CompatVerdict::PassStrict => "PASS-STRICT",
            CompatVerdict::PassWitnessed => "PASS-WITNESSED",
            CompatVerdict::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport<C> {
    pub verdict: CompatVerdict,
    /// `tr μ(ω, π) − σ(π)`.
    pub defect: Cyclic<C>,
    /// `π = 0`: the pair is compatible for trivial reasons.
    pub degenerate: bool,
    /// Failed preconditions (ω not pre-bisymplectic, π not Maurer–Cartan).
    pub notes: Vec<String>,
}

/// `tr μ(ω, π)` for a cyclic form, summed over the components of ω.
pub fn trace_mu<C: Coeff>(pol: &PolAlgebra<C>, omega: &PreBisymplecticDatum<C>, pi: &Cyclic<C>) -> Cyclic<C> {
    let mut out = Cyclic::zero();
    for comp in omega.components.values() {
        out = out.add(&pol.trace(&mu(pol, comp.lift(), pi)));
    }
    out
}

/// Checks `[tr μ(ω, π)] = [σ(π)]`, strictly or through a supplied witness
/// `h` with `tr μ(ω, π) − σ(π) = δ_π h`.
pub fn compat_check<C: Coeff>(
    omega: &PreBisymplecticDatum<C>,
    pi: &DoublePoisson<C>,
    witness: Option<&Cyclic<C>>,
) -> Result<CompatReport<C>, CompatError> {
    let pol = pi.pol();
    if omega.shift != pol.shift() {
        return Err(CompatError::ShiftMismatch { form: omega.shift, bracket: pol.shift() });
    }
    let mut notes = Vec::new();
    let fc = check_pre_bisymplectic(pol.base(), omega);
    if !fc.passed() {
        notes.push("form is not pre-bisymplectic".to_string());
    }
    if !mc_check(pi).passed() {
        notes.push("bracket is not Maurer–Cartan".to_string());
    }
    let p = pi.polyvector();
    let sigma = pol.sigma(&p).expect("brackets have arity at least 2");
    let defect = trace_mu(pol, omega, &p).sub(&sigma);
    let verdict = if !notes.is_empty() {
        CompatVerdict::Fail
    } else if defect.is_zero() {
        CompatVerdict::PassStrict
    } else if witness.is_some_and(|h| pol.delta_twisted_cyc(&p, h) == defect) {
        CompatVerdict::PassWitnessed
    } else {
        CompatVerdict::Fail
    };
    Ok(CompatReport { verdict, defect, degenerate: p.is_zero(), notes })
}

/// A square matrix over `A⊗A^op` representing a bimodule map between free
/// bimodules of rank r: column `j` is the image of the `j`-th basis element,
/// and the entry `u⊗v` in row `i` stands for `u·e_i·v`.
#[derive(Clone, Debug, PartialEq)]
pub struct BimoduleMatrix<C> {
    pub entries: Vec<Vec<Tensor<C>>>,
    /// Parity of the map, used for the Koszul sign when passing coefficients.
    pub odd: bool,
    /// Parities of the codomain basis elements.
    pub basis_odd: Vec<bool>,
}

impl<C: Coeff> BimoduleMatrix<C> {
    pub fn zero(r: usize) -> Self {
        BimoduleMatrix { entries: vec![vec![Tensor::zero(2); r]; r], odd: false, basis_odd: vec![false; r] }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Tensor::is_zero)
    }

    /// `self ∘ other`: applying `self` to `u'·e_j·v'` gives
    /// `(−1)^{|self|(|u'| + |e_j|)} u'·self(e_j)·v'`.
    pub fn compose(&self, other: &Self, g: &Grading) -> Self {
        let r = self.rank();
        let mut out = Self::zero(r);
        out.odd = self.odd ^ other.odd;
        out.basis_odd = self.basis_odd.clone();
        for k in 0..r {
            for j in 0..r {
                for (f, c) in other.entries[j][k].terms() {
                    let s = C::sign(self.odd && (g.word_parity(&f[0]) ^ other.basis_odd[j]));
                    for i in 0..r {
                        for (h, d) in self.entries[i][j].terms() {
                            let u = f[0].concat(&h[0]);
                            let v = h[1].concat(&f[1]);
                            out.entries[i][k].add_term(vec![u, v], c.clone() * d.clone() * s.clone());
                        }
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (row, orow) in out.entries.iter_mut().zip(&other.entries) {
            for (e, o) in row.iter_mut().zip(orow) {
                e.add_scaled(o, &-C::one());
            }
        }
        out
    }

    /// The rational matrix, if every entry is a multiple of `1⊗1`.
    pub fn scalar(&self) -> Option<Matrix<C>> {
        if !self.entries.iter().flatten().all(Tensor::is_constant) {
            return None;
        }
        Some(Matrix::from_rows(self.entries.iter().map(|row| row.iter().map(Tensor::augmentation).collect()).collect()))
    }

    /// Sets the codomain basis parities to those of `dx_i`.
    fn with_basis(mut self, pol: &PolAlgebra<C>) -> Self {
        self.basis_odd = (0..self.rank()).map(|k| pol.grading().parity(Sym::D(k as u32))).collect();
        self
    }

    pub fn from_scalar(m: &Matrix<C>) -> Self {
        let entries = (0..m.rows).map(|i| (0..m.cols).map(|j| Tensor::units(2, m[(i, j)].clone())).collect()).collect();
        let r = m.rows;
        BimoduleMatrix { entries, odd: false, basis_odd: vec![false; r] }
    }
}

/// Splits `Σ u·s_i·v` (one marked symbol per word) into `i ↦ Σ u⊗v`.
fn decompose<C: Coeff>(e: &Elem<C>, r: usize, marked: impl Fn(Sym) -> Option<usize>) -> Vec<Tensor<C>> {
    let mut out = vec![Tensor::zero(2); r];
    for (w, c) in e.terms() {
        let hits: Vec<usize> = (0..w.len()).filter(|&t| marked(w.0[t]).is_some()).collect();
        assert_eq!(hits.len(), 1, "expected exactly one marked symbol");
        let t = hits[0];
        let i = marked(w.0[t]).expect("marked");
        out[i].add_term(vec![w.slice(0, t), w.slice(t + 1, w.len())], c.clone());
    }
    out
}

fn theta_index(s: Sym) -> Option<usize> {
    match s {
        Sym::T(i) => Some(i as usize),
        _ => None,
    }
}

fn d_index(s: Sym) -> Option<usize> {
    match s {
        Sym::D(i) => Some(i as usize),
        _ => None,
    }
}

/// `P^♭ : Ω¹ → Pol¹`, `dx_j ↦ {P, x_j}^⌣`, for a cyclic polyvector of
/// θ-weight 2.
pub fn pi_flat<C: Coeff>(pol: &PolAlgebra<C>, p: &Cyclic<C>) -> BimoduleMatrix<C> {
    let r = pol.rank();
    let g = pol.grading();
    let cols: Vec<Vec<Tensor<C>>> = (0..r).map(|j| decompose(&pol.smile(p, &Elem::x(j)), r, theta_index)).collect();
    let entries = (0..r).map(|i| (0..r).map(|j| cols[j][i].clone()).collect()).collect();
    let odd = p.lift().homogeneous_degree(g).is_some_and(|d| (d + pol.bracket_degree() + 1).rem_euclid(2) == 1);
    let basis_odd = (0..r).map(|i| g.parity(Sym::T(i as u32))).collect();
    BimoduleMatrix { entries, odd, basis_odd }
}

/// Cyclic derivative `∂ω/∂(dx_i)`: every occurrence of `dx_i` is rotated to
/// the front and removed.
pub fn cyclic_derivative<C: Coeff>(omega: &Cyclic<C>, i: usize, g: &Grading) -> Elem<C> {
    let mut out = Elem::zero();
    for (w, c) in omega.terms() {
        for t in 0..w.len() {
            if w.0[t] != Sym::D(i as u32) {
                continue;
            }
            let rot = crate::necklace::rotate(w, t);
            let s = C::sign(crate::necklace::rotation_parity(w, t, g));
            out.add_term(rot.slice(1, rot.len()), c.clone() * s);
        }
    }
    out
}

/// `ω^♯ : Pol¹ → Ω¹` for a cyclic 2-form,
/// `θ_i ↦ −(−1)^{n|x_i| + n|ω^♯|} ∂ω/∂(dx_i)`.
pub fn omega_sharp<C: Coeff>(pol: &PolAlgebra<C>, omega: &Cyclic<C>) -> BimoduleMatrix<C> {
    let r = pol.rank();
    let g = pol.grading();
    let n = pol.shift();
    let odd_map = omega.lift().homogeneous_degree(g).is_some_and(|d| (d + pol.shift()).rem_euclid(2) == 1);
    let cols: Vec<Vec<Tensor<C>>> = (0..r)
        .map(|i| {
            let s = -C::sign((n * g.degrees()[i] + if odd_map { n } else { 0 }).rem_euclid(2) == 1);
            decompose(&cyclic_derivative(omega, i, g).scale(&s), r, d_index)
        })
        .collect();
    let entries = (0..r).map(|k| (0..r).map(|i| cols[i][k].clone()).collect()).collect();
    let basis_odd = (0..r).map(|k| g.parity(Sym::D(k as u32))).collect();
    BimoduleMatrix { entries, odd: odd_map, basis_odd }
}

/// Both sides of `(tr μ(ω, π))^♭ = π^♭ ∘ ω^♯ ∘ π^♭` and their difference.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatIdentity<C> {
    pub lhs: BimoduleMatrix<C>,
    pub rhs: BimoduleMatrix<C>,
    pub difference: BimoduleMatrix<C>,
}

pub fn flat_of_mu<C: Coeff>(pol: &PolAlgebra<C>, omega: &Cyclic<C>, pi2: &Cyclic<C>) -> Result<FlatIdentity<C>, CompatError> {
    let weight_two = |c: &Cyclic<C>, f: fn(&Word) -> usize| c.terms().all(|(w, _)| f(w) == 2);
    if !weight_two(omega, Word::form_weight) || !weight_two(pi2, Word::theta_weight) {
        return Err(CompatError::NotWeightTwo);
    }
    let g = pol.grading();
    // ω^♯ and π^♭ carry signs fixed by their degrees
    let inhomogeneous = |c: &Cyclic<C>| !c.is_zero() && c.lift().homogeneous_degree(g).is_none();
    if inhomogeneous(omega) || inhomogeneous(pi2) {
        return Err(CompatError::NotHomogeneous);
    }
    let m = pol.trace(&mu(pol, omega.lift(), pi2));
    let lhs = pi_flat(pol, &m);
    let pf = pi_flat(pol, pi2);
    let rhs = pf.compose(&omega_sharp(pol, omega), g).compose(&pf, g);
    let difference = lhs.sub(&rhs);
    Ok(FlatIdentity { lhs, rhs, difference })
}

fn sharp_column_sign<C: Coeff>(pol: &PolAlgebra<C>, i: usize) -> C {
    -C::sign((pol.shift() * pol.grading().degrees()[i]).rem_euclid(2) == 1)
}

/// Non-degeneracy of `ω₂` through `ω₂^♯`, in the same two modes as for
/// brackets.
pub fn form_nondeg<C: Coeff>(pol: &PolAlgebra<C>, omega2: &Cyclic<C>, mode: NondegMode) -> NondegReport<C> {
    let sharp = omega_sharp(pol, omega2);
    let strict_ok = sharp.entries.iter().flatten().all(Tensor::is_constant);
    if mode == NondegMode::Strict && !strict_ok {
        return NondegReport {
            mode,
            matrix: sharp.entries,
            scalar_matrix: None,
            passed: false,
            reason: Some("entries are not constant; strict mode inapplicable".into()),
        };
    }
    let r = sharp.rank();
    let scalar = Matrix::from_rows(sharp.entries.iter().map(|row| row.iter().map(Tensor::augmentation).collect()).collect());
    let scalar = if r == 0 { Matrix::zeros(0, 0) } else { scalar };
    let passed = scalar.inverse().is_some();
    NondegReport { mode, matrix: sharp.entries, scalar_matrix: Some(scalar), passed, reason: (!passed).then(|| "matrix is singular".into()) }
}

/// The 2-form whose `ω^♯` is the inverse of the constant matrix `π₂^♭`.
pub fn legendre_pi_to_omega<C: Coeff>(pi: &DoublePoisson<C>) -> Result<PreBisymplecticDatum<C>, CompatError> {
    if pi.top() > 2 {
        return Err(CompatError::HigherComponentsPresent);
    }
    let pol = pi.pol();
    let zero = KBracket::zero(pol.clone(), 2);
    let pi2 = pi.bracket(2).unwrap_or(&zero);
    let report = nondeg_check(pi2, NondegMode::Strict);
    if !report.passed {
        return Err(CompatError::NotStrictlyNondegenerate(report.reason.unwrap_or_default()));
    }
    let p = pi_flat(pol, pi2.necklace()).scalar().expect("strict non-degeneracy gives constant entries");
    let w = p.inverse().expect("strictly non-degenerate");
    let g = pol.grading();
    let r = pol.rank();
    let mut form = Elem::zero();
    for i in 0..r {
        let s = sharp_column_sign(pol, i);
        for k in 0..r {
            let word = Word(vec![Sym::D(i as u32), Sym::D(k as u32)]);
            form.add_term(word, w[(k, i)].clone() * s.clone() * C::frac(1, 2));
        }
    }
    let omega = Cyclic::project(&form, g);
    if omega_sharp(pol, &omega) != BimoduleMatrix::from_scalar(&w).with_basis(pol) {
        return Err(CompatError::NotStrictlyNondegenerate("inverse matrix is not the contraction of a 2-form".into()));
    }
    Ok(PreBisymplecticDatum::two_form(pol.shift(), omega))
}

/// The 2-bracket whose `π^♭` is the inverse of the constant matrix `ω₂^♯`.
pub fn legendre_omega_to_pi<C: Coeff>(
    pol: Arc<PolAlgebra<C>>,
    omega: &PreBisymplecticDatum<C>,
) -> Result<DoublePoisson<C>, CompatError> {
    if omega.shift != pol.shift() {
        return Err(CompatError::ShiftMismatch { form: omega.shift, bracket: pol.shift() });
    }
    if omega.components.iter().any(|(&i, c)| i != 2 && !c.is_zero()) {
        return Err(CompatError::HigherComponentsPresent);
    }
    let sharp = omega_sharp(&pol, &omega.component(2));
    let w = sharp
        .scalar()
        .ok_or_else(|| CompatError::NotStrictlyNondegenerate("entries of ω^♯ are not constant".into()))?;
    let p = w.inverse().ok_or_else(|| CompatError::NotStrictlyNondegenerate("ω^♯ is singular".into()))?;
    let r = pol.rank();
    let mut table = BTreeMap::new();
    for i in 0..r {
        for j in 0..r {
            if !p[(i, j)].is_zero() {
                table.insert(vec![i, j], Tensor::units(2, p[(i, j)].clone() * sharp_column_sign(&pol, i)));
            }
        }
    }
    let pi2 = KBracket::new(pol.clone(), 2, table)?;
    let dp = DoublePoisson::new(pol, vec![pi2])?;
    if !mc_check(&dp).passed() {
        return Err(CompatError::McFailure);
    }
    Ok(dp)
}
