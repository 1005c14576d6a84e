//! Non-commutative differential forms.
//!
//! A form is an [`Elem`] whose words mix generators `x_i` and differentials
//! `dx_i`. Signs use the total parity (chain degree plus form weight), so `d`
//! and the internal differential `δ` are both odd derivations and
//! `δ(dx) = −d(δx)`; the total differential is `d + δ`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{apply_derivation, apply_morphism, Elem, Grading, Presentation, Sym, Word};
use crate::comm::CommPoly;
use crate::necklace::Cyclic;
use crate::scalar::Coeff;

/// A differential form.
pub type FormElement<C> = Elem<C>;
/// A cyclic differential form.
pub type CyclicForm<C> = Cyclic<C>;

pub fn de_rham_d<C: Coeff>(e: &Elem<C>, g: &Grading) -> Elem<C> {
    apply_derivation(e, g, true, |s| match s {
        Sym::X(i) => Elem::dx(i as usize),
        _ => Elem::zero(),
    })
}

/// The internal differential extended to forms.
pub fn internal_delta<C: Coeff>(p: &Presentation<C>, e: &Elem<C>) -> Elem<C> {
    let g = p.grading(0);
    apply_derivation(e, &g, true, |s| match s {
        Sym::X(i) => p.differential_of(i as usize).clone(),
        Sym::D(i) => -&de_rham_d(p.differential_of(i as usize), &g),
        Sym::T(_) => Elem::zero(),
    })
}

/// Total differential `d + δ`.
pub fn total_d<C: Coeff>(p: &Presentation<C>, e: &Elem<C>) -> Elem<C> {
    &de_rham_d(e, &p.grading(0)) + &internal_delta(p, e)
}

/// Graded commutator `[u, v] = uv − (−1)^{|u||v|} vu` on homogeneous words,
/// extended bilinearly.
pub fn graded_commutator<C: Coeff>(u: &Elem<C>, v: &Elem<C>, g: &Grading) -> Elem<C> {
    let mut out = Elem::zero();
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            let c = ca.clone() * cb.clone();
            out.add_term(a.concat(b), c.clone());
            let s = C::sign(g.word_parity(a) && g.word_parity(b));
            out.add_term(b.concat(a), -(c * s));
        }
    }
    out
}

/// Hochschild differential `b(α·da) = −(−1)^{|α|} [α, a]`, with `|α|` the
/// total parity of `α` (degree plus form weight). Forms of weight 0 map to 0.
pub fn hochschild_b<C: Coeff>(e: &Elem<C>, g: &Grading) -> Elem<C> {
    e.flat_map(|w| b_word(w, g))
}

fn b_word<C: Coeff>(w: &Word, g: &Grading) -> Elem<C> {
    let Some(last) = w.0.iter().rposition(|s| matches!(s, Sym::D(_))) else {
        return Elem::zero();
    };
    let alpha_word = w.slice(0, last);
    let s = C::sign(!g.word_parity(&alpha_word));
    let alpha = Elem::word(alpha_word);
    let y = match w.0[last] {
        Sym::D(i) => Sym::X(i),
        _ => unreachable!(),
    };
    let tail = w.slice(last + 1, w.len());
    // α·dy·β = α·d(yβ) − (−1)^{|y|} α·y·dβ
    let a = Elem::word(Word::letter(y).concat(&tail));
    let head = graded_commutator(&alpha, &a, g).scale(&s);
    if tail.is_empty() {
        return head;
    }
    let rest = (&(&alpha * &Elem::sym(y)) * &de_rham_d(&Elem::word(tail), g)).scale(&C::sign(g.parity(y)));
    &head - &hochschild_b(&rest, g)
}

pub fn cyclic_project<C: Coeff>(e: &Elem<C>, g: &Grading) -> Cyclic<C> {
    Cyclic::project(e, g)
}

pub fn cyclic_d<C: Coeff>(n: &Cyclic<C>, g: &Grading) -> Cyclic<C> {
    Cyclic::project(&de_rham_d(n.lift(), g), g)
}

pub fn cyclic_delta<C: Coeff>(p: &Presentation<C>, n: &Cyclic<C>) -> Cyclic<C> {
    Cyclic::project(&internal_delta(p, n.lift()), &p.grading(0))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("morphism image of `{generator}` has degree {found}, expected {expected}")]
    DegreeMismatch { generator: String, expected: i64, found: i64 },
    #[error("morphism does not intertwine the differentials on `{0}`")]
    NotChainMap(String),
    #[error("morphism has {found} images for {expected} generators")]
    ArityMismatch { expected: usize, found: usize },
    #[error("component ω_{0} is not allowed (weights start at 2)")]
    BadWeight(usize),
    #[error("shift mismatch: {0} vs {1}")]
    ShiftMismatch(i64, i64),
}

/// `ω = Σ_{i=2}^{N} ω_i` with `ω_i` cyclic of weight `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreBisymplecticDatum<C> {
    pub shift: i64,
    pub components: BTreeMap<usize, Cyclic<C>>,
}

impl<C: Coeff> PreBisymplecticDatum<C> {
    pub fn new(shift: i64, components: BTreeMap<usize, Cyclic<C>>) -> Result<Self, FormError> {
        if let Some(&i) = components.keys().find(|&&i| i < 2) {
            return Err(FormError::BadWeight(i));
        }
        Ok(PreBisymplecticDatum { shift, components })
    }

    /// A datum concentrated in weight 2.
    pub fn two_form(shift: i64, omega: Cyclic<C>) -> Self {
        PreBisymplecticDatum { shift, components: BTreeMap::from([(2, omega)]) }
    }

    pub fn component(&self, i: usize) -> Cyclic<C> {
        self.components.get(&i).cloned().unwrap_or_else(Cyclic::zero)
    }

    pub fn top(&self) -> usize {
        self.components.keys().next_back().copied().unwrap_or(2)
    }

    /// Splits a (not necessarily homogeneous) cyclic form by weight.
    pub fn from_form(shift: i64, omega: &Cyclic<C>) -> Result<Self, FormError> {
        let mut components = BTreeMap::new();
        for (k, part) in omega.lift().split_by(Word::form_weight) {
            components.insert(k, Cyclic::from_canonical(part));
        }
        Self::new(shift, components)
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq)]
pub struct Residue<C> {
    pub label: String,
    pub value: Cyclic<C>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormCheck<C> {
    pub degree_errors: Vec<String>,
    pub residues: Vec<Residue<C>>,
}

impl<C: Coeff> FormCheck<C> {
    pub fn passed(&self) -> bool {
        self.degree_errors.is_empty() && self.residues.is_empty()
    }
}

fn degree_errors<C: Coeff>(
    data: &BTreeMap<usize, Cyclic<C>>,
    g: &Grading,
    name: &str,
    expected: impl Fn(usize) -> i64,
) -> Vec<String> {
    let mut errs = Vec::new();
    for (&i, c) in data {
        for (w, _) in c.terms() {
            if w.form_weight() != i {
                errs.push(format!("{name}_{i}: term of weight {}", w.form_weight()));
                break;
            }
            let deg = g.word_degree(w);
            if deg != expected(i) {
                errs.push(format!("{name}_{i}: chain degree {deg}, expected {}", expected(i)));
                break;
            }
        }
    }
    errs
}

/// Verifies `δω_2 = 0`, `dω_i + δω_{i+1} = 0` and `dω_N = 0` together with
/// the degree constraints `|ω_i| = i − n − 2`.
pub fn check_pre_bisymplectic<C: Coeff>(p: &Presentation<C>, omega: &PreBisymplecticDatum<C>) -> FormCheck<C> {
    let g = p.grading(0);
    let n = omega.shift;
    let degree_errors = degree_errors(&omega.components, &g, "omega", |i| i as i64 - n - 2);
    let mut residues = Vec::new();
    let top = omega.top();
    let r2 = cyclic_delta(p, &omega.component(2));
    if !r2.is_zero() {
        residues.push(Residue { label: "delta omega_2".into(), value: r2 });
    }
    for i in 2..=top {
        let r = cyclic_d(&omega.component(i), &g).add(&cyclic_delta(p, &omega.component(i + 1)));
        if !r.is_zero() {
            let label = if i == top { format!("d omega_{i}") } else { format!("d omega_{i} + delta omega_{}", i + 1) };
            residues.push(Residue { label, value: r });
        }
    }
    FormCheck { degree_errors, residues }
}

/// A morphism of quasi-free algebras given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMorphism<C> {
    pub source: Presentation<C>,
    pub target: Presentation<C>,
    images: Vec<Elem<C>>,
}

impl<C: Coeff> AlgebraMorphism<C> {
    pub fn new(source: Presentation<C>, target: Presentation<C>, images: Vec<Elem<C>>) -> Result<Self, FormError> {
        if images.len() != source.rank() {
            return Err(FormError::ArityMismatch { expected: source.rank(), found: images.len() });
        }
        let gt = target.grading(0);
        for (i, img) in images.iter().enumerate() {
            for (w, _) in img.terms() {
                let found = gt.word_degree(w);
                if found != source.degrees()[i] || !w.is_pure() {
                    return Err(FormError::DegreeMismatch {
                        generator: source.names()[i].clone(),
                        expected: source.degrees()[i],
                        found,
                    });
                }
            }
        }
        let f = AlgebraMorphism { source, target, images };
        for i in 0..f.source.rank() {
            let lhs = f.target.delta(&f.images[i]);
            let rhs = f.apply(f.source.differential_of(i));
            if lhs != rhs {
                return Err(FormError::NotChainMap(f.source.names()[i].clone()));
            }
        }
        Ok(f)
    }

    pub fn identity(p: &Presentation<C>) -> Self {
        let images = (0..p.rank()).map(Elem::x).collect();
        AlgebraMorphism { source: p.clone(), target: p.clone(), images }
    }

    pub fn image(&self, i: usize) -> &Elem<C> {
        &self.images[i]
    }

    /// `f` on algebra elements.
    pub fn apply(&self, e: &Elem<C>) -> Elem<C> {
        self.pullback(e)
    }

    /// `f` on forms: `x ↦ f(x)`, `dx ↦ d(f(x))`.
    pub fn pullback(&self, e: &Elem<C>) -> Elem<C> {
        let gt = self.target.grading(0);
        apply_morphism(e, |s| match s {
            Sym::X(i) => self.images[i as usize].clone(),
            Sym::D(i) => de_rham_d(&self.images[i as usize], &gt),
            Sym::T(_) => panic!("pullback of a polyvector symbol"),
        })
    }

    pub fn pullback_cyclic(&self, n: &Cyclic<C>) -> Cyclic<C> {
        Cyclic::project(&self.pullback(n.lift()), &self.target.grading(0))
    }

    /// `(self ∘ other)`: first `other`, then `self`.
    pub fn compose(&self, other: &AlgebraMorphism<C>) -> AlgebraMorphism<C> {
        let images = other.images.iter().map(|e| self.apply(e)).collect();
        AlgebraMorphism { source: other.source.clone(), target: self.target.clone(), images }
    }
}

/// Verifies `f^*ω_i = dλ_{i−1} + δλ_i` for every weight `i ≥ 2`, with the
/// witness `λ` of chain degrees `i − n − 1`.
pub fn check_bi_isotropic<C: Coeff>(
    omega: &PreBisymplecticDatum<C>,
    f: &AlgebraMorphism<C>,
    lambda: &PreBisymplecticDatum<C>,
) -> Result<FormCheck<C>, FormError> {
    if omega.shift != lambda.shift {
        return Err(FormError::ShiftMismatch(omega.shift, lambda.shift));
    }
    let n = omega.shift;
    let gs = f.source.grading(0);
    let gt = f.target.grading(0);
    let mut degree_errors = degree_errors(&omega.components, &gs, "omega", |i| i as i64 - n - 2);
    degree_errors.extend(degree_errors_of(&lambda.components, &gt, n));
    let top = omega.top().max(lambda.top() + 1);
    let mut residues = Vec::new();
    for i in 2..=top {
        let pulled = f.pullback_cyclic(&omega.component(i));
        let dl = if i > 2 { cyclic_d(&lambda.component(i - 1), &gt) } else { Cyclic::zero() };
        let r = pulled.sub(&dl).sub(&cyclic_delta(&f.target, &lambda.component(i)));
        if !r.is_zero() {
            residues.push(Residue { label: format!("f*omega_{i} - D lambda"), value: r });
        }
    }
    Ok(FormCheck { degree_errors, residues })
}

fn degree_errors_of<C: Coeff>(data: &BTreeMap<usize, Cyclic<C>>, g: &Grading, n: i64) -> Vec<String> {
    degree_errors(data, g, "lambda", |i| i as i64 - n - 1)
}

/// Image of a cyclic form in the graded-commutative de Rham algebra.
pub fn commutativize_form<C: Coeff>(n: &Cyclic<C>, g: &Grading) -> CommPoly<C> {
    CommPoly::from_elem(n.lift(), g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type E = Elem<Rational>;

    fn w(s: &[Sym]) -> E {
        E::word(Word(s.to_vec()))
    }

    fn g0(r: usize) -> Grading {
        Grading::new(vec![0; r], 0)
    }

    #[test]
    fn de_rham_examples() {
        let g = g0(2);
        let xy = w(&[Sym::X(0), Sym::X(1)]);
        assert_eq!(de_rham_d(&xy, &g), &w(&[Sym::D(0), Sym::X(1)]) + &w(&[Sym::X(0), Sym::D(1)]));
        assert!(de_rham_d(&E::dx(0), &g).is_zero());
        assert_eq!(de_rham_d(&w(&[Sym::X(0), Sym::D(1)]), &g), w(&[Sym::D(0), Sym::D(1)]));
    }

    #[test]
    fn hochschild_examples() {
        let g = g0(3);
        let xy = w(&[Sym::X(0), Sym::X(1)]);
        let yx = w(&[Sym::X(1), Sym::X(0)]);
        assert_eq!(hochschild_b(&w(&[Sym::X(0), Sym::D(1)]), &g), -&(&xy - &yx));
        assert!(hochschild_b(&E::dx(0), &g).is_zero());
        let f = w(&[Sym::X(0), Sym::D(1), Sym::D(2)]);
        assert!(hochschild_b(&hochschild_b(&f, &g), &g).is_zero());
        assert!(hochschild_b(&xy, &g).is_zero());
    }

    #[test]
    fn cyclic_examples() {
        let g = g0(2);
        let c = &w(&[Sym::X(0), Sym::D(1)]) - &w(&[Sym::D(1), Sym::X(0)]);
        assert!(cyclic_project(&c, &g).is_zero());
        let a = cyclic_project(&w(&[Sym::D(0), Sym::D(1)]), &g);
        let b = cyclic_project(&w(&[Sym::D(1), Sym::D(0)]), &g);
        assert_eq!(a, b.scale(&rat(-1, 1)));
        assert!(cyclic_project(&w(&[Sym::D(0), Sym::D(0)]), &g).is_zero());
    }

    fn cotangent(twisted: bool) -> Presentation<Rational> {
        let d = if twisted { vec![("xi".to_string(), w(&[Sym::X(0), Sym::X(0)]).scale(&rat(3, 1)))] } else { vec![] };
        Presentation::new(vec![("x".into(), 0), ("xi".into(), 1)], d).unwrap()
    }

    #[test]
    fn cotangent_form_is_closed() {
        for twisted in [false, true] {
            let p = cotangent(twisted);
            let omega = cyclic_project(&w(&[Sym::D(0), Sym::D(1)]), &p.grading(0));
            let r = check_pre_bisymplectic(&p, &PreBisymplecticDatum::two_form(-1, omega));
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn non_closed_form_fails() {
        let p = cotangent(false);
        let g = p.grading(0);
        let omega = cyclic_project(&w(&[Sym::X(0), Sym::D(0), Sym::D(1)]), &g);
        let r = check_pre_bisymplectic(&p, &PreBisymplecticDatum::two_form(-1, omega));
        assert_eq!(r.residues.len(), 1);
        assert_eq!(r.residues[0].value, cyclic_project(&w(&[Sym::D(0), Sym::D(0), Sym::D(1)]), &g));
        assert!(!r.residues[0].value.is_zero());
    }

    #[test]
    fn pullback_examples() {
        let a = cotangent(false);
        let b = Presentation::<Rational>::free(&[("x", 0)]);
        let zero_section = AlgebraMorphism::new(a.clone(), b.clone(), vec![E::x(0), E::zero()]).unwrap();
        assert!(zero_section.pullback(&w(&[Sym::D(0), Sym::D(1)])).is_zero());
        let id = AlgebraMorphism::identity(&a);
        let f = w(&[Sym::X(1), Sym::D(0), Sym::D(1)]);
        assert_eq!(id.pullback(&f), f);
        let y = Presentation::<Rational>::free(&[("y", 0)]);
        let sq = AlgebraMorphism::new(b, y, vec![w(&[Sym::X(0), Sym::X(0)])]).unwrap();
        assert_eq!(sq.pullback(&E::dx(0)), &w(&[Sym::D(0), Sym::X(0)]) + &w(&[Sym::X(0), Sym::D(0)]));
    }

    #[test]
    fn isotropic_examples() {
        let a = cotangent(false);
        let b = Presentation::<Rational>::free(&[("x", 0)]);
        let omega = PreBisymplecticDatum::two_form(-1, cyclic_project(&w(&[Sym::D(0), Sym::D(1)]), &a.grading(0)));
        let f = AlgebraMorphism::new(a.clone(), b, vec![E::x(0), E::zero()]).unwrap();
        let zero = PreBisymplecticDatum::new(-1, BTreeMap::new()).unwrap();
        assert!(check_bi_isotropic(&omega, &f, &zero).unwrap().passed());
        let id = AlgebraMorphism::identity(&a);
        let r = check_bi_isotropic(&omega, &id, &zero).unwrap();
        assert_eq!(r.residues[0].value, omega.component(2));
        let none = PreBisymplecticDatum::new(-1, BTreeMap::new()).unwrap();
        assert!(check_bi_isotropic(&none, &id, &zero).unwrap().passed());
        let wrong = PreBisymplecticDatum::new(0, BTreeMap::new()).unwrap();
        assert!(check_bi_isotropic(&omega, &id, &wrong).is_err());
    }

    #[test]
    fn commutativization_examples() {
        let p = cotangent(false);
        let g = p.grading(0);
        let n = cyclic_project(&w(&[Sym::D(0), Sym::D(1)]), &g);
        let c = commutativize_form(&n, &g);
        assert_eq!(c.as_elem(), w(&[Sym::D(0), Sym::D(1)]));
        let g2 = g0(2);
        assert!(commutativize_form(&cyclic_project(&w(&[Sym::D(0), Sym::D(0)]), &g2), &g2).is_zero());
    }
}
