//! Representation spaces: Frobenius algebras, Weil restriction of free
//! presentations along them, transport of double brackets to the
//! representation algebra and commutativization.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, Grading, Presentation, Sym, Tensor};
use crate::comm::CommPoly;
use crate::double_poisson::{mc_check, BracketError, DoublePoisson, KBracket};
use crate::linalg::Matrix;
use crate::necklace::Cyclic;
use crate::polyvector::PolAlgebra;
use crate::scalar::{odd, Coeff};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("structure constants are not associative at basis triple ({0}, {1}, {2})")]
    NonAssociativeStructureConstants(usize, usize, usize),
    #[error("trace does not kill the commutator of basis elements {0} and {1}")]
    TraceNotCyclic(usize, usize),
    #[error("structure constant table has the wrong shape")]
    BadShape,
    #[error("the algebra has no unit but constants must be transported")]
    NonUnital,
    #[error("bracket transport needs a matrix algebra")]
    NotMatrixType,
    #[error("bracket is not Maurer–Cartan")]
    NotMaurerCartan,
    #[error("commutativized bracket fails {0}")]
    JacobiFailure(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// A finite-dimensional algebra with a trace, given on a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData<C> {
    pub labels: Vec<String>,
    /// `mult[i][j][k]`: coefficient of `e_k` in `e_i·e_j`.
    pub mult: Vec<Vec<Vec<C>>>,
    pub trace: Vec<C>,
    pub unital: bool,
    matrix_size: Option<usize>,
}

impl<C: Coeff> FrobeniusData<C> {
    /// Validates associativity; the trace is not required to be cyclic.
    pub fn algebra(labels: Vec<String>, mult: Vec<Vec<Vec<C>>>, trace: Vec<C>) -> Result<Self, RepError> {
        let m = labels.len();
        if mult.len() != m || trace.len() != m || mult.iter().any(|r| r.len() != m || r.iter().any(|v| v.len() != m)) {
            return Err(RepError::BadShape);
        }
        let mut f = FrobeniusData { labels, mult, trace, unital: false, matrix_size: None };
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let l = f.mul(&f.mul(&f.basis(i), &f.basis(j)), &f.basis(k));
                    let r = f.mul(&f.basis(i), &f.mul(&f.basis(j), &f.basis(k)));
                    if l != r {
                        return Err(RepError::NonAssociativeStructureConstants(i, j, k));
                    }
                }
            }
        }
        f.unital = f.unit().is_some();
        Ok(f)
    }

    /// An algebra whose trace kills commutators.
    pub fn new(labels: Vec<String>, mult: Vec<Vec<Vec<C>>>, trace: Vec<C>) -> Result<Self, RepError> {
        let f = Self::algebra(labels, mult, trace)?;
        let m = f.dim();
        for i in 0..m {
            for j in 0..m {
                let ij = f.trace_of(&f.mul(&f.basis(i), &f.basis(j)));
                let ji = f.trace_of(&f.mul(&f.basis(j), &f.basis(i)));
                if ij != ji {
                    return Err(RepError::TraceNotCyclic(i, j));
                }
            }
        }
        Ok(f)
    }

    /// `Mat_k` with matrix units `e_ab` (index `a·k + b`) and the matrix trace.
    pub fn matrix(k: usize) -> Self {
        let m = k * k;
        let label = |a: usize, b: usize| if k < 10 { format!("{}{}", a + 1, b + 1) } else { format!("{}_{}", a + 1, b + 1) };
        let mut labels = Vec::with_capacity(m);
        let mut mult = vec![vec![vec![C::zero(); m]; m]; m];
        let mut trace = vec![C::zero(); m];
        for a in 0..k {
            for b in 0..k {
                labels.push(label(a, b));
                if a == b {
                    trace[a * k + b] = C::one();
                }
                for d in 0..k {
                    mult[a * k + b][b * k + d][a * k + d] = C::one();
                }
            }
        }
        FrobeniusData { labels, mult, trace, unital: true, matrix_size: Some(k) }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn matrix_size(&self) -> Option<usize> {
        self.matrix_size
    }

    pub fn basis(&self, i: usize) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim()];
        v[i] = C::one();
        v
    }

    pub fn mul(&self, u: &[C], v: &[C]) -> Vec<C> {
        let m = self.dim();
        let mut out = vec![C::zero(); m];
        for i in 0..m {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if v[j].is_zero() {
                    continue;
                }
                let c = u[i].clone() * v[j].clone();
                for k in 0..m {
                    if !self.mult[i][j][k].is_zero() {
                        out[k] = out[k].clone() + c.clone() * self.mult[i][j][k].clone();
                    }
                }
            }
        }
        out
    }

    pub fn trace_of(&self, u: &[C]) -> C {
        u.iter().zip(&self.trace).fold(C::zero(), |acc, (a, t)| acc + a.clone() * t.clone())
    }

    /// `G_ij = t(e_i e_j)`.
    pub fn gram(&self) -> Matrix<C> {
        let m = self.dim();
        Matrix::from_rows(
            (0..m).map(|i| (0..m).map(|j| self.trace_of(&self.mul(&self.basis(i), &self.basis(j)))).collect()).collect(),
        )
    }

    pub fn is_frobenius(&self) -> bool {
        self.gram().inverse().is_some()
    }

    /// The unit, found by solving `1·e_j = e_j = e_j·1`.
    pub fn unit(&self) -> Option<Vec<C>> {
        let m = self.dim();
        if m == 0 {
            return None;
        }
        // unknowns u_i; equations Σ_i u_i c_{ij}^k = δ_jk and Σ_i u_i c_{ji}^k = δ_jk
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..m {
            for k in 0..m {
                rows.push((0..m).map(|i| self.mult[i][j][k].clone()).collect());
                rows.push((0..m).map(|i| self.mult[j][i][k].clone()).collect());
                let t = if j == k { C::one() } else { C::zero() };
                rhs.push(t.clone());
                rhs.push(t);
            }
        }
        Matrix::from_rows(rows).solve(&rhs)
    }

    /// `t(uv − vu)`.
    pub fn trace_of_commutator(&self, u: &[C], v: &[C]) -> C {
        self.trace_of(&self.mul(u, v)) - self.trace_of(&self.mul(v, u))
    }
}

/// The Weil restriction of a presentation along a Frobenius algebra `S`:
/// generators `x^{(s)}` for each generator `x` and basis element `e_s`.
#[derive(Clone, Debug)]
pub struct RepAlgebra<C> {
    pub source: Presentation<C>,
    pub frobenius: FrobeniusData<C>,
    pub rep: Presentation<C>,
}

impl<C: Coeff> RepAlgebra<C> {
    pub fn new(source: &Presentation<C>, frobenius: &FrobeniusData<C>) -> Result<Self, RepError> {
        let m = frobenius.dim();
        let mut gens = Vec::new();
        for (name, &deg) in source.names().iter().zip(source.degrees()) {
            for s in 0..m {
                gens.push((format!("{name}_{}", frobenius.labels[s]), deg));
            }
        }
        let mut partial = RepAlgebra {
            source: source.clone(),
            frobenius: frobenius.clone(),
            rep: Presentation::new(gens.clone(), Vec::new())?,
        };
        let mut diff = Vec::new();
        for i in 0..source.rank() {
            let dx = source.differential_of(i);
            if dx.is_zero() {
                continue;
            }
            let entries = partial.expand(dx)?;
            for (s, e) in entries.into_iter().enumerate() {
                if !e.is_zero() {
                    diff.push((gens[i * m + s].0.clone(), e));
                }
            }
        }
        partial.rep = Presentation::new(gens, diff)?;
        Ok(partial)
    }

    pub fn gen_index(&self, i: usize, s: usize) -> usize {
        i * self.frobenius.dim() + s
    }

    /// Image of an element (or a form) under the universal map
    /// `x ↦ Σ_s e_s ⊗ x^{(s)}`, as its vector of `S`-coordinates.
    pub fn expand(&self, e: &Elem<C>) -> Result<Vec<Elem<C>>, RepError> {
        let m = self.frobenius.dim();
        let mut out = vec![Elem::zero(); m];
        for (w, c) in e.terms() {
            let Some(first) = w.0.first() else {
                let unit = self.frobenius.unit().ok_or(RepError::NonUnital)?;
                for (s, u) in unit.into_iter().enumerate() {
                    out[s].add_scaled(&Elem::one(), &(u * c.clone()));
                }
                continue;
            };
            let lift = |sym: Sym, s: usize| -> Elem<C> {
                match sym {
                    Sym::X(i) => Elem::x(self.gen_index(i as usize, s)),
                    Sym::D(i) => Elem::dx(self.gen_index(i as usize, s)),
                    Sym::T(i) => Elem::theta(self.gen_index(i as usize, s)),
                }
            };
            let mut acc: Vec<Elem<C>> = (0..m).map(|s| lift(*first, s)).collect();
            for &sym in &w.0[1..] {
                let mut next = vec![Elem::zero(); m];
                for (s, a) in acc.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for t in 0..m {
                        let prod = a * &lift(sym, t);
                        for (k, next_k) in next.iter_mut().enumerate() {
                            let c = &self.frobenius.mult[s][t][k];
                            if !c.is_zero() {
                                next_k.add_scaled(&prod, c);
                            }
                        }
                    }
                }
                acc = next;
            }
            for (s, a) in acc.into_iter().enumerate() {
                out[s].add_scaled(&a, c);
            }
        }
        Ok(out)
    }

    /// `expand(δe) = δ(expand(e))` entrywise.
    pub fn intertwines(&self, e: &Elem<C>) -> Result<bool, RepError> {
        let lhs = self.expand(&self.source.delta(e))?;
        let rhs: Vec<Elem<C>> = self.expand(e)?.iter().map(|v| self.rep.delta(v)).collect();
        Ok(lhs == rhs)
    }

    /// Entry `(a, b)` of the matrix of an element, for `S = Mat_k`.
    pub fn entry(&self, e: &Elem<C>, a: usize, b: usize) -> Result<Elem<C>, RepError> {
        let k = self.frobenius.matrix_size().ok_or(RepError::NotMatrixType)?;
        Ok(self.expand(e)?.swap_remove(a * k + b))
    }
}

/// Transports a double Poisson structure to the representation algebra
/// along `Mat_k`: `{{x_1^{(a_1 b_1)}, …, x_k^{(a_k b_k)}}}` is `Σ u_1^{(a_2 b_1)} ⊗
/// u_2^{(a_3 b_2)} ⊗ … ⊗ u_k^{(a_1 b_k)}` for `{{x_1, …, x_k}} = Σ u_1⊗…⊗u_k`.
pub fn rep_double_bracket<C: Coeff>(pi: &DoublePoisson<C>, rep: &RepAlgebra<C>) -> Result<DoublePoisson<C>, RepError> {
    if !mc_check(pi).passed() {
        return Err(RepError::NotMaurerCartan);
    }
    let k = rep.frobenius.matrix_size().ok_or(RepError::NotMatrixType)?;
    let pol = Arc::new(PolAlgebra::new(&rep.rep, pi.pol().shift()));
    let mut brackets = Vec::new();
    for arity in 2..=pi.top() {
        let Some(b) = pi.bracket(arity) else { continue };
        let mut table = BTreeMap::new();
        for (tuple, value) in b.table() {
            // every choice of matrix positions for the arguments
            for pos in 0..(k * k).pow(arity as u32) {
                let idx: Vec<(usize, usize)> =
                    (0..arity).map(|i| (pos / (k * k).pow(i as u32)) % (k * k)).map(|p| (p / k, p % k)).collect();
                let mut t = Tensor::zero(arity);
                for (factors, c) in value.terms() {
                    let mut piece = Tensor::units(0, c.clone());
                    for (i, f) in factors.iter().enumerate() {
                        let (a_next, _) = idx[(i + 1) % arity];
                        let (_, b_i) = idx[i];
                        let e = rep.entry(&Elem::word(f.clone()), a_next, b_i)?;
                        piece = piece.tensor(&elem_tensor(&e));
                    }
                    t.add_scaled(&piece, &C::one());
                }
                if !t.is_zero() {
                    let key: Vec<usize> = tuple.iter().zip(&idx).map(|(&g, &(a, bb))| rep.gen_index(g, a * k + bb)).collect();
                    table.insert(key, t);
                }
            }
        }
            brackets.push(KBracket::new(pol.clone(), arity, table)?);
    }
    let out = DoublePoisson::new(pol, brackets)?;
    Ok(out)
}

fn elem_tensor<C: Coeff>(e: &Elem<C>) -> Tensor<C> {
    let mut t = Tensor::zero(1);
    for (w, c) in e.terms() {
        t.add_term(vec![w.clone()], c.clone());
    }
    t
}

/// A shifted Poisson bracket on a graded-commutative polynomial algebra,
/// given on generators and extended by the Leibniz rule
/// `{a, bc} = {a, b}c + (−1)^{(|a|+n)|b|} b{a, c}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutativePoisson<C> {
    pub names: Vec<String>,
    pub grading: Grading,
    pub table: BTreeMap<(usize, usize), CommPoly<C>>,
}

impl<C: Coeff> CommutativePoisson<C> {
    pub fn shift(&self) -> i64 {
        self.grading.shift()
    }

    pub fn rank(&self) -> usize {
        self.grading.rank()
    }

    pub fn on_generators(&self, i: usize, j: usize) -> CommPoly<C> {
        self.table.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// `{x_i, f}`.
    pub fn bracket_with(&self, i: usize, f: &CommPoly<C>) -> CommPoly<C> {
        let der_odd = odd(self.grading.degrees()[i] + self.shift());
        f.derive(&self.grading, der_odd, |s| match s {
            Sym::X(j) => self.on_generators(i, j as usize),
            _ => CommPoly::zero(),
        })
    }

    /// `{f, x_i}` for homogeneous `f`, by antisymmetry
    /// `{a, b} = −(−1)^{|a||b| + n}{b, a}`.
    pub fn bracket_into(&self, f: &CommPoly<C>, i: usize) -> CommPoly<C> {
        let mut out = CommPoly::zero();
        let di = self.grading.degrees()[i];
        for (m, c) in f.terms() {
            let deg: i64 = m.iter().map(|&s| self.grading.degree(s)).sum();
            let mut mono = CommPoly::zero();
            mono.add_term(m.clone(), c.clone());
            let s = -C::sign(odd(deg * di + self.shift()));
            out.add_scaled(&self.bracket_with(i, &mono), &s);
        }
        out
    }

    /// Residue of antisymmetry on generators `(i, j)`.
    pub fn antisymmetry_residue(&self, i: usize, j: usize) -> CommPoly<C> {
        let g = self.grading.degrees();
        let s = -C::sign(odd(g[i] * g[j] + self.shift()));
        self.on_generators(i, j).sub(&self.on_generators(j, i).scale(&s))
    }

    /// Jacobiator on generators. In terms of the twisted bracket
    /// `{a, b}' = (−1)^{n|a|}{a, b}`, which has the usual symmetry
    /// `{a, b}' = −(−1)^{(|a|+n)(|b|+n)}{b, a}'`, this is
    /// `{a, {b, c}'}' − {{a, b}', c}' − (−1)^{(|a|+n)(|b|+n)}{b, {a, c}'}'`.
    pub fn jacobiator(&self, a: usize, b: usize, c: usize) -> CommPoly<C> {
        let g = self.grading.degrees();
        let n = self.shift();
        let lhs = self.bracket_with(a, &self.on_generators(b, c));
        let first = self.bracket_into(&self.on_generators(a, b), c).scale(&C::sign(odd(n * g[a] + n)));
        let second = self.bracket_with(b, &self.on_generators(a, c));
        let s = C::sign(odd((g[a] + n) * (g[b] + n)));
        lhs.sub(&first).sub(&second.scale(&s))
    }

    /// All failing antisymmetry pairs and Jacobi triples.
    pub fn violations(&self) -> Vec<String> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..r {
                if !self.antisymmetry_residue(i, j).is_zero() {
                    out.push(format!("antisymmetry on ({}, {})", self.names[i], self.names[j]));
                }
            }
        }
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    if !self.jacobiator(a, b, c).is_zero() {
                        out.push(format!("Jacobi on ({}, {}, {})", self.names[a], self.names[b], self.names[c]));
                    }
                }
            }
        }
        out
    }
}

/// The bracket induced on `B/([B, B])` by the Loday bracket of `π₂`.
pub fn commutativize<C: Coeff>(pi: &DoublePoisson<C>) -> Result<CommutativePoisson<C>, RepError> {
    if !mc_check(pi).passed() {
        return Err(RepError::NotMaurerCartan);
    }
    let pol = pi.pol();
    let g = pol.base().grading(pol.shift());
    let mut table = BTreeMap::new();
    if let Some(b) = pi.bracket(2) {
        for (tuple, v) in b.table() {
            let p = CommPoly::from_elem(&v.multiply(), &g);
            if !p.is_zero() {
                table.insert((tuple[0], tuple[1]), p);
            }
        }
    }
    let cp = CommutativePoisson { names: pol.names().to_vec(), grading: g, table };
    if let Some(v) = cp.violations().into_iter().next() {
        return Err(RepError::JacobiFailure(v));
    }
    Ok(cp)
}

/// The commutative bracket on the representation space computed directly
/// from the entries `{x_ab, y_cd} = Σ u'_cb u''_ad`, without building the
/// transported double bracket.
pub fn rep_poisson_direct<C: Coeff>(pi: &DoublePoisson<C>, rep: &RepAlgebra<C>) -> Result<CommutativePoisson<C>, RepError> {
    let k = rep.frobenius.matrix_size().ok_or(RepError::NotMatrixType)?;
    let g = rep.rep.grading(pi.pol().shift());
    let mut table = BTreeMap::new();
    if let Some(b) = pi.bracket(2) {
        for (tuple, value) in b.table() {
            for p in 0..k * k {
                for q in 0..k * k {
                    let ((a, bb), (c, d)) = ((p / k, p % k), (q / k, q % k));
                    let mut e = Elem::zero();
                    for (f, coef) in value.terms() {
                        let u = rep.entry(&Elem::word(f[0].clone()), c, bb)?;
                        let v = rep.entry(&Elem::word(f[1].clone()), a, d)?;
                        e.add_scaled(&(&u * &v), coef);
                    }
                    let poly = CommPoly::from_elem(&e, &g);
                    if !poly.is_zero() {
                        table.insert((rep.gen_index(tuple[0], p), rep.gen_index(tuple[1], q)), poly);
                    }
                }
            }
        }
    }
    Ok(CommutativePoisson { names: rep.rep.names().to_vec(), grading: g, table })
}

/// Pushes a cyclic form on `A` to the representation space: expand through
/// the universal map, apply the trace of `S` and commutativize.
pub fn trace_pushforward<C: Coeff>(omega: &Cyclic<C>, rep: &RepAlgebra<C>) -> Result<CommPoly<C>, RepError> {
    let g = rep.rep.grading(0);
    let coords = rep.expand(omega.lift())?;
    let mut e = Elem::zero();
    for (s, v) in coords.iter().enumerate() {
        e.add_scaled(v, &rep.frobenius.trace[s]);
    }
    Ok(CommPoly::from_elem(&e, &g))
}

/// Matrix `M_pq = ∂_p ∂_q ω` of a constant commutative 2-form `Σ c dx_p dx_q`
/// (left derivatives, `∂_p` acting first).
pub fn form_matrix<C: Coeff>(omega: &CommPoly<C>, g: &Grading) -> Matrix<C> {
    let r = g.rank();
    let mut m = Matrix::<C>::zeros(r, r);
    for (mono, c) in omega.terms() {
        if mono.len() != 2 {
            continue;
        }
        let (Sym::D(p), Sym::D(q)) = (mono[0], mono[1]) else { continue };
        let (p, q) = (p as usize, q as usize);
        // ∂_p ∂_q (dx_p dx_q) = (−1)^{|dx_p||dx_q|}; the other order gives 1
        let swap = C::sign(g.parity(mono[0]) && g.parity(mono[1]));
        m[(q, p)] = m[(q, p)].clone() + c.clone();
        m[(p, q)] = m[(p, q)].clone() + c.clone() * swap;
    }
    m
}

/// Matrix of a commutative bracket with constant values on generators.
pub fn bracket_matrix<C: Coeff>(cp: &CommutativePoisson<C>) -> Option<Matrix<C>> {
    let r = cp.rank();
    let mut m = Matrix::<C>::zeros(r, r);
    for (&(i, j), p) in &cp.table {
        let mut it = p.terms();
        match (it.next(), it.next()) {
            (Some((mono, c)), None) if mono.is_empty() => m[(i, j)] = c.clone(),
            _ => return None,
        }
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Word;
    use crate::double_poisson::{canonical_cotangent_bracket, cotangent_presentation};
    use crate::scalar::{rat, Rational};

    type E = Elem<Rational>;
    type F = FrobeniusData<Rational>;

    fn canonical(degrees: &[i64], n: i64) -> DoublePoisson<Rational> {
        let r = degrees.len();
        let pol = Arc::new(PolAlgebra::new(&cotangent_presentation(degrees, n), n));
        let pairs: Vec<_> = (0..r).map(|i| (i, i + r)).collect();
        let b = canonical_cotangent_bracket(pol.clone(), &pairs).unwrap();
        DoublePoisson::new(pol, vec![b]).unwrap()
    }

    #[test]
    fn matrix_algebras_are_frobenius() {
        for k in 1..=3 {
            let m = F::matrix(k);
            let checked = F::new(m.labels.clone(), m.mult.clone(), m.trace.clone()).unwrap();
            assert!(checked.unital && checked.is_frobenius());
            assert_eq!(checked.unit().unwrap(), (0..k * k).map(|p| if p / k == p % k { rat(1, 1) } else { rat(0, 1) }).collect::<Vec<_>>());
        }
        let g = F::matrix(2).gram();
        // t(e_ab e_cd) = δ_bc δ_da
        assert_eq!(g[(1, 2)], rat(1, 1));
        assert_eq!(g[(0, 0)], rat(1, 1));
        assert_eq!(g[(0, 1)], rat(0, 1));
    }

    #[test]
    fn structure_constant_errors() {
        let labels = vec!["a".to_string(), "b".to_string()];
        // a·a = b, everything else zero except b·a = a: (aa)a = ba = a but a(aa) = ab = 0
        let mut mult = vec![vec![vec![rat(0, 1); 2]; 2]; 2];
        mult[0][0][1] = rat(1, 1);
        mult[1][0][0] = rat(1, 1);
        assert!(matches!(F::new(labels.clone(), mult, vec![rat(1, 1), rat(0, 1)]), Err(RepError::NonAssociativeStructureConstants(..))));
        // upper triangular 2×2 matrices with a trace that sees e_12
        let up = vec!["11".to_string(), "12".to_string(), "22".to_string()];
        let mut m = vec![vec![vec![rat(0, 1); 3]; 3]; 3];
        m[0][0][0] = rat(1, 1);
        m[0][1][1] = rat(1, 1);
        m[1][2][1] = rat(1, 1);
        m[2][2][2] = rat(1, 1);
        let t = vec![rat(0, 1), rat(1, 1), rat(0, 1)];
        assert!(matches!(F::new(up.clone(), m.clone(), t.clone()), Err(RepError::TraceNotCyclic(..))));
        assert!(F::algebra(up, m, t).unwrap().unital);
        assert_eq!(F::algebra(labels, vec![vec![vec![rat(0, 1); 2]; 2]; 2], vec![rat(1, 1); 2]).unwrap().unit(), None);
    }

    #[test]
    fn weil_restriction_of_a_dg_algebra() {
        let a = Presentation::new(
            vec![("x".into(), 0), ("y".into(), 1)],
            vec![("y".into(), &E::x(0) * &E::x(0))],
        )
        .unwrap();
        let rep = RepAlgebra::new(&a, &F::matrix(2)).unwrap();
        assert_eq!(rep.rep.rank(), 8);
        assert_eq!(rep.rep.names()[5], "y_12");
        // δ y_12 = x_11 x_12 + x_12 x_22
        let expect = &(&E::x(0) * &E::x(1)) + &(&E::x(1) * &E::x(3));
        assert_eq!(rep.rep.differential_of(5), &expect);
        for e in [E::x(0), E::x(1), &(&E::x(1) * &E::x(0)) * &E::x(1), &E::x(0) * &E::x(1), E::one()] {
            assert!(rep.intertwines(&e).unwrap());
        }
        let product = rep.expand(&(&E::x(0) * &E::x(1))).unwrap();
        let (x, y) = (rep.expand(&E::x(0)).unwrap(), rep.expand(&E::x(1)).unwrap());
        // entry (1,2) of the matrix product
        assert_eq!(product[1], &(&x[0] * &y[1]) + &(&x[1] * &y[3]));
    }

    #[test]
    fn canonical_bracket_transports_to_the_canonical_poisson_bracket() {
        for n in -2..=2 {
            for degrees in [vec![0], vec![1]] {
                let dp = canonical(&degrees, n);
                let rep = RepAlgebra::new(dp.pol().base(), &F::matrix(2)).unwrap();
                let big = rep_double_bracket(&dp, &rep).unwrap();
                assert!(mc_check(&big).passed(), "n={n} {degrees:?}");
                let cp = commutativize(&big).unwrap();
                assert_eq!(cp, rep_poisson_direct(&dp, &rep).unwrap());
                // {x_ab, ξ_cd} = δ_cb δ_ad
                for p in 0..4 {
                    for q in 0..4 {
                        let (a, b, c, d) = (p / 2, p % 2, q / 2, q % 2);
                        let v = cp.on_generators(rep.gen_index(0, p), rep.gen_index(1, q));
                        let want = if c == b && a == d { CommPoly::scalar(rat(1, 1)) } else { CommPoly::zero() };
                        assert_eq!(v, want);
                    }
                }
            }
        }
    }

    #[test]
    fn linear_bracket_gives_a_lie_poisson_structure() {
        // {{t, t}} = t⊗1 − 1⊗t on one even generator
        let base = Presentation::free(&[("t", 0)]);
        let pol = Arc::new(PolAlgebra::new(&base, 0));
        let mut v = Tensor::zero(2);
        v.add_term(vec![Word::letter(Sym::X(0)), Word::unit()], rat(1, 1));
        v.add_term(vec![Word::unit(), Word::letter(Sym::X(0))], rat(-1, 1));
        let b = KBracket::new(pol.clone(), 2, [(vec![0, 0], v)].into_iter().collect()).unwrap();
        let dp = DoublePoisson::new(pol, vec![b]).unwrap();
        assert!(mc_check(&dp).passed());
        let rep = RepAlgebra::new(&base, &F::matrix(2)).unwrap();
        let cp = commutativize(&rep_double_bracket(&dp, &rep).unwrap()).unwrap();
        assert!(cp.violations().is_empty());
        // {t_ab, t_cd} = t_cb δ_ad − δ_cb t_ad
        let t = |p: usize| {
            let mut c = CommPoly::zero();
            c.add_term(vec![Sym::X(p as u32)], rat(1, 1));
            c
        };
        assert_eq!(cp.on_generators(1, 2), t(3).sub(&t(0)));
        assert_eq!(cp.on_generators(0, 1), t(1).scale(&rat(-1, 1)));
        assert!(cp.on_generators(0, 3).is_zero());
    }

    #[test]
    fn non_mc_and_non_matrix_inputs() {
        let base = Presentation::free(&[("x", 0), ("y", 0)]);
        let pol = Arc::new(PolAlgebra::new(&base, 0));
        let mut v = Tensor::zero(2);
        v.add_term(vec![Word::letter(Sym::X(1)), Word::unit()], rat(1, 1));
        v.add_term(vec![Word::unit(), Word::letter(Sym::X(1))], rat(-1, 1));
        let b = KBracket::complete(pol.clone(), 2, [(vec![0, 0], v)].into_iter().collect()).unwrap();
        let dp = DoublePoisson::new(pol, vec![b]).unwrap();
        let rep = RepAlgebra::new(&base, &F::matrix(2)).unwrap();
        if !mc_check(&dp).passed() {
            assert_eq!(rep_double_bracket(&dp, &rep).unwrap_err(), RepError::NotMaurerCartan);
        }
        let dual = F::new(
            vec!["1".into(), "t".into()],
            {
                let mut m = vec![vec![vec![rat(0, 1); 2]; 2]; 2];
                m[0][0][0] = rat(1, 1);
                m[0][1][1] = rat(1, 1);
                m[1][0][1] = rat(1, 1);
                m
            },
            vec![rat(0, 1), rat(1, 1)],
        )
        .unwrap();
        let dp = canonical(&[0], 0);
        let rep = RepAlgebra::new(dp.pol().base(), &dual).unwrap();
        assert_eq!(rep_double_bracket(&dp, &rep).unwrap_err(), RepError::NotMatrixType);
    }

    #[test]
    fn pushed_form_pairs_with_pushed_bracket() {
        for n in -1..=1 {
            for k in 1..=3 {
                let dp = canonical(&[0], n);
                let pol = dp.pol().clone();
                let mut form = E::zero();
                form.add_term(Word(vec![Sym::D(0), Sym::D(1)]), rat(1, 1));
                let omega = Cyclic::project(&form, pol.grading());
                let rep = RepAlgebra::new(pol.base(), &F::matrix(k)).unwrap();
                let pushed = trace_pushforward(&omega, &rep).unwrap();
                assert_eq!(pushed.terms().count(), k * k, "Σ dx_ab dξ_ba");
                let cp = commutativize(&rep_double_bracket(&dp, &rep).unwrap()).unwrap();
                let w = form_matrix(&pushed, &rep.rep.grading(n));
                let b = bracket_matrix(&cp).unwrap();
                let prod = w.mul(&b);
                let id = Matrix::identity(2 * k * k);
                assert!(prod == id || prod == id.scale(&rat(-1, 1)), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn random_linear_mc_brackets_commutativize_to_poisson() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let (mut hits, mut caught) = (0, 0);
        for _ in 0..3000 {
            let n = rng.gen_range(-1..=1);
            let degrees = [rng.gen_range(0..=1), rng.gen_range(-1..=1)];
            let base = Presentation::free(&[("x", degrees[0]), ("y", degrees[1])]);
            let pol = Arc::new(PolAlgebra::new(&base, n));
            let mut declared = BTreeMap::new();
            for tuple in [vec![0, 0], vec![0, 1], vec![1, 1]] {
                let mut v = Tensor::zero(2);
                for g in 0..2u32 {
                    for left in [true, false] {
                        let c = rng.gen_range(-1..=1);
                        let (u, w) = if left { (Word::letter(Sym::X(g)), Word::unit()) } else { (Word::unit(), Word::letter(Sym::X(g))) };
                        if c != 0 && degrees[g as usize] == degrees[tuple[0]] + degrees[tuple[1]] + n {
                            v.add_term(vec![u, w], rat(c, 1));
                        }
                    }
                }
                declared.insert(tuple, v);
            }
            let Ok(b) = KBracket::complete(pol.clone(), 2, declared) else { continue };
            if b.table().is_empty() {
                continue;
            }
            let dp = DoublePoisson::new(pol, vec![b]).unwrap();
            let rep = RepAlgebra::new(&base, &F::matrix(2)).unwrap();
            if !mc_check(&dp).passed() {
                if !rep_poisson_direct(&dp, &rep).unwrap().violations().is_empty() {
                    caught += 1;
                }
                continue;
            }
            let big = rep_double_bracket(&dp, &rep).unwrap();
            assert!(mc_check(&big).passed());
            let cp = commutativize(&big).unwrap();
            assert_eq!(cp, rep_poisson_direct(&dp, &rep).unwrap());
            hits += 1;
        }
        assert!(hits > 20, "only {hits} Maurer–Cartan samples");
        assert!(caught > 20, "Jacobi never detected a failure");
    }
}
