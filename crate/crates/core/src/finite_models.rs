//! Finite linear-algebra models: a symmetric pairing on a finite algebra
//! `g` against a symmetric tensor `π ∈ Sym²g`. A cyclic nondegenerate
//! pairing corresponds to a central nondegenerate `π = G⁻¹`.

use thiserror::Error;

use crate::linalg::Matrix;
use crate::representations::{FrobeniusData, RepError};
use crate::scalar::Coeff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("pairing is degenerate")]
    DegeneratePairing,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix has the wrong size")]
    BadShape,
    #[error(transparent)]
    Algebra(#[from] RepError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingDatum<C> {
    pub algebra: FrobeniusData<C>,
    pub gram: Matrix<C>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sym2Element<C> {
    pub matrix: Matrix<C>,
}

fn is_symmetric<C: Coeff>(m: &Matrix<C>) -> bool {
    m == &m.transpose()
}

impl<C: Coeff> PairingDatum<C> {
    pub fn new(algebra: FrobeniusData<C>, gram: Matrix<C>) -> Result<Self, ModelError> {
        if gram.rows != algebra.dim() || gram.cols != algebra.dim() {
            return Err(ModelError::BadShape);
        }
        if !is_symmetric(&gram) {
            return Err(ModelError::NotSymmetric);
        }
        Ok(PairingDatum { algebra, gram })
    }

    /// The pairing `⟨a, b⟩ = t(ab)` of the algebra's own trace.
    pub fn trace_pairing(algebra: FrobeniusData<C>) -> Result<Self, ModelError> {
        let g = algebra.gram();
        Self::new(algebra, g)
    }

    pub fn pair(&self, u: &[C], v: &[C]) -> C {
        let m = self.algebra.dim();
        let mut acc = C::zero();
        for i in 0..m {
            for j in 0..m {
                acc = acc + u[i].clone() * self.gram[(i, j)].clone() * v[j].clone();
            }
        }
        acc
    }
}

impl<C: Coeff> Sym2Element<C> {
    pub fn new(matrix: Matrix<C>) -> Result<Self, ModelError> {
        if matrix.rows != matrix.cols {
            return Err(ModelError::BadShape);
        }
        if !is_symmetric(&matrix) {
            return Err(ModelError::NotSymmetric);
        }
        Ok(Sym2Element { matrix })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelReport {
    pub passed: bool,
    pub failures: Vec<String>,
}

impl ModelReport {
    fn from_failures(failures: Vec<String>) -> Self {
        ModelReport { passed: failures.is_empty(), failures }
    }
}

/// `⟨ab, c⟩ = ⟨b, ca⟩` over all basis triples.
pub fn check_cyclic_pairing<C: Coeff>(p: &PairingDatum<C>) -> ModelReport {
    let g = &p.algebra;
    let m = g.dim();
    let mut failures = Vec::new();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let (ea, eb, ec) = (g.basis(a), g.basis(b), g.basis(c));
                let l = p.pair(&g.mul(&ea, &eb), &ec);
                let r = p.pair(&eb, &g.mul(&ec, &ea));
                if l != r {
                    failures.push(format!("<{0}{1},{2}> = {3} but <{1},{2}{0}> = {4}", g.labels[a], g.labels[b], g.labels[c], l, r));
                }
            }
        }
    }
    ModelReport::from_failures(failures)
}

/// `[v, π]` for `π = Σ π_ij e_i⊗e_j`, using
/// `[v, a⊗b] = va⊗b − a⊗bv + vb⊗a − b⊗av`; returned as an `m×m` matrix.
pub fn commutant<C: Coeff>(g: &FrobeniusData<C>, pi: &Sym2Element<C>, v: &[C]) -> Matrix<C> {
    let m = g.dim();
    let mut out = Matrix::<C>::zeros(m, m);
    let mut add = |left: &[C], right: &[C], c: C| {
        for i in 0..m {
            if left[i].is_zero() {
                continue;
            }
            for j in 0..m {
                out[(i, j)] = out[(i, j)].clone() + c.clone() * left[i].clone() * right[j].clone();
            }
        }
    };
    for a in 0..m {
        for b in 0..m {
            let c = pi.matrix[(a, b)].clone();
            if c.is_zero() {
                continue;
            }
            let (ea, eb) = (g.basis(a), g.basis(b));
            add(&g.mul(v, &ea), &eb, c.clone());
            add(&ea, &g.mul(&eb, v), -c.clone());
            add(&g.mul(v, &eb), &ea, c.clone());
            add(&eb, &g.mul(&ea, v), -c);
        }
    }
    out
}

/// `[e_i, π] = 0` for every basis vector.
pub fn check_centrality<C: Coeff>(g: &FrobeniusData<C>, pi: &Sym2Element<C>) -> ModelReport {
    let m = g.dim();
    let mut failures = Vec::new();
    for k in 0..m {
        let c = commutant(g, pi, &g.basis(k));
        let mut terms = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if !c[(i, j)].is_zero() {
                    terms.push(format!("{} {}⊗{}", c[(i, j)], g.labels[i], g.labels[j]));
                }
            }
        }
        if !terms.is_empty() {
            failures.push(format!("[{}, π] = {}", g.labels[k], terms.join(" + ")));
        }
    }
    ModelReport::from_failures(failures)
}

/// `π = G⁻¹`.
pub fn correspondence<C: Coeff>(p: &PairingDatum<C>) -> Result<Sym2Element<C>, ModelError> {
    let inv = p.gram.inverse().ok_or(ModelError::DegeneratePairing)?;
    Sym2Element::new(inv)
}

/// `G = π⁻¹`.
pub fn correspondence_inverse<C: Coeff>(g: &FrobeniusData<C>, pi: &Sym2Element<C>) -> Result<PairingDatum<C>, ModelError> {
    let inv = pi.matrix.inverse().ok_or(ModelError::DegeneratePairing)?;
    PairingDatum::new(g.clone(), inv)
}

fn table<C: Coeff>(m: usize, entries: &[(usize, usize, usize)]) -> Vec<Vec<Vec<C>>> {
    let mut t = vec![vec![vec![C::zero(); m]; m]; m];
    for &(i, j, k) in entries {
        t[i][j][k] = C::one();
    }
    t
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// `ℚ` with multiplication the product, or zero when `zero_product`.
pub fn rationals<C: Coeff>(zero_product: bool) -> FrobeniusData<C> {
    let mult = if zero_product { table(1, &[]) } else { table(1, &[(0, 0, 0)]) };
    FrobeniusData::algebra(labels(&["1"]), mult, vec![C::one()]).expect("associative")
}

/// `ℚ×ℚ` with componentwise product and trace `(a, b) ↦ a + b`.
pub fn rationals_squared<C: Coeff>() -> FrobeniusData<C> {
    FrobeniusData::new(labels(&["e1", "e2"]), table(2, &[(0, 0, 0), (1, 1, 1)]), vec![C::one(), C::one()]).expect("valid")
}

/// `ℚ[t]/t²` with trace the coefficient of `t`.
pub fn dual_numbers<C: Coeff>() -> FrobeniusData<C> {
    FrobeniusData::new(labels(&["1", "t"]), table(2, &[(0, 0, 0), (0, 1, 1), (1, 0, 1)]), vec![C::zero(), C::one()])
        .expect("valid")
}

/// Cyclic nondegenerate pairings on which the correspondence is checked.
pub fn library<C: Coeff>() -> Vec<(&'static str, PairingDatum<C>)> {
    let tp = |g: FrobeniusData<C>| PairingDatum::trace_pairing(g).expect("square");
    vec![
        ("Mat_2", tp(FrobeniusData::matrix(2))),
        ("Mat_3", tp(FrobeniusData::matrix(3))),
        ("Q", tp(rationals(false))),
        ("QxQ", PairingDatum::new(rationals_squared(), Matrix::identity(2)).expect("square")),
        ("Q[t]/t^2", tp(dual_numbers())),
    ]
}

/// A noncyclic pairing with invertible Gram matrix whose `G⁻¹` is not
/// central: `ℚ×ℚ` with `⟨e1, e2⟩ = 1`, `⟨e_i, e_i⟩ = 0`.
pub fn noncyclic_counterexample<C: Coeff>() -> PairingDatum<C> {
    let g = Matrix::from_rows(vec![vec![C::zero(), C::one()], vec![C::one(), C::zero()]]);
    PairingDatum::new(rationals_squared(), g).expect("symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type Q = Rational;

    #[test]
    fn matrix_trace_pairing_gives_the_casimir() {
        let p = PairingDatum::trace_pairing(FrobeniusData::<Q>::matrix(2)).unwrap();
        assert!(check_cyclic_pairing(&p).passed);
        let pi = correspondence(&p).unwrap();
        // Σ e_ab ⊗ e_ba
        for i in 0..4 {
            for j in 0..4 {
                let want = if j == (i % 2) * 2 + i / 2 { rat(1, 1) } else { rat(0, 1) };
                assert_eq!(pi.matrix[(i, j)], want);
            }
        }
        assert!(check_centrality(&p.algebra, &pi).passed);
        assert_eq!(correspondence_inverse(&p.algebra, &pi).unwrap(), p);
    }

    #[test]
    fn non_central_tensor_is_reported() {
        let g = FrobeniusData::<Q>::matrix(2);
        let mut m = Matrix::zeros(4, 4);
        m[(0, 0)] = rat(1, 1);
        let r = check_centrality(&g, &Sym2Element::new(m).unwrap());
        assert!(!r.passed);
        assert!(r.failures.iter().any(|f| f.starts_with("[12, π]")));
        assert!(check_centrality(&g, &Sym2Element::new(Matrix::zeros(4, 4)).unwrap()).passed);
    }

    #[test]
    fn library_and_counterexample() {
        for (name, p) in library::<Q>() {
            assert!(check_cyclic_pairing(&p).passed, "{name}");
            let pi = correspondence(&p).unwrap();
            assert!(check_centrality(&p.algebra, &pi).passed, "{name}");
            assert_eq!(correspondence_inverse(&p.algebra, &pi).unwrap(), p, "{name}");
        }
        let qq = &library::<Q>()[3].1;
        assert_eq!(correspondence(qq).unwrap().matrix, Matrix::identity(2));
        let bad = noncyclic_counterexample::<Q>();
        assert!(!check_cyclic_pairing(&bad).passed);
        assert!(!check_centrality(&bad.algebra, &correspondence(&bad).unwrap()).passed);
    }

    #[test]
    fn degenerate_and_trivial_pairings() {
        let zero = rationals::<Q>(true);
        let p = PairingDatum::new(zero.clone(), Matrix::from_rows(vec![vec![rat(3, 1)]])).unwrap();
        assert!(check_cyclic_pairing(&p).passed);
        let singular = PairingDatum::new(zero, Matrix::zeros(1, 1)).unwrap();
        assert_eq!(correspondence(&singular).unwrap_err(), ModelError::DegeneratePairing);
        let asym = Matrix::from_rows(vec![vec![rat(0, 1), rat(1, 1)], vec![rat(0, 1), rat(0, 1)]]);
        assert_eq!(PairingDatum::new(rationals_squared::<Q>(), asym).unwrap_err(), ModelError::NotSymmetric);
    }
}
