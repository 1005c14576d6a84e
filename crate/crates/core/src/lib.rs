//! Exact symbolic calculus for shifted bisymplectic and shifted double
//! Poisson structures on free graded associative algebras over ℚ.

pub mod algebra;
pub mod double_poisson;
pub mod dsl;
pub mod comm;
pub mod compat;
pub mod finite_models;
pub mod forms;
pub mod linalg;
pub mod necklace;
pub mod polyvector;
pub mod representations;
pub mod scalar;
pub mod serialize;

pub use algebra::{Elem, FreeElement, Grading, Presentation, Sym, Tensor, Word};
pub use necklace::Cyclic;
pub use scalar::{Coeff, Rational};

/// Rational instantiations used by the verification layer and the CLI.
pub type QElement = Elem<Rational>;
pub type QCyclic = Cyclic<Rational>;
pub type QTensor = Tensor<Rational>;
pub type QPresentation = Presentation<Rational>;
