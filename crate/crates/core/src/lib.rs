//! Monic rank toolkit.
//!
//! * [`polysys`] and [`shapiro`] verify instances of the monic Shapiro
//!   conjecture with reduced Groebner bases over prime fields.
//! * [`decompose`] builds certified monic decompositions for binary forms,
//!   matrices, symmetric matrices, `2x2x2` tensors and trace-zero matrices.
//! * [`secant`] estimates dimensions of monic secant varieties from Jacobian
//!   ranks.
//!
//! The dense linear algebra in [`linalg`] is generic over [`Scalar`]; the
//! aliases below name the instantiations used throughout the crate.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod json;
pub mod linalg;
pub mod polysys;
pub mod scalar;
pub mod secant;
pub mod shapiro;

pub use error::{Error, Result};
pub use linalg::{is_eigenvector, rank, solve_affine, AffineSolution, Mat, DEFAULT_TOL};
pub use scalar::{is_prime, Fp, Scalar};

pub use num_complex::Complex64 as C64;
pub use num_rational::BigRational as Rational;

/// Residues modulo the default prime.
pub type F101 = Fp<101>;
/// Matrices of approximate complex numbers.
pub type MatC = Mat<C64>;
/// Matrices of doubles.
pub type MatF = Mat<f64>;
/// Single-precision matrices.
pub type MatF32 = Mat<f32>;
/// Exact rational matrices.
pub type MatQ = Mat<Rational>;
