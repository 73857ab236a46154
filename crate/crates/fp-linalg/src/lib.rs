//! Exact linear algebra over the prime field 𝔽_p.
//!
//! Everything downstream — spectral-sequence pages, graded kernels, module
//! decompositions — reduces to a handful of questions about finite
//! dimensional vector spaces over 𝔽_p: what is the kernel of a map, does a
//! vector lie in a span, and what is a basis of a subquotient.  This crate
//! answers them exactly.
//!
//! Two storage formats are provided:
//!
//! * [`SparseVec`] / [`Echelon`]: sorted sparse vectors and an incremental
//!   echelon basis with optional *history* (the expression of each stored row
//!   in terms of the vectors that were inserted).  Spectral-sequence pages are
//!   extremely sparse, so this is the workhorse.
//! * [`FpMatrix`]: a sparse `(row, col) → residue` matrix used by the public
//!   operations [`kernel_basis`], [`solve`] and [`subquotient`].  Small
//!   matrices are routed through a dense Gaussian elimination (see
//!   [`DENSE_THRESHOLD`]); both paths pivot on the first nonzero entry in
//!   column order, so results are deterministic.
//!
//! All functions are pure and may be called from many threads at once.

mod dense;
mod echelon;
mod error;
mod field;
mod matrix;
mod ops;
mod sparse;

pub use dense::DenseMatrix;
pub use echelon::Echelon;
pub use error::LinalgError;
pub use field::{is_prime, Fp};
pub use matrix::FpMatrix;
pub use ops::{
    image_basis, kernel_basis, kernel_basis_with, rank, solve, solve_with, subquotient, Strategy,
    SubquotientBasis, DENSE_THRESHOLD,
};
pub use sparse::SparseVec;
