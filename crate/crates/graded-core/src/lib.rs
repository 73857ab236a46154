//! The graded vocabulary shared by every computation in the workspace.
//!
//! * [`PrimeContext`] fixes the prime `p` and the derived constants, most
//!   importantly `q = 2p − 2`, the stem of `v₁`, and the geometric partial
//!   sums `p^lo + ⋯ + p^hi` that appear in every torsion order.
//! * [`Bidegree`] is a `(stem, line)` pair with weight `(stem + line)/2`.
//! * [`Monomial`] is a basis label `σε^{(ℓpⁱ)} tᵃ μᵇ λ₁^{e₁} u^{e₂}` of a
//!   spectral-sequence page at level `i`.  There is no separate `v₁`
//!   exponent: `v₁ = tμ`.
//! * [`CyclicDecomposition`] presents a graded 𝔽_p[v₁]-module as a direct
//!   sum of cyclic modules, and [`DimTable`] is the serialisable table of
//!   𝔽_p-dimensions per `(stem, line)` derived from it.
//! * [`localization`] implements the recovery of `dim H_i C[x⁻¹]` from the
//!   reduction `C/x^{n+1}` for complexes of free graded 𝔽_p[x]-modules.

mod bidegree;
mod context;
mod decomposition;
mod error;
pub mod localization;
mod monomial;
mod table;

pub use bidegree::{Bidegree, LINES};
pub use context::PrimeContext;
pub use decomposition::{CyclicDecomposition, Generator, Torsion, TorsionMultisets};
pub use error::GradedError;
pub use monomial::Monomial;
pub use table::{DimEntry, DimTable, StemWindow};
