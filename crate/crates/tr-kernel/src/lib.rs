//! The `v₁`-adic associated graded of `TR(ℤ_p; Σ^{2ℓ}ℤ_p)/p` and its
//! truncations `TR^{[m]}`.
//!
//! `gr TR^{[m]}` is the kernel of `gr(φ − can)` from
//! `⊕_{i=0}^{m} gr E∞(hfp, level i)` to `⊕_{i=1}^{m} gr E∞(tate, level i)`.
//! * [`KernelOracle`] computes this kernel by brute force from the
//!   survival engines. It extracts the cyclic summands by persistence
//!   along `v₁`-towers, and checks surjectivity of `gr(φ − can)` and of
//!   `v₁` on the kernel.
//! * [`complete_to_kernel`] extends a leading class to a kernel element
//!   level by level. [`resolve_family`] applies it to the closed-form
//!   families and probes their torsion orders.
//! * [`tr_gr_module`] runs the oracle, the closed forms, or both, and
//!   compares them.

mod class;
mod error;
mod module;
mod oracle;
mod solver;
mod tower;

pub use class::{gr_can, gr_phi, GrV1Class};
pub use error::TrError;
pub use module::{
    check_surjectivity, closed_decomposition, oracle_top, stability_bound, tr_gr_module,
    tr_gr_module_with, Comparison, Mode, TrModule,
};
pub use oracle::{Bar, KernelOracle, MapDefect, OracleReport, Piece, V1Defect};
pub use solver::{complete_to_kernel, resolve_family, ResolvedFamily};
pub use tower::Tower;
