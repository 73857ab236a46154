//! Closed-form answers.
//!
//! * [`einf_closed`] lists the cyclic summands of the `E∞`-pages of the
//!   homotopy fixed point, Tate and `μ`-inverted spectral sequences for
//!   `THH(ℤ_p) ⊗ 𝕊^{ℓρ}` mod `p`.
//! * [`enumerate_families`] lists the generators of `gr TR^{[m]}(ℤ_p; Σ^{2ℓ}ℤ_p)/p`
//!   and `gr TR(ℤ_p; Σ^{2ℓ}ℤ_p)/p`, organised into the families
//!   `A, B, C, D_r, E_r` (all levels) and `F, G_r` (top level of a
//!   truncation), with their `v₁`-torsion orders ([`family_torsion`]).
//!
//! Every torsion order is assembled from the geometric sums
//! [`PrimeContext::geo`](graded_core::PrimeContext::geo).

mod einf;
mod error;
mod families;

pub use einf::{einf_closed, hfp_generator_torsion};
pub use error::ClosedFormError;
pub use families::{
    enumerate_families, family_torsion, Coefficient, Component, FamilyElement, FamilyParams,
    FamilyTag, Truncation,
};
