//! Final dimension tables.
//!
//! * [`tc_zp_dims`]: the free 𝔽_p[v₁]-module `TC(ℤ_p)/p` on `p + 3`
//!   generators.
//! * [`tc_eps_dims`]: `TC(ℤ_p⟨ε⟩)/p`, the sum of `TC(ℤ_p)/p` and the twisted
//!   `TR` summands for `p ∤ ℓ`.
//! * [`syntomic_dims`], [`tc_mod_dims`], [`k_mod_dims`]: the mod `(p, v₁ᵏ)`
//!   invariants of `ℤ/pⁿ` in the range `k ≤ p^{n−2}` where they agree with
//!   those of `ℤ_p⟨ε⟩`.
//! * [`two_line_check`]: every class on line 2 comes from `TC(ℤ_p)`.
//! * [`betti_bound`]: the truncation `X_{p^{b(d)} = 0}` that determines the
//!   mod-`p` Betti numbers of a generic fibre of dimension `d`.

mod betti;
mod error;
mod quotient;
mod tc;

pub use betti::betti_bound;
pub use error::AssemblyError;
pub use quotient::{k_mod_dims, syntomic_dims, tc_mod_dims, v1_kernel_cokernel, AssemblyParams};
pub use tc::{max_twist, tc_eps_dims, tc_eps_dims_with, tc_zp_dims, two_line_check, TwoLineReport};
