//! Twisted Nygaard spectral sequences, computed by brute force.
//!
//! The `E₂`-page of the spectral sequence for the `C_{p^L}`-homotopy fixed
//! points of `gr THH(ℤ_p) ⊗ 𝕊^{ℓρ}` mod `p` is the free module on the
//! monomials `σε^{(ℓp^L)} tᵃ μᵇ λ₁^{e₁} u_L^{e₂}`, with `v₁ = tμ`.  The
//! differentials are concentrated on `L + 1` pages which we call *stages*:
//!
//! * stage `T_k` (`0 ≤ k < L`) sends a non-`λ₁` monomial `x` to
//!   `c · x · v₁^{p+⋯+pᵏ} t^{p^{k+1}} λ₁` with
//!   `c = (a − b − ℓL(p−1)p^{L−1}) / pᵏ mod p`, and kills `λ₁`-multiples;
//! * stage `U` sends `x·u_L` to `x · v₁^{1+⋯+p^{L−1}} t^{p^L}`.
//!
//! Three exponent ranges ([`Variant`]) give the homotopy fixed point, Tate
//! and `μ`-inverted spectral sequences.
//!
//! Two independent evaluators are provided:
//!
//! * [`SsPage`] builds a finite truncation of the page and runs every stage
//!   by sparse linear algebra over 𝔽_p ([`build_page`], [`stage_differential`],
//!   [`run_to_einf`]).  Truncation artefacts are excluded by working inside a
//!   *faithful region* of small `v₁`-divisibility.
//! * [`LocalEngine`] decides survival of a single monomial by recursing
//!   through the stages.  Because every stage maps monomials injectively to
//!   monomials, this is exact and needs no truncation; it powers the deep
//!   levels required by the TR computations and is cross-checked against
//!   [`SsPage`] in the test-suite.

mod einf;
mod error;
mod kind;
mod linear;
mod local;

pub use einf::{EInfClass, EInfResult, UncertifiedClass};
pub use error::EngineError;
pub use kind::{enumerate_piece, PageKind, Stage, StageImage, Variant};
pub use linear::{build_page, run_to_einf, stage_differential, PieceMap, SsPage};
pub use local::LocalEngine;

/// Default `v₁` cutoff for a page at level `L`: twice the largest possible
/// torsion order, plus slack, so every genuine class is certified.
pub fn default_cutoff(ctx: &graded_core::PrimeContext, level: u32) -> i64 {
    2 * ctx.geo(0, level as i64) + 2
}
