//! Classes of the `v₁`-adic associated graded and the maps `can` and `φ`.

use graded_core::{Monomial, PrimeContext};
use nygaard_engine::PageKind;
use serde::{Deserialize, Serialize};

/// `coefficient · v₁ˢ · base` in `grˢ` of the level-`i` page, where `base`
/// is a pure `t`-power or pure `μ`-power monomial (times `σε`, `λ₁`, `u`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrV1Class {
    pub level: u32,
    pub s: i64,
    pub base: Monomial,
    pub coefficient: u32,
}

impl GrV1Class {
    /// The class of a surviving monomial of `kind`, with `s` its
    /// `v₁`-divisibility on that page.
    pub fn from_monomial(kind: &PageKind, m: &Monomial, coefficient: u32) -> Self {
        let s = kind.divisibility(m);
        Self {
            level: m.level,
            s,
            base: m.times_v1(-s),
            coefficient,
        }
    }

    /// The representing monomial `v₁ˢ · base`.
    pub fn monomial(&self) -> Monomial {
        self.base.times_v1(self.s)
    }

    /// Is the base a power of `t` (including `t⁰`)?
    pub fn is_t_type(&self) -> bool {
        self.base.mu == 0
    }
}

impl std::fmt::Display for GrV1Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coefficient != 1 {
            write!(f, "{}·", self.coefficient)?;
        }
        if self.s > 0 {
            write!(f, "v₁^{}·", self.s)?;
        }
        write!(f, "{}", self.base)
    }
}

/// `can` on the associated graded: the identity on `t`-type classes (named
/// in the Tate construction of the same level), zero on `μʲ`, `j > 0`.
pub fn gr_can(c: &GrV1Class) -> Option<GrV1Class> {
    c.is_t_type().then_some(*c)
}

/// `φ` on the associated graded, into the Tate construction one level up:
/// zero on `tⁱ`, `i > 0`, and
/// `v₁ᵃ σε^{(pⁿℓ)} μʲ λ₁^{e₁} u^{e₂} ↦ v₁ᵃ σε^{(p^{n+1}ℓ)} t^{pⁿℓ(p−1)−pj} λ₁^{e₁} u^{e₂}`
/// with unit coefficient (normalised to the source coefficient).
pub fn gr_phi(ctx: &PrimeContext, c: &GrV1Class) -> Option<GrV1Class> {
    let b = &c.base;
    if b.t != 0 || b.mu < 0 {
        return None;
    }
    let p = ctx.pi();
    let exponent = ctx.pow(c.level) * b.twist as i64 * (p - 1) - p * b.mu;
    Some(GrV1Class {
        level: c.level + 1,
        s: c.s,
        base: Monomial::new(c.level + 1, b.twist, exponent, 0, b.lambda, b.u),
        coefficient: c.coefficient,
    })
}
