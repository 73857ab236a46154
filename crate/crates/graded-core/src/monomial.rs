//! Basis labels of spectral-sequence pages.

use serde::{Deserialize, Serialize};

use crate::{Bidegree, GradedError, PrimeContext};

/// The basis label `σε^{(ℓpⁱ)} tᵃ μᵇ λ₁^{e₁} u^{e₂}` at level `i` and
/// twist `ℓ`.  With `ℓ = 0` the factor `σε` is the unit.
///
/// Bidegrees: `σε^{(ℓpⁱ)} ↦ (2ℓpⁱ, 0)`, `t ↦ (−2, 0)`, `μ ↦ (2p, 0)`,
/// `λ₁ ↦ (2p−1, 1)`, `u ↦ (−1, −1)`; hence `v₁ = tμ ↦ (2p−2, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub level: u32,
    pub twist: u32,
    pub t: i64,
    pub mu: i64,
    pub lambda: u8,
    pub u: u8,
}

impl Monomial {
    pub fn new(level: u32, twist: u32, t: i64, mu: i64, lambda: u8, u: u8) -> Self {
        debug_assert!(lambda <= 1 && u <= 1);
        Self {
            level,
            twist,
            t,
            mu,
            lambda,
            u,
        }
    }

    /// The bottom class `σε^{(ℓpⁱ)}` of a page.
    pub fn unit(level: u32, twist: u32) -> Self {
        Self::new(level, twist, 0, 0, 0, 0)
    }

    pub fn bidegree(&self, ctx: &PrimeContext) -> Bidegree {
        let p = ctx.pi();
        let sigma = 2 * self.twist as i64 * ctx.pow(self.level);
        let lam = self.lambda as i64;
        let u = self.u as i64;
        Bidegree::new(
            sigma - 2 * self.t + 2 * p * self.mu + (2 * p - 1) * lam - u,
            lam - u,
        )
    }

    /// Product of two labels at the same level and twist; `None` when an
    /// exterior generator would be squared.  (The twist class is a label
    /// of the page, not a multiplicative factor, so it is not doubled.)
    pub fn mul(&self, other: &Monomial) -> Result<Option<Monomial>, GradedError> {
        if self.level != other.level || self.twist != other.twist {
            return Err(GradedError::Mismatch(self.to_string(), other.to_string()));
        }
        if self.lambda + other.lambda > 1 || self.u + other.u > 1 {
            return Ok(None);
        }
        Ok(Some(Monomial::new(
            self.level,
            self.twist,
            self.t + other.t,
            self.mu + other.mu,
            self.lambda + other.lambda,
            self.u + other.u,
        )))
    }

    /// Multiply by `v₁ᵏ = tᵏμᵏ` (`k` may be negative).
    pub fn times_v1(&self, k: i64) -> Monomial {
        Monomial {
            t: self.t + k,
            mu: self.mu + k,
            ..*self
        }
    }

    pub fn with_exterior(&self, lambda: u8, u: u8) -> Monomial {
        Monomial { lambda, u, ..*self }
    }

    pub fn is_lambda_multiple(&self) -> bool {
        self.lambda == 1
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.twist != 0 {
            parts.push(format!("σε[{}·{}^{}]", self.twist, "p", self.level));
        }
        match self.t {
            0 => {}
            1 => parts.push("t".into()),
            a => parts.push(format!("t^{a}")),
        }
        match self.mu {
            0 => {}
            1 => parts.push("μ".into()),
            b => parts.push(format!("μ^{b}")),
        }
        if self.lambda == 1 {
            parts.push("λ₁".into());
        }
        if self.u == 1 {
            parts.push(format!("u{}", self.level));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("·"))
    }
}
