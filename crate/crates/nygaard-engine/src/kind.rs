//! Which spectral sequence we are running, its stages, and the formulas
//! for the stage differentials on monomials.

use graded_core::{Bidegree, Monomial, PrimeContext};
use serde::{Deserialize, Serialize};

use crate::EngineError;

/// Exponent range of the `E₂`-page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Homotopy fixed points: `a ≥ 0`, `b ≥ 0`.
    Hfp,
    /// Tate: `a ∈ ℤ`, `b ≥ 0`.
    Tate,
    /// `μ`-inverted page: `a ≥ 0`, `b ∈ ℤ`.
    Muinv,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Hfp, Variant::Tate, Variant::Muinv];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Hfp => "hfp",
            Variant::Tate => "tate",
            Variant::Muinv => "muinv",
        }
    }

    /// Whether `tᵃμᵇ` is a basis label of this page.
    #[inline]
    pub fn in_range(self, a: i64, b: i64) -> bool {
        match self {
            Variant::Hfp => a >= 0 && b >= 0,
            Variant::Tate => b >= 0,
            Variant::Muinv => a >= 0,
        }
    }

    /// Largest `m` such that `tᵃμᵇ / v₁ᵐ` is still a basis label.
    #[inline]
    pub fn v1_divisibility(self, a: i64, b: i64) -> i64 {
        match self {
            Variant::Hfp => a.min(b),
            Variant::Tate => b,
            Variant::Muinv => a,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = EngineError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hfp" => Ok(Variant::Hfp),
            "tate" => Ok(Variant::Tate),
            "muinv" => Ok(Variant::Muinv),
            other => Err(EngineError::Input(format!("unknown variant `{other}`"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A stage of the spectral sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    /// The differential `t ↦ t^{p^{k+1}} λ₁`-type stage `T_k`.
    T(u32),
    /// The final stage supported on `u`-multiples.
    U,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stage::T(k) => write!(f, "T{k}"),
            Stage::U => f.write_str("U"),
        }
    }
}

/// Image of a monomial under a stage differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageImage {
    /// The formula does not apply (wrong exterior part); the class is a
    /// cycle for this stage.
    Zero,
    /// `d(x) = coefficient · target` (the coefficient may be `0`).
    Term { coefficient: u32, target: Monomial },
    /// A non-`λ₁` class reached stage `T_k` without the divisibility every
    /// survivor of the earlier stages has; the stages were run out of order
    /// or the input is not a survivor.
    NotDivisible,
}

/// A concrete spectral sequence: prime, page level `L`, twist `ℓ`, variant.
///
/// `level` is the level of the page itself (`σε^{(ℓp^L)}`, `u_L`, stages
/// `T_0 … T_{L−1}, U`).  The user-facing index `n` agrees with `L` for the
/// homotopy fixed point and Tate variants; the `μ`-inverted page indexed by
/// `n` is the level `n − 1` page (see [`PageKind::from_index`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PageKind {
    pub ctx: PrimeContext,
    pub level: u32,
    pub twist: u32,
    pub variant: Variant,
}

impl PageKind {
    pub fn new(ctx: PrimeContext, level: u32, twist: u32, variant: Variant) -> Self {
        Self {
            ctx,
            level,
            twist,
            variant,
        }
    }

    /// The page for the user index `n`: levels `n` for `hfp`/`tate` and
    /// `n − 1` for `muinv` (the `μ`-inverted spectral sequence computing the
    /// level-`n` fixed points of `Φ^{C_p}` lives one level down).
    pub fn from_index(
        ctx: PrimeContext,
        n: u32,
        twist: u32,
        variant: Variant,
    ) -> Result<Self, EngineError> {
        let level = match variant {
            Variant::Muinv => n
                .checked_sub(1)
                .ok_or_else(|| EngineError::Input("the muinv variant needs n ≥ 1".into()))?,
            _ => n,
        };
        Ok(Self::new(ctx, level, twist, variant))
    }

    /// User-facing index `n` of this page.
    pub fn index(&self) -> u32 {
        match self.variant {
            Variant::Muinv => self.level + 1,
            _ => self.level,
        }
    }

    pub fn stages(&self) -> Vec<Stage> {
        let mut v: Vec<Stage> = (0..self.level).map(Stage::T).collect();
        v.push(Stage::U);
        v
    }

    /// `ℓL(p−1)p^{L−1}`: the `t`-exponent carried by the twist class.
    pub fn twist_shift(&self) -> i64 {
        if self.level == 0 {
            0
        } else {
            self.twist as i64
                * self.level as i64
                * (self.ctx.pi() - 1)
                * self.ctx.pow(self.level - 1)
        }
    }

    /// Stem of the twist class `σε^{(ℓp^L)}`.
    pub fn sigma_stem(&self) -> i64 {
        2 * self.twist as i64 * self.ctx.pow(self.level)
    }

    /// `v₁`-power in the target of stage `T_k`: `p + ⋯ + pᵏ`.
    pub fn t_stage_v1(&self, k: u32) -> i64 {
        self.ctx.geo(1, k as i64)
    }

    /// `v₁`-power in the target of stage `U`: `1 + ⋯ + p^{L−1}`.
    pub fn u_stage_v1(&self) -> i64 {
        self.ctx.geo(0, self.level as i64 - 1)
    }

    /// The largest `v₁`-torsion order on this page, `1 + p + ⋯ + p^L`.
    pub fn max_torsion(&self) -> i64 {
        self.ctx.geo(0, self.level as i64)
    }

    pub fn monomial(&self, t: i64, mu: i64, lambda: u8, u: u8) -> Monomial {
        Monomial::new(self.level, self.twist, t, mu, lambda, u)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.level == self.level && m.twist == self.twist && self.variant.in_range(m.t, m.mu)
    }

    pub fn divisibility(&self, m: &Monomial) -> i64 {
        self.variant.v1_divisibility(m.t, m.mu)
    }

    pub fn bidegree(&self, m: &Monomial) -> Bidegree {
        m.bidegree(&self.ctx)
    }

    /// The stage differential on a monomial.
    pub fn image(&self, stage: Stage, m: &Monomial) -> StageImage {
        let p = self.ctx.pi();
        match stage {
            Stage::T(k) => {
                if m.lambda == 1 {
                    return StageImage::Zero;
                }
                let x = m.t - m.mu - self.twist_shift();
                let pk = self.ctx.pow(k);
                if x.rem_euclid(pk) != 0 {
                    return StageImage::NotDivisible;
                }
                let coefficient = (x / pk).rem_euclid(p) as u32;
                let s = self.t_stage_v1(k);
                let target = Monomial {
                    t: m.t + s + self.ctx.pow(k + 1),
                    mu: m.mu + s,
                    lambda: 1,
                    ..*m
                };
                StageImage::Term {
                    coefficient,
                    target,
                }
            }
            Stage::U => {
                if m.u == 0 {
                    return StageImage::Zero;
                }
                let s = self.u_stage_v1();
                let target = Monomial {
                    t: m.t + s + self.ctx.pow(self.level),
                    mu: m.mu + s,
                    u: 0,
                    ..*m
                };
                StageImage::Term {
                    coefficient: 1,
                    target,
                }
            }
        }
    }

    /// The unique monomial (if any, and if it is on the page) that the
    /// stage formula sends onto `m`.  Stages are injective on monomials.
    pub fn preimage(&self, stage: Stage, m: &Monomial) -> Option<Monomial> {
        let src = match stage {
            Stage::T(k) => {
                if m.lambda == 0 {
                    return None;
                }
                let s = self.t_stage_v1(k);
                Monomial {
                    t: m.t - s - self.ctx.pow(k + 1),
                    mu: m.mu - s,
                    lambda: 0,
                    ..*m
                }
            }
            Stage::U => {
                if m.u == 1 {
                    return None;
                }
                let s = self.u_stage_v1();
                Monomial {
                    t: m.t - s - self.ctx.pow(self.level),
                    mu: m.mu - s,
                    u: 1,
                    ..*m
                }
            }
        };
        self.contains(&src).then_some(src)
    }
}

impl std::fmt::Display for PageKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}(p={}, n={}, ℓ={})",
            self.variant,
            self.ctx.p(),
            self.index(),
            self.twist
        )
    }
}

/// All basis monomials of `kind` in bidegree `b` with `v₁`-divisibility
/// below `cutoff`, ordered by decreasing divisibility (ties broken by the
/// exterior part and `t`-exponent) so that the low-divisibility monomials
/// occupy the highest indices.
pub fn enumerate_piece(kind: &PageKind, b: Bidegree, cutoff: i64) -> Vec<Monomial> {
    let p = kind.ctx.pi();
    let mut out: Vec<Monomial> = Vec::new();
    if cutoff <= 0 {
        return out;
    }
    for lambda in 0..=1u8 {
        for u in 0..=1u8 {
            if lambda as i64 - u as i64 != b.line {
                continue;
            }
            let rest = b.stem - kind.sigma_stem() - (2 * p - 1) * lambda as i64 + u as i64;
            if rest.rem_euclid(2) != 0 {
                continue;
            }
            // -2a + 2pb = rest, i.e. a = pb − r.
            let r = rest / 2;
            match kind.variant {
                Variant::Hfp => {
                    let b0 = if r > 0 { (r + p - 1) / p } else { 0 };
                    let mut mu = b0;
                    loop {
                        let a = p * mu - r;
                        if mu >= cutoff && a >= cutoff {
                            break;
                        }
                        if a >= 0 && a.min(mu) < cutoff {
                            out.push(kind.monomial(a, mu, lambda, u));
                        }
                        mu += 1;
                    }
                }
                Variant::Tate => {
                    for mu in 0..cutoff {
                        out.push(kind.monomial(p * mu - r, mu, lambda, u));
                    }
                }
                Variant::Muinv => {
                    for a in 0..cutoff {
                        if (r + a).rem_euclid(p) == 0 {
                            out.push(kind.monomial(a, (r + a) / p, lambda, u));
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|m| (std::cmp::Reverse(kind.divisibility(m)), m.lambda, m.u, m.t));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(p: u32, level: u32, twist: u32, variant: Variant) -> PageKind {
        PageKind::new(PrimeContext::new(p).unwrap(), level, twist, variant)
    }

    #[test]
    fn stage_differentials_change_bidegree_by_minus_one_plus_one() {
        for p in [2, 3, 5] {
            for variant in Variant::ALL {
                let k = kind(p, 3, 1, variant);
                for stage in k.stages() {
                    for (t, mu) in [(0, 0), (3, 4), (27, 1), (1, 9)] {
                        for lam in 0..=1 {
                            for u in 0..=1 {
                                let m = k.monomial(t, mu, lam, u);
                                if let StageImage::Term { target, .. } = k.image(stage, &m) {
                                    let d = k.bidegree(&target) - k.bidegree(&m);
                                    assert_eq!(d, Bidegree::new(-1, 1));
                                    assert_eq!(k.preimage(stage, &target), Some(m));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_multiples_are_t_stage_cycles() {
        let k = kind(3, 2, 1, Variant::Hfp);
        let m = k.monomial(5, 2, 1, 1);
        assert_eq!(k.image(Stage::T(0), &m), StageImage::Zero);
        assert_eq!(k.image(Stage::T(1), &m), StageImage::Zero);
    }

    #[test]
    fn untwisted_level_one_first_stage() {
        // d(t) = t^{1+p} λ₁ with coefficient 1, d(μ) = −μ t^p λ₁.
        let k = kind(3, 1, 0, Variant::Hfp);
        assert_eq!(
            k.image(Stage::T(0), &k.monomial(1, 0, 0, 0)),
            StageImage::Term {
                coefficient: 1,
                target: k.monomial(4, 0, 1, 0)
            }
        );
        assert_eq!(
            k.image(Stage::T(0), &k.monomial(0, 1, 0, 0)),
            StageImage::Term {
                coefficient: 2,
                target: k.monomial(3, 1, 1, 0)
            }
        );
        // d(u₁) = t^p.
        assert_eq!(
            k.image(Stage::U, &k.monomial(0, 0, 0, 1)),
            StageImage::Term {
                coefficient: 1,
                target: k.monomial(4, 1, 0, 0)
            }
        );
    }

    #[test]
    fn piece_enumeration_matches_bidegree_and_cutoff() {
        for variant in Variant::ALL {
            let k = kind(3, 1, 2, variant);
            for stem in -30..30 {
                for line in -1..=2 {
                    let b = Bidegree::new(stem, line);
                    let v = enumerate_piece(&k, b, 4);
                    for m in &v {
                        assert_eq!(k.bidegree(m), b);
                        assert!(k.contains(m));
                        assert!(k.divisibility(m) < 4);
                    }
                    let mut sorted = v.clone();
                    sorted.dedup();
                    assert_eq!(sorted.len(), v.len());
                }
            }
        }
    }

    #[test]
    fn hfp_stem_zero_basis_example() {
        // p = 3, level 0, untwisted, cutoff 2: the exterior-free part of
        // stem 0, line 0 is {1, t³μ}; λ₁u contributes {t²λ₁u, t⁵μλ₁u}.
        let k = kind(3, 0, 0, Variant::Hfp);
        let v = enumerate_piece(&k, Bidegree::new(0, 0), 2);
        let mut plain: Vec<(i64, i64)> = v
            .iter()
            .filter(|m| m.lambda == 0)
            .map(|m| (m.t, m.mu))
            .collect();
        plain.sort();
        assert_eq!(plain, vec![(0, 0), (3, 1)]);
        let mut ext: Vec<(i64, i64)> = v
            .iter()
            .filter(|m| m.lambda == 1)
            .map(|m| (m.t, m.mu))
            .collect();
        ext.sort();
        assert_eq!(ext, vec![(2, 0), (5, 1)]);
    }
}
