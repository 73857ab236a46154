//! Generator families of the `v₁`-adic associated graded of `TR`.
//!
//! Notation: `N(n, j) = pⁿℓ(p−1) − pj` is the `t`-exponent of the level
//! `n+1` component of a two-term family element.  Its sign and size decide
//! which family a `μ`-class belongs to.

use std::fmt;

use graded_core::{Bidegree, Monomial, PrimeContext, StemWindow};
use serde::{Deserialize, Serialize};

use crate::ClosedFormError;

/// The seven generator shapes.  `D`, `E` and `G` carry `1 ≤ r ≤ n` in
/// [`FamilyParams::r`]; `F` and `G` exist only for finite truncations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 7] = [
        Self::A,
        Self::B,
        Self::C,
        Self::D,
        Self::E,
        Self::F,
        Self::G,
    ];

    pub fn has_r(self) -> bool {
        matches!(self, Self::D | Self::E | Self::G)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Indices of a family element.  `index` is the `t`-exponent `i` for `C`
/// and the `μ`-exponent `j` otherwise; `e` is the exponent of `λ₁` for
/// `A`, `B`, `F` and of `u` for `C`, `D`, `E`, `G`; `r` is zero for the
/// families without it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: u32,
    pub twist: u32,
    pub r: u32,
    pub index: i64,
    pub e: u8,
}

/// Which levels of the tower are retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Truncation {
    /// Levels `0..=m`.
    Finite(u32),
    Infinite,
}

impl Truncation {
    fn keeps(self, level: u32) -> bool {
        match self {
            Self::Finite(m) => level <= m,
            Self::Infinite => true,
        }
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(m) => write!(f, "{m}"),
            Self::Infinite => write!(f, "∞"),
        }
    }
}

/// Coefficient of a component: a known unit of `𝔽_p`, or a unit fixed
/// only by the kernel condition (resolved by the `TR` solver).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficient {
    Known(u32),
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub level: u32,
    pub monomial: Monomial,
    pub coefficient: Coefficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyElement {
    pub tag: FamilyTag,
    pub params: FamilyParams,
    /// Components at the retained levels, leading (lowest level) first.
    pub components: Vec<Component>,
    pub torsion: u64,
    pub bidegree: Bidegree,
}

impl FamilyElement {
    pub fn leading(&self) -> &Component {
        &self.components[0]
    }
}

impl fmt::Display for FamilyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .components
            .iter()
            .map(|c| c.monomial.to_string())
            .collect();
        write!(f, "{}_{}", self.tag, self.params.n)?;
        if self.tag.has_r() {
            write!(f, ",{}", self.params.r)?;
        }
        write!(f, ": {}", terms.join(" ∔ "))
    }
}

/// `pⁿℓ(p−1) − pj`.
fn big_n(ctx: &PrimeContext, n: u32, twist: u32, j: i64) -> i64 {
    let p = ctx.pi();
    ctx.pow(n) * twist as i64 * (p - 1) - p * j
}

/// `ℓn p^{n−1}`, zero for `n = 0`.
fn residue(ctx: &PrimeContext, n: u32, twist: u32) -> i64 {
    if n == 0 {
        0
    } else {
        twist as i64 * n as i64 * ctx.pow(n - 1)
    }
}

fn geo(ctx: &PrimeContext, lo: i64, hi: i64) -> i64 {
    ctx.geo(lo, hi)
}

fn constraint(tag: FamilyTag, params: &FamilyParams, why: &str) -> ClosedFormError {
    ClosedFormError::Constraint(format!("{tag} with {params:?}: {why}"))
}

/// Checks the index constraints of a family element.
fn check(
    tag: FamilyTag,
    ctx: &PrimeContext,
    x: &FamilyParams,
    trunc: Truncation,
) -> Result<(), ClosedFormError> {
    let p = ctx.pi();
    let bad = |why: &str| Err(constraint(tag, x, why));
    if x.twist == 0 || ctx.vp(x.twist as i64).unwrap_or(0) > 0 {
        return Err(ClosedFormError::Input(format!(
            "twist must be positive and prime to p, got {}",
            x.twist
        )));
    }
    if x.e > 1 {
        return bad("e must be 0 or 1");
    }
    if tag.has_r() {
        if x.r < 1 || x.r > x.n {
            return bad("r must satisfy 1 ≤ r ≤ n");
        }
    } else if x.r != 0 {
        return bad("r must be 0 for this family");
    }
    match (tag, trunc) {
        (FamilyTag::F | FamilyTag::G, Truncation::Infinite) => {
            return bad("exists only for finite truncations")
        }
        (FamilyTag::F | FamilyTag::G, Truncation::Finite(m)) if m != x.n => {
            return bad("F and G live at the truncation level only")
        }
        (_, Truncation::Finite(m)) if x.n > m => return bad("level above the truncation"),
        _ => {}
    }
    let (n, j) = (x.n, x.index);
    let res = residue(ctx, n, x.twist);
    let pn = ctx.pow(n);
    let nn = big_n(ctx, n, x.twist, j);
    // At levels ≥ 2 the class with j = 0 is the level-n component of the
    // level-(n−1) family with N = 0, so it is not a generator of its own.
    let j_ok = j > 0 || (j == 0 && n <= 1);
    let r_val = |j: i64| ctx.vp(j - res) == Some(x.r - 1);
    let ok = match tag {
        FamilyTag::A => j_ok && (j - res).rem_euclid(pn) == 0 && nn >= p * pn,
        FamilyTag::B => j_ok && (j - res).rem_euclid(pn) == 0 && (0..p * pn).contains(&nn),
        FamilyTag::C => n >= 1 && (1..p).contains(&x.index) && ctx.vp(x.index + res) == Some(0),
        FamilyTag::D => j_ok && r_val(j) && nn >= ctx.pow(x.r + 1),
        FamilyTag::E => j_ok && r_val(j) && (0..ctx.pow(x.r + 1)).contains(&nn),
        FamilyTag::F => j_ok && (j - res).rem_euclid(pn) == 0 && nn < 0,
        FamilyTag::G => j_ok && r_val(j) && nn < 0,
    };
    if ok {
        Ok(())
    } else {
        bad("index constraints violated")
    }
}

/// Torsion order of a family generator, assuming valid parameters.
fn torsion_unchecked(
    tag: FamilyTag,
    ctx: &PrimeContext,
    x: &FamilyParams,
    trunc: Truncation,
) -> i64 {
    let p = ctx.pi();
    let n = x.n as i64;
    let r = x.r as i64;
    let nn = big_n(ctx, x.n, x.twist, x.index);
    // Number of tower levels above the family level that are retained.
    let above = match trunc {
        Truncation::Finite(m) => m as i64 - n,
        Truncation::Infinite => i64::MAX,
    };
    let exceptional = nn == 0 && x.twist == 1;
    match tag {
        FamilyTag::A | FamilyTag::F => geo(ctx, 0, n),
        FamilyTag::C => p - x.index,
        FamilyTag::D | FamilyTag::G => geo(ctx, 1, r),
        FamilyTag::B => {
            if above == 0 {
                geo(ctx, 0, n)
            } else if exceptional && above >= 2 {
                geo(ctx, 0, n + 1) + ctx.pow(x.n + 1)
            } else {
                geo(ctx, 0, n) + ctx.pow(x.n + 1) - nn
            }
        }
        FamilyTag::E => {
            if above == 0 {
                geo(ctx, 1, r)
            } else if exceptional && r == n && above >= 2 {
                geo(ctx, 1, n + 1) + ctx.pow(x.n + 1)
            } else {
                geo(ctx, 1, r) + ctx.pow(x.r + 1) - nn
            }
        }
    }
}

/// `v₁`-torsion order of a family generator in the truncation `trunc`.
pub fn family_torsion(
    tag: FamilyTag,
    ctx: PrimeContext,
    params: FamilyParams,
    trunc: Truncation,
) -> Result<u64, ClosedFormError> {
    check(tag, &ctx, &params, trunc)?;
    Ok(torsion_unchecked(tag, &ctx, &params, trunc) as u64)
}

/// Builds the element; `None` if the parameters violate the constraints.
fn element(
    tag: FamilyTag,
    ctx: &PrimeContext,
    x: FamilyParams,
    trunc: Truncation,
) -> Option<FamilyElement> {
    check(tag, ctx, &x, trunc).ok()?;
    let (n, l, j, e) = (x.n, x.twist, x.index, x.e);
    let nn = big_n(ctx, n, l, j);
    let top = ctx.pow(n + 1) * l as i64 * (ctx.pi() - 1);
    let mut monos: Vec<Monomial> = match tag {
        FamilyTag::A | FamilyTag::B | FamilyTag::F => {
            vec![
                Monomial::new(n, l, 0, j, e, 0),
                Monomial::new(n + 1, l, nn, 0, e, 0),
            ]
        }
        FamilyTag::C => vec![Monomial::new(n, l, j, 0, 1, e)],
        FamilyTag::D | FamilyTag::E | FamilyTag::G => {
            vec![
                Monomial::new(n, l, 0, j, 1, e),
                Monomial::new(n + 1, l, nn, 0, 1, e),
            ]
        }
    };
    match tag {
        FamilyTag::F | FamilyTag::G => monos.truncate(1),
        FamilyTag::B if nn == 0 => monos.push(Monomial::new(n + 2, l, top, 0, e, 0)),
        FamilyTag::E if nn == 0 => monos.push(Monomial::new(n + 2, l, top, 0, 1, e)),
        _ => {}
    }
    let bidegree = monos[0].bidegree(ctx);
    let components = monos
        .into_iter()
        .filter(|m| trunc.keeps(m.level))
        .enumerate()
        .map(|(k, monomial)| Component {
            level: monomial.level,
            monomial,
            coefficient: if k == 0 {
                Coefficient::Known(1)
            } else {
                Coefficient::Unknown
            },
        })
        .collect();
    Some(FamilyElement {
        tag,
        params: x,
        components,
        torsion: torsion_unchecked(tag, ctx, &x, trunc) as u64,
        bidegree,
    })
}

/// All family generators with stem in the window.  For a finite truncation
/// `m` these are the families `A`–`E` at levels `n ≤ m` with truncated
/// components and torsion, together with `F` and `G` at level `m`.
pub fn enumerate_families(
    ctx: PrimeContext,
    twist: u32,
    trunc: Truncation,
    window: StemWindow,
) -> Result<Vec<FamilyElement>, ClosedFormError> {
    if twist == 0 || twist % ctx.p() == 0 {
        return Err(ClosedFormError::Input(format!(
            "twist must be positive and prime to p, got {twist}"
        )));
    }
    let p = ctx.pi();
    let mut out = Vec::new();
    if window.is_empty() {
        return Ok(out);
    }
    // Every generator at level n has stem ≥ 2ℓpⁿ.
    let mut levels = Vec::new();
    let mut n = 0u32;
    while 2 * twist as i64 * ctx.pow(n) <= window.hi && trunc.keeps(n) {
        levels.push(n);
        n += 1;
    }
    let mut push = |tag: FamilyTag, x: FamilyParams| {
        if let Some(el) = element(tag, &ctx, x, trunc) {
            if window.contains(el.bidegree.stem) {
                out.push(el);
            }
        }
    };
    // μ-exponents that can meet the window: stem ≥ 2ℓpⁿ + 2pj.
    let j_max = |n: u32| (window.hi - 2 * twist as i64 * ctx.pow(n)).div_euclid(2 * p);
    for &n in &levels {
        for e in 0..=1u8 {
            for j in 0..=j_max(n) {
                for tag in [FamilyTag::A, FamilyTag::B] {
                    push(
                        tag,
                        FamilyParams {
                            n,
                            twist,
                            r: 0,
                            index: j,
                            e,
                        },
                    );
                }
                for r in 1..=n {
                    for tag in [FamilyTag::D, FamilyTag::E] {
                        push(
                            tag,
                            FamilyParams {
                                n,
                                twist,
                                r,
                                index: j,
                                e,
                            },
                        );
                    }
                }
            }
            for i in 1..p {
                push(
                    FamilyTag::C,
                    FamilyParams {
                        n,
                        twist,
                        r: 0,
                        index: i,
                        e,
                    },
                );
            }
        }
    }
    if let Truncation::Finite(m) = trunc {
        if levels.contains(&m) {
            for e in 0..=1u8 {
                for j in 0..=j_max(m) {
                    push(
                        FamilyTag::F,
                        FamilyParams {
                            n: m,
                            twist,
                            r: 0,
                            index: j,
                            e,
                        },
                    );
                    for r in 1..=m {
                        push(
                            FamilyTag::G,
                            FamilyParams {
                                n: m,
                                twist,
                                r,
                                index: j,
                                e,
                            },
                        );
                    }
                }
            }
        }
    }
    out.sort_by_key(|el| (el.bidegree.stem, el.bidegree.line, el.tag, el.params));
    Ok(out)
}
