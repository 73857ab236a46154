//! Closed-form `E∞`-pages.

use graded_core::{CyclicDecomposition, Monomial, PrimeContext, StemWindow, Torsion};
use nygaard_engine::{PageKind, Variant};

use crate::ClosedFormError;

/// Collects generators whose `v₁`-orbit meets the window.
struct Collector<'a> {
    kind: &'a PageKind,
    window: StemWindow,
    out: CyclicDecomposition,
}

impl Collector<'_> {
    fn push(&mut self, m: Monomial, torsion: i64) {
        if torsion <= 0 {
            return;
        }
        let q = self.kind.ctx.q();
        let b = self.kind.bidegree(&m);
        if b.stem > self.window.hi || b.stem + (torsion - 1) * q < self.window.lo {
            return;
        }
        self.out
            .add(m.to_string(), b, Torsion::Finite(torsion as u64))
            .expect("closed-form generators are distinct monomials");
    }

    /// Exponents `x` of `t` (`step = −2`) or `μ` (`step = 2p`) for which a
    /// generator of base stem `base + step·x` can meet the window, given
    /// torsion at most `max_torsion`.
    fn range(&self, base: i64, step: i64, max_torsion: i64) -> (i64, i64) {
        let q = self.kind.ctx.q();
        let lo = self.window.lo - max_torsion.max(1) * q;
        let hi = self.window.hi;
        // base + step·x ∈ [lo, hi]
        let (a, b) = if step > 0 {
            (div_ceil(lo - base, step), (hi - base).div_euclid(step))
        } else {
            let s = -step;
            (div_ceil(base - hi, s), (base - lo).div_euclid(s))
        };
        (a, b)
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// `v_p(x) == e`, with `v_p(0) = ∞`.
fn vp_is(ctx: &PrimeContext, x: i64, e: i64) -> bool {
    e >= 0 && ctx.vp(x) == Some(e as u32)
}

/// The cyclic summands of the `E∞`-page of `variant` at index `n` and
/// twist `ℓ` whose `v₁`-orbits meet the window.  The `muinv` variant at
/// index `n` is the level-`(n−1)` page and requires `n ≥ 1`.
pub fn einf_closed(
    ctx: PrimeContext,
    n: u32,
    twist: u32,
    variant: Variant,
    window: StemWindow,
) -> Result<CyclicDecomposition, ClosedFormError> {
    let kind = PageKind::from_index(ctx, n, twist, variant)
        .map_err(|e| ClosedFormError::Input(e.to_string()))?;
    let mut c = Collector {
        kind: &kind,
        window,
        out: CyclicDecomposition::new(),
    };
    if window.is_empty() {
        return Ok(c.out);
    }
    match variant {
        Variant::Hfp => hfp(&mut c),
        Variant::Tate => tate(&mut c),
        Variant::Muinv => muinv(&mut c),
    }
    Ok(c.out)
}

fn geo(ctx: &PrimeContext, lo: i64, hi: i64) -> i64 {
    ctx.geo(lo, hi)
}

/// Twist residue `ℓn p^{n−1}` (zero for `n = 0`).
fn twist_residue(ctx: &PrimeContext, n: i64, twist: i64) -> i64 {
    if n == 0 {
        0
    } else {
        twist * n * ctx.pow(n as u32 - 1)
    }
}

fn hfp(c: &mut Collector) {
    let k = *c.kind;
    let ctx = k.ctx;
    let p = ctx.pi();
    let n = k.level as i64;
    let pn = ctx.pow(n as u32);
    let res = twist_residue(&ctx, n, k.twist as i64);
    let sigma = k.sigma_stem();
    let lam = 2 * p - 1;
    let big = geo(&ctx, 0, n) + pn;

    for e1 in 0..=1u8 {
        let base = sigma + e1 as i64 * lam;
        let (lo_i, hi_i) = c.range(base, -2, big);
        for i in lo_i.max(1)..=hi_i {
            if (i + res).rem_euclid(pn) != 0 {
                continue;
            }
            let m = k.monomial(i, 0, e1, 0);
            if i >= pn {
                c.push(m, geo(&ctx, 0, n - 1));
            } else {
                c.push(m, geo(&ctx, 0, n - 1) + pn - i);
            }
        }
        let (lo_j, hi_j) = c.range(base, 2 * p, big);
        for j in lo_j.max(0)..=hi_j {
            if (j - res).rem_euclid(pn) == 0 {
                c.push(k.monomial(0, j, e1, 0), geo(&ctx, 0, n));
            }
        }
    }

    for e2 in 0..=1u8 {
        let base = sigma + lam - e2 as i64;
        let (lo_i, hi_i) = c.range(base, -2, big);
        let (lo_j, hi_j) = c.range(base, 2 * p, big);
        for i in lo_i.max(1)..=hi_i {
            let m = k.monomial(i, 0, 1, e2);
            let v = ctx.vp(i).expect("i > 0") as i64;
            // t^i λ₁ with v_p(i) = k ≤ n − 2
            if v <= n - 2 {
                let pk = ctx.pow(v as u32);
                if i > p * pk {
                    if v >= 1 {
                        c.push(m, geo(&ctx, 1, v));
                    }
                } else {
                    let a = i / pk;
                    c.push(m, geo(&ctx, 1, v) + pk * (p - a));
                }
            }
            if n >= 1 {
                let pn1 = ctx.pow(n as u32 - 1);
                if i >= pn && vp_is(&ctx, i + res, n - 1) {
                    c.push(m, geo(&ctx, 1, n - 1));
                }
                if i < pn && i % pn1 == 0 {
                    let a = i / pn1;
                    if (a + n * k.twist as i64).rem_euclid(p) != 0 {
                        c.push(m, geo(&ctx, 1, n - 1) + pn1 * (p - a));
                    }
                }
            }
        }
        for j in lo_j.max(0)..=hi_j {
            let m = k.monomial(0, j, 1, e2);
            if j > 0 {
                let v = ctx.vp(j).expect("j > 0") as i64;
                if v <= n - 2 {
                    c.push(m, geo(&ctx, 1, v + 1));
                }
            }
            if n >= 1 && vp_is(&ctx, j - res, n - 1) {
                c.push(m, geo(&ctx, 1, n));
            }
        }
    }
}

fn tate(c: &mut Collector) {
    let k = *c.kind;
    let ctx = k.ctx;
    let p = ctx.pi();
    let n = k.level as i64;
    let pn = ctx.pow(n as u32);
    let res = twist_residue(&ctx, n, k.twist as i64);
    let sigma = k.sigma_stem();
    let lam = 2 * p - 1;
    let big = geo(&ctx, 0, n);
    for e1 in 0..=1u8 {
        let base = sigma + e1 as i64 * lam;
        let (lo_i, hi_i) = c.range(base, -2, big);
        for i in lo_i..=hi_i {
            if (i + res).rem_euclid(pn) == 0 {
                c.push(k.monomial(i, 0, e1, 0), geo(&ctx, 0, n - 1));
            }
        }
    }
    for e2 in 0..=1u8 {
        let base = sigma + lam - e2 as i64;
        let (lo_i, hi_i) = c.range(base, -2, big);
        for i in lo_i..=hi_i {
            let m = k.monomial(i, 0, 1, e2);
            if let Some(v) = ctx.vp(i) {
                let v = v as i64;
                if (1..=n - 2).contains(&v) {
                    c.push(m, geo(&ctx, 1, v));
                }
            }
            if n >= 1 && vp_is(&ctx, i + res, n - 1) {
                c.push(m, geo(&ctx, 1, n - 1));
            }
        }
    }
}

fn muinv(c: &mut Collector) {
    let k = *c.kind;
    let ctx = k.ctx;
    let p = ctx.pi();
    let l = k.level as i64;
    let pl = ctx.pow(l as u32);
    let res = twist_residue(&ctx, l, k.twist as i64);
    let sigma = k.sigma_stem();
    let lam = 2 * p - 1;
    let big = geo(&ctx, 0, l);
    for e1 in 0..=1u8 {
        let base = sigma + e1 as i64 * lam;
        let (lo_j, hi_j) = c.range(base, 2 * p, big);
        for j in lo_j..=hi_j {
            if (j - res).rem_euclid(pl) == 0 {
                c.push(k.monomial(0, j, e1, 0), geo(&ctx, 0, l));
            }
        }
    }
    for e2 in 0..=1u8 {
        let base = sigma + lam - e2 as i64;
        let (lo_j, hi_j) = c.range(base, 2 * p, big);
        for j in lo_j..=hi_j {
            let m = k.monomial(0, j, 1, e2);
            if let Some(v) = ctx.vp(j) {
                let v = v as i64;
                if v <= l - 2 {
                    c.push(m, geo(&ctx, 1, v + 1));
                }
            }
            if l >= 1 && vp_is(&ctx, j - res, l - 1) {
                c.push(m, geo(&ctx, 1, l));
            }
        }
    }
}

/// `v₁`-torsion order of `m` if it is one of the listed generators of the
/// homotopy fixed point `E∞`-page at its level and twist.
pub fn hfp_generator_torsion(ctx: PrimeContext, m: &Monomial) -> Option<u64> {
    let kind = PageKind::new(ctx, m.level, m.twist, Variant::Hfp);
    let b = kind.bidegree(m);
    let dec = einf_closed(
        ctx,
        m.level,
        m.twist,
        Variant::Hfp,
        StemWindow::new(b.stem, b.stem),
    )
    .ok()?;
    let label = m.to_string();
    dec.generators()
        .iter()
        .find(|g| g.label == label)
        .and_then(|g| g.torsion.finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use graded_core::Bidegree;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn torsion_of(dec: &CyclicDecomposition, label: &str) -> Option<Torsion> {
        dec.generators()
            .iter()
            .find(|g| g.label == label)
            .map(|g| g.torsion)
    }

    #[test]
    fn hfp_unit_torsion_level_one() {
        let d = einf_closed(ctx(3), 1, 0, Variant::Hfp, StemWindow::new(-20, 20)).unwrap();
        assert_eq!(torsion_of(&d, "1"), Some(Torsion::Finite(4)));
    }

    #[test]
    fn tate_periodic_generators() {
        let d = einf_closed(ctx(3), 2, 0, Variant::Tate, StemWindow::new(-60, 60)).unwrap();
        for i in [-18i64, -9, 0, 9, 18] {
            let label = nygaard_engine::PageKind::from_index(ctx(3), 2, 0, Variant::Tate)
                .unwrap()
                .monomial(i, 0, 0, 0)
                .to_string();
            assert_eq!(torsion_of(&d, &label), Some(Torsion::Finite(4)), "t^{i}");
        }
    }

    #[test]
    fn hfp_twisted_short_tower() {
        // t²σε^{(3)} at p = 3, n = 1, ℓ = 1: 2 ≡ −1 mod 3, torsion 1 + (3 − 2).
        let d = einf_closed(ctx(3), 1, 1, Variant::Hfp, StemWindow::new(-20, 20)).unwrap();
        assert_eq!(torsion_of(&d, "σε[1·p^1]·t^2"), Some(Torsion::Finite(2)));
        assert_eq!(
            d.generators()
                .iter()
                .find(|g| g.label == "σε[1·p^1]·t^2")
                .unwrap()
                .bidegree,
            Bidegree::new(2, 0)
        );
    }

    #[test]
    fn level_zero_shapes() {
        let d = einf_closed(ctx(5), 0, 0, Variant::Hfp, StemWindow::new(0, 100)).unwrap();
        assert!(d
            .generators()
            .iter()
            .all(|g| g.torsion == Torsion::Finite(1)));
        assert!(
            einf_closed(ctx(5), 0, 2, Variant::Tate, StemWindow::new(-100, 100))
                .unwrap()
                .is_empty()
        );
        assert!(einf_closed(ctx(5), 0, 2, Variant::Muinv, StemWindow::new(-100, 100)).is_err());
    }
}
