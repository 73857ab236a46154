//! Worked examples and structural invariants of the page engine.

use fp_linalg::{kernel_basis, rank};
use graded_core::{Bidegree, PrimeContext, StemWindow, Torsion};
use nygaard_engine::{
    build_page, default_cutoff, enumerate_piece, run_to_einf, stage_differential, EngineError,
    LocalEngine, PageKind, Stage, StageImage, Variant,
};
use proptest::prelude::*;

fn kind(p: u32, n: u32, twist: u32, variant: Variant) -> PageKind {
    PageKind::from_index(PrimeContext::new(p).unwrap(), n, twist, variant).unwrap()
}

fn einf(k: PageKind, lo: i64, hi: i64) -> nygaard_engine::EInfResult {
    let page = build_page(k, StemWindow::new(lo, hi), default_cutoff(&k.ctx, k.level)).unwrap();
    run_to_einf(page).unwrap()
}

fn torsion_of(e: &nygaard_engine::EInfResult, label: &str) -> Torsion {
    e.classes
        .iter()
        .find(|c| c.label() == label)
        .expect(label)
        .torsion
}

#[test]
fn bottom_class_stem() {
    let k = kind(3, 1, 1, Variant::Hfp);
    assert_eq!(k.sigma_stem(), 6);
    assert_eq!(
        k.bidegree(&graded_core::Monomial::unit(1, 1)),
        Bidegree::new(6, 0)
    );
}

#[test]
fn tate_basis_with_cutoff_one() {
    let k = kind(3, 1, 0, Variant::Tate);
    let v = enumerate_piece(&k, Bidegree::new(0, 0), 1);
    // μ-exponent zero forces a = 0 without exterior factors, a = 2 with λ₁u.
    assert_eq!(v, vec![k.monomial(0, 0, 0, 0), k.monomial(2, 0, 1, 1)]);
}

#[test]
fn level_zero_fixed_points() {
    // E(λ₁) ⊗ 𝔽_p{μʲ}, every class v₁-torsion of order one.
    let e = einf(kind(3, 0, 0, Variant::Hfp), 0, 40);
    for stem in 0..=40 {
        let d: u64 = graded_core::LINES
            .iter()
            .map(|&l| e.dim(Bidegree::new(stem, l)))
            .sum();
        let expected = u64::from(stem % 6 == 0 || stem % 6 == 5);
        assert_eq!(d, expected, "stem {stem}");
    }
    assert!(e.classes.iter().all(|c| c.torsion == Torsion::Finite(1)));
}

#[test]
fn unit_torsion_orders() {
    let e = einf(kind(3, 1, 0, Variant::Hfp), -10, 10);
    assert_eq!(torsion_of(&e, "1"), Torsion::Finite(4));
    // t^{p−1}λ₁u sits in the same bidegree as the unit.
    assert_eq!(e.dim(Bidegree::new(0, 0)), 2);
    let e = einf(kind(3, 1, 0, Variant::Tate), -10, 10);
    assert_eq!(torsion_of(&e, "1"), Torsion::Finite(1));
}

#[test]
fn stage_formulas() {
    let k = kind(3, 1, 0, Variant::Hfp);
    let term = |m, st| match k.image(st, &m) {
        StageImage::Term {
            coefficient,
            target,
        } => (coefficient, target),
        other => panic!("{other:?}"),
    };
    assert_eq!(
        term(k.monomial(1, 0, 0, 0), Stage::T(0)),
        (1, k.monomial(4, 0, 1, 0))
    );
    assert_eq!(
        term(k.monomial(0, 1, 0, 0), Stage::T(0)),
        (2, k.monomial(3, 1, 1, 0))
    );
    assert_eq!(
        term(k.monomial(0, 0, 0, 1), Stage::U),
        (1, k.monomial(4, 1, 0, 0))
    );
    // the twist class supports T_{n−1} with coefficient ≡ ℓn, and nothing
    // earlier.
    for p in [3u32, 5] {
        for (n, twist) in [(2u32, 1u32), (3, 2), (2, 4)] {
            let k = kind(p, n, twist, Variant::Hfp);
            let unit = k.monomial(0, 0, 0, 0);
            for j in 0..n - 1 {
                assert!(matches!(
                    k.image(Stage::T(j), &unit),
                    StageImage::Term { coefficient: 0, .. }
                ));
            }
            let (c, target) = match k.image(Stage::T(n - 1), &unit) {
                StageImage::Term {
                    coefficient,
                    target,
                } => (coefficient, target),
                other => panic!("{other:?}"),
            };
            assert_eq!(c as i64, (twist as i64 * n as i64).rem_euclid(p as i64));
            let s = k.ctx.geo(1, n as i64 - 1);
            assert_eq!(target, k.monomial(s + k.ctx.pow(n), s, 1, 0));
        }
    }
}

#[test]
fn stages_must_run_in_order() {
    let k = kind(3, 2, 1, Variant::Hfp);
    let mut page = build_page(k, StemWindow::new(0, 10), 4).unwrap();
    assert!(matches!(
        stage_differential(&page, Stage::T(1)),
        Err(EngineError::StageOrder { .. })
    ));
    assert!(matches!(
        page.apply_stage(Stage::U),
        Err(EngineError::StageOrder { .. })
    ));
    page.apply_stage(Stage::T(0)).unwrap();
    assert!(stage_differential(&page, Stage::T(1)).is_ok());
}

#[test]
fn invalid_inputs() {
    let ctx = PrimeContext::new(3).unwrap();
    assert!(PageKind::from_index(ctx, 0, 1, Variant::Muinv).is_err());
    let k = kind(3, 1, 1, Variant::Hfp);
    assert!(build_page(k, StemWindow::new(0, 10), 0).is_err());
    assert!(matches!(
        build_page(k, StemWindow::new(-10_000_000, 10_000_000), 8),
        Err(EngineError::Resource { .. })
    ));
}

/// d∘d = 0, rank–nullity and the λ₁ rule on every stage matrix.
#[test]
fn stage_matrices_are_differentials() {
    for variant in Variant::ALL {
        let k = kind(3, 2, 1, variant);
        let mut page = build_page(k, StemWindow::new(-20, 40), 6).unwrap();
        for stage in k.stages() {
            let maps = stage_differential(&page, stage).unwrap();
            for m in &maps {
                assert_eq!(m.target - m.source, Bidegree::new(-1, 1));
                let r = rank(&m.matrix);
                assert_eq!(r + kernel_basis(&m.matrix).len(), m.matrix.cols());
                let src = page.basis(m.source);
                let tgt = page.basis(m.target);
                for ((row, col), _) in m.matrix.entries() {
                    if let Stage::T(_) = stage {
                        assert_eq!(tgt[row].lambda, 1);
                        assert_eq!(src[col].lambda, 0);
                    } else {
                        assert_eq!((src[col].u, tgt[row].u), (1, 0));
                    }
                }
                if let Some(next) = maps.iter().find(|n| n.source == m.target) {
                    for ((_, col), _) in next.matrix.entries() {
                        assert!(
                            m.matrix.entries().all(|((row, _), _)| row != col),
                            "d∘d ≠ 0"
                        );
                    }
                }
            }
            page.apply_stage(stage).unwrap();
        }
        assert_eq!(page.next_stage(), None);
    }
}

/// The classes surviving the last stage are permanent for any further
/// stage of the same shape: `t^{p^L}`-type differentials vanish on `E∞`.
#[test]
fn collapse_after_last_stage() {
    for p in [2u32, 3] {
        for n in 0..=2 {
            for variant in [Variant::Hfp, Variant::Tate] {
                let k = kind(p, n, 1, variant);
                let mut local = LocalEngine::new(k);
                for stem in -20..=40 {
                    for line in graded_core::LINES {
                        for x in local.survivors(Bidegree::new(stem, line), 8) {
                            if let StageImage::Term {
                                coefficient,
                                target,
                            } = k.image(Stage::T(k.level), &x)
                            {
                                assert!(
                                    coefficient == 0 || !local.survives(&target),
                                    "{x} → {target}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Doubling the cutoff changes no dimension and no torsion order.
    #[test]
    fn cutoff_stability(p in prop::sample::select(vec![2u32, 3]), n in 0u32..3, twist in 0u32..6,
                        variant in prop::sample::select(Variant::ALL.to_vec()), lo in -30i64..0) {
        let twist = if twist % p == 0 { 0 } else { twist };
        let n = if variant == Variant::Muinv { n + 1 } else { n };
        let k = kind(p, n, twist, variant);
        let w = StemWindow::new(lo, lo + 40);
        let v = default_cutoff(&k.ctx, k.level);
        let a = run_to_einf(build_page(k, w, v).unwrap()).unwrap();
        let b = run_to_einf(build_page(k, w, 2 * v).unwrap()).unwrap();
        prop_assert!(a.is_certified() && b.is_certified());
        prop_assert_eq!(&a.dims, &b.dims);
        prop_assert_eq!(a.torsion_multisets(), b.torsion_multisets());
    }

    /// The survival oracle is v₁-monotone: a surviving multiple of v₁ has a
    /// surviving quotient.
    #[test]
    fn survivors_are_v1_towers(p in prop::sample::select(vec![2u32, 3, 5]), n in 0u32..4, twist in 0u32..9,
                               a in 0i64..60, b in 0i64..30, lam in 0u8..2, u in 0u8..2) {
        let k = kind(p, n, twist, Variant::Hfp);
        let mut local = LocalEngine::new(k);
        let x = k.monomial(a + 1, b + 1, lam, u);
        if local.survives(&x) {
            prop_assert!(local.survives(&x.times_v1(-1)));
        }
        prop_assert!(local.anomalies().is_empty());
    }
}
