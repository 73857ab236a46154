//! The brute-force kernel against the closed-form families.

use closed_forms::{enumerate_families, family_torsion, Coefficient, Truncation};
use graded_core::{PrimeContext, StemWindow};
use proptest::prelude::*;
use tr_kernel::{resolve_family, stability_bound, tr_gr_module, Mode, Tower};

fn ctx(p: u32) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

fn twists(p: u32) -> impl Iterator<Item = u32> {
    (1..=8u32).filter(move |l| l % p != 0)
}

fn assert_agree(p: u32, twist: u32, trunc: Truncation, window: StemWindow) {
    let r = tr_gr_module(ctx(p), twist, trunc, window, Mode::Both).unwrap();
    let c = r.comparison.as_ref().unwrap();
    assert!(c.is_match(), "p={p} ℓ={twist} [{trunc}]: {c:?}");
    let rep = r.report.as_ref().unwrap();
    assert!(rep.is_clean(), "p={p} ℓ={twist} [{trunc}]: {rep:?}");
}

#[test]
fn finite_truncations_agree() {
    for p in [2u32, 3, 5] {
        for twist in twists(p).take(4) {
            for m in 0..=3 {
                assert_agree(p, twist, Truncation::Finite(m), StemWindow::new(-10, 150));
            }
        }
    }
}

#[test]
fn infinite_truncation_agrees() {
    for p in [2u32, 3, 5] {
        for twist in twists(p).take(3) {
            assert_agree(p, twist, Truncation::Infinite, StemWindow::new(-10, 80));
        }
    }
}

#[test]
fn every_family_resolves_with_its_torsion() {
    let mut count = 0;
    for p in [2u32, 3, 5] {
        for twist in twists(p) {
            let mut tower = Tower::new(ctx(p), twist);
            for trunc in [
                Truncation::Finite(0),
                Truncation::Finite(1),
                Truncation::Finite(2),
                Truncation::Infinite,
            ] {
                for el in enumerate_families(ctx(p), twist, trunc, StemWindow::new(0, 160)).unwrap()
                {
                    let res = resolve_family(&mut tower, &el, trunc)
                        .unwrap_or_else(|e| panic!("{el}: {e}"));
                    assert_eq!(res.probed_torsion, el.torsion, "{el}");
                    assert_eq!(
                        family_torsion(el.tag, ctx(p), el.params, trunc).unwrap(),
                        el.torsion
                    );
                    assert!(res
                        .element
                        .components
                        .iter()
                        .all(|c| c.coefficient == Coefficient::Known(1)));
                    count += 1;
                }
            }
        }
    }
    assert!(count > 500, "only {count} families resolved");
}

#[test]
fn solver_examples() {
    use closed_forms::FamilyTag;
    let find = |p: u32,
                twist: u32,
                trunc,
                tag: FamilyTag,
                pred: &dyn Fn(&closed_forms::FamilyElement) -> bool| {
        enumerate_families(ctx(p), twist, trunc, StemWindow::new(0, 400))
            .unwrap()
            .into_iter()
            .find(|e| e.tag == tag && pred(e))
            .unwrap_or_else(|| panic!("no {tag:?} family"))
    };
    let mut tower = Tower::new(ctx(3), 1);
    // Two components for A, one for C, three for B with N = 0.
    let a = find(3, 4, Truncation::Infinite, FamilyTag::A, &|_| true);
    let mut tower4 = Tower::new(ctx(3), 4);
    assert_eq!(
        resolve_family(&mut tower4, &a, Truncation::Infinite)
            .unwrap()
            .element
            .components
            .len(),
        2
    );
    let c = find(3, 1, Truncation::Infinite, FamilyTag::C, &|_| true);
    assert_eq!(
        resolve_family(&mut tower, &c, Truncation::Infinite)
            .unwrap()
            .element
            .components
            .len(),
        1
    );
    // B at n = 2, j = pℓ(p−1) = 6 carries the level-4 term.
    let b = find(3, 1, Truncation::Infinite, FamilyTag::B, &|e| {
        e.params.n == 2 && e.params.index == 6
    });
    let res = resolve_family(&mut tower, &b, Truncation::Infinite).unwrap();
    assert_eq!(res.element.components.len(), 3);
    assert_eq!(res.probed_torsion, b.torsion);
}

#[test]
fn truncations_are_stable_below_the_bound() {
    for p in [2u32, 3] {
        for twist in twists(p).take(3) {
            for m in 0..=2u32 {
                let bound = stability_bound(&ctx(p), twist, m);
                let w = StemWindow::new(-10, bound);
                let a =
                    tr_gr_module(ctx(p), twist, Truncation::Finite(m), w, Mode::Oracle).unwrap();
                let b = tr_gr_module(ctx(p), twist, Truncation::Finite(m + 1), w, Mode::Oracle)
                    .unwrap();
                assert_eq!(a.dims, b.dims, "p={p} ℓ={twist} m={m}");
                // Differences do occur shortly above the bound.
                let w = StemWindow::new(bound + 1, bound + 2 * twist as i64 * ctx(p).pow(m + 1));
                let a =
                    tr_gr_module(ctx(p), twist, Truncation::Finite(m), w, Mode::Oracle).unwrap();
                let b = tr_gr_module(ctx(p), twist, Truncation::Finite(m + 1), w, Mode::Oracle)
                    .unwrap();
                assert_ne!(
                    a.dims, b.dims,
                    "p={p} ℓ={twist} m={m}: no difference above the bound"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn oracle_matches_closed_on_random_windows(
        p in prop::sample::select(vec![2u32, 3, 5]),
        twist in 1u32..12,
        m in 0u32..4,
        lo in -20i64..150,
        width in 0i64..40,
    ) {
        prop_assume!(twist % p != 0);
        let r = tr_gr_module(ctx(p), twist, Truncation::Finite(m), StemWindow::new(lo, lo + width), Mode::Both).unwrap();
        prop_assert!(r.comparison.unwrap().is_match());
    }
}
