//! Structural properties of the generator families.

use std::collections::BTreeSet;

use closed_forms::{
    enumerate_families, family_torsion, hfp_generator_torsion, Coefficient, FamilyElement,
    FamilyParams, FamilyTag, Truncation,
};
use graded_core::{PrimeContext, StemWindow};
use proptest::prelude::*;

fn ctx(p: u32) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

fn truncations() -> Vec<Truncation> {
    vec![
        Truncation::Infinite,
        Truncation::Finite(0),
        Truncation::Finite(1),
        Truncation::Finite(2),
        Truncation::Finite(3),
    ]
}

fn twists(p: u32) -> impl Iterator<Item = u32> {
    (1..=8u32).filter(move |l| l % p != 0)
}

fn all(p: u32, twist: u32, trunc: Truncation, hi: i64) -> Vec<FamilyElement> {
    enumerate_families(ctx(p), twist, trunc, StemWindow::new(0, hi)).unwrap()
}

#[test]
fn components_share_a_bidegree() {
    for p in [2u32, 3, 5] {
        for twist in twists(p) {
            for trunc in truncations() {
                for el in all(p, twist, trunc, 300) {
                    assert!(!el.components.is_empty());
                    for c in &el.components {
                        assert_eq!(c.monomial.bidegree(&ctx(p)), el.bidegree, "{el}");
                        assert_eq!(c.level, c.monomial.level);
                    }
                    assert_eq!(el.components[0].coefficient, Coefficient::Known(1));
                    assert!(el.components[1..]
                        .iter()
                        .all(|c| c.coefficient == Coefficient::Unknown));
                }
            }
        }
    }
}

#[test]
fn leading_terms_are_distinct() {
    for p in [2u32, 3, 5] {
        for twist in twists(p) {
            for trunc in truncations() {
                let els = all(p, twist, trunc, 400);
                let mut seen = BTreeSet::new();
                let mut terms = BTreeSet::new();
                for el in &els {
                    let lead = el.leading();
                    assert!(
                        seen.insert((lead.level, lead.monomial.to_string())),
                        "repeated {el}"
                    );
                    // No monomial is shared between two elements at all.
                    for c in &el.components {
                        assert!(
                            terms.insert(c.monomial),
                            "{} occurs twice ({el})",
                            c.monomial
                        );
                    }
                }
            }
        }
    }
}

/// Every component is a generator of the homotopy fixed point `E∞`-page of
/// its level, and the torsion order of a family element is the largest
/// torsion order among its retained components.
#[test]
fn torsion_is_the_largest_component_torsion() {
    for p in [2u32, 3, 5] {
        for twist in twists(p) {
            for trunc in truncations() {
                for el in all(p, twist, trunc, 300) {
                    let max = el
                        .components
                        .iter()
                        .map(|c| {
                            hfp_generator_torsion(ctx(p), &c.monomial).unwrap_or_else(|| {
                                panic!("{el}: {} is not a generator", c.monomial)
                            })
                        })
                        .max()
                        .unwrap();
                    assert_eq!(el.torsion, max, "{el} under truncation {trunc}");
                }
            }
        }
    }
}

#[test]
fn truncation_keeps_low_levels() {
    for p in [2u32, 3] {
        for twist in twists(p) {
            for m in 0..=3u32 {
                let els = all(p, twist, Truncation::Finite(m), 300);
                assert!(els.iter().all(|el| el.params.n <= m));
                assert!(els
                    .iter()
                    .all(|el| !matches!(el.tag, FamilyTag::F | FamilyTag::G) || el.params.n == m));
                assert!(els
                    .iter()
                    .all(|el| el.components.iter().all(|c| c.level <= m)));
            }
            let els = all(p, twist, Truncation::Infinite, 300);
            assert!(els
                .iter()
                .all(|el| !matches!(el.tag, FamilyTag::F | FamilyTag::G)));
        }
    }
}

#[test]
fn empty_a_family_at_small_twist() {
    // p = 3, ℓ = 1, n = 1: 0 < j ≤ 1·2 − 3 is empty.
    let els = all(3, 1, Truncation::Infinite, 500);
    assert!(!els
        .iter()
        .any(|el| el.tag == FamilyTag::A && el.params.n == 1));
}

#[test]
fn level_one_f_family() {
    // p = 3, ℓ = 1, m = 1: λ₁ᵉσε^{(3)}μʲ with j > 2, j ≡ 1 mod 3, torsion 4.
    let els = all(3, 1, Truncation::Finite(1), 120);
    let f: Vec<_> = els.iter().filter(|el| el.tag == FamilyTag::F).collect();
    let js: BTreeSet<i64> = f.iter().map(|el| el.params.index).collect();
    assert_eq!(js, BTreeSet::from([4, 7, 10, 13, 16, 19]));
    assert!(f.iter().all(|el| el.torsion == 4));
    assert_eq!(
        f.len(),
        2 * js.len() - 1,
        "the top λ₁-multiple falls outside the window"
    );
}

#[test]
fn c_family_starts_at_level_one() {
    // At level 0 the page is v₁-torsion of order 1, so no class σε tⁱλ₁ with
    // 0 < i < p and torsion p − i exists there; the first C-classes live at
    // level 1, e.g. p = 3, ℓ = 1: i = 1 (1 + 1 ≢ 0 mod 3), torsion 2.
    let els = all(3, 1, Truncation::Infinite, 100);
    let c: Vec<_> = els.iter().filter(|el| el.tag == FamilyTag::C).collect();
    assert!(c.iter().all(|el| el.params.n >= 1));
    let level1: Vec<_> = c.iter().filter(|el| el.params.n == 1).collect();
    assert_eq!(level1.len(), 2);
    assert!(level1
        .iter()
        .all(|el| el.params.index == 1 && el.torsion == 2));
    assert!(family_torsion(
        FamilyTag::C,
        ctx(3),
        FamilyParams {
            n: 0,
            twist: 1,
            r: 0,
            index: 1,
            e: 0
        },
        Truncation::Infinite
    )
    .is_err());
}

#[test]
fn window_is_respected() {
    for el in all(5, 2, Truncation::Finite(2), 250) {
        assert!((0..=250).contains(&el.bidegree.stem));
    }
    assert!(
        enumerate_families(ctx(3), 1, Truncation::Infinite, StemWindow::empty())
            .unwrap()
            .is_empty()
    );
}

proptest! {
    #[test]
    fn enumerated_elements_satisfy_their_constraints(p in prop::sample::select(vec![2u32, 3, 5]), twist in 1u32..12, m in 0u32..4, finite in any::<bool>()) {
        prop_assume!(twist % p != 0);
        let trunc = if finite { Truncation::Finite(m) } else { Truncation::Infinite };
        for el in all(p, twist, trunc, 200) {
            prop_assert_eq!(family_torsion(el.tag, ctx(p), el.params, trunc).unwrap(), el.torsion);
            prop_assert!(el.torsion > 0);
        }
    }

    #[test]
    fn truncation_never_raises_torsion(p in prop::sample::select(vec![2u32, 3]), twist in 1u32..8, m in 0u32..3) {
        prop_assume!(twist % p != 0);
        for el in all(p, twist, Truncation::Finite(m), 200) {
            if let Ok(full) = family_torsion(el.tag, ctx(p), el.params, Truncation::Infinite) {
                prop_assert!(el.torsion <= full);
            }
        }
    }
}

#[test]
fn level_one_bottom_class_is_a_generator() {
    // σε^{(ℓp)}λ₁uᵉ (μ-exponent 0) at level 1 heads an E or D family.
    let c = ctx(3);
    let x = FamilyParams {
        n: 1,
        twist: 1,
        r: 1,
        index: 0,
        e: 0,
    };
    assert_eq!(
        family_torsion(FamilyTag::E, c, x, Truncation::Finite(1)).unwrap(),
        3
    );
    assert_eq!(
        family_torsion(FamilyTag::E, c, x, Truncation::Finite(2)).unwrap(),
        6
    );
    let x2 = FamilyParams { twist: 2, ..x };
    assert_eq!(
        family_torsion(FamilyTag::D, c, x2, Truncation::Infinite).unwrap(),
        3
    );
    // At level 2 the same kind of class is a component of a level-1 family.
    let y = FamilyParams {
        n: 2,
        twist: 1,
        r: 2,
        index: 0,
        e: 0,
    };
    assert!(family_torsion(FamilyTag::E, c, y, Truncation::Infinite).is_err());
    let labels: Vec<String> = all(3, 1, Truncation::Finite(2), 30)
        .iter()
        .map(|e| e.to_string())
        .collect();
    assert!(
        labels
            .iter()
            .any(|l| l.starts_with("E_1,1: σε[1·p^1]·λ₁·u1 ∔")),
        "{labels:?}"
    );
}
