//! The assembled tables.

use assembly::{
    betti_bound, k_mod_dims, max_twist, syntomic_dims, tc_eps_dims, tc_eps_dims_with, tc_mod_dims,
    tc_zp_dims, two_line_check, v1_kernel_cokernel, AssemblyParams,
};
use graded_core::{Bidegree, CyclicDecomposition, PrimeContext, StemWindow, Torsion, LINES};
use proptest::prelude::*;
use tr_kernel::Mode;

fn ctx(p: u32) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

#[test]
fn tc_eps_below_stem_one_is_tc_zp() {
    for p in [2u32, 3, 5] {
        let w = StemWindow::new(-10, 0);
        let eps = tc_eps_dims(ctx(p), StemWindow::new(-10, 60)).unwrap();
        assert_eq!(
            eps.dim_map(&ctx(p), w),
            tc_zp_dims(&ctx(p)).dim_map(&ctx(p), w)
        );
    }
}

#[test]
fn tc_eps_lines_and_line_two_labels() {
    for p in [2u32, 3, 5] {
        let eps = tc_eps_dims(ctx(p), StemWindow::new(-10, 120)).unwrap();
        for g in eps.generators() {
            assert!(LINES.contains(&g.bidegree.line), "{g:?}");
            if g.bidegree.line == 2 {
                assert_eq!(g.label, "∂λ₁");
            }
        }
    }
}

#[test]
fn tc_eps_stem_two_at_p3_comes_from_twist_one() {
    let c = ctx(3);
    let w = StemWindow::new(2, 2);
    let eps = tc_eps_dims(c, StemWindow::new(-10, 40)).unwrap();
    let tr = |keep: &dyn Fn(&str) -> bool| -> u64 {
        eps.filtered(|g| keep(&g.label))
            .dim_map(&c, w)
            .values()
            .sum()
    };
    let l1 = tr(&|l| l.starts_with("TR[ℓ=1]"));
    let others = tr(&|l| l.starts_with("TR[") && !l.starts_with("TR[ℓ=1]"));
    assert!(l1 > 0);
    assert_eq!(others, 0);
    let zp = tc_zp_dims(&c).dim_map(&c, w).values().sum::<u64>();
    let all = eps.dim_map(&c, w).values().sum::<u64>();
    assert_eq!(all, zp + l1);
}

#[test]
fn tc_eps_oracle_matches_closed() {
    for p in [2u32, 3] {
        let w = StemWindow::new(-5, 40);
        let a = tc_eps_dims(ctx(p), w).unwrap();
        let b = tc_eps_dims_with(ctx(p), w, Mode::Both).unwrap();
        assert_eq!(a.dim_map(&ctx(p), w), b.dim_map(&ctx(p), w), "p={p}");
        assert_eq!(a.torsion_multisets(w), b.torsion_multisets(w), "p={p}");
    }
}

#[test]
fn two_line_surjectivity() {
    for p in [2u32, 3, 5] {
        let r = two_line_check(ctx(p), StemWindow::new(-10, 300)).unwrap();
        assert!(r.passed(), "p={p}: {:?}", r.violations);
        assert!(r.classes_checked > 0);
    }
    let r = two_line_check(ctx(3), StemWindow::new(1, 0)).unwrap();
    assert!(r.passed() && r.classes_checked == 0);
}

#[test]
fn syntomic_is_independent_of_n() {
    let w = StemWindow::new(-5, 120);
    let tables: Vec<_> = (3..=5)
        .map(|n| syntomic_dims(&AssemblyParams::new(3, n, 1, w).unwrap()).unwrap())
        .collect();
    for t in &tables[1..] {
        assert_eq!(t.entries, tables[0].entries);
    }
    // k = 3 is allowed from n = 3 on, and agrees with n = 4.
    let a = syntomic_dims(&AssemblyParams::new(3, 3, 3, w).unwrap()).unwrap();
    let b = syntomic_dims(&AssemblyParams::new(3, 4, 3, w).unwrap()).unwrap();
    assert_eq!(a.entries, b.entries);
}

#[test]
fn tc_totals_are_syntomic_column_sums() {
    for (p, n, k) in [(3u32, 3u32, 1u64), (3, 4, 2), (5, 3, 4), (2, 4, 4)] {
        let par = AssemblyParams::new(p, n, k, StemWindow::new(-3, 90)).unwrap();
        let syn = syntomic_dims(&par).unwrap();
        let tc = tc_mod_dims(&par).unwrap();
        assert_eq!(tc.stem_totals(), syn.stem_totals());
        assert_eq!(tc.associated_graded, p == 2);
        // ∂ survives mod v₁ᵏ at stem −1.
        assert!(tc.get(-1, None) >= 1);
    }
}

#[test]
fn k_minus_tc_is_two_classes() {
    for (p, n, k) in [(3u32, 4u32, 1u64), (3, 4, 2), (3, 3, 1), (5, 3, 2)] {
        let par = AssemblyParams::new(p, n, k, StemWindow::new(-3, 80)).unwrap();
        let tc = tc_mod_dims(&par).unwrap().stem_totals();
        let kt = k_mod_dims(&par).unwrap().stem_totals();
        let top = (2 * p as i64 - 2) * k as i64 - 1;
        for (stem, &d) in &tc {
            let delta = kt[stem] as i64 - d as i64;
            let want = if *stem == -1 {
                -1
            } else if *stem == top {
                1
            } else {
                0
            };
            assert_eq!(delta, want, "p={p} n={n} k={k} stem {stem}");
        }
        assert_eq!(kt[&0], tc[&0]);
    }
}

#[test]
fn betti_examples() {
    assert_eq!(betti_bound(&ctx(3), 3), 3);
    assert_eq!(betti_bound(&ctx(3), 0), 3);
    assert_eq!(betti_bound(&ctx(2), 1), 4);
}

#[test]
fn twist_bound_covers_connectivity() {
    // Every twist beyond max_twist starts above the window.
    for hi in -3i64..50 {
        let w = StemWindow::new(-3, hi);
        assert!(2 * (max_twist(w) as i64 + 1) - 1 > hi);
    }
}

proptest! {
    /// On each cyclic summand, quotient minus kernel dimensions sum to `k`
    /// for a free summand and to 0 for a torsion summand.
    #[test]
    fn kernel_cokernel_rank_nullity(p in prop::sample::select(vec![2u32, 3, 5]), stem in -5i64..20, line in 0i64..2, r in prop::option::of(1u64..12), k in 1u64..10) {
        let c = ctx(p);
        let mut m = CyclicDecomposition::new();
        let torsion = r.map_or(Torsion::Free, Torsion::Finite);
        m.add("g", Bidegree::new(stem, line), torsion).unwrap();
        let w = StemWindow::new(-1000, 1000);
        let d = v1_kernel_cokernel(&c, &m, k, w);
        let coker: u64 = d.iter().filter(|(b, _)| b.line == line).map(|(_, x)| x).sum();
        let ker: u64 = d.iter().filter(|(b, _)| b.line == line + 1).map(|(_, x)| x).sum();
        let want = if r.is_none() { k as i64 } else { 0 };
        prop_assert_eq!(coker as i64 - ker as i64, want);
    }

    /// `b(d)` is the least `b` with `p^{b−2} ≥ ⌈(d+1)/(p−1)⌉ + 1`.
    #[test]
    fn betti_bound_is_minimal(p in prop::sample::select(vec![2u32, 3, 5, 7]), d in 0u64..100_000) {
        let b = betti_bound(&ctx(p), d);
        let x = (d + 1).div_ceil(p as u64 - 1) + 1;
        prop_assert!((p as u64).pow(b - 2) >= x);
        prop_assert!(b == 2 || (p as u64).pow(b - 3) < x);
    }
}
