//! Invariants of the monomial calculus, decompositions and the
//! localisation lemma.

use graded_core::localization::{localization_rank, random_bounded_complex};
use graded_core::{Bidegree, CyclicDecomposition, Monomial, PrimeContext, StemWindow, Torsion};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn monomial(level: u32, twist: u32) -> impl Strategy<Value = Monomial> {
    (-20i64..20, -20i64..20, 0u8..2, 0u8..2)
        .prop_map(move |(t, mu, l, u)| Monomial::new(level, twist, t, mu, l, u))
}

fn decomposition() -> impl Strategy<Value = Vec<(i64, i64, Option<u64>)>> {
    prop::collection::vec((-30i64..30, -1i64..2, prop::option::of(1u64..6)), 0..12)
}

fn build(gens: &[(i64, i64, Option<u64>)], tag: &str) -> CyclicDecomposition {
    let mut d = CyclicDecomposition::new();
    for (k, &(stem, line, t)) in gens.iter().enumerate() {
        let tors = t.map_or(Torsion::Free, Torsion::Finite);
        d.add(format!("{tag}{k}"), Bidegree::new(stem, line), tors)
            .unwrap();
    }
    d
}

proptest! {
    #[test]
    fn bidegree_is_additive(p in prop::sample::select(vec![2u32, 3, 5]),
                            level in 0u32..3, twist in 0u32..5,
                            a in monomial(0, 0), b in monomial(0, 0)) {
        let ctx = PrimeContext::new(p).unwrap();
        let a = Monomial { level, twist: 0, ..a };
        let b = Monomial { level, twist: 0, ..b };
        if let Some(ab) = a.mul(&b).unwrap() {
            prop_assert_eq!(ab.bidegree(&ctx), a.bidegree(&ctx) + b.bidegree(&ctx));
        }
        // the twist label contributes a fixed shift
        let at = Monomial { twist, ..a };
        let shift = Monomial::unit(level, twist).bidegree(&ctx);
        prop_assert_eq!(at.bidegree(&ctx), a.bidegree(&ctx) + shift);
    }

    #[test]
    fn lines_and_parity(p in prop::sample::select(vec![2u32, 3, 5]), m in monomial(1, 3)) {
        let ctx = PrimeContext::new(p).unwrap();
        let b = m.bidegree(&ctx);
        prop_assert!((-1..=1).contains(&b.line));
        prop_assert!(b.weight().is_some());
    }

    #[test]
    fn dims_are_additive(p in prop::sample::select(vec![2u32, 3, 5]), a in decomposition(), b in decomposition()) {
        let ctx = PrimeContext::new(p).unwrap();
        let w = StemWindow::new(-10, 40);
        let (da, db) = (build(&a, "a"), build(&b, "b"));
        let sum = da.direct_sum(&db).unwrap();
        let (ma, mb, ms) = (da.dim_map(&ctx, w), db.dim_map(&ctx, w), sum.dim_map(&ctx, w));
        for (k, v) in &ms {
            prop_assert_eq!(*v, ma.get(k).copied().unwrap_or(0) + mb.get(k).copied().unwrap_or(0));
        }
        prop_assert_eq!(ms.values().sum::<u64>(), ma.values().sum::<u64>() + mb.values().sum::<u64>());
    }
}

#[test]
fn localization_matches_direct_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..20 {
        let p = [2, 3, 5][trial % 3];
        let n = rng.gen_range(0..4);
        let c = random_bounded_complex(&mut rng, p, n.max(1));
        let n = n.max(1) as u32;
        let lhs = localization_rank(&c, n).unwrap();
        assert_eq!(lhs, c.direct_localization_rank(), "trial {trial}");
    }
}
