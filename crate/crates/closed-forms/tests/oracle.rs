//! The closed-form `E∞`-pages against the survival engine.

use std::collections::BTreeMap;

use closed_forms::einf_closed;
use graded_core::{Bidegree, CyclicDecomposition, PrimeContext, StemWindow};
use nygaard_engine::{LocalEngine, PageKind, Variant};

fn multisets(d: &CyclicDecomposition, w: StemWindow) -> BTreeMap<Bidegree, Vec<(String, String)>> {
    let mut out: BTreeMap<Bidegree, Vec<(String, String)>> = BTreeMap::new();
    for g in d.generators() {
        if w.contains(g.bidegree.stem) {
            out.entry(g.bidegree)
                .or_default()
                .push((g.label.clone(), g.torsion.to_string()));
        }
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

/// Mismatches between closed form and engine for one page.
fn compare(
    p: u32,
    n: u32,
    twist: u32,
    variant: Variant,
    w: StemWindow,
    count: &mut usize,
) -> Vec<String> {
    let ctx = PrimeContext::new(p).unwrap();
    let kind = PageKind::from_index(ctx, n, twist, variant).unwrap();
    let closed = einf_closed(ctx, n, twist, variant, w).unwrap();
    let engine = LocalEngine::new(kind).decomposition(w).unwrap();
    let (a, b) = (multisets(&closed, w), multisets(&engine, w));
    let mut bad = Vec::new();
    *count += b.values().map(Vec::len).sum::<usize>();
    for k in a.keys().chain(b.keys()) {
        if a.get(k) != b.get(k) {
            bad.push(format!(
                "{kind} at {k}: closed {:?} engine {:?}",
                a.get(k),
                b.get(k)
            ));
        }
    }
    bad.sort();
    bad.dedup();
    let ds = closed.dim_map(&ctx, w);
    let de = LocalEngine::new(kind).dims(w);
    if ds != de {
        bad.push(format!("{kind}: dimension tables differ"));
    }
    bad
}

#[test]
fn closed_forms_match_engine() {
    let mut bad = Vec::new();
    let mut count = 0;
    for p in [2u32, 3, 5] {
        let pp = p as i64;
        for n in 0..=3u32 {
            if p == 5 && n == 3 {
                continue;
            }
            for twist in [0u32, 1, 2, 3, 4, 7] {
                for variant in Variant::ALL {
                    if variant == Variant::Muinv && n == 0 {
                        continue;
                    }
                    let span = 4 * pp.pow(n.min(2) + 1);
                    let w = StemWindow::new(-span, span + 2 * twist as i64 * pp.pow(n));
                    bad.extend(compare(p, n, twist, variant, w, &mut count));
                }
            }
        }
    }
    for b in bad.iter().take(40) {
        eprintln!("{b}");
    }
    assert!(bad.is_empty(), "{} mismatches", bad.len());
    // The grid is non-trivial: thousands of summands are compared.
    assert!(count > 2000, "only {count} generators compared");
}
