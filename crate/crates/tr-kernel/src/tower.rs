//! Lazily created survival engines for the pages of a tower of levels.

use std::collections::BTreeMap;

use graded_core::{Bidegree, Monomial, PrimeContext};
use nygaard_engine::{LocalEngine, PageKind, Variant};
use rustc_hash::FxHashMap;

/// Survival engines for the homotopy fixed point, Tate and `μ`-inverted
/// pages at every level (the `μ`-inverted page of level `i` computes the
/// Tate construction of level `i + 1` in `μ`-inverted names).
#[derive(Debug)]
pub struct Tower {
    ctx: PrimeContext,
    twist: u32,
    engines: FxHashMap<(Variant, u32), LocalEngine>,
    layers: FxHashMap<(Variant, u32, Bidegree), BTreeMap<i64, Vec<Monomial>>>,
}

impl Tower {
    pub fn new(ctx: PrimeContext, twist: u32) -> Self {
        Self {
            ctx,
            twist,
            engines: FxHashMap::default(),
            layers: FxHashMap::default(),
        }
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn kind(&self, variant: Variant, level: u32) -> PageKind {
        PageKind::new(self.ctx, level, self.twist, variant)
    }

    pub fn engine(&mut self, variant: Variant, level: u32) -> &mut LocalEngine {
        let kind = self.kind(variant, level);
        self.engines
            .entry((variant, level))
            .or_insert_with(|| LocalEngine::new(kind))
    }

    /// Does `m` represent a non-zero class of `grˢ E∞` on the given page,
    /// with `s` its divisibility there?
    pub fn in_layer(&mut self, variant: Variant, m: &Monomial, s: i64) -> bool {
        let kind = self.kind(variant, m.level);
        kind.contains(m) && kind.divisibility(m) == s && self.engine(variant, m.level).survives(m)
    }

    /// Basis of `grˢ E∞` in bidegree `b` on the given page.
    pub fn layer(&mut self, variant: Variant, level: u32, b: Bidegree, s: i64) -> &[Monomial] {
        let key = (variant, level, b);
        if !self.layers.contains_key(&key) {
            let layers = self.engine(variant, level).survivors_by_divisibility(b);
            self.layers.insert(key, layers);
        }
        self.layers[&key].get(&s).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `v₁`-torsion order of a surviving homotopy fixed point monomial.
    pub fn hfp_torsion(&mut self, m: &Monomial) -> Option<u64> {
        let limit = self.ctx.geo(0, m.level as i64) as u64 + 1;
        self.engine(Variant::Hfp, m.level).torsion(m, limit)
    }

    /// Survivor anomalies reported by any engine (always empty for a
    /// consistent spectral sequence).
    pub fn anomalies(&self) -> usize {
        self.engines.values().map(|e| e.anomalies().len()).sum()
    }
}
