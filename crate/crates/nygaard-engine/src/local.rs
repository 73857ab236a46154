//! Exact survival of individual monomials.
//!
//! Every stage differential sends a monomial to a scalar multiple of a
//! single monomial, and distinct monomials to distinct monomials.  Hence at
//! every page the cycles and boundaries are spanned by monomials, and a
//! monomial `x` survives a stage unless
//!
//! * it supports a non-zero differential onto a monomial still alive, or
//! * it is hit by a non-zero differential from a monomial still alive.
//!
//! This recursion involves only finitely many monomials per query and needs
//! no truncation of the page.

use std::collections::BTreeMap;

use graded_core::{Bidegree, CyclicDecomposition, Monomial, StemWindow, Torsion};
use rustc_hash::FxHashMap;

use crate::kind::{enumerate_piece, PageKind, Stage, StageImage};
use crate::EngineError;

/// Memoised survival oracle for one spectral sequence.
#[derive(Debug, Clone)]
pub struct LocalEngine {
    kind: PageKind,
    stages: Vec<Stage>,
    /// `alive[(s, m)]`: `m` represents a non-zero class at the start of
    /// stage `s` (stage `stages.len()` is `E∞`).
    memo: FxHashMap<(u8, Monomial), bool>,
    anomalies: Vec<(Monomial, Stage)>,
}

impl LocalEngine {
    pub fn new(kind: PageKind) -> Self {
        Self {
            stages: kind.stages(),
            kind,
            memo: FxHashMap::default(),
            anomalies: Vec::new(),
        }
    }

    pub fn kind(&self) -> &PageKind {
        &self.kind
    }

    /// Survivors for which a later stage formula was undefined.  Always empty
    /// for a consistent spectral sequence; the test-suite checks this.
    pub fn anomalies(&self) -> &[(Monomial, Stage)] {
        &self.anomalies
    }

    /// Divisibility bound used when listing survivors: every surviving
    /// monomial is `v₁ʰ` times a surviving monomial of height zero, with `h`
    /// below the largest torsion order, and height-zero survivors have
    /// divisibility at most the largest torsion order as well.
    fn search_cutoff(&self) -> i64 {
        2 * self.kind.max_torsion() + 2
    }

    /// Does `m` represent a non-zero class of `E∞`?
    pub fn survives(&mut self, m: &Monomial) -> bool {
        let s = self.stages.len();
        self.alive(s, m)
    }

    /// Does `m` represent a non-zero class at the start of stage `s`?
    pub fn alive(&mut self, s: usize, m: &Monomial) -> bool {
        if !self.kind.contains(m) {
            return false;
        }
        if s == 0 {
            return true;
        }
        if let Some(&v) = self.memo.get(&(s as u8, *m)) {
            return v;
        }
        let v = self.compute(s, m);
        self.memo.insert((s as u8, *m), v);
        v
    }

    fn compute(&mut self, s: usize, m: &Monomial) -> bool {
        let prev = s - 1;
        if !self.alive(prev, m) {
            return false;
        }
        let stage = self.stages[prev];
        match self.kind.image(stage, m) {
            StageImage::Term {
                coefficient,
                target,
            } if coefficient != 0 => {
                if self.alive(prev, &target) {
                    return false;
                }
            }
            StageImage::NotDivisible => {
                self.anomalies.push((*m, stage));
            }
            _ => {}
        }
        if let Some(src) = self.kind.preimage(stage, m) {
            if self.alive(prev, &src) {
                if let StageImage::Term { coefficient, .. } = self.kind.image(stage, &src) {
                    if coefficient != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `v₁`-height of a surviving monomial: the largest `h` such that
    /// `m / v₁ʰ` is a surviving monomial of the page.
    pub fn height(&mut self, m: &Monomial) -> Option<i64> {
        if !self.survives(m) {
            return None;
        }
        let mut h = 0;
        while self.survives(&m.times_v1(-(h + 1))) {
            h += 1;
        }
        Some(h)
    }

    /// Smallest `r ≥ 1` with `v₁ʳ m` not surviving, searching up to `limit`;
    /// `None` if `m` does not survive or the tower is longer than `limit`.
    pub fn torsion(&mut self, m: &Monomial, limit: u64) -> Option<u64> {
        if !self.survives(m) {
            return None;
        }
        (1..=limit).find(|&r| !self.survives(&m.times_v1(r as i64)))
    }

    /// Surviving monomials of `v₁`-divisibility below `cutoff` in bidegree
    /// `b`.
    pub fn survivors(&mut self, b: Bidegree, cutoff: i64) -> Vec<Monomial> {
        enumerate_piece(&self.kind, b, cutoff)
            .into_iter()
            .filter(|m| self.survives(m))
            .collect()
    }

    /// All surviving monomials in bidegree `b`, grouped by `v₁`-divisibility.
    pub fn survivors_by_divisibility(&mut self, b: Bidegree) -> BTreeMap<i64, Vec<Monomial>> {
        let mut out: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        for m in self.survivors(b, self.search_cutoff()) {
            out.entry(self.kind.divisibility(&m)).or_default().push(m);
        }
        out
    }

    /// Surviving monomials of `v₁`-height exactly `s` in bidegree `b`: a
    /// basis of the `s`-th layer of the `v₁`-adic filtration of `E∞` there.
    pub fn graded_layer(&mut self, b: Bidegree, s: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        let cutoff = s + self.search_cutoff();
        for m in enumerate_piece(&self.kind, b, cutoff) {
            if self.kind.divisibility(&m) >= s && self.height(&m) == Some(s) {
                out.push(m);
            }
        }
        out
    }

    /// The `E∞` module over a window: generators are the surviving monomials
    /// of height zero, their torsion is found by walking up the tower.
    pub fn decomposition(
        &mut self,
        window: StemWindow,
    ) -> Result<CyclicDecomposition, EngineError> {
        let limit = self.kind.max_torsion() as u64 + 1;
        let mut out = CyclicDecomposition::new();
        for stem in window.stems() {
            for line in graded_core::LINES {
                let b = Bidegree::new(stem, line);
                for m in self.graded_layer(b, 0) {
                    let torsion = match self.torsion(&m, limit) {
                        Some(r) => Torsion::Finite(r),
                        None => {
                            return Err(EngineError::Inconsistent {
                                at: b,
                                detail: format!("{m} has v₁-torsion above {limit}"),
                            })
                        }
                    };
                    out.add(m.to_string(), b, torsion)
                        .map_err(|e| EngineError::Input(e.to_string()))?;
                }
            }
        }
        Ok(out)
    }

    /// 𝔽_p-dimensions of `E∞` over a window.
    pub fn dims(&mut self, window: StemWindow) -> BTreeMap<Bidegree, u64> {
        let cutoff = self.search_cutoff();
        let mut out = BTreeMap::new();
        for stem in window.stems() {
            for line in graded_core::LINES {
                let b = Bidegree::new(stem, line);
                let n = self.survivors(b, cutoff).len() as u64;
                if n > 0 {
                    out.insert(b, n);
                }
            }
        }
        out
    }
}
