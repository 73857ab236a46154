//! The truncated page and its stage-by-stage linear algebra.

use std::collections::BTreeMap;

use fp_linalg::{Echelon, Fp, FpMatrix, SparseVec};
use graded_core::{Bidegree, Monomial, StemWindow};
use rustc_hash::FxHashMap;

use crate::einf::{extract_einf, EInfResult};
use crate::kind::{enumerate_piece, PageKind, Stage, StageImage};
use crate::EngineError;

/// Upper bound on the number of monomials a single page may hold.
const MONOMIAL_LIMIT: u64 = 60_000_000;

/// One bidegree of the truncated page.
#[derive(Debug, Clone)]
pub(crate) struct Piece {
    pub bidegree: Bidegree,
    /// Basis monomials, by decreasing `v₁`-divisibility.
    pub monos: Vec<Monomial>,
    pub index: FxHashMap<Monomial, u32>,
    /// Indices `≥ faithful_start` have divisibility below the faithful bound.
    pub faithful_start: u32,
}

impl Piece {
    pub fn is_faithful(&self, i: u32) -> bool {
        i >= self.faithful_start
    }
}

/// A truncated `E₂`-page together with the current cycles and boundaries
/// of every bidegree.
///
/// The page holds all monomials of `v₁`-divisibility below the cutoff `V`
/// in a padded stem range.  Each stage multiplies `v₁`-divisibility by at
/// most `Δ = 1 + p + ⋯ + p^L`, so every class of divisibility below
/// `V − Δ` (the *faithful region*) has its whole fate decided inside the
/// truncation; only such classes are reported.
#[derive(Debug, Clone)]
pub struct SsPage {
    kind: PageKind,
    fp: Fp,
    window: StemWindow,
    cutoff: i64,
    faithful: i64,
    pieces: Vec<Piece>,
    by_bidegree: FxHashMap<Bidegree, usize>,
    /// Spanning vectors of the cycles surviving every completed stage.
    cycles: Vec<Vec<SparseVec>>,
    /// Echelon basis of the accumulated boundaries (histories kept zero).
    boundaries: Vec<Echelon>,
    completed: usize,
    /// Monomials outside the faithful region for which the stage formula
    /// was undefined (a truncation artefact; they are treated as cycles).
    truncation_anomalies: usize,
}

/// Matrix of a stage differential between two pieces, in the `E₂` bases
/// (columns: source monomials, rows: target monomials).
#[derive(Debug, Clone)]
pub struct PieceMap {
    pub source: Bidegree,
    pub target: Bidegree,
    pub matrix: FpMatrix,
}

/// Build the truncated `E₂`-page of `kind` adequate for reporting the
/// stems of `window`, using `v₁`-cutoff `cutoff`.
pub fn build_page(kind: PageKind, window: StemWindow, cutoff: i64) -> Result<SsPage, EngineError> {
    if cutoff < 1 {
        return Err(EngineError::Input(format!(
            "the v₁ cutoff must be ≥ 1, got {cutoff}"
        )));
    }
    if window.is_empty() {
        return Err(EngineError::Input(format!(
            "empty stem window [{}, {}]",
            window.lo, window.hi
        )));
    }
    let ctx = kind.ctx;
    let q = ctx.q();
    let faithful = (cutoff - kind.max_torsion()).max(0);
    let lo = window.lo - q - 2;
    let hi = window.hi + (faithful + 1) * q + 2;
    let per_stem = 4 * (cutoff as u64 + cutoff as u64 / ctx.p() as u64 + 1);
    let estimate = per_stem.saturating_mul((hi - lo + 1) as u64);
    if estimate > MONOMIAL_LIMIT {
        return Err(EngineError::Resource {
            estimate,
            limit: MONOMIAL_LIMIT,
        });
    }
    let fp = Fp::new(ctx.p()).map_err(|e| EngineError::Input(e.to_string()))?;
    let mut pieces = Vec::new();
    let mut by_bidegree = FxHashMap::default();
    for stem in lo..=hi {
        for line in graded_core::LINES {
            let b = Bidegree::new(stem, line);
            let monos = enumerate_piece(&kind, b, cutoff);
            if monos.is_empty() {
                continue;
            }
            let faithful_start = monos
                .iter()
                .position(|m| kind.divisibility(m) < faithful)
                .unwrap_or(monos.len()) as u32;
            let index = monos
                .iter()
                .enumerate()
                .map(|(i, m)| (*m, i as u32))
                .collect();
            by_bidegree.insert(b, pieces.len());
            pieces.push(Piece {
                bidegree: b,
                monos,
                index,
                faithful_start,
            });
        }
    }
    let cycles = pieces
        .iter()
        .map(|pc| (0..pc.monos.len() as u32).map(SparseVec::unit).collect())
        .collect();
    let boundaries = pieces
        .iter()
        .map(|_| Echelon::with_history(fp.clone()))
        .collect();
    Ok(SsPage {
        kind,
        fp,
        window,
        cutoff,
        faithful,
        pieces,
        by_bidegree,
        cycles,
        boundaries,
        completed: 0,
        truncation_anomalies: 0,
    })
}

impl SsPage {
    pub fn kind(&self) -> &PageKind {
        &self.kind
    }

    pub fn window(&self) -> StemWindow {
        self.window
    }

    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// Classes of `v₁`-divisibility below this bound are faithful.
    pub fn faithful_bound(&self) -> i64 {
        self.faithful
    }

    /// Number of stages already run.
    pub fn completed_stages(&self) -> usize {
        self.completed
    }

    pub fn next_stage(&self) -> Option<Stage> {
        self.kind.stages().get(self.completed).copied()
    }

    pub fn truncation_anomalies(&self) -> usize {
        self.truncation_anomalies
    }

    /// Total number of `E₂` monomials held.
    pub fn size(&self) -> usize {
        self.pieces.iter().map(|p| p.monos.len()).sum()
    }

    /// The `E₂` basis of a bidegree (empty if outside the truncation).
    pub fn basis(&self, b: Bidegree) -> &[Monomial] {
        self.by_bidegree
            .get(&b)
            .map(|&i| self.pieces[i].monos.as_slice())
            .unwrap_or(&[])
    }

    /// Dimension of the current page (cycles modulo boundaries) at `b`,
    /// over the whole truncation (faithful or not).
    pub fn current_dim(&self, b: Bidegree) -> usize {
        match self.by_bidegree.get(&b) {
            None => 0,
            Some(&i) => {
                let mut e = Echelon::new(self.fp.clone());
                for z in &self.cycles[i] {
                    e.insert(z.clone());
                }
                e.rank() - self.boundaries[i].rank()
            }
        }
    }

    /// Stems whose faithful classes are computed exactly: the padding below
    /// the window lacks the targets of its differentials, and the padding
    /// above lacks their sources.
    pub fn is_trusted(&self, stem: i64) -> bool {
        let q = self.kind.ctx.q();
        stem >= self.window.lo - q && stem <= self.window.hi + self.faithful * q
    }

    pub(crate) fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub(crate) fn piece_index(&self, b: Bidegree) -> Option<usize> {
        self.by_bidegree.get(&b).copied()
    }

    pub(crate) fn cycles(&self, i: usize) -> &[SparseVec] {
        &self.cycles[i]
    }

    pub(crate) fn boundary(&self, i: usize) -> &Echelon {
        &self.boundaries[i]
    }

    pub(crate) fn fp(&self) -> &Fp {
        &self.fp
    }

    fn check_order(&self, stage: Stage) -> Result<(), EngineError> {
        if self.next_stage() != Some(stage) {
            return Err(EngineError::StageOrder {
                requested: stage.to_string(),
                completed: self.completed,
            });
        }
        Ok(())
    }

    /// Image of one monomial of piece `src` under `stage`, as an index of
    /// piece `tgt`; `Ok(None)` when it is zero or leaves the truncation.
    fn image_entry(
        &self,
        stage: Stage,
        src: usize,
        i: u32,
        tgt: Option<usize>,
    ) -> Result<Option<(u32, u32)>, Option<()>> {
        let piece = &self.pieces[src];
        match self.kind.image(stage, &piece.monos[i as usize]) {
            StageImage::Zero => Ok(None),
            StageImage::NotDivisible => Err(
                if piece.is_faithful(i) && self.is_trusted(piece.bidegree.stem) {
                    Some(())
                } else {
                    None
                },
            ),
            StageImage::Term {
                coefficient,
                target,
            } => {
                if coefficient == 0 {
                    return Ok(None);
                }
                let j = tgt.and_then(|t| self.pieces[t].index.get(&target).copied());
                Ok(j.map(|j| (j, coefficient)))
            }
        }
    }

    /// Run the next stage: replace the cycles of every bidegree by those
    /// whose differential vanishes modulo the boundaries of the target, and
    /// enlarge the boundaries by the image.
    pub fn apply_stage(&mut self, stage: Stage) -> Result<(), EngineError> {
        self.check_order(stage)?;
        let shift = Bidegree::new(-1, 1);
        for src in 0..self.pieces.len() {
            let tgt = self.piece_index(self.pieces[src].bidegree + shift);
            let zs = std::mem::take(&mut self.cycles[src]);
            let mut images = Vec::with_capacity(zs.len());
            for z in &zs {
                let mut pairs: Vec<(u32, i64)> = Vec::new();
                for (i, c) in z.iter() {
                    match self.image_entry(stage, src, i, tgt) {
                        Ok(None) => {}
                        Ok(Some((j, coef))) => pairs.push((j, self.fp.mul(c, coef) as i64)),
                        Err(Some(())) => {
                            return Err(EngineError::Inconsistent {
                                at: self.pieces[src].bidegree,
                                detail: format!(
                                    "{} reached stage {stage} without the required divisibility",
                                    self.pieces[src].monos[i as usize]
                                ),
                            })
                        }
                        Err(None) => self.truncation_anomalies += 1,
                    }
                }
                images.push(SparseVec::from_pairs(pairs, &self.fp));
            }
            let Some(t) = tgt else {
                self.cycles[src] = zs;
                continue;
            };
            let echelon = &mut self.boundaries[t];
            let mut new_cycles = Vec::with_capacity(zs.len());
            for (k, img) in images.into_iter().enumerate() {
                if img.is_zero() {
                    new_cycles.push(zs[k].clone());
                    continue;
                }
                if let Err(dep) = echelon.insert_with_history(img, SparseVec::unit(k as u32)) {
                    let mut z = SparseVec::zero();
                    for (j, c) in dep.iter() {
                        z.axpy(c, &zs[j as usize], &self.fp);
                    }
                    if !z.is_zero() {
                        new_cycles.push(z);
                    }
                }
            }
            echelon.clear_history();
            self.cycles[src] = new_cycles;
        }
        self.completed += 1;
        Ok(())
    }
}

/// Matrices of the stage differential `stage` on `E₂` monomials, for every
/// pair of pieces it connects.  Monomials on which the formula is undefined
/// (they cannot survive to this stage) map to zero.  The stage must be the
/// next one to run on `page`.
pub fn stage_differential(page: &SsPage, stage: Stage) -> Result<Vec<PieceMap>, EngineError> {
    page.check_order(stage)?;
    let shift = Bidegree::new(-1, 1);
    let mut out = Vec::new();
    for (src, piece) in page.pieces.iter().enumerate() {
        let Some(tgt) = page.piece_index(piece.bidegree + shift) else {
            continue;
        };
        let mut cols: BTreeMap<usize, Vec<(usize, u32)>> = BTreeMap::new();
        for i in 0..piece.monos.len() as u32 {
            if let Ok(Some((j, c))) = page.image_entry(stage, src, i, Some(tgt)) {
                cols.entry(i as usize).or_default().push((j as usize, c));
            }
        }
        if cols.is_empty() {
            continue;
        }
        let mut m = FpMatrix::zeros(
            page.kind.ctx.p(),
            page.pieces[tgt].monos.len(),
            piece.monos.len(),
        )
        .map_err(|e| EngineError::Input(e.to_string()))?;
        for (i, entries) in cols {
            for (j, c) in entries {
                m.set(j, i, c as i64)
                    .map_err(|e| EngineError::Input(e.to_string()))?;
            }
        }
        out.push(PieceMap {
            source: piece.bidegree,
            target: page.pieces[tgt].bidegree,
            matrix: m,
        });
    }
    Ok(out)
}

/// Run all remaining stages and extract the `E∞` module on the window.
pub fn run_to_einf(mut page: SsPage) -> Result<EInfResult, EngineError> {
    while let Some(stage) = page.next_stage() {
        page.apply_stage(stage)?;
    }
    extract_einf(&page)
}
