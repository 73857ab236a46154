//! Incremental echelon bases with optional history tracking.

use std::collections::HashMap;

use crate::{Fp, SparseVec};

/// An echelon basis of a subspace: stored rows have pairwise distinct
/// leading indices, and each row's leading coefficient is normalised to 1.
///
/// When history is tracked, every inserted vector carries a *history*
/// vector (usually a unit vector naming it) and every stored row records the
/// corresponding combination of histories, so that a reduction to zero
/// yields an explicit linear dependency.
#[derive(Debug, Clone)]
pub struct Echelon {
    fp: Fp,
    rows: Vec<SparseVec>,
    history: Option<Vec<SparseVec>>,
    pivots: HashMap<u32, usize>,
}

impl Echelon {
    pub fn new(fp: Fp) -> Self {
        Self {
            fp,
            rows: Vec::new(),
            history: None,
            pivots: HashMap::new(),
        }
    }

    pub fn with_history(fp: Fp) -> Self {
        Self {
            history: Some(Vec::new()),
            ..Self::new(fp)
        }
    }

    pub fn fp(&self) -> &Fp {
        &self.fp
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// History of the `k`-th stored row (only when tracking history).
    pub fn row_history(&self, k: usize) -> Option<&SparseVec> {
        self.history.as_ref().map(|h| &h[k])
    }

    /// Leading indices of the stored rows.
    pub fn pivot_indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows
            .iter()
            .map(|r| r.lead().expect("stored rows are nonzero").0)
    }

    pub fn has_pivot(&self, i: u32) -> bool {
        self.pivots.contains_key(&i)
    }

    /// Reduce `v` by leading terms until its lead is not a pivot.  The
    /// result is zero iff `v` lies in the span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((i, c)) = v.lead() {
            match self.pivots.get(&i) {
                Some(&k) => v.axpy(self.fp.neg(c), &self.rows[k], &self.fp),
                None => break,
            }
        }
        v
    }

    /// Like [`Echelon::reduce`], also updating the history `h` of `v`:
    /// on return `v_out = v_in − Σ c_k row_k` and `h_out = h_in − Σ c_k hist_k`.
    pub fn reduce_with_history(
        &self,
        mut v: SparseVec,
        mut h: SparseVec,
    ) -> (SparseVec, SparseVec) {
        let hist = self
            .history
            .as_ref()
            .expect("echelon does not track history");
        while let Some((i, c)) = v.lead() {
            match self.pivots.get(&i) {
                Some(&k) => {
                    let m = self.fp.neg(c);
                    v.axpy(m, &self.rows[k], &self.fp);
                    h.axpy(m, &hist[k], &self.fp);
                }
                None => break,
            }
        }
        (v, h)
    }

    /// Fully reduce `v`: eliminate every entry that sits on a pivot.  Used
    /// to obtain canonical coset representatives.
    pub fn reduce_fully(&self, v: SparseVec) -> SparseVec {
        let mut v = self.reduce(v);
        let mut done = SparseVec::zero();
        while let Some((i, c)) = v.lead() {
            match self.pivots.get(&i) {
                Some(&k) => v.axpy(self.fp.neg(c), &self.rows[k], &self.fp),
                None => {
                    done.axpy(1, &SparseVec::single(i, c, &self.fp), &self.fp);
                    v.axpy(self.fp.neg(c), &SparseVec::single(i, 1, &self.fp), &self.fp);
                }
            }
        }
        done
    }

    /// Insert `v`; returns the row index if it was independent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        debug_assert!(self.history.is_none(), "use insert_with_history");
        let v = self.reduce(v);
        self.push_row(v, None)
    }

    /// Insert `v` with history `h`.  Returns `Ok(row)` if independent and
    /// `Err(dependency)` otherwise, where `dependency` is the reduced
    /// history: a combination of histories whose vectors sum to zero.
    pub fn insert_with_history(&mut self, v: SparseVec, h: SparseVec) -> Result<usize, SparseVec> {
        let (v, h) = self.reduce_with_history(v, h);
        if v.is_zero() {
            return Err(h);
        }
        Ok(self.push_row(v, Some(h)).expect("nonzero row"))
    }

    fn push_row(&mut self, mut v: SparseVec, h: Option<SparseVec>) -> Option<usize> {
        let (i, c) = v.lead()?;
        let ci = self.fp.inv(c);
        v.scale(ci, &self.fp);
        let k = self.rows.len();
        self.rows.push(v);
        if let Some(hist) = self.history.as_mut() {
            let mut h = h.unwrap_or_default();
            h.scale(ci, &self.fp);
            hist.push(h);
        }
        self.pivots.insert(i, k);
        Some(k)
    }

    /// Forget all recorded histories (they become zero), keeping the rows.
    /// Useful when the same span is reused for a new round of dependency
    /// tracking.
    pub fn clear_history(&mut self) {
        if let Some(hist) = self.history.as_mut() {
            for h in hist.iter_mut() {
                *h = SparseVec::zero();
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}
