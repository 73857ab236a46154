//! Sparse matrices addressed by `(row, col)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{DenseMatrix, Fp, LinalgError, SparseVec};

/// A matrix over 𝔽_p stored as a sparse map `(row, col) → residue`.
///
/// Only nonzero, reduced residues are stored and the modulus is checked to
/// be prime at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<Self, LinalgError> {
        Fp::new(p)?;
        Ok(Self {
            p,
            rows,
            cols,
            entries: BTreeMap::new(),
        })
    }

    pub fn identity(p: u32, n: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.entries.insert((i, i), 1 % p);
        }
        m.entries.retain(|_, v| *v != 0);
        Ok(m)
    }

    /// Build from dense rows of (possibly negative) integers.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(p, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x)?;
            }
        }
        Ok(m)
    }

    /// Build from column vectors (all with `rows` coordinates).
    pub fn from_columns(p: u32, rows: usize, columns: &[SparseVec]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(p, rows, columns.len())?;
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter() {
                m.set(i as usize, j, v as i64)?;
            }
        }
        Ok(m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.p).expect("checked at construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) -> Result<(), LinalgError> {
        if row >= self.rows || col >= self.cols {
            return Err(LinalgError::OutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let v = value.rem_euclid(self.p as i64) as u32;
        if v == 0 {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
        Ok(())
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries.get(&(row, col)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Columns as sparse vectors indexed by row.
    pub fn columns(&self) -> Vec<SparseVec> {
        let fp = self.field();
        let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.cols];
        for (&(i, j), &v) in &self.entries {
            cols[j].push((i as u32, v as i64));
        }
        cols.into_iter()
            .map(|c| SparseVec::from_pairs(c, &fp))
            .collect()
    }

    /// Matrix–vector product with a dense vector of length `cols`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let fp = self.field();
        let mut out = vec![0; self.rows];
        for (&(i, j), &x) in &self.entries {
            out[i] = fp.add(out[i], fp.mul(x, v[j] % self.p));
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.field(), self.rows, self.cols);
        for (&(i, j), &v) in &self.entries {
            d.set(i, j, v);
        }
        d
    }
}
