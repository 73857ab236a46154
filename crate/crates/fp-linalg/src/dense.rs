//! Dense Gaussian elimination for small blocks.

use crate::Fp;

/// A dense row-major matrix over 𝔽_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    fp: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: DenseMatrix,
    pub pivot_cols: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(fp: Fp, rows: usize, cols: usize) -> Self {
        Self {
            fp,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.fp.p();
    }

    /// Append a column (used for augmented systems).
    pub fn with_column(&self, col: &[u32]) -> Self {
        let mut out = Self::zeros(self.fp.clone(), self.rows, self.cols + 1);
        for (i, &c) in col.iter().enumerate().take(self.rows) {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            out.set(i, self.cols, c);
        }
        out
    }

    /// Reduced row echelon form; pivots are chosen as the first nonzero
    /// entry scanning columns left to right.
    pub fn rref(&self) -> Rref {
        let fp = &self.fp;
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = fp.inv(m.get(r, c));
            for j in c..m.cols {
                let v = fp.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                let nf = fp.neg(f);
                for j in c..m.cols {
                    let v = fp.add(m.get(i, j), fp.mul(nf, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            pivot_cols,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivot_cols.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { matrix, pivot_cols } = self.rref();
        let fp = &self.fp;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (r, &c) in pivot_cols.iter().enumerate() {
                    v[c] = fp.neg(matrix.get(r, f));
                }
                v
            })
            .collect()
    }

    /// Solve `self · x = rhs`, returning one solution if any exists.
    pub fn solve(&self, rhs: &[u32]) -> Option<Vec<u32>> {
        let aug = self.with_column(rhs);
        let Rref { matrix, pivot_cols } = aug.rref();
        if pivot_cols.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivot_cols.iter().enumerate() {
            x[c] = matrix.get(r, self.cols);
        }
        Some(x)
    }
}
