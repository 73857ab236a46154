//! Public operations: kernels, solving, images and subquotients.

use serde::{Deserialize, Serialize};

use crate::{Echelon, Fp, FpMatrix, LinalgError, SparseVec};

/// Matrices with at most this many cells are eliminated densely by default.
pub const DENSE_THRESHOLD: usize = 64 * 64;

/// Choice of elimination back end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Dense below [`DENSE_THRESHOLD`] cells, sparse above.
    #[default]
    Auto,
    Dense,
    Sparse,
}

impl Strategy {
    fn use_dense(self, m: &FpMatrix) -> bool {
        match self {
            Strategy::Auto => m.rows() * m.cols() <= DENSE_THRESHOLD,
            Strategy::Dense => true,
            Strategy::Sparse => false,
        }
    }
}

/// Rank of a matrix.
pub fn rank(m: &FpMatrix) -> usize {
    if Strategy::Auto.use_dense(m) {
        return m.to_dense().rank();
    }
    let mut e = Echelon::new(m.field());
    for c in m.columns() {
        e.insert(c);
    }
    e.rank()
}

/// Basis of `{v : m·v = 0}`; its size is `cols − rank(m)`.
pub fn kernel_basis(m: &FpMatrix) -> Vec<Vec<u32>> {
    kernel_basis_with(m, Strategy::Auto)
}

pub fn kernel_basis_with(m: &FpMatrix, strategy: Strategy) -> Vec<Vec<u32>> {
    if strategy.use_dense(m) {
        return m.to_dense().kernel_basis();
    }
    // Column elimination with history: every dependency among the columns
    // is a kernel vector, and the dependencies found this way are
    // independent (each involves a column absent from all earlier ones).
    let mut e = Echelon::with_history(m.field());
    let mut out = Vec::new();
    for (j, c) in m.columns().into_iter().enumerate() {
        if let Err(dep) = e.insert_with_history(c, SparseVec::unit(j as u32)) {
            out.push(dep.to_dense(m.cols()));
        }
    }
    out
}

/// A basis of the column space, as sparse vectors indexed by row.
pub fn image_basis(m: &FpMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::new(m.field());
    let mut out = Vec::new();
    for c in m.columns() {
        if e.insert(c.clone()).is_some() {
            out.push(c);
        }
    }
    out
}

/// Find `x` with `m·x = rhs`, or `None` if the system is inconsistent.
pub fn solve(m: &FpMatrix, rhs: &[u32]) -> Result<Option<Vec<u32>>, LinalgError> {
    solve_with(m, rhs, Strategy::Auto)
}

pub fn solve_with(
    m: &FpMatrix,
    rhs: &[u32],
    strategy: Strategy,
) -> Result<Option<Vec<u32>>, LinalgError> {
    if rhs.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    if strategy.use_dense(m) {
        return Ok(m.to_dense().solve(rhs));
    }
    let fp = m.field();
    let mut e = Echelon::with_history(fp.clone());
    for (j, c) in m.columns().into_iter().enumerate() {
        let _ = e.insert_with_history(c, SparseVec::unit(j as u32));
    }
    // rhs − Σ c_k row_k = 0 with row_k = Σ hist_k  ⇒  rhs = Σ (−h)_j col_j.
    let (rem, h) = e.reduce_with_history(SparseVec::from_dense(rhs, &fp), SparseVec::zero());
    if !rem.is_zero() {
        return Ok(None);
    }
    let mut x = h.to_dense(m.cols());
    for v in &mut x {
        *v = fp.neg(*v);
    }
    Ok(Some(x))
}

/// A basis of `span(numerator) / span(denominator)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubquotientBasis {
    pub ambient_dim: usize,
    /// Vectors independent modulo `relations`, completing them to a spanning
    /// set of the numerator.
    pub representatives: Vec<Vec<u32>>,
    /// A basis of the denominator.
    pub relations: Vec<Vec<u32>>,
}

impl SubquotientBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// Compute a basis of `span(num)/span(den)`; the denominator must lie in
/// the span of the numerator.
pub fn subquotient(
    p: u32,
    ambient_dim: usize,
    numerator: &[Vec<u32>],
    denominator: &[Vec<u32>],
) -> Result<SubquotientBasis, LinalgError> {
    let fp = Fp::new(p)?;
    for v in numerator.iter().chain(denominator) {
        if v.len() != ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: ambient_dim,
                got: v.len(),
            });
        }
    }
    let mut num = Echelon::new(fp.clone());
    for v in numerator {
        num.insert(SparseVec::from_dense(v, &fp));
    }
    let mut e = Echelon::new(fp.clone());
    let mut relations = Vec::new();
    for (index, v) in denominator.iter().enumerate() {
        let s = SparseVec::from_dense(v, &fp);
        if !num.contains(&s) {
            return Err(LinalgError::NotContained { index });
        }
        if e.insert(s.clone()).is_some() {
            relations.push(s.to_dense(ambient_dim));
        }
    }
    let mut representatives = Vec::new();
    for v in numerator {
        let r = e.reduce(SparseVec::from_dense(v, &fp));
        if !r.is_zero() {
            e.insert(r.clone());
            representatives.push(r.to_dense(ambient_dim));
        }
    }
    Ok(SubquotientBasis {
        ambient_dim,
        representatives,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both() -> [Strategy; 2] {
        [Strategy::Dense, Strategy::Sparse]
    }

    #[test]
    fn identity_kernel_is_trivial() {
        let m = FpMatrix::identity(3, 2).unwrap();
        for s in both() {
            assert!(kernel_basis_with(&m, s).is_empty());
        }
    }

    #[test]
    fn zero_kernel_is_everything() {
        let m = FpMatrix::zeros(3, 2, 2).unwrap();
        for s in both() {
            assert_eq!(kernel_basis_with(&m, s).len(), 2);
        }
    }

    #[test]
    fn rank_one_kernel_over_f5() {
        let m = FpMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]).unwrap();
        for s in both() {
            let k = kernel_basis_with(&m, s);
            assert_eq!(k.len(), 1);
            assert_eq!(m.mul_vec(&k[0]).unwrap(), vec![0, 0]);
            // every kernel vector is a multiple of (3, 1)
            let v = &k[0];
            assert_eq!((v[0] + 5 - (3 * v[1]) % 5) % 5, 0);
        }
    }

    #[test]
    fn solve_examples() {
        let id = FpMatrix::identity(3, 2).unwrap();
        let z = FpMatrix::zeros(3, 2, 2).unwrap();
        let u = FpMatrix::from_rows(2, &[vec![1, 1], vec![0, 1]]).unwrap();
        for s in both() {
            assert_eq!(solve_with(&id, &[1, 2], s).unwrap(), Some(vec![1, 2]));
            assert_eq!(solve_with(&z, &[1, 0], s).unwrap(), None);
            assert_eq!(solve_with(&u, &[0, 1], s).unwrap(), Some(vec![1, 1]));
        }
        assert!(solve(&id, &[1]).is_err());
    }

    #[test]
    fn subquotient_examples() {
        let e1 = vec![1, 0];
        let e2 = vec![0, 1];
        let s = subquotient(3, 2, std::slice::from_ref(&e1), std::slice::from_ref(&e1)).unwrap();
        assert_eq!(s.dim(), 0);
        let s = subquotient(3, 2, &[e1.clone(), e2.clone()], &[]).unwrap();
        assert_eq!(s.dim(), 2);
        let s = subquotient(5, 2, &[e1.clone(), vec![1, 1]], std::slice::from_ref(&e1)).unwrap();
        assert_eq!(s.dim(), 1);
        // congruent to e₂ modulo span(e₁)
        assert_eq!(s.representatives[0][1], 1);
        assert!(matches!(
            subquotient(5, 2, std::slice::from_ref(&e1), std::slice::from_ref(&e2)),
            Err(LinalgError::NotContained { index: 0 })
        ));
    }
}
