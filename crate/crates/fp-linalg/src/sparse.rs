//! Sorted sparse vectors over 𝔽_p.

use serde::{Deserialize, Serialize};

use crate::Fp;

/// A sparse vector: strictly increasing indices with nonzero residues.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec {
    entries: Vec<(u32, u32)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The standard basis vector `e_i`.
    pub fn unit(i: u32) -> Self {
        Self {
            entries: vec![(i, 1)],
        }
    }

    /// `c · e_i` (empty if `c ≡ 0`).
    pub fn single(i: u32, c: u32, fp: &Fp) -> Self {
        let c = c % fp.p();
        if c == 0 {
            Self::zero()
        } else {
            Self {
                entries: vec![(i, c)],
            }
        }
    }

    /// Build from arbitrary `(index, value)` pairs: values are reduced,
    /// repeated indices summed and zeros dropped.
    pub fn from_pairs(mut pairs: Vec<(u32, i64)>, fp: &Fp) -> Self {
        pairs.sort_unstable_by_key(|&(i, _)| i);
        let mut entries: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            let v = fp.reduce(v);
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w = fp.add(*w, v),
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|&(_, v)| v != 0);
        Self { entries }
    }

    pub fn from_dense(v: &[u32], fp: &Fp) -> Self {
        let entries = v
            .iter()
            .enumerate()
            .filter_map(|(i, &x)| {
                let x = x % fp.p();
                (x != 0).then_some((i as u32, x))
            })
            .collect();
        Self { entries }
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for &(i, v) in &self.entries {
            out[i as usize] = v;
        }
        out
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero entries.
    #[inline]
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Leading (lowest-index) entry.
    #[inline]
    pub fn lead(&self) -> Option<(u32, u32)> {
        self.entries.first().copied()
    }

    pub fn get(&self, i: u32) -> u32 {
        match self.entries.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(k) => self.entries[k].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().copied()
    }

    /// Largest index present, if any.
    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|&(i, _)| i)
    }

    pub fn scale(&mut self, c: u32, fp: &Fp) {
        let c = c % fp.p();
        if c == 0 {
            self.entries.clear();
            return;
        }
        for e in &mut self.entries {
            e.1 = fp.mul(e.1, c);
        }
    }

    pub fn scaled(&self, c: u32, fp: &Fp) -> Self {
        let mut out = self.clone();
        out.scale(c, fp);
        out
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: u32, other: &SparseVec, fp: &Fp) {
        let c = c % fp.p();
        if c == 0 || other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.entries = other
                .entries
                .iter()
                .map(|&(i, v)| (i, fp.mul(v, c)))
                .collect();
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        let (xs, ys) = (&self.entries, &other.entries);
        while a < xs.len() && b < ys.len() {
            let (i, u) = xs[a];
            let (j, w) = ys[b];
            if i < j {
                out.push((i, u));
                a += 1;
            } else if j < i {
                out.push((j, fp.mul(w, c)));
                b += 1;
            } else {
                let s = fp.add(u, fp.mul(w, c));
                if s != 0 {
                    out.push((i, s));
                }
                a += 1;
                b += 1;
            }
        }
        out.extend_from_slice(&xs[a..]);
        out.extend(ys[b..].iter().map(|&(j, w)| (j, fp.mul(w, c))));
        self.entries = out;
    }

    /// Apply an index map; entries mapped to `None` are dropped.  The map
    /// must be injective on the support.
    pub fn reindex(&self, mut f: impl FnMut(u32) -> Option<u32>) -> Self {
        let mut entries: Vec<(u32, u32)> = self
            .entries
            .iter()
            .filter_map(|&(i, v)| f(i).map(|j| (j, v)))
            .collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self { entries }
    }

    /// Dot product with a dense vector.
    pub fn dot_dense(&self, v: &[u32], fp: &Fp) -> u32 {
        self.entries.iter().fold(0, |acc, &(i, x)| {
            fp.add(acc, fp.mul(x, v.get(i as usize).copied().unwrap_or(0)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_cancels() {
        let f = Fp::new(3).unwrap();
        let mut a = SparseVec::from_pairs(vec![(0, 1), (2, 2)], &f);
        let b = SparseVec::from_pairs(vec![(0, 1), (1, 1), (2, 2)], &f);
        a.axpy(2, &b, &f);
        // (1,0,2) + 2(1,1,2) = (0,2,0)
        assert_eq!(a, SparseVec::from_pairs(vec![(1, 2)], &f));
    }

    #[test]
    fn from_pairs_merges() {
        let f = Fp::new(5).unwrap();
        let v = SparseVec::from_pairs(vec![(3, 2), (1, 4), (3, 3)], &f);
        assert_eq!(v.iter().collect::<Vec<_>>(), vec![(1, 4)]);
    }

    #[test]
    fn dense_round_trip() {
        let f = Fp::new(7).unwrap();
        let d = vec![0, 3, 0, 6, 1];
        assert_eq!(SparseVec::from_dense(&d, &f).to_dense(5), d);
    }
}
