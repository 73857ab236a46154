//! The prime and the arithmetic conventions derived from it.

use serde::{Deserialize, Serialize};

use crate::GradedError;

/// The prime `p`, together with helpers for the sums and valuations that
/// appear in torsion orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeContext {
    p: u32,
}

impl PrimeContext {
    pub fn new(p: u32) -> Result<Self, GradedError> {
        if !fp_linalg::is_prime(p) {
            return Err(GradedError::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn pi(&self) -> i64 {
        self.p as i64
    }

    /// Stem of `v₁`, `q = 2p − 2`.
    #[inline]
    pub fn q(&self) -> i64 {
        2 * self.pi() - 2
    }

    /// `pᵉ` (`e ≥ 0`).
    #[inline]
    pub fn pow(&self, e: u32) -> i64 {
        self.pi().checked_pow(e).expect("p-power overflow")
    }

    /// `p^lo + p^{lo+1} + ⋯ + p^hi`, which is `0` whenever `hi < lo`.
    ///
    /// Every torsion order in the theory is built from these sums; in
    /// particular `geo(0, n−1)` is `1 + ⋯ + p^{n−1}` (zero for `n = 0`) and
    /// `geo(1, k)` is `p + ⋯ + pᵏ` (zero for `k = 0`).
    pub fn geo(&self, lo: i64, hi: i64) -> i64 {
        if hi < lo {
            return 0;
        }
        (lo.max(0)..=hi).map(|e| self.pow(e as u32)).sum()
    }

    /// p-adic valuation; `None` for zero.
    pub fn vp(&self, x: i64) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let mut x = x.abs();
        let mut v = 0;
        while x % self.pi() == 0 {
            x /= self.pi();
            v += 1;
        }
        Some(v)
    }

    /// Whether `p^e` divides `x` (always true for `x = 0`).
    pub fn divides_pow(&self, e: u32, x: i64) -> bool {
        x.rem_euclid(self.pow(e)) == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sums() {
        let c = PrimeContext::new(3).unwrap();
        assert_eq!(c.geo(0, 0), 1);
        assert_eq!(c.geo(0, 2), 13);
        assert_eq!(c.geo(1, 2), 12);
        assert_eq!(c.geo(1, 0), 0);
        assert_eq!(c.geo(0, -1), 0);
        assert_eq!(c.q(), 4);
    }

    #[test]
    fn valuations() {
        let c = PrimeContext::new(2).unwrap();
        assert_eq!(c.vp(12), Some(2));
        assert_eq!(c.vp(-8), Some(3));
        assert_eq!(c.vp(0), None);
        assert!(PrimeContext::new(6).is_err());
    }
}
