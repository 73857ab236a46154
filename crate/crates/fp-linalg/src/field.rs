//! Arithmetic in 𝔽_p for small primes.

use crate::LinalgError;

/// Trial-division primality test; moduli here are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field 𝔽_p with a precomputed inverse table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fp {
    p: u32,
    inv: Vec<u32>,
}

impl Fp {
    /// Largest modulus accepted; keeps the inverse table and products small.
    pub const MAX_PRIME: u32 = 1 << 16;

    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if !is_prime(p) || p > Self::MAX_PRIME {
            return Err(LinalgError::NotPrime(p));
        }
        let mut inv = vec![0u32; p as usize];
        for a in 1..p {
            inv[a as usize] = pow_mod(a, p - 2, p);
        }
        Ok(Self { p, inv })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0 && a < self.p);
        self.inv[a as usize]
    }
}

fn pow_mod(mut base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    base = acc as u32;
    base
}
