//! `(stem, line)` bidegrees.

use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// Lines that can carry classes in any output of this workspace.
pub const LINES: [i64; 4] = [-1, 0, 1, 2];

/// A bidegree `(d, s)`: stem `d` and line `s`; the weight is `(d + s)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub stem: i64,
    pub line: i64,
}

impl Bidegree {
    pub const fn new(stem: i64, line: i64) -> Self {
        Self { stem, line }
    }

    /// Motivic weight `(d + s)/2`; `None` if `d + s` is odd.
    pub fn weight(&self) -> Option<i64> {
        let t = self.stem + self.line;
        (t % 2 == 0).then_some(t / 2)
    }

    /// Shift the stem by `k` copies of `q` (the effect of `v₁ᵏ`).
    pub fn shift_v1(self, k: i64, q: i64) -> Self {
        Self::new(self.stem + k * q, self.line)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.stem + o.stem, self.line + o.line)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.stem - o.stem, self.line - o.line)
    }
}

impl std::fmt::Display for Bidegree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.stem, self.line)
    }
}
