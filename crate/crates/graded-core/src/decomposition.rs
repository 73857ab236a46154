//! Cyclic decompositions of graded 𝔽_p[v₁]-modules.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Bidegree, DimTable, GradedError, PrimeContext, StemWindow};

/// The `v₁`-torsion order of a cyclic summand: `Finite(r)` means
/// `v₁^{r−1} g ≠ 0 = v₁^r g`; `Free` is the explicit sentinel for 𝔽_p[v₁].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Torsion {
    Finite(u64),
    Free,
}

impl Torsion {
    /// Does `v₁ʲ g` survive?
    pub fn survives(&self, j: u64) -> bool {
        match self {
            Torsion::Finite(r) => j < *r,
            Torsion::Free => true,
        }
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            Torsion::Finite(r) => Some(*r),
            Torsion::Free => None,
        }
    }

    /// Truncate to at most `cap` (used when a window only sees `cap` steps
    /// of an orbit).
    pub fn capped(&self, cap: u64) -> u64 {
        match self {
            Torsion::Finite(r) => (*r).min(cap),
            Torsion::Free => cap,
        }
    }
}

impl std::fmt::Display for Torsion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Torsion::Finite(r) => write!(f, "{r}"),
            Torsion::Free => write!(f, "inf"),
        }
    }
}

impl Serialize for Torsion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Torsion::Finite(r) => s.serialize_u64(*r),
            Torsion::Free => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Torsion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(r) => Ok(Torsion::Finite(r)),
            Raw::S(s) if s == "inf" => Ok(Torsion::Free),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad torsion {s:?}"))),
        }
    }
}

/// One cyclic summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub bidegree: Bidegree,
    pub torsion: Torsion,
}

/// Torsion orders of the generators, grouped by bidegree and sorted.
pub type TorsionMultisets = BTreeMap<Bidegree, Vec<Torsion>>;

/// A graded 𝔽_p[v₁]-module presented as `⊕ 𝔽_p[v₁]/(v₁^{r_g}) · g`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicDecomposition {
    entries: Vec<Generator>,
    #[serde(skip)]
    labels: HashSet<String>,
}

impl CyclicDecomposition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_generators(gens: impl IntoIterator<Item = Generator>) -> Result<Self, GradedError> {
        let mut d = Self::new();
        for g in gens {
            d.push(g)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, g: Generator) -> Result<(), GradedError> {
        if !self.labels.insert(g.label.clone()) {
            return Err(GradedError::DuplicateLabel(g.label));
        }
        self.entries.push(g);
        Ok(())
    }

    pub fn add(
        &mut self,
        label: impl Into<String>,
        bidegree: Bidegree,
        torsion: Torsion,
    ) -> Result<(), GradedError> {
        self.push(Generator {
            label: label.into(),
            bidegree,
            torsion,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.entries
    }

    /// Direct sum; labels must stay unique.
    pub fn direct_sum(
        &self,
        other: &CyclicDecomposition,
    ) -> Result<CyclicDecomposition, GradedError> {
        let mut out = self.clone();
        for g in other.generators() {
            out.push(g.clone())?;
        }
        Ok(out)
    }

    /// Rebuild the label index (needed after deserialisation).
    pub fn reindex(&mut self) -> Result<(), GradedError> {
        self.labels.clear();
        for g in &self.entries {
            if !self.labels.insert(g.label.clone()) {
                return Err(GradedError::DuplicateLabel(g.label.clone()));
            }
        }
        Ok(())
    }

    /// 𝔽_p-dimensions per bidegree over the stem window, counting
    /// `v₁ʲ g` for `0 ≤ j < torsion(g)`.
    pub fn dim_map(&self, ctx: &PrimeContext, window: StemWindow) -> BTreeMap<Bidegree, u64> {
        let q = ctx.q();
        let mut out = BTreeMap::new();
        if window.is_empty() {
            return out;
        }
        for g in &self.entries {
            let d = g.bidegree.stem;
            // smallest j ≥ 0 with d + jq ≥ lo, largest with d + jq ≤ hi
            let j_lo = if d >= window.lo {
                0
            } else {
                (window.lo - d + q - 1) / q
            };
            if d + j_lo * q > window.hi {
                continue;
            }
            let mut j_hi = (window.hi - d) / q;
            if let Torsion::Finite(r) = g.torsion {
                j_hi = j_hi.min(r as i64 - 1);
            }
            for j in j_lo..=j_hi {
                *out.entry(g.bidegree.shift_v1(j, q)).or_insert(0) += 1;
            }
        }
        out
    }

    /// The [`DimTable`] of this module over a stem window.
    pub fn dims(&self, ctx: &PrimeContext, window: StemWindow) -> DimTable {
        DimTable::graded(ctx.p(), None, None, window, &self.dim_map(ctx, window))
    }

    /// Torsion multisets of the generators whose stem lies in the window.
    pub fn torsion_multisets(&self, window: StemWindow) -> TorsionMultisets {
        let mut out: TorsionMultisets = BTreeMap::new();
        for g in &self.entries {
            if window.contains(g.bidegree.stem) {
                out.entry(g.bidegree).or_default().push(g.torsion);
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }

    /// Keep only the generators satisfying a predicate.
    pub fn filtered(&self, mut keep: impl FnMut(&Generator) -> bool) -> CyclicDecomposition {
        let mut out = CyclicDecomposition::new();
        for g in &self.entries {
            if keep(g) {
                out.push(g.clone()).expect("labels were unique");
            }
        }
        out
    }
}
