//! Serialisable dimension tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Bidegree, GradedError, LINES};

/// An inclusive stem range `[lo, hi]`; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StemWindow {
    pub lo: i64,
    pub hi: i64,
}

impl StemWindow {
    pub const fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn empty() -> Self {
        Self { lo: 0, hi: -1 }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, stem: i64) -> bool {
        self.lo <= stem && stem <= self.hi
    }

    pub fn stems(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Widen by `below` stems at the bottom and `above` at the top.
    pub fn padded(&self, below: i64, above: i64) -> Self {
        Self::new(self.lo - below, self.hi + above)
    }
}

/// One row of a [`DimTable`].  `line` and `weight` are absent for tables
/// that are not bigraded (homotopy groups of TC and K).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub stem: i64,
    pub line: Option<i64>,
    pub weight: Option<i64>,
    pub dim: u64,
}

/// A table of 𝔽_p-dimensions covering exactly the requested window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub p: u32,
    pub n: Option<u32>,
    pub k: Option<u64>,
    pub window: [i64; 2],
    pub entries: Vec<DimEntry>,
    /// Set when the dimensions are those of an associated graded only
    /// (possible hidden extensions).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub associated_graded: bool,
}

impl DimTable {
    /// A bigraded table: one entry for every stem of the window and every
    /// line in [`LINES`] of matching parity.
    pub fn graded(
        p: u32,
        n: Option<u32>,
        k: Option<u64>,
        window: StemWindow,
        dims: &BTreeMap<Bidegree, u64>,
    ) -> Self {
        let mut entries = Vec::new();
        for stem in window.stems() {
            for line in LINES {
                let b = Bidegree::new(stem, line);
                if let Some(weight) = b.weight() {
                    entries.push(DimEntry {
                        stem,
                        line: Some(line),
                        weight: Some(weight),
                        dim: dims.get(&b).copied().unwrap_or(0),
                    });
                }
            }
        }
        Self {
            p,
            n,
            k,
            window: [window.lo, window.hi],
            entries,
            associated_graded: false,
        }
    }

    /// A singly graded table: one entry per stem.
    pub fn collapsed(
        p: u32,
        n: Option<u32>,
        k: Option<u64>,
        window: StemWindow,
        dims: &BTreeMap<i64, u64>,
    ) -> Self {
        let entries = window
            .stems()
            .map(|stem| DimEntry {
                stem,
                line: None,
                weight: None,
                dim: dims.get(&stem).copied().unwrap_or(0),
            })
            .collect();
        Self {
            p,
            n,
            k,
            window: [window.lo, window.hi],
            entries,
            associated_graded: false,
        }
    }

    pub fn stem_window(&self) -> StemWindow {
        StemWindow::new(self.window[0], self.window[1])
    }

    /// Dimension at `(stem, line)`; `line = None` addresses collapsed tables.
    pub fn get(&self, stem: i64, line: Option<i64>) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.stem == stem && (line.is_none() || e.line == line))
            .map(|e| e.dim)
            .sum()
    }

    /// Sum over lines, per stem.
    pub fn stem_totals(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.stem).or_insert(0) += e.dim;
        }
        out
    }

    /// Nonzero entries as a map (bigraded tables).
    pub fn nonzero(&self) -> BTreeMap<(i64, Option<i64>), u64> {
        self.entries
            .iter()
            .filter(|e| e.dim > 0)
            .map(|e| ((e.stem, e.line), e.dim))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables always serialise")
    }

    pub fn from_json(s: &str) -> Result<Self, GradedError> {
        serde_json::from_str(s).map_err(|e| GradedError::Parse(e.to_string()))
    }

    /// CSV with header `stem,line,weight,dim`; absent fields are empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["stem", "line", "weight", "dim"])
            .expect("in-memory write");
        for e in &self.entries {
            w.serialize((e.stem, e.line, e.weight, e.dim))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Parse rows written by [`DimTable::to_csv`]; table metadata is
    /// supplied by the caller since CSV carries only the entries.
    pub fn entries_from_csv(s: &str) -> Result<Vec<DimEntry>, GradedError> {
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let mut out = Vec::new();
        for row in r.deserialize::<(i64, Option<i64>, Option<i64>, u64)>() {
            let (stem, line, weight, dim) = row.map_err(|e| GradedError::Parse(e.to_string()))?;
            out.push(DimEntry {
                stem,
                line,
                weight,
                dim,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DimTable {
        let mut m = BTreeMap::new();
        m.insert(Bidegree::new(0, 0), 1);
        m.insert(Bidegree::new(-1, 1), 2);
        DimTable::graded(3, Some(3), Some(1), StemWindow::new(-1, 2), &m)
    }

    #[test]
    fn covers_window_with_parity() {
        let t = sample();
        // each stem has exactly two admissible lines out of −1..=2
        assert_eq!(t.entries.len(), 4 * 2);
        assert!(t
            .entries
            .iter()
            .all(|e| (e.stem + e.line.unwrap()) % 2 == 0));
        assert_eq!(t.get(-1, Some(1)), 2);
        assert_eq!(t.get(0, None), 1);
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        assert_eq!(DimTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let csv = t.to_csv();
        assert!(csv.starts_with("stem,line,weight,dim\n"));
        assert_eq!(DimTable::entries_from_csv(&csv).unwrap(), t.entries);
        let mut c = BTreeMap::new();
        c.insert(-1, 3);
        let t = DimTable::collapsed(2, None, None, StemWindow::new(-1, 0), &c);
        assert_eq!(DimTable::entries_from_csv(&t.to_csv()).unwrap(), t.entries);
    }
}
