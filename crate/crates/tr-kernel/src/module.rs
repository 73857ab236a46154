//! `gr TR^{[m]}` from the oracle, from the closed forms, or both.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use closed_forms::{enumerate_families, Truncation};
use graded_core::{Bidegree, CyclicDecomposition, PrimeContext, StemWindow, Torsion};
use serde::{Deserialize, Serialize};

use crate::oracle::{KernelOracle, OracleReport};
use crate::TrError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Oracle,
    Closed,
    Both,
}

impl FromStr for Mode {
    type Err = TrError;
    fn from_str(s: &str) -> Result<Self, TrError> {
        match s {
            "oracle" => Ok(Self::Oracle),
            "closed" => Ok(Self::Closed),
            "both" => Ok(Self::Both),
            _ => Err(TrError::Input(format!(
                "unknown mode {s:?} (expected oracle, closed or both)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Oracle => "oracle",
            Self::Closed => "closed",
            Self::Both => "both",
        })
    }
}

/// Differences between the oracle and the closed forms over a window.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    /// `(bidegree, oracle, closed)`.
    pub dim_mismatches: Vec<(Bidegree, u64, u64)>,
    /// `(bidegree, oracle, closed)` torsion multisets of generators.
    pub torsion_mismatches: Vec<(Bidegree, Vec<Torsion>, Vec<Torsion>)>,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.dim_mismatches.is_empty() && self.torsion_mismatches.is_empty()
    }

    fn new(
        window: StemWindow,
        oracle: (&BTreeMap<Bidegree, u64>, &CyclicDecomposition),
        closed: (&BTreeMap<Bidegree, u64>, &CyclicDecomposition),
    ) -> Self {
        let mut out = Self::default();
        let keys: std::collections::BTreeSet<_> = oracle.0.keys().chain(closed.0.keys()).collect();
        for b in keys {
            let (a, c) = (
                oracle.0.get(b).copied().unwrap_or(0),
                closed.0.get(b).copied().unwrap_or(0),
            );
            if a != c {
                out.dim_mismatches.push((*b, a, c));
            }
        }
        let (ta, tc) = (
            oracle.1.torsion_multisets(window),
            closed.1.torsion_multisets(window),
        );
        let keys: std::collections::BTreeSet<_> = ta.keys().chain(tc.keys()).collect();
        for b in keys {
            let (a, c) = (
                ta.get(b).cloned().unwrap_or_default(),
                tc.get(b).cloned().unwrap_or_default(),
            );
            if a != c {
                out.torsion_mismatches.push((*b, a, c));
            }
        }
        out
    }
}

/// Result of [`tr_gr_module`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrModule {
    /// Generators with stem in the window (from the oracle unless the mode
    /// is `closed`).
    pub decomposition: CyclicDecomposition,
    /// `𝔽_p`-dimensions per bidegree over the window.
    pub dims: BTreeMap<Bidegree, u64>,
    /// Highest level used by the oracle.
    pub oracle_top: Option<u32>,
    pub report: Option<OracleReport>,
    pub comparison: Option<Comparison>,
}

fn validate(ctx: &PrimeContext, twist: u32) -> Result<(), TrError> {
    if twist == 0 || twist % ctx.p() == 0 {
        return Err(TrError::Input(format!(
            "twist must be positive and prime to p, got {twist}"
        )));
    }
    Ok(())
}

/// Every difference between `gr TR^{[m]}` and `gr TR^{[m+1]}` lies in stems
/// `≥ 2ℓp^{m+1} − 2`: families first appearing at level `m + 1` start at
/// stem `2ℓp^{m+1}`, the top families `F`, `G` of level `m` sit above
/// `2ℓp^{m+1}`, and the towers lengthened by passing from `m` to `m + 1`
/// (the families `B`, `E` at levels `m − 1`, `m`) first differ at stem
/// `2ℓp^{m+1} − 2` or later.  Returns the largest stem below that.
pub fn stability_bound(ctx: &PrimeContext, twist: u32, m: u32) -> i64 {
    2 * twist as i64 * ctx.pow(m + 1) - 3
}

/// Highest level the oracle uses.  For `TR` itself this is two more than
/// the first level `M` whose families all lie above the window
/// (`2ℓp^{M+1} > hi`), so that every family meeting the window keeps its
/// full torsion order.
pub fn oracle_top(ctx: &PrimeContext, twist: u32, trunc: Truncation, window: StemWindow) -> u32 {
    match trunc {
        Truncation::Finite(m) => m,
        Truncation::Infinite => {
            let mut m = 0;
            while 2 * twist as i64 * ctx.pow(m + 1) <= window.hi {
                m += 1;
            }
            m + 2
        }
    }
}

/// The closed-form module: every family generator is a cyclic summand.
/// Generators below the window are included so that dimensions inside the
/// window are complete (all families lie in stems `≥ 0`).
pub fn closed_decomposition(
    ctx: PrimeContext,
    twist: u32,
    trunc: Truncation,
    window: StemWindow,
) -> Result<CyclicDecomposition, TrError> {
    let wide = StemWindow::new(window.lo.min(0), window.hi);
    let mut d = CyclicDecomposition::new();
    for el in enumerate_families(ctx, twist, trunc, wide)? {
        d.add(el.to_string(), el.bidegree, Torsion::Finite(el.torsion))
            .map_err(|e| TrError::Input(e.to_string()))?;
    }
    Ok(d)
}

/// `gr TR^{[m]}(ℤ_p; Σ^{2ℓ}ℤ_p)/p` (or `gr TR` for an infinite truncation)
/// over a window.
pub fn tr_gr_module(
    ctx: PrimeContext,
    twist: u32,
    trunc: Truncation,
    window: StemWindow,
    mode: Mode,
) -> Result<TrModule, TrError> {
    tr_gr_module_with(ctx, twist, trunc, window, mode, None)
}

/// As [`tr_gr_module`], with an explicit `v₁`-adic cutoff for the oracle
/// (values below the default are raised to it).
pub fn tr_gr_module_with(
    ctx: PrimeContext,
    twist: u32,
    trunc: Truncation,
    window: StemWindow,
    mode: Mode,
    v1_cutoff: Option<i64>,
) -> Result<TrModule, TrError> {
    validate(&ctx, twist)?;
    let mut out = TrModule::default();
    if window.is_empty() {
        return Ok(out);
    }
    let closed = match mode {
        Mode::Closed | Mode::Both => {
            let d = closed_decomposition(ctx, twist, trunc, window)?;
            Some((d.dim_map(&ctx, window), d))
        }
        Mode::Oracle => None,
    };
    let oracle = match mode {
        Mode::Oracle | Mode::Both => {
            let top = oracle_top(&ctx, twist, trunc, window);
            let mut k = match v1_cutoff {
                Some(c) => KernelOracle::with_v1_cutoff(ctx, twist, top, c),
                None => KernelOracle::new(ctx, twist, top),
            };
            let dims = k.dims(window);
            let (d, _) = k.decomposition(window);
            out.oracle_top = Some(top);
            out.report = Some(k.report(window));
            Some((dims, d))
        }
        Mode::Closed => None,
    };
    if let (Some(o), Some(c)) = (&oracle, &closed) {
        out.comparison = Some(Comparison::new(window, (&o.0, &o.1), (&c.0, &c.1)));
    }
    let (dims, d) = match (oracle, closed) {
        (Some(o), _) => o,
        (None, Some(c)) => (c.0, c.1.filtered(|g| window.contains(g.bidegree.stem))),
        (None, None) => unreachable!("every mode computes something"),
    };
    out.dims = dims;
    out.decomposition = d;
    Ok(out)
}

/// Checks that `gr(φ − can)` is onto every Tate piece over the window, and
/// that `v₁` is onto every positive `v₁`-adic degree of the kernel.
pub fn check_surjectivity(
    ctx: PrimeContext,
    twist: u32,
    m: u32,
    window: StemWindow,
) -> Result<OracleReport, TrError> {
    validate(&ctx, twist)?;
    if window.is_empty() {
        return Ok(OracleReport::default());
    }
    Ok(KernelOracle::new(ctx, twist, m).report(window))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_tops() {
        let ctx = PrimeContext::new(3).unwrap();
        assert_eq!(stability_bound(&ctx, 1, 0), 3);
        assert_eq!(stability_bound(&ctx, 2, 1), 33);
        let w = StemWindow::new(0, 20);
        assert_eq!(oracle_top(&ctx, 1, Truncation::Finite(4), w), 4);
        // 2·9 ≤ 20 < 2·27, so M = 2.
        assert_eq!(oracle_top(&ctx, 1, Truncation::Infinite, w), 4);
    }

    #[test]
    fn modes_round_trip() {
        for m in [Mode::Oracle, Mode::Closed, Mode::Both] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("neither".parse::<Mode>().is_err());
    }
}
