//! `TC(ℤ_p)/p` and `TC(ℤ_p⟨ε⟩)/p` as 𝔽_p[v₁]-modules.

use std::collections::BTreeSet;

use closed_forms::Truncation;
use graded_core::{Bidegree, CyclicDecomposition, PrimeContext, StemWindow, Torsion, LINES};
use serde::{Deserialize, Serialize};
use tr_kernel::{closed_decomposition, tr_gr_module, Mode};

use crate::AssemblyError;

/// `TC(ℤ_p)/p = 𝔽_p[v₁] ⊗ E(λ₁) ⊗ E(∂) ⊕ 𝔽_p[v₁]{tλ₁, …, t^{p−1}λ₁}`:
/// free on `1`, `λ₁`, `∂`, `∂λ₁` and `tⁱλ₁` for `1 ≤ i ≤ p − 1`.
pub fn tc_zp_dims(ctx: &PrimeContext) -> CyclicDecomposition {
    let p = ctx.pi();
    let mut d = CyclicDecomposition::new();
    let mut add = |label: String, stem: i64, line: i64| {
        d.add(label, Bidegree::new(stem, line), Torsion::Free)
            .expect("the generators have distinct labels");
    };
    add("1".into(), 0, 0);
    add("λ₁".into(), 2 * p - 1, 1);
    add("∂".into(), -1, 1);
    add("∂λ₁".into(), 2 * p - 2, 2);
    for i in 1..p {
        let label = if i == 1 {
            "t·λ₁".to_string()
        } else {
            format!("t^{i}·λ₁")
        };
        add(label, 2 * p - 1 - 2 * i, 1);
    }
    d
}

/// The largest twist that can contribute to stems `≤ hi`: the summand of
/// twist `ℓ` is concentrated in stems `≥ 2ℓ − 1`.
pub fn max_twist(window: StemWindow) -> u32 {
    if window.is_empty() || window.hi < 1 {
        0
    } else {
        ((window.hi + 1) as u64).div_ceil(2) as u32
    }
}

/// `TC(ℤ_p⟨ε⟩)/p = TC(ℤ_p)/p ⊕ ⊕_{p ∤ ℓ > 0} TR(ℤ_p; Σ^{2ℓ}ℤ_p)/p`, with
/// every generator whose stem is at most `window.hi`.  The `TR` summands
/// come from the closed-form families.
pub fn tc_eps_dims(
    ctx: PrimeContext,
    window: StemWindow,
) -> Result<CyclicDecomposition, AssemblyError> {
    tc_eps_dims_with(ctx, window, Mode::Closed)
}

/// As [`tc_eps_dims`], computing the `TR` summands with the given mode
/// (`both` computes via the oracle and fails on any disagreement).
pub fn tc_eps_dims_with(
    ctx: PrimeContext,
    window: StemWindow,
    mode: Mode,
) -> Result<CyclicDecomposition, AssemblyError> {
    let mut out = tc_zp_dims(&ctx);
    if window.is_empty() {
        return Ok(out);
    }
    let wide = StemWindow::new(window.lo.min(0), window.hi);
    for twist in (1..=max_twist(window)).filter(|l| l % ctx.p() != 0) {
        let tr = match mode {
            Mode::Closed => closed_decomposition(ctx, twist, Truncation::Infinite, wide)?,
            Mode::Oracle | Mode::Both => {
                let r = tr_gr_module(ctx, twist, Truncation::Infinite, wide, mode)?;
                if let Some(c) = r.comparison.as_ref().filter(|c| !c.is_match()) {
                    return Err(AssemblyError::Input(format!(
                        "oracle and closed forms disagree for ℓ = {twist}: {c:?}"
                    )));
                }
                r.decomposition
            }
        };
        for g in tr.generators() {
            let mut g = g.clone();
            g.label = format!("TR[ℓ={twist}] {}", g.label);
            out.push(g)?;
        }
    }
    Ok(out)
}

/// Result of [`two_line_check`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoLineReport {
    /// Line-2 classes (𝔽_p-dimensions) inspected in the window.
    pub classes_checked: u64,
    /// Generators meeting the window on line 2 that do not come from
    /// `TC(ℤ_p)`, or on a line outside `{−1, 0, 1, 2}`.
    pub violations: Vec<(Bidegree, String)>,
}

impl TwoLineReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every class of `TC(ℤ_p⟨ε⟩)/p` on line 2 in the window is a `v₁`-multiple
/// of `∂λ₁` from `TC(ℤ_p)/p`: the twisted summands live on lines 0 and 1
/// (with `−1` allowed), so `H²` is hit from `ℤ_p`.
pub fn two_line_check(
    ctx: PrimeContext,
    window: StemWindow,
) -> Result<TwoLineReport, AssemblyError> {
    let mut report = TwoLineReport::default();
    if window.is_empty() {
        return Ok(report);
    }
    let zp: BTreeSet<String> = tc_zp_dims(&ctx)
        .generators()
        .iter()
        .map(|g| g.label.clone())
        .collect();
    let all = tc_eps_dims(ctx, window)?;
    let q = ctx.q();
    for g in all.generators() {
        let meets = |stem: i64| {
            let r = match g.torsion {
                Torsion::Finite(r) => r as i64,
                Torsion::Free => i64::MAX / (2 * q),
            };
            stem <= window.hi && stem + (r - 1) * q >= window.lo
        };
        if !meets(g.bidegree.stem) {
            continue;
        }
        let line = g.bidegree.line;
        if !LINES.contains(&line) || (line == 2 && !zp.contains(&g.label)) {
            report.violations.push((g.bidegree, g.label.clone()));
        }
    }
    report.classes_checked = all
        .dim_map(&ctx, window)
        .iter()
        .filter(|(b, _)| b.line == 2)
        .map(|(_, d)| d)
        .sum();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tc_zp_shape() {
        for p in [2u32, 3, 5, 7] {
            let ctx = PrimeContext::new(p).unwrap();
            let d = tc_zp_dims(&ctx);
            assert_eq!(d.len(), p as usize + 3);
            assert!(d.generators().iter().all(|g| g.torsion == Torsion::Free));
        }
        let ctx = PrimeContext::new(3).unwrap();
        let dims = tc_zp_dims(&ctx).dim_map(&ctx, StemWindow::new(-1, 4));
        assert_eq!(dims.get(&Bidegree::new(-1, 1)), Some(&1));
        let at4: u64 = dims
            .iter()
            .filter(|(b, _)| b.stem == 4)
            .map(|(_, d)| d)
            .sum();
        assert_eq!(at4, 2);
        assert_eq!(dims.get(&Bidegree::new(4, 0)), Some(&1));
        assert_eq!(dims.get(&Bidegree::new(4, 2)), Some(&1));
    }

    #[test]
    fn twist_bound() {
        assert_eq!(max_twist(StemWindow::new(0, 0)), 0);
        assert_eq!(max_twist(StemWindow::new(0, 1)), 1);
        assert_eq!(max_twist(StemWindow::new(0, 2)), 2);
        assert_eq!(max_twist(StemWindow::new(-5, 9)), 5);
    }
}
