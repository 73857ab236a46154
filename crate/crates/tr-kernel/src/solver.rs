//! Completing a leading class to an element of the kernel of `φ − can`.

use closed_forms::{Coefficient, FamilyElement, Truncation};
use nygaard_engine::Variant;
use serde::{Deserialize, Serialize};

use crate::class::{gr_can, gr_phi, GrV1Class};
use crate::tower::Tower;
use crate::TrError;

fn keeps(trunc: Truncation, level: u32) -> bool {
    match trunc {
        Truncation::Finite(m) => level <= m,
        Truncation::Infinite => true,
    }
}

/// Extends `leading` (a class of `grˢ E∞(hfp)` at its level) to
/// `c₀ + c₁ + ⋯` with `cᵢ` at consecutive levels and
/// `φ(cᵢ) = can(cᵢ₊₁)` in the associated graded of the Tate construction of
/// level `i + 1`.  The chain stops when `φ` vanishes or the next level is
/// cut off by the truncation.  Fails if `leading` is not a class, if its
/// `can` does not vanish, or if some `φ(cᵢ)` is not in the image of `can`.
pub fn complete_to_kernel(
    tower: &mut Tower,
    leading: &GrV1Class,
    trunc: Truncation,
) -> Result<Vec<GrV1Class>, TrError> {
    let ctx = *tower.ctx();
    let s = leading.s;
    let m0 = leading.monomial();
    let at = m0.bidegree(&ctx);
    let fail = |detail: String| TrError::Inconsistent { at, detail };
    if !keeps(trunc, leading.level) {
        return Err(fail(format!("{leading} lies above the truncation {trunc}")));
    }
    if !tower.in_layer(Variant::Hfp, &m0, s) {
        return Err(fail(format!(
            "{leading} is not a class of gr^{s} at level {}",
            leading.level
        )));
    }
    if leading.level >= 1 {
        if let Some(y) = gr_can(leading) {
            if tower.in_layer(Variant::Tate, &y.monomial(), s) {
                return Err(fail(format!("can({leading}) = {y} is non-zero")));
            }
        }
    }
    let mut chain = vec![*leading];
    loop {
        let cur = *chain.last().expect("non-empty chain");
        if !keeps(trunc, cur.level + 1) {
            break;
        }
        let Some(y) = gr_phi(&ctx, &cur) else { break };
        if !tower.in_layer(Variant::Tate, &y.monomial(), s) {
            break;
        }
        // The unique class with can(next) = φ(cur): the same monomial,
        // which must be a t-type class of the homotopy fixed points.
        let next = y;
        if gr_can(&next) != Some(y) || !tower.in_layer(Variant::Hfp, &next.monomial(), s) {
            return Err(fail(format!("φ({cur}) = {y} is not in the image of can")));
        }
        chain.push(next);
    }
    Ok(chain)
}

/// A family element with solved coefficients and its probed torsion order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedFamily {
    pub element: FamilyElement,
    /// `v₁`-torsion order of the kernel element: the largest torsion order
    /// of its components on their homotopy fixed point pages.
    pub probed_torsion: u64,
}

/// Completes the leading component of a family element to a kernel
/// element, checks that the solved components are exactly the family's
/// components, and probes the torsion order.
pub fn resolve_family(
    tower: &mut Tower,
    el: &FamilyElement,
    trunc: Truncation,
) -> Result<ResolvedFamily, TrError> {
    let lead = el.leading().monomial;
    let kind = tower.kind(Variant::Hfp, lead.level);
    let leading = GrV1Class::from_monomial(&kind, &lead, 1);
    let chain = complete_to_kernel(tower, &leading, trunc)?;
    let solved: Vec<_> = chain.iter().map(GrV1Class::monomial).collect();
    let listed: Vec<_> = el.components.iter().map(|c| c.monomial).collect();
    if solved != listed {
        return Err(TrError::Inconsistent {
            at: el.bidegree,
            detail: format!(
                "{el}: the kernel condition gives components [{}]",
                solved
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        });
    }
    let mut probed = 0;
    for m in &solved {
        let r = tower.hfp_torsion(m).ok_or_else(|| TrError::Inconsistent {
            at: el.bidegree,
            detail: format!("{el}: component {m} has no finite torsion order"),
        })?;
        probed = probed.max(r);
    }
    let mut element = el.clone();
    for (c, class) in element.components.iter_mut().zip(&chain) {
        c.coefficient = Coefficient::Known(class.coefficient);
    }
    Ok(ResolvedFamily {
        element,
        probed_torsion: probed,
    })
}
