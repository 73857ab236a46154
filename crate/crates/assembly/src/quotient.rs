//! Invariants mod `(p, v₁ᵏ)`.
//!
//! For an 𝔽_p[v₁]-module `M`, the cofibre of `v₁ᵏ` has homotopy
//! `coker(v₁ᵏ) ⊕ ker(v₁ᵏ)[(2p−2)k + 1, 1]`: the cokernel in its own
//! bidegree and the kernel moved up by `(2p−2)k + 1` stems and one line.
//! On a cyclic summand `𝔽_p[v₁]/v₁ʳ · g` the cokernel is spanned by `v₁ʲg`,
//! `j < min(k, r)`, and the kernel by `v₁ʲg`, `r − k ≤ j < r`; a free
//! summand contributes `k` cokernel classes and no kernel.

use std::collections::BTreeMap;

use graded_core::{Bidegree, CyclicDecomposition, DimTable, PrimeContext, StemWindow, Torsion};
use serde::{Deserialize, Serialize};

use crate::tc::tc_eps_dims;
use crate::AssemblyError;

/// Parameters of the mod `(p, v₁ᵏ)` tables of `ℤ/pⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyParams {
    pub ctx: PrimeContext,
    pub n: u32,
    pub k: u64,
    pub window: StemWindow,
}

impl AssemblyParams {
    /// Requires `n ≥ 2` and `k ≥ 1`; the range conditions relating `k` and
    /// `n` are checked by each table.
    pub fn new(p: u32, n: u32, k: u64, window: StemWindow) -> Result<Self, AssemblyError> {
        let ctx = PrimeContext::new(p)?;
        if n < 2 {
            return Err(AssemblyError::Input(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if k == 0 {
            return Err(AssemblyError::Input("k must be at least 1".into()));
        }
        Ok(Self { ctx, n, k, window })
    }

    /// `p^{n−2}`, saturating.
    fn range(&self) -> u64 {
        (self.ctx.p() as u64)
            .checked_pow(self.n - 2)
            .unwrap_or(u64::MAX)
    }

    /// At `p = 2` the tables are dimensions of an associated graded only.
    pub fn associated_graded(&self) -> bool {
        self.ctx.p() == 2
    }

    fn check_syntomic(&self) -> Result<(), AssemblyError> {
        if self.k > self.range() {
            return Err(AssemblyError::OutOfRange(format!(
                "k = {} exceeds p^(n−2) = {}: ℤ/p^{} agrees with ℤ_p⟨ε⟩ mod v₁ᵏ only for k ≤ p^(n−2)",
                self.k,
                self.range(),
                self.n
            )));
        }
        Ok(())
    }

    fn check_spectrum(&self) -> Result<(), AssemblyError> {
        self.check_syntomic()?;
        if self.ctx.p() == 2 && self.k % 4 != 0 {
            return Err(AssemblyError::OutOfRange(format!(
                "at p = 2 the quotient by v₁ᵏ needs 4 | k, got k = {}",
                self.k
            )));
        }
        Ok(())
    }
}

/// Dimensions of `coker(v₁ᵏ) ⊕ ker(v₁ᵏ)[(2p−2)k + 1, 1]` over the window.
pub fn v1_kernel_cokernel(
    ctx: &PrimeContext,
    module: &CyclicDecomposition,
    k: u64,
    window: StemWindow,
) -> BTreeMap<Bidegree, u64> {
    let q = ctx.q();
    let shift = Bidegree::new(q * k as i64 + 1, 1);
    let mut out = BTreeMap::new();
    let mut put = |b: Bidegree| {
        if window.contains(b.stem) {
            *out.entry(b).or_insert(0) += 1;
        }
    };
    for g in module.generators() {
        let r = match g.torsion {
            Torsion::Finite(r) => r,
            Torsion::Free => u64::MAX,
        };
        for j in 0..k.min(r) {
            put(g.bidegree.shift_v1(j as i64, q));
        }
        if r != u64::MAX {
            for j in r.saturating_sub(k)..r {
                put(g.bidegree.shift_v1(j as i64, q) + shift);
            }
        }
    }
    out
}

/// Mod `(p, v₁ᵏ)` syntomic cohomology of `ℤ/pⁿ`, bigraded.  Requires
/// `k ≤ p^{n−2}`; the answer does not depend on `n` in that range.
pub fn syntomic_dims(params: &AssemblyParams) -> Result<DimTable, AssemblyError> {
    params.check_syntomic()?;
    let dims = syntomic_map(params)?;
    let mut t = DimTable::graded(
        params.ctx.p(),
        Some(params.n),
        Some(params.k),
        params.window,
        &dims,
    );
    t.associated_graded = params.associated_graded();
    Ok(t)
}

fn syntomic_map(params: &AssemblyParams) -> Result<BTreeMap<Bidegree, u64>, AssemblyError> {
    let m = tc_eps_dims(params.ctx, params.window)?;
    Ok(v1_kernel_cokernel(&params.ctx, &m, params.k, params.window))
}

fn collapse(map: &BTreeMap<Bidegree, u64>) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for (b, d) in map {
        *out.entry(b.stem).or_insert(0) += d;
    }
    out
}

/// `π_* TC(ℤ/pⁿ)/(p, v₁ᵏ)`: the motivic spectral sequence degenerates, so
/// each stem is the sum of the syntomic table over lines.  At `p = 2`
/// (which needs `4 | k`) this is the associated graded of a filtration.
pub fn tc_mod_dims(params: &AssemblyParams) -> Result<DimTable, AssemblyError> {
    params.check_spectrum()?;
    let stems = collapse(&syntomic_map(params)?);
    let mut t = DimTable::collapsed(
        params.ctx.p(),
        Some(params.n),
        Some(params.k),
        params.window,
        &stems,
    );
    t.associated_graded = params.associated_graded();
    Ok(t)
}

/// `π_* K(ℤ/pⁿ)/(p, v₁ᵏ)` from the exact sequence
/// `0 → 𝔽_p{v₁ᵏ∂} → K → TC → 𝔽_p{∂} → 0`: the `TC` table with `∂` removed
/// at stem −1 and `v₁ᵏ∂` added at stem `(2p−2)k − 1`.  Requires
/// `k ≤ p^{n−2} − 1`; at `k = p^{n−2}` it is not known whether `∂` is
/// `v₁ᵏ`-torsion, and the table is refused.
pub fn k_mod_dims(params: &AssemblyParams) -> Result<DimTable, AssemblyError> {
    params.check_spectrum()?;
    if params.k >= params.range() {
        return Err(AssemblyError::OutOfRange(format!(
            "k = {} must be below p^(n−2) = {}: whether ∂ is v₁^(p^(n−2))-torsion is not known",
            params.k,
            params.range()
        )));
    }
    let mut stems = collapse(&syntomic_map(params)?);
    if params.window.contains(-1) {
        let d = stems.entry(-1).or_insert(0);
        *d = d
            .checked_sub(1)
            .ok_or_else(|| AssemblyError::Inconsistent("π₋₁ TC has no ∂ class to remove".into()))?;
    }
    let top = params.ctx.q() * params.k as i64 - 1;
    if params.window.contains(top) {
        *stems.entry(top).or_insert(0) += 1;
    }
    let mut t = DimTable::collapsed(
        params.ctx.p(),
        Some(params.n),
        Some(params.k),
        params.window,
        &stems,
    );
    t.associated_graded = params.associated_graded();
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn free_and_torsion_summands() {
        let c = ctx(3);
        let w = StemWindow::new(-100, 100);
        let mut m = CyclicDecomposition::new();
        m.add("g", Bidegree::new(0, 0), Torsion::Free).unwrap();
        let d = v1_kernel_cokernel(&c, &m, 3, w);
        assert_eq!(d.values().sum::<u64>(), 3);
        assert_eq!(
            d.keys().copied().collect::<Vec<_>>(),
            [0, 4, 8].map(|s| Bidegree::new(s, 0))
        );

        let mut m = CyclicDecomposition::new();
        m.add("h", Bidegree::new(2, 0), Torsion::Finite(2)).unwrap();
        let d = v1_kernel_cokernel(&c, &m, 5, w);
        // Two quotient classes at 2, 6 and two kernel classes moved up by 4·5 + 1.
        let want = [(2, 0), (6, 0), (23, 1), (27, 1)].map(|(s, l)| (Bidegree::new(s, l), 1u64));
        assert_eq!(d, want.into_iter().collect());
    }

    #[test]
    fn hypotheses() {
        let w = StemWindow::new(-2, 20);
        assert!(AssemblyParams::new(3, 1, 1, w).is_err());
        assert!(AssemblyParams::new(3, 3, 0, w).is_err());
        assert!(AssemblyParams::new(4, 3, 1, w).is_err());
        let p = AssemblyParams::new(3, 2, 2, w).unwrap();
        assert!(matches!(
            syntomic_dims(&p),
            Err(AssemblyError::OutOfRange(_))
        ));
        let p = AssemblyParams::new(3, 3, 3, w).unwrap();
        assert!(syntomic_dims(&p).is_ok());
        assert!(matches!(k_mod_dims(&p), Err(AssemblyError::OutOfRange(_))));
        let p = AssemblyParams::new(2, 4, 2, w).unwrap();
        assert!(syntomic_dims(&p).is_ok());
        assert!(matches!(tc_mod_dims(&p), Err(AssemblyError::OutOfRange(_))));
        let p = AssemblyParams::new(2, 4, 4, w).unwrap();
        assert!(tc_mod_dims(&p).unwrap().associated_graded);
    }
}
