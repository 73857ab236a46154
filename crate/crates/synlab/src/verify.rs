//! Verification suites.
//!
//! Suites are registered as trait objects so that new ones can be added
//! and selected by name without touching the dispatcher.  Each suite
//! reports a list of checks with the number of cases examined and the
//! coordinates of every failing case.

use std::collections::BTreeMap;

use assembly::{
    betti_bound, k_mod_dims, syntomic_dims, tc_mod_dims, tc_zp_dims, two_line_check, AssemblyParams,
};
use closed_forms::{einf_closed, enumerate_families, family_torsion, Truncation};
use graded_core::localization::{localization_rank, random_bounded_complex};
use graded_core::{Bidegree, PrimeContext, StemWindow, Torsion};
use nygaard_engine::{build_page, default_cutoff, run_to_einf, EInfResult, PageKind, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tr_kernel::{resolve_family, stability_bound, tr_gr_module_with, Mode, Tower};

use crate::CliError;

/// At most this many counterexamples are kept per check.
const MAX_COUNTEREXAMPLES: usize = 50;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Number of cases examined.
    pub cases: u64,
    /// Number of failing cases.
    pub failures: u64,
    /// Coordinates of failing cases (the first few).
    pub counterexamples: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            cases: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    /// Records one case; `detail` is only evaluated on failure.
    fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(detail());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Overrides of the suites' default grids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub primes: Vec<u32>,
    pub n_max: Option<u32>,
    pub m_max: Option<u32>,
    pub ell_max: Option<u32>,
    pub deg_min: Option<i64>,
    pub deg_max: Option<i64>,
}

impl Grid {
    fn primes(&self, default: &[u32]) -> Vec<u32> {
        if self.primes.is_empty() {
            default.to_vec()
        } else {
            self.primes.clone()
        }
    }

    fn window(&self, lo: i64, hi: i64) -> StemWindow {
        StemWindow::new(self.deg_min.unwrap_or(lo), self.deg_max.unwrap_or(hi))
    }

    fn twists(&self, p: u32, default_max: u32) -> impl Iterator<Item = u32> {
        (1..=self.ell_max.unwrap_or(default_max)).filter(move |l| l % p != 0)
    }
}

/// A named, independently selectable verification suite.
pub trait VerifySuite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, grid: &Grid) -> Result<SuiteReport, CliError>;
}

/// Every registered suite, in execution order.
pub fn registry() -> Vec<Box<dyn VerifySuite>> {
    vec![
        Box::new(EinfSuite),
        Box::new(FamiliesSuite),
        Box::new(TrSuite),
        Box::new(AssemblySuite),
    ]
}

/// Runs one suite by name, or all of them for `"all"`.
pub fn run_suites(name: &str, grid: &Grid) -> Result<VerifyReport, CliError> {
    let suites = registry();
    let selected: Vec<_> = suites
        .iter()
        .filter(|s| name == "all" || s.name() == name)
        .collect();
    if selected.is_empty() {
        let names: Vec<_> = suites.iter().map(|s| s.name()).collect();
        return Err(CliError::Input(format!(
            "unknown suite {name:?}; expected one of {names:?} or \"all\""
        )));
    }
    let mut reports = Vec::new();
    for s in selected {
        reports.push(s.run(grid)?);
    }
    Ok(VerifyReport {
        passed: reports.iter().all(SuiteReport::passed),
        suites: reports,
    })
}

fn prime(p: u32) -> Result<PrimeContext, CliError> {
    PrimeContext::new(p).map_err(CliError::from)
}

// ---------------------------------------------------------------------------

/// `E∞`-pages: the spectral sequence against the closed forms, and
/// independence of the `v₁` cutoff.
pub struct EinfSuite;

impl EinfSuite {
    fn page(kind: PageKind, w: StemWindow, cutoff: i64) -> Result<EInfResult, String> {
        build_page(kind, w, cutoff)
            .and_then(run_to_einf)
            .map_err(|e| e.to_string())
    }
}

impl VerifySuite for EinfSuite {
    fn name(&self) -> &'static str {
        "einf"
    }

    fn description(&self) -> &'static str {
        "E∞-pages of the spectral sequence equal the closed forms; doubling the v₁ cutoff changes nothing"
    }

    fn run(&self, grid: &Grid) -> Result<SuiteReport, CliError> {
        let mut dims = Check::new("einf-dims");
        let mut torsion = Check::new("einf-torsion");
        let mut certified = Check::new("einf-certified");
        let mut doubling = Check::new("einf-cutoff-doubling");
        for p in grid.primes(&[2, 3, 5]) {
            let ctx = prime(p)?;
            let span = 4 * ctx.pow(3);
            let w = grid.window(-span, span);
            if w.is_empty() {
                continue;
            }
            let twists: Vec<u32> = std::iter::once(0)
                .chain(grid.twists(p, p * p))
                .filter(|&l| grid.ell_max.map_or(true, |m| l <= m))
                .collect();
            for n in 0..=grid.n_max.unwrap_or(3) {
                for &twist in &twists {
                    for variant in Variant::ALL {
                        if variant == Variant::Muinv && n == 0 {
                            continue;
                        }
                        let at = format!("p={p} n={n} ℓ={twist} {variant}");
                        let kind = PageKind::from_index(ctx, n, twist, variant)?;
                        let cutoff = default_cutoff(&ctx, kind.level);
                        let closed = einf_closed(ctx, n, twist, variant, w)?;
                        let engine = match Self::page(kind, w, cutoff) {
                            Ok(e) => e,
                            Err(e) => {
                                certified.case(false, || format!("{at}: {e}"));
                                continue;
                            }
                        };
                        certified.case(engine.is_certified(), || {
                            format!("{at}: uncertified summands {:?}", engine.uncertified)
                        });
                        let cd = closed.dim_map(&ctx, w);
                        dims.case(engine.dims == cd, || {
                            format!("{at}: {}", diff(&engine.dims, &cd))
                        });
                        let (te, tc) = (engine.torsion_multisets(), closed.torsion_multisets(w));
                        torsion.case(te == tc, || format!("{at}: {}", diff(&te, &tc)));
                        match Self::page(kind, w, 2 * cutoff) {
                            Ok(wide) => doubling.case(
                                wide.dims == engine.dims && wide.torsion_multisets() == te,
                                || format!("{at}: cutoff {cutoff} vs {}", 2 * cutoff),
                            ),
                            Err(e) => doubling.case(false, || format!("{at}: {e}")),
                        }
                    }
                }
            }
        }
        Ok(SuiteReport {
            suite: self.name().into(),
            checks: vec![dims, torsion, certified, doubling],
        })
    }
}

/// First differing keys of two maps, for counterexample messages.
fn diff<K: Ord + std::fmt::Debug, V: PartialEq + std::fmt::Debug>(
    a: &BTreeMap<K, V>,
    b: &BTreeMap<K, V>,
) -> String {
    let mut out = Vec::new();
    for k in a.keys().chain(b.keys()) {
        if a.get(k) != b.get(k) && out.len() < 3 {
            out.push(format!("{k:?}: {:?} vs {:?}", a.get(k), b.get(k)));
        }
    }
    out.dedup();
    out.join("; ")
}

// ---------------------------------------------------------------------------

/// Every family element is completed to a kernel element whose torsion
/// order is the stated one.
pub struct FamiliesSuite;

impl VerifySuite for FamiliesSuite {
    fn name(&self) -> &'static str {
        "families"
    }

    fn description(&self) -> &'static str {
        "family leading terms complete to kernel elements with the stated torsion"
    }

    fn run(&self, grid: &Grid) -> Result<SuiteReport, CliError> {
        let mut solve = Check::new("families-solve");
        let mut torsion = Check::new("families-torsion");
        let w = grid.window(0, 300);
        let mut truncs = vec![Truncation::Infinite];
        truncs.extend((0..=grid.m_max.unwrap_or(3)).map(Truncation::Finite));
        for p in grid.primes(&[2, 3]) {
            let ctx = prime(p)?;
            for twist in grid.twists(p, 8) {
                let mut tower = Tower::new(ctx, twist);
                for &trunc in &truncs {
                    for el in enumerate_families(ctx, twist, trunc, w)? {
                        let at = format!("p={p} ℓ={twist} [{trunc}] {el}");
                        match resolve_family(&mut tower, &el, trunc) {
                            Ok(res) => {
                                solve.case(true, String::new);
                                let stated = family_torsion(el.tag, ctx, el.params, trunc)?;
                                torsion.case(res.probed_torsion == stated, || {
                                    format!("{at}: probed {} stated {stated}", res.probed_torsion)
                                });
                            }
                            Err(e) => solve.case(false, || format!("{at}: {e}")),
                        }
                    }
                }
            }
        }
        Ok(SuiteReport {
            suite: self.name().into(),
            checks: vec![solve, torsion],
        })
    }
}

// ---------------------------------------------------------------------------

/// `gr TR^{[m]}`: oracle against closed forms, surjectivity, cutoff and
/// truncation stability.
pub struct TrSuite;

impl VerifySuite for TrSuite {
    fn name(&self) -> &'static str {
        "tr"
    }

    fn description(&self) -> &'static str {
        "gr TR^[m] from the kernel oracle equals the closed forms; gr(φ − can) and v₁ are surjective; \
         results are stable under doubling the cutoff and under m → m+1 below the stability bound"
    }

    fn run(&self, grid: &Grid) -> Result<SuiteReport, CliError> {
        let mut agree = Check::new("tr-oracle-equals-closed");
        let mut surj = Check::new("tr-surjectivity");
        let mut doubling = Check::new("tr-cutoff-doubling");
        let mut stable = Check::new("tr-truncation-stability");
        let w = grid.window(-10, 200);
        let m_max = grid.m_max.unwrap_or(3);
        for p in grid.primes(&[2, 3]) {
            let ctx = prime(p)?;
            if w.is_empty() {
                continue;
            }
            for twist in grid.twists(p, 8) {
                let mut dims = Vec::new();
                for m in 0..=m_max {
                    let at = format!("p={p} ℓ={twist} m={m}");
                    let trunc = Truncation::Finite(m);
                    let r = tr_gr_module_with(ctx, twist, trunc, w, Mode::Both, None)?;
                    let c = r.comparison.as_ref().expect("both modes compare");
                    agree.case(c.is_match(), || format!("{at}: {c:?}"));
                    let rep = r.report.as_ref().expect("the oracle reports");
                    surj.case(rep.is_clean(), || format!("{at}: {rep:?}"));
                    let wide = tr_gr_module_with(
                        ctx,
                        twist,
                        trunc,
                        w,
                        Mode::Oracle,
                        Some(2 * ctx.geo(0, m as i64)),
                    )?;
                    doubling.case(
                        wide.dims == r.dims && wide.decomposition == r.decomposition,
                        || format!("{at}: {}", diff(&wide.dims, &r.dims)),
                    );
                    dims.push(r.dims);
                }
                for m in 0..m_max as usize {
                    let bound = stability_bound(&ctx, twist, m as u32);
                    let below = |d: &BTreeMap<Bidegree, u64>| -> BTreeMap<Bidegree, u64> {
                        d.iter()
                            .filter(|(b, _)| b.stem <= bound)
                            .map(|(b, v)| (*b, *v))
                            .collect()
                    };
                    let (a, b) = (below(&dims[m]), below(&dims[m + 1]));
                    stable.case(a == b, || {
                        format!("p={p} ℓ={twist} m={m} below {bound}: {}", diff(&a, &b))
                    });
                }
            }
        }
        Ok(SuiteReport {
            suite: self.name().into(),
            checks: vec![agree, surj, doubling, stable],
        })
    }
}

// ---------------------------------------------------------------------------

/// The assembled tables and the Betti bound.
pub struct AssemblySuite;

impl AssemblySuite {
    fn tc_zp_shape(primes: &[u32]) -> Result<Check, CliError> {
        let mut check = Check::new("tc-zp-shape");
        for &p in primes {
            let ctx = prime(p)?;
            let d = tc_zp_dims(&ctx);
            let pi = ctx.pi();
            let mut want: Vec<Bidegree> = [(0, 0), (2 * pi - 1, 1), (-1, 1), (2 * pi - 2, 2)]
                .into_iter()
                .chain((1..pi).map(|i| (2 * pi - 1 - 2 * i, 1)))
                .map(|(s, l)| Bidegree::new(s, l))
                .collect();
            let mut got: Vec<Bidegree> = d.generators().iter().map(|g| g.bidegree).collect();
            want.sort();
            got.sort();
            let free = d.generators().iter().all(|g| g.torsion == Torsion::Free);
            check.case(d.len() == p as usize + 3 && free && got == want, || {
                format!("p={p}: {} generators at {got:?}", d.len())
            });
        }
        Ok(check)
    }
}

impl VerifySuite for AssemblySuite {
    fn name(&self) -> &'static str {
        "assembly"
    }

    fn description(&self) -> &'static str {
        "TC(ℤ_p) shape, two-line surjectivity, n-independence, the K/TC difference, the Betti bound and \
         localization from a truncation"
    }

    fn run(&self, grid: &Grid) -> Result<SuiteReport, CliError> {
        let primes = grid.primes(&[2, 3, 5]);
        let shape = Self::tc_zp_shape(&primes)?;

        let mut two_line = Check::new("two-line");
        for &p in &primes {
            let w = grid.window(-4, 300);
            let r = two_line_check(prime(p)?, w)?;
            two_line.case(r.passed(), || format!("p={p}: {:?}", r.violations));
        }

        // n-independence and the K/TC difference live at p = 3.
        let w = grid.window(-4, 200);
        let mut n_indep = Check::new("n-independence");
        let mut delta = Check::new("k-tc-delta");
        if primes.contains(&3) && !w.is_empty() {
            let tables: Vec<_> = (3..=5)
                .map(|n| AssemblyParams::new(3, n, 1, w).and_then(|par| syntomic_dims(&par)))
                .collect::<Result<_, _>>()?;
            for (n, t) in (4..=5).zip(&tables[1..]) {
                n_indep.case(t.entries == tables[0].entries, || {
                    format!("p=3 k=1: n=3 and n={n} differ")
                });
            }
            for k in [1u64, 2] {
                let par = AssemblyParams::new(3, 4, k, w)?;
                let tc = tc_mod_dims(&par)?.stem_totals();
                let kt = k_mod_dims(&par)?.stem_totals();
                let top = 4 * k as i64 - 1;
                let mut support = BTreeMap::new();
                for (stem, &d) in &tc {
                    let dk = kt.get(stem).copied().unwrap_or(0) as i64 - d as i64;
                    if dk != 0 {
                        support.insert(*stem, dk);
                    }
                }
                let want: BTreeMap<i64, i64> = [(-1, -1), (top, 1)]
                    .into_iter()
                    .filter(|(s, _)| w.contains(*s))
                    .collect();
                delta.case(support == want, || {
                    format!("p=3 n=4 k={k}: K − TC = {support:?}")
                });
            }
        }

        let mut betti = Check::new("betti-bound");
        for (p, d, b) in [(3u32, 3u64, 3u32), (3, 0, 3), (2, 1, 4)] {
            let got = betti_bound(&prime(p)?, d);
            betti.case(got == b, || format!("b_{p}({d}) = {got}, expected {b}"));
        }

        let mut local = Check::new("localization");
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for trial in 0..20 {
            let p = [2u32, 3, 5][trial % 3];
            let n: u64 = rng.gen_range(1..4);
            let c = random_bounded_complex(&mut rng, p, n);
            match localization_rank(&c, n as u32) {
                Ok(lhs) => {
                    let rhs = c.direct_localization_rank();
                    local.case(lhs == rhs, || {
                        format!("trial {trial} (p={p}, n={n}): {lhs:?} vs {rhs:?}")
                    });
                }
                Err(e) => local.case(false, || format!("trial {trial} (p={p}, n={n}): {e}")),
            }
        }

        Ok(SuiteReport {
            suite: self.name().into(),
            checks: vec![shape, two_line, n_indep, delta, betti, local],
        })
    }
}
