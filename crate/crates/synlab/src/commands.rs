//! Command implementations.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use assembly::{betti_bound, k_mod_dims, syntomic_dims, tc_mod_dims, AssemblyParams};
use closed_forms::{einf_closed, Truncation};
use graded_core::{Bidegree, CyclicDecomposition, DimTable, PrimeContext, StemWindow};
use nygaard_engine::{build_page, run_to_einf, PageKind};
use serde::Serialize;
use tr_kernel::{tr_gr_module_with, Mode, OracleReport};

use crate::args::{
    BettiArgs, Command, EinfArgs, Format, OutputArgs, QuotientArgs, TrArgs, VerifyArgs, WindowArgs,
};
use crate::cache::{cache_key, Cache};
use crate::verify::{run_suites, Grid};
use crate::CliError;

/// The artifact of `einf` and `tr`: the dimension table together with the
/// cyclic decomposition it comes from.
#[derive(Debug, Serialize)]
pub struct ModuleArtifact {
    pub table: DimTable,
    pub generators: CyclicDecomposition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<OracleReport>,
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Einf(a) => cached("einf", &a, &a.output, out, || {
            let (table, art) = einf(&a)?;
            render(&table, &art, a.output.format)
        }),
        Command::Tr(a) => cached("tr", &a, &a.output, out, || {
            let (table, art) = tr(&a)?;
            render(&table, &art, a.output.format)
        }),
        Command::Syntomic(a) => quotient("syntomic", &a, out, syntomic_dims),
        Command::Tc(a) => quotient("tc", &a, out, tc_mod_dims),
        Command::Ktheory(a) => quotient("ktheory", &a, out, k_mod_dims),
        Command::BettiBound(a) => betti(&a, out),
        Command::Verify(a) => verify(&a, out),
    }
}

fn window(w: &WindowArgs) -> Result<StemWindow, CliError> {
    if w.deg_min > w.deg_max {
        return Err(CliError::Input(format!(
            "--deg-min {} exceeds --deg-max {}",
            w.deg_min, w.deg_max
        )));
    }
    Ok(StemWindow::new(w.deg_min, w.deg_max))
}

/// Runs `compute` (producing the serialized artifact) through the cache
/// if one is configured, then emits the payload.
fn cached(
    name: &str,
    params: &impl Serialize,
    output: &OutputArgs,
    out: &mut dyn Write,
    compute: impl FnOnce() -> Result<String, CliError>,
) -> Result<(), CliError> {
    let payload = match &output.cache_dir {
        Some(dir) => Cache::new(dir).get_or_compute(&cache_key(name, params), compute)?,
        None => compute()?,
    };
    emit(&payload, output.out.as_deref(), out)
}

fn emit(payload: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, payload)?,
        None => out.write_all(payload.as_bytes())?,
    }
    Ok(())
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
    s.push('\n');
    s
}

fn render(table: &DimTable, artifact: &impl Serialize, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => to_json(artifact),
        Format::Csv => table.to_csv(),
    })
}

/// The `E∞`-page by the spectral sequence, the closed forms, or both.
/// `generators` lists the summands generated inside the window.
pub fn einf(a: &EinfArgs) -> Result<(DimTable, ModuleArtifact), CliError> {
    let ctx = PrimeContext::new(a.p)?;
    let w = window(&a.window)?;
    let variant = a.variant.into();
    let kind = PageKind::from_index(ctx, a.n, a.ell, variant)?;
    let mode: Mode = a.mode.into();
    // The engine reports the dimensions of every bidegree in the window
    // together with the summands generated there; orbits entering from
    // below the window only show up in the dimensions.
    let oracle = |cutoff: i64| -> Result<(BTreeMap<Bidegree, u64>, CyclicDecomposition), CliError> {
        let res = run_to_einf(build_page(kind, w, cutoff)?)?;
        if !res.is_certified() {
            return Err(CliError::Input(format!(
                "{} torsion orders reach the v₁ cutoff {cutoff}; rerun with a larger --v1-cutoff",
                res.uncertified.len()
            )));
        }
        Ok((res.dims.clone(), res.decomposition()))
    };
    let cutoff = a
        .v1_cutoff
        .unwrap_or_else(|| 2 * ctx.geo(0, a.n as i64 + 1));
    let (dims, generators) = match mode {
        Mode::Oracle => oracle(cutoff)?,
        Mode::Closed => {
            let closed = einf_closed(ctx, a.n, a.ell, variant, w)?;
            let dims = closed.dim_map(&ctx, w);
            (dims, closed.filtered(|g| w.contains(g.bidegree.stem)))
        }
        Mode::Both => {
            let (dims, engine) = oracle(cutoff)?;
            let closed = einf_closed(ctx, a.n, a.ell, variant, w)?;
            if dims != closed.dim_map(&ctx, w) {
                return Err(CliError::Verification(format!(
                    "{kind}: spectral-sequence dimensions differ from the closed forms"
                )));
            }
            if engine.torsion_multisets(w) != closed.torsion_multisets(w) {
                return Err(CliError::Verification(format!(
                    "{kind}: spectral-sequence torsion orders differ from the closed forms"
                )));
            }
            (dims, engine)
        }
    };
    let table = DimTable::graded(a.p, Some(a.n), None, w, &dims);
    Ok((
        table.clone(),
        ModuleArtifact {
            table,
            generators,
            report: None,
        },
    ))
}

/// `gr TR^{[m]}` (or `gr TR` without `--m`).
pub fn tr(a: &TrArgs) -> Result<(DimTable, ModuleArtifact), CliError> {
    let ctx = PrimeContext::new(a.p)?;
    let w = window(&a.window)?;
    let trunc = a.m.map_or(Truncation::Infinite, Truncation::Finite);
    let module = tr_gr_module_with(ctx, a.ell, trunc, w, a.mode.into(), a.v1_cutoff)?;
    if let Some(c) = &module.comparison {
        if !c.is_match() {
            return Err(CliError::Verification(format!(
                "kernel oracle and closed forms disagree: {} dimension and {} torsion mismatches",
                c.dim_mismatches.len(),
                c.torsion_mismatches.len()
            )));
        }
    }
    if let Some(r) = &module.report {
        if !r.is_clean() {
            return Err(CliError::Verification(format!(
                "kernel oracle defects: {r:?}"
            )));
        }
    }
    let table = DimTable::graded(a.p, a.m, None, w, &module.dims);
    Ok((
        table.clone(),
        ModuleArtifact {
            table,
            generators: module.decomposition,
            report: module.report,
        },
    ))
}

fn quotient(
    name: &str,
    a: &QuotientArgs,
    out: &mut dyn Write,
    f: fn(&AssemblyParams) -> Result<DimTable, assembly::AssemblyError>,
) -> Result<(), CliError> {
    cached(name, a, &a.output, out, || {
        let params = AssemblyParams::new(a.p, a.n, a.k, window(&a.window)?)?;
        let table = f(&params)?;
        Ok(match a.output.format {
            Format::Json => to_json(&table),
            Format::Csv => table.to_csv(),
        })
    })
}

#[derive(Serialize)]
struct BettiOutput {
    p: u32,
    d: u64,
    bound: u32,
}

fn betti(a: &BettiArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bound = betti_bound(&PrimeContext::new(a.p)?, a.d);
    let payload = match a.format {
        Some(Format::Json) => to_json(&BettiOutput {
            p: a.p,
            d: a.d,
            bound,
        }),
        Some(Format::Csv) => format!("p,d,bound\n{},{},{bound}\n", a.p, a.d),
        None => format!("{bound}\n"),
    };
    emit(&payload, None, out)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    for &p in &a.p {
        PrimeContext::new(p)?;
    }
    let grid = Grid {
        primes: a.p.clone(),
        n_max: a.n_max,
        m_max: a.m_max,
        ell_max: a.ell_max,
        deg_min: a.deg_min,
        deg_max: a.deg_max,
    };
    let report = run_suites(&a.suite, &grid)?;
    emit(&to_json(&report), a.out.as_deref(), out)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .suites
            .iter()
            .flat_map(|s| {
                s.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| format!("{}/{}", s.suite, c.name))
            })
            .collect();
        Err(CliError::Verification(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}
