//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "synlab",
    version,
    about = "Syntomic cohomology, TC and K-theory of ℤ/pⁿ mod (p, v₁ᵏ)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E∞-page of a twisted Nygaard spectral sequence.
    Einf(EinfArgs),
    /// gr TR^[m](ℤ_p; Σ^{2ℓ}ℤ_p)/p (omit --m for TR itself).
    Tr(TrArgs),
    /// Mod (p, v₁ᵏ) syntomic cohomology of ℤ/pⁿ.
    Syntomic(QuotientArgs),
    /// π_* TC(ℤ/pⁿ)/(p, v₁ᵏ).
    Tc(QuotientArgs),
    /// π_* K(ℤ/pⁿ)/(p, v₁ᵏ).
    Ktheory(QuotientArgs),
    /// The Betti-number bound b(d).
    BettiBound(BettiArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Hfp,
    Tate,
    Muinv,
}

impl From<VariantArg> for nygaard_engine::Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Hfp => Self::Hfp,
            VariantArg::Tate => Self::Tate,
            VariantArg::Muinv => Self::Muinv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Oracle,
    Closed,
    Both,
}

impl From<ModeArg> for tr_kernel::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Oracle => Self::Oracle,
            ModeArg::Closed => Self::Closed,
            ModeArg::Both => Self::Both,
        }
    }
}

/// Flags shared by every command producing an artifact.
#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Cache directory (falls back to $SYNLAB_CACHE; no caching if neither).
    #[arg(long, env = "SYNLAB_CACHE")]
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

/// Stem range; the lower end defaults to slightly below zero.
#[derive(Debug, Clone, Args, Serialize)]
pub struct WindowArgs {
    #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
    pub deg_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub deg_max: i64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EinfArgs {
    #[arg(long)]
    pub p: u32,
    /// Index n of the page (the μ-inverted variant needs n ≥ 1).
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub ell: u32,
    #[arg(long, value_enum, default_value = "hfp")]
    pub variant: VariantArg,
    /// `oracle` runs the spectral sequence, `closed` evaluates the closed
    /// forms, `both` compares them.
    #[arg(long, value_enum, default_value = "oracle")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub window: WindowArgs,
    /// v₁-divisibility cutoff of the page (default 2·(1+p+⋯+p^{n+1})).
    #[arg(long)]
    pub v1_cutoff: Option<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub ell: u32,
    /// Truncation level; omitted for TR itself.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value = "oracle")]
    pub mode: ModeArg,
    #[command(flatten)]
    pub window: WindowArgs,
    /// v₁-adic cutoff of the kernel oracle.
    #[arg(long)]
    pub v1_cutoff: Option<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuotientArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u64,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BettiArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub d: u64,
    /// Print a JSON object instead of the bare number.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Suite to run (`all` runs every registered suite).
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Primes (comma separated); default: each suite's own grid.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub m_max: Option<u32>,
    #[arg(long)]
    pub ell_max: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub deg_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub deg_max: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
