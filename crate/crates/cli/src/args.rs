use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Rotation-coded arcs, d-bar distances and entropy estimates for shift spaces.
#[derive(Debug, Parser)]
#[command(name = "shiftarc", version)]
pub struct Cli {
    /// TOML file supplying defaults for any flag. Top-level keys apply to
    /// every command, a `[<command>]` table to that command only.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory for outputs without an explicit `--out`.
    #[arg(long, global = true, env = "SHIFTARC_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Fixed-point precision of the rotation number.
    #[arg(long, global = true, default_value_t = 128)]
    pub precision_bits: u32,

    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a generic window or build a characteristic window.
    Gen(GenArgs),
    /// Sweep the arc from the zero point to x over a grid of β.
    Arc(ArcArgs),
    /// Find β whose arc point has a target entropy.
    Bisect(BisectArgs),
    /// Bounded heredity or safe-symbol check of a shift family.
    Check(CheckArgs),
    /// Empirical d-bar ladder between two windows.
    Dbar(DbarArgs),
    /// Block entropy profile of a window.
    Entropy(EntropyArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// `bernoulli:p`, `bernoulli:p0,p1,..`, `markov:r0;r1`, `parry:11,10` or `file:PATH`.
    #[arg(long, conflicts_with_all = ["family", "spec"])]
    pub source: Option<String>,
    /// Family with a deterministic characteristic window: `bfree`.
    #[arg(long, conflicts_with = "spec")]
    pub family: Option<String>,
    /// Spec file of a B-free family.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Comma-separated moduli for `--family bfree`.
    #[arg(long = "B", value_delimiter = ',')]
    pub b: Vec<u64>,
    /// Inclusive integer range `lo:hi` of the characteristic window.
    #[arg(long)]
    pub range: Option<String>,
    /// Window length for sampled sources.
    #[arg(long)]
    pub n: Option<usize>,
    /// Required for sampled sources.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ArcArgs {
    #[arg(long)]
    pub x: PathBuf,
    /// `default`, `random:SEED`, a `0x` fixed-point hex or an expression like `sqrt(2)-1`.
    #[arg(long, default_value = "default")]
    pub alpha: String,
    /// `lo:hi:step` with exact decimal or fractional values.
    #[arg(long, default_value = "0:1:0.05")]
    pub grid: String,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Spec file; every arc point is spot-checked for admissibility.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BisectArgs {
    #[arg(long)]
    pub x: PathBuf,
    /// Target entropy in nats (bits with `--bits`).
    #[arg(long, allow_negative_numbers = true)]
    pub target: f64,
    #[arg(long, default_value_t = 0.02)]
    pub tol: f64,
    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,
    #[arg(long, default_value = "default")]
    pub alpha: String,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 12)]
    pub max_len: usize,
    /// `hereditary` or `safe:<symbol>`.
    #[arg(long, default_value = "hereditary")]
    pub mode: String,
    /// Maximum number of words the enumeration may touch.
    #[arg(long, default_value_t = 1 << 24)]
    pub budget: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DbarArgs {
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long)]
    pub y: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub ks: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Adequacy guard: the window must hold this many times `n^k` symbols.
    #[arg(long, default_value_t = 100)]
    pub adequacy: u64,
    /// Also report the Lempel-Ziv cross-check.
    #[arg(long)]
    pub lz: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
