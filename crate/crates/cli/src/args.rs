use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "blockforge", version, about = "Blocking sets in P^2(F_q) from unions of plane curves")]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write the JSON record here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write a CSV summary table.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "BLOCKFORGE_THREADS")]
    pub threads: Option<usize>,
    /// Include wall time in the record.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FieldArgs {
    /// Field order; alternative to --p/--r.
    #[arg(long, conflicts_with_all = ["p", "r"])]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub r: Option<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolKind {
    Pencil,
    GraphType,
    Fermat,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PoolArgs {
    #[arg(long, value_enum, default_value = "pencil")]
    pub pool: PoolKind,
    /// Number of sampled curves; ignored for the pencil pool.
    #[arg(long, default_value_t = 200)]
    pub pool_size: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Modulus, generator and size of F_q.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Greedy pencil construction with every guarantee checked.
    PencilConstruct {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
    },
    /// Exact minimum number of pencil curves, by budgeted branch and bound.
    PencilMincover {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = blockforge::pencil::DEFAULT_MIN_COVER_BUDGET)]
        budget: u64,
    },
    /// Check a point set or a union of curves against every line.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// JSON array of `[x, y, z]` element indices.
        #[arg(long, conflicts_with = "curves", required_unless_present = "curves")]
        points: Option<PathBuf>,
        /// JSON array of `{"degree": d, "coeffs": [...]}` in monomial order.
        #[arg(long)]
        curves: Option<PathBuf>,
        /// List every unblocked line.
        #[arg(long)]
        full: bool,
    },
    /// Common skew lines of random nonsingular conics via the dual discriminant.
    ConicSkewCensus {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
    /// Frobenius cycle types over all lines for a union of curves.
    ChebotarevCensus {
        #[command(flatten)]
        field: FieldArgs,
        /// `fermat:D`, `pencil:D:ALPHA`, `graph:D:SEED`, `fermat-random:D:SEED`
        /// or `conic:SEED`; repeat for a union.
        #[arg(long = "curve", required = true)]
        curves: Vec<String>,
    },
    /// Stein domination of lines by a pool of certified curves.
    SteinBuild {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        pool: PoolArgs,
        #[arg(long)]
        seed: u64,
    },
    /// A family whose union meets every line in at least t points.
    TfoldBuild {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        pool: PoolArgs,
        #[arg(long)]
        seed: u64,
    },
    /// Exhaustive counts of geometrically irreducible curves through points.
    CountCurves {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        /// Skip the pair counts.
        #[arg(long)]
        no_pairs: bool,
    },
    /// k-values of the pencil and Stein constructions over several fields.
    KTable {
        /// Comma-separated field orders.
        #[arg(long, value_delimiter = ',', required = true)]
        qs: Vec<u64>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
    },
}
