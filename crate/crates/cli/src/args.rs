use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qfsplit_core::{Backend, FnVariant, LevelVariant};

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "qfsplit",
    version,
    about = "Quasi-F-split heights of hypersurfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct Common {
    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cap on intermediate polynomial sizes.
    #[arg(long, global = true)]
    pub budget_terms: Option<usize>,
    /// Wall-clock cap per check, in seconds.
    #[arg(long, global = true)]
    pub budget_seconds: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct RingArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub ext_degree: u32,
    /// Coefficients of the modulus, constant term first (default: first irreducible).
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
    #[arg(long, default_value = "x,y,z,w")]
    pub vars: String,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct LevelArgs {
    #[arg(long, value_parser = parse_variant, default_value = "delta-fpow")]
    pub variant: LevelVariant,
    #[arg(long, value_parser = parse_backend, default_value = "combinatorial-prescreen")]
    pub backend: Backend,
}

fn parse_variant(s: &str) -> Result<LevelVariant, String> {
    s.parse()
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

fn parse_fn_variant(s: &str) -> Result<FnVariant, String> {
    s.parse()
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let bad = || format!("expected `a..b` or an integer, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(format!("empty range `{s}`"));
            }
            Ok((a, b))
        }
        None => s.trim().parse().map(|a| (a, a)).map_err(|_| bad()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Sweep {
    /// q ≡ 26 (mod 27) with count q - 2.
    #[value(name = "26mod27")]
    #[serde(rename = "26mod27")]
    TwentySixMod27,
    /// q ≢ 1 (mod 27) with count q - 1.
    #[value(name = "not1mod27")]
    #[serde(rename = "not1mod27")]
    Not1Mod27,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Default,
    Full,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Level-by-level quasi-F-split height search.
    Height {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 9)]
        cap: u32,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Verifies a θ-chain a_1 = a·g, a_{i+1} = θ(a_i).
    Chain {
        #[command(flatten)]
        ring: RingArgs,
        /// The hypersurface g.
        #[arg(long)]
        poly: String,
        /// The multiplier a.
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: u32,
    },
    /// Searches monomial multipliers for a certified θ-chain.
    ChainSearch {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// Exponent bounds, one per variable.
        #[arg(long, value_delimiter = ',')]
        bounds: Vec<u64>,
    },
    /// Runs a scenario (default: the bundled fixture scenario).
    VerifyPaper {
        /// Only run checks in this section.
        #[arg(long)]
        section: Option<String>,
        #[arg(long, value_enum, default_value_t = Tier::Default)]
        tier: Tier,
        /// TOML scenario file to run instead of the bundled one.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Prints Δ(f).
    Delta {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        poly: String,
    },
    /// Prints u(f).
    Trace {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        poly: String,
    },
    /// Fedder's F-purity test at the origin.
    Fedder {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        poly: String,
    },
    /// γ-feasibility sweeps for x^4 + xy^3 + yz^3 + zw^3.
    Claims {
        #[arg(long, value_enum)]
        sweep: Sweep,
        #[arg(long, default_value_t = 2000)]
        qmax: u64,
    },
    /// Finds λ with f_λ^{p-1}, f_λ^{p-2} ∈ m^[p].
    Lambda {
        #[arg(long)]
        p: u64,
    },
    /// Chain certificates and levels for f + t^m over a range of m.
    ScanFamily {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value = "x^4+x*y^3+y*z^3+z*w^3")]
        poly: String,
        /// Range `a..b` (inclusive).
        #[arg(long, value_parser = parse_range)]
        m: (u64, u64),
        #[arg(long, default_value_t = 9)]
        cap: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// Multiplier exponent bounds (default p^2-1 per variable, p^{cap+1}-1 for t).
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<u64>>,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Singular points of a projective hypersurface over small fields.
    SingularScan {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1)]
        e_max: u32,
    },
    /// Checks the hypotheses for A[t]/(f + t^l) to be non quasi-F-split.
    Extension {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u64,
        #[arg(long, value_parser = parse_fn_variant, default_value = "delta-fpow")]
        fn_variant: FnVariant,
        #[command(flatten)]
        level: LevelArgs,
    },
}
