//! Decision procedures: Fedder F-purity, quasi-F-split height levels,
//! θ-chain certificates, the `f + t^l` deformation check, the λ search for
//! quartics and the singular-point scan.

mod chain;
mod extension;
mod height;
mod lambda;
mod singular;

pub use chain::{chain_search, chain_verify, ChainHit, ChainReport, ChainSearchOptions};
pub use extension::{extension_check, fn_element, ExtensionReport, FnVariant};
pub use height::{
    fedder_fpure, level_element, qfs_height_search, qfs_level, HeightReport, HeightVerdict,
    LevelOutcome, LevelRecord, LevelVerdict,
};
pub use lambda::{
    corner_coefficient, fermat_lambda_quartic, lambda_search, LambdaChecks, LambdaResult,
};
pub use singular::{singular_scan, ScanReport, SingularPoint, DEFAULT_SCAN_BUDGET};

use serde::{Deserialize, Serialize};

/// Which Δ enters the level elements `f^{p-1}·D^{(p^{r-1}-1)/(p-1)}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelVariant {
    /// `D = Δ(f)`.
    DeltaF,
    /// `D = Δ(f^{p-1})`. Coincides with `DeltaF` when p = 2.
    #[default]
    #[serde(rename = "delta-fpow")]
    DeltaFPow,
}

/// How level membership is decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Exact truncated polynomial arithmetic.
    Poly,
    /// Cancellation-free product argument; can only confirm membership.
    Combinatorial,
    /// Combinatorial first, exact arithmetic when it is inconclusive.
    #[default]
    CombinatorialPrescreen,
}

impl std::str::FromStr for LevelVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "delta-f" => Ok(LevelVariant::DeltaF),
            "delta-fpow" => Ok(LevelVariant::DeltaFPow),
            other => Err(format!("unknown variant `{other}` (delta-f | delta-fpow)")),
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "poly" => Ok(Backend::Poly),
            "combinatorial" => Ok(Backend::Combinatorial),
            "combinatorial-prescreen" => Ok(Backend::CombinatorialPrescreen),
            other => Err(format!(
                "unknown backend `{other}` (poly | combinatorial | combinatorial-prescreen)"
            )),
        }
    }
}
