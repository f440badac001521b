//! Quasi-F-split heights and Frobenius-splitting tests for hypersurfaces
//! over finite fields.
//!
//! Polynomials are sparse over `F_p` or `F_{p^e}`; membership in Frobenius
//! powers `m^[q]` is decided by truncated arithmetic or, one-sidedly, by a
//! coefficient-free product argument.

pub mod combinatorics;
pub mod criteria;
pub mod error;
pub mod field;
pub mod frobops;
pub mod ideal;
pub mod poly;
mod text;

pub use combinatorics::{
    claim_sweep, gamma_feasible, powers_mod, product_membership_oracle, CountRule, ExponentMatrix,
    GammaWitness, OracleVerdict,
};
pub use criteria::{
    chain_search, chain_verify, extension_check, fedder_fpure, lambda_search, qfs_height_search,
    qfs_level, singular_scan, Backend, ChainReport, ExtensionReport, FnVariant, HeightReport,
    HeightVerdict, LambdaResult, LevelVariant, LevelVerdict,
};
pub use error::{Error, Result};
pub use field::{FieldCtx, Scalar};
pub use frobops::{delta, delta_coeff, ker_u, theta, trace_u, ThetaOp};
pub use ideal::FrobIdeal;
pub use poly::{Budget, Mono, Poly, RingCtx};
