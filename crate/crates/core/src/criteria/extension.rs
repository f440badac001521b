use serde::{Deserialize, Serialize};

use super::height::{delta_exponent, qfs_height_search, HeightVerdict, LevelRecord};
use super::{Backend, LevelVariant};
use crate::combinatorics::{product_membership_oracle, OracleVerdict};
use crate::error::{Error, Result};
use crate::frobops::delta;
use crate::ideal::FrobIdeal;
use crate::poly::{Budget, Poly};

/// Argument of Δ in `f_n = f^{p-2}·Δ(h)^{(p^{n-1}-1)/(p-1)}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FnVariant {
    /// `h = f^{p-1}`.
    #[default]
    #[serde(rename = "delta-fpow")]
    DeltaFPow,
    /// `h = f^{p-2}`; at p = 2 this is Δ(1) = 0.
    Literal,
}

impl std::str::FromStr for FnVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "delta-fpow" => Ok(FnVariant::DeltaFPow),
            "literal" => Ok(FnVariant::Literal),
            other => Err(format!(
                "unknown f_n variant `{other}` (delta-fpow | literal)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub f: Poly,
    pub n: u32,
    pub l: u64,
    pub variant: LevelVariant,
    pub fn_variant: FnVariant,
    /// Level records of `f` for `r = 1..n-1`.
    pub levels: Vec<LevelRecord>,
    pub hypothesis_sht: bool,
    pub hypothesis_fn: bool,
    pub fn_backend: Backend,
    /// `l >= p^n`.
    pub l_large_enough: bool,
    /// `A[t]/(f + t^l)` is not quasi-F-split.
    pub conclusion: bool,
}

fn fn_h(f: &Poly, fn_variant: FnVariant) -> Result<Poly> {
    let p = f.ring().characteristic();
    match fn_variant {
        FnVariant::DeltaFPow => f.pow(p - 1),
        FnVariant::Literal => f.pow(p - 2),
    }
}

/// `f_n mod m^[p^n]`.
pub fn fn_element(f: &Poly, n: u32, fn_variant: FnVariant, budget: &Budget) -> Result<Poly> {
    if n == 0 {
        return Err(Error::BadLevel(0));
    }
    let p = f.ring().characteristic();
    let ideal = FrobIdeal::frobenius_power(f.ring(), n).map_err(|_| Error::BadLevel(n))?;
    let head = f.trunc_pow_with(p - 2, &ideal, budget)?;
    if n == 1 || head.is_zero() {
        return Ok(head);
    }
    let d = ideal.reduce(&delta(&fn_h(f, fn_variant)?)?)?;
    let tail = d.trunc_pow_with(delta_exponent(p, n)?, &ideal, budget)?;
    head.trunc_mul_with(&tail, &ideal, budget)
}

/// Number of support monomials of f in each monomial of `f_n`.
fn fn_factor_count(p: u64, n: u32, fn_variant: FnVariant) -> Result<u64> {
    let h_degree = match fn_variant {
        FnVariant::DeltaFPow => p - 1,
        FnVariant::Literal => p - 2,
    };
    let k = if n == 1 { 0 } else { delta_exponent(p, n)? };
    k.checked_mul(p * h_degree)
        .and_then(|v| v.checked_add(p - 2))
        .ok_or(Error::BadLevel(n))
}

/// Checks the hypotheses under which `A[t]/(f + t^l)` fails to be quasi-F-split:
/// levels `1..n-1` of `f` are members, `f_n ∈ m^[p^n]`, and `l >= p^n`.
#[allow(clippy::too_many_arguments)]
pub fn extension_check(
    f: &Poly,
    n: u32,
    l: u64,
    variant: LevelVariant,
    fn_variant: FnVariant,
    backend: Backend,
    budget: &Budget,
) -> Result<ExtensionReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let vars = f.ring().nvars();
    if degree != vars as u128 {
        return Err(Error::DegreeMismatch { degree, vars });
    }
    if n == 0 || l == 0 {
        return Err(Error::InvalidArgument("n and l must be at least 1".into()));
    }
    let p = f.ring().characteristic();
    let q = p.checked_pow(n).ok_or(Error::BadLevel(n))?;

    let (levels, hypothesis_sht) = if n == 1 {
        (Vec::new(), true)
    } else {
        let report = qfs_height_search(f, n - 1, variant, backend, budget)?;
        if let HeightVerdict::BudgetExhausted(r) = report.verdict {
            return Err(Error::ResourceBudgetExceeded(format!(
                "budget exhausted at level {r}"
            )));
        }
        let ok = report.verdict == HeightVerdict::AtLeast(n);
        (report.levels, ok)
    };

    let mut fn_backend = Backend::Poly;
    let mut hypothesis_fn = None;
    if backend != Backend::Poly {
        let count = fn_factor_count(p, n, fn_variant)?;
        match product_membership_oracle(f, count, q)? {
            OracleVerdict::MemberSound => {
                fn_backend = Backend::Combinatorial;
                hypothesis_fn = Some(true);
            }
            OracleVerdict::Unknown { .. } if backend == Backend::Combinatorial => {
                fn_backend = Backend::Combinatorial;
                hypothesis_fn = Some(false);
            }
            OracleVerdict::Unknown { .. } => {}
        }
    }
    let hypothesis_fn = match hypothesis_fn {
        Some(h) => h,
        None => fn_element(f, n, fn_variant, budget)?.is_zero(),
    };
    let l_large_enough = l >= q;
    Ok(ExtensionReport {
        f: f.clone(),
        n,
        l,
        variant,
        fn_variant,
        levels,
        hypothesis_sht,
        hypothesis_fn,
        fn_backend,
        l_large_enough,
        conclusion: hypothesis_sht && hypothesis_fn && l_large_enough,
    })
}
