use std::time::Instant;

use serde::Serialize;

use super::{Backend, LevelVariant};
use crate::combinatorics::{product_membership_oracle, OracleVerdict};
use crate::error::{Error, Result};
use crate::frobops::delta;
use crate::ideal::FrobIdeal;
use crate::poly::{Budget, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelVerdict {
    Member,
    NonMember,
    /// Only the combinatorial backend ran and it could not decide.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelOutcome {
    pub r: u32,
    pub verdict: LevelVerdict,
    /// The backend that produced the verdict (`poly` or `combinatorial`).
    pub backend: Backend,
    /// `L_r mod m^[p^r]` when computed exactly.
    pub residual: Option<Poly>,
    /// Surviving product from the combinatorial oracle when inconclusive.
    pub oracle_witness: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelRecord {
    pub r: u32,
    pub verdict: LevelVerdict,
    pub backend: Backend,
    pub residual: Option<Poly>,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "level", rename_all = "kebab-case")]
pub enum HeightVerdict {
    /// First non-member level.
    Height(u32),
    /// Levels `1..cap` are all members.
    AtLeast(u32),
    /// The combinatorial backend could not decide this level.
    Undetermined(u32),
    /// The budget ran out while evaluating this level.
    BudgetExhausted(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightReport {
    pub f: Poly,
    pub variant: LevelVariant,
    pub backend: Backend,
    pub cap: u32,
    pub levels: Vec<LevelRecord>,
    pub verdict: HeightVerdict,
}

fn check_input(f: &Poly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.has_constant_term() {
        return Err(Error::ConstantTerm);
    }
    Ok(())
}

/// Fedder's criterion at the origin: F-pure iff `f^{p-1} ∉ m^[p]`.
pub fn fedder_fpure(f: &Poly) -> Result<bool> {
    check_input(f)?;
    let p = f.ring().characteristic();
    let ideal = FrobIdeal::new(f.ring(), p)?;
    Ok(!f.trunc_pow(p - 1, &ideal)?.is_zero())
}

fn level_ideal(f: &Poly, r: u32) -> Result<FrobIdeal> {
    if r == 0 {
        return Err(Error::BadLevel(r));
    }
    FrobIdeal::frobenius_power(f.ring(), r).map_err(|_| Error::BadLevel(r))
}

/// `(p^{r-1} - 1)/(p - 1)`, the Δ exponent at level r.
pub(crate) fn delta_exponent(p: u64, r: u32) -> Result<u64> {
    let pr = p.checked_pow(r - 1).ok_or(Error::BadLevel(r))?;
    Ok((pr - 1) / (p - 1))
}

/// `L_r mod m^[p^r]`, where `L_1 = f^{p-1}` and
/// `L_r = f^{p-1}·D^{(p^{r-1}-1)/(p-1)}` for `r >= 2`.
pub fn level_element(f: &Poly, r: u32, variant: LevelVariant, budget: &Budget) -> Result<Poly> {
    check_input(f)?;
    let ideal = level_ideal(f, r)?;
    let p = f.ring().characteristic();
    let head = f.trunc_pow_with(p - 1, &ideal, budget)?;
    if r == 1 || head.is_zero() {
        return Ok(head);
    }
    let base = match variant {
        LevelVariant::DeltaF => delta(f)?,
        LevelVariant::DeltaFPow => delta(&f.pow(p - 1)?)?,
    };
    let base = ideal.reduce(&base)?;
    let tail = base.trunc_pow_with(delta_exponent(p, r)?, &ideal, budget)?;
    head.trunc_mul_with(&tail, &ideal, budget)
}

/// Number of support monomials of f multiplied together in each monomial of `L_r`.
fn level_factor_count(p: u64, r: u32, variant: LevelVariant) -> Result<u64> {
    let per_delta = match variant {
        LevelVariant::DeltaF => p,
        LevelVariant::DeltaFPow => p * (p - 1),
    };
    let k = if r == 1 { 0 } else { delta_exponent(p, r)? };
    k.checked_mul(per_delta)
        .and_then(|v| v.checked_add(p - 1))
        .ok_or(Error::BadLevel(r))
}

/// Membership of `L_r` in `m^[p^r]`.
pub fn qfs_level(
    f: &Poly,
    r: u32,
    variant: LevelVariant,
    backend: Backend,
    budget: &Budget,
) -> Result<LevelOutcome> {
    check_input(f)?;
    let q = level_ideal(f, r)?.q();
    let p = f.ring().characteristic();
    if backend != Backend::Poly {
        let count = level_factor_count(p, r, variant)?;
        match product_membership_oracle(f, count, q)? {
            OracleVerdict::MemberSound => {
                return Ok(LevelOutcome {
                    r,
                    verdict: LevelVerdict::Member,
                    backend: Backend::Combinatorial,
                    residual: None,
                    oracle_witness: None,
                })
            }
            OracleVerdict::Unknown { monomial, .. } if backend == Backend::Combinatorial => {
                return Ok(LevelOutcome {
                    r,
                    verdict: LevelVerdict::Unknown,
                    backend: Backend::Combinatorial,
                    residual: None,
                    oracle_witness: Some(monomial),
                })
            }
            OracleVerdict::Unknown { .. } => {}
        }
    }
    let residual = level_element(f, r, variant, budget)?;
    Ok(LevelOutcome {
        r,
        verdict: if residual.is_zero() {
            LevelVerdict::Member
        } else {
            LevelVerdict::NonMember
        },
        backend: Backend::Poly,
        residual: Some(residual),
        oracle_witness: None,
    })
}

/// Evaluates levels `1..=cap` and stops at the first non-member.
///
/// Budget exhaustion is reported in the verdict together with the levels
/// completed so far.
pub fn qfs_height_search(
    f: &Poly,
    cap: u32,
    variant: LevelVariant,
    backend: Backend,
    budget: &Budget,
) -> Result<HeightReport> {
    check_input(f)?;
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    let mut levels = Vec::new();
    let mut verdict = HeightVerdict::AtLeast(cap + 1);
    for r in 1..=cap {
        let started = Instant::now();
        let outcome = match qfs_level(f, r, variant, backend, budget) {
            Ok(o) => o,
            Err(Error::ResourceBudgetExceeded(_)) => {
                verdict = HeightVerdict::BudgetExhausted(r);
                break;
            }
            Err(e) => return Err(e),
        };
        let v = outcome.verdict;
        levels.push(LevelRecord {
            r,
            verdict: v,
            backend: outcome.backend,
            residual: outcome.residual.filter(|res| !res.is_zero()),
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        match v {
            LevelVerdict::Member => {}
            LevelVerdict::NonMember => {
                verdict = HeightVerdict::Height(r);
                break;
            }
            LevelVerdict::Unknown => {
                verdict = HeightVerdict::Undetermined(r);
                break;
            }
        }
    }
    Ok(HeightReport {
        f: f.clone(),
        variant,
        backend,
        cap,
        levels,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::poly::RingCtx;

    fn parse(p: u64, vars: &str, s: &str) -> Poly {
        let r = RingCtx::with_vars(FieldCtx::prime(p).unwrap(), vars).unwrap();
        Poly::parse(&r, s).unwrap()
    }

    #[test]
    fn fedder_examples() {
        for p in [2, 3, 5, 7] {
            assert!(fedder_fpure(&parse(p, "x,y", "x*y")).unwrap());
        }
        assert!(!fedder_fpure(&parse(2, "x,y,z", "x^3+y^3+z^3")).unwrap());
        assert!(!fedder_fpure(&parse(3, "x,y,z,w", "x^4+y^4+z^4+w^4")).unwrap());
        assert_eq!(
            fedder_fpure(&parse(2, "x", "x+1")),
            Err(Error::ConstantTerm)
        );
        assert_eq!(
            fedder_fpure(&parse(2, "x", "0")),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn cubic_cone_levels() {
        let f = parse(2, "x,y,z", "x^3+y^3+z^3");
        let b = Budget::unlimited();
        let l2 = qfs_level(&f, 2, LevelVariant::DeltaFPow, Backend::Poly, &b).unwrap();
        assert_eq!(l2.verdict, LevelVerdict::NonMember);
        assert_eq!(l2.residual.unwrap(), parse(2, "x,y,z", "x^3*y^3*z^3"));
        let report = qfs_height_search(&f, 4, LevelVariant::DeltaFPow, Backend::Poly, &b).unwrap();
        assert_eq!(report.verdict, HeightVerdict::Height(2));
        let xy = parse(2, "x,y", "x*y");
        let report = qfs_height_search(&xy, 1, LevelVariant::DeltaF, Backend::Poly, &b).unwrap();
        assert_eq!(report.verdict, HeightVerdict::Height(1));
    }

    #[test]
    fn level_one_matches_fedder() {
        for (p, vars, s) in [
            (2, "x,y,z", "x^3+y^3+z^3"),
            (3, "x,y,z", "x^3+y^3+z^3+x*y*z"),
            (5, "x,y", "x^2+y^3"),
        ] {
            let f = parse(p, vars, s);
            let l1 = qfs_level(
                &f,
                1,
                LevelVariant::DeltaF,
                Backend::Poly,
                &Budget::unlimited(),
            )
            .unwrap();
            assert_eq!(
                l1.verdict == LevelVerdict::NonMember,
                fedder_fpure(&f).unwrap()
            );
        }
    }

    #[test]
    fn quartic_combinatorial_level_nine() {
        let f = parse(2, "x,y,z,w", "x^4 + x*y^3 + y*z^3 + z*w^3");
        let out = qfs_level(
            &f,
            9,
            LevelVariant::DeltaF,
            Backend::Combinatorial,
            &Budget::unlimited(),
        )
        .unwrap();
        assert_eq!(out.verdict, LevelVerdict::Member);
        assert_eq!(out.backend, Backend::Combinatorial);
    }

    #[test]
    fn bad_levels() {
        let f = parse(2, "x,y", "x*y");
        let b = Budget::unlimited();
        assert_eq!(
            qfs_level(&f, 0, LevelVariant::DeltaF, Backend::Poly, &b),
            Err(Error::BadLevel(0))
        );
        assert_eq!(
            qfs_level(&f, 70, LevelVariant::DeltaF, Backend::Poly, &b),
            Err(Error::BadLevel(70))
        );
    }

    #[test]
    fn budget_exhaustion_yields_partial_report() {
        let f = parse(2, "x,y,z,w", "x^4 + x*y^3 + y*z^3 + z*w^3");
        let budget = Budget {
            max_terms: Some(3),
            deadline: None,
        };
        let report =
            qfs_height_search(&f, 6, LevelVariant::DeltaF, Backend::Poly, &budget).unwrap();
        assert!(matches!(report.verdict, HeightVerdict::BudgetExhausted(_)));
    }
}
