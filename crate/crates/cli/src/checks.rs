//! Declarative checks: one variant per operation, each with its expected outcome.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qfsplit_core::combinatorics::{claim_sweep, gamma_feasible, powers_mod, CountRule};
use qfsplit_core::criteria::{chain_search, ChainSearchOptions};
use qfsplit_core::field::first_irreducible;
use qfsplit_core::{
    chain_verify, extension_check, fedder_fpure, lambda_search, product_membership_oracle,
    qfs_height_search, qfs_level, singular_scan, Backend, Budget, Error, ExponentMatrix, FieldCtx,
    FnVariant, FrobIdeal, HeightVerdict, LevelVariant, LevelVerdict, Poly, RingCtx,
};

use crate::args::Sweep;
use crate::error::{CliError, CliResult};
use crate::family;

/// Builds `F_{p^e}[vars]`; an extension without a modulus uses the first irreducible one.
pub fn build_ring(p: u64, e: u32, modulus: Option<&[u64]>, vars: &str) -> CliResult<RingCtx> {
    let field = match (e, modulus) {
        (0, _) => {
            return Err(CliError::Config(
                "extension degree must be at least 1".into(),
            ))
        }
        (1, None) => FieldCtx::prime(p)?,
        (_, Some(m)) => FieldCtx::new(p, e, Some(m))?,
        (_, None) => FieldCtx::new(p, e, Some(&first_irreducible(p, e)?))?,
    };
    Ok(RingCtx::with_vars(field, vars)?)
}

fn default_vars() -> String {
    "x,y,z,w".into()
}

fn one() -> u32 {
    1
}

fn base_quartic() -> String {
    family::BASE_QUARTIC.into()
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PolySpec {
    pub p: u64,
    #[serde(default = "one")]
    pub ext_degree: u32,
    #[serde(default)]
    pub modulus: Option<Vec<u64>>,
    #[serde(default = "default_vars")]
    pub vars: String,
    pub poly: String,
}

impl PolySpec {
    pub fn parse(&self) -> CliResult<Poly> {
        let ring = build_ring(self.p, self.ext_degree, self.modulus.as_deref(), &self.vars)?;
        Ok(Poly::parse(&ring, &self.poly)?)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckOp {
    Fedder {
        #[serde(flatten)]
        f: PolySpec,
        expect_fpure: bool,
    },
    /// `f^exponent ∈ m^[q]` (q defaults to p).
    PowerMembership {
        #[serde(flatten)]
        f: PolySpec,
        exponent: u64,
        #[serde(default)]
        q: Option<u64>,
        expect_member: bool,
    },
    Lambda {
        p: u64,
        #[serde(default)]
        expect_lambda: Option<u64>,
    },
    Oracle {
        #[serde(flatten)]
        f: PolySpec,
        count: u64,
        q: u64,
        expect_member: bool,
    },
    Level {
        #[serde(flatten)]
        f: PolySpec,
        r: u32,
        #[serde(default)]
        variant: LevelVariant,
        backend: Backend,
        expect_member: bool,
        #[serde(default)]
        expect_residual: Option<String>,
    },
    Height {
        #[serde(flatten)]
        f: PolySpec,
        cap: u32,
        #[serde(default)]
        variant: LevelVariant,
        #[serde(default)]
        backend: Backend,
        #[serde(default)]
        expect_height: Option<u32>,
        #[serde(default)]
        expect_at_least: Option<u32>,
    },
    ClaimSweep {
        sweep: Sweep,
        qmax: u64,
        #[serde(default = "base_quartic")]
        poly: String,
    },
    /// Lexicographically least γ; absent `expect_witness` means infeasible.
    Gamma {
        #[serde(default = "base_quartic")]
        poly: String,
        q: u64,
        s: u64,
        #[serde(default)]
        expect_witness: Option<Vec<u64>>,
    },
    Residues {
        base: u64,
        modulus: u64,
        k: usize,
        expect: Vec<u64>,
    },
    /// Chains of `g_m` against their closed forms for `m_min..=m_max`.
    ChainFamily { m_min: u64, m_max: u64 },
    Chain {
        #[serde(flatten)]
        g: PolySpec,
        a: String,
        n: u32,
        expect_certified: bool,
        #[serde(default)]
        expect_terminus: Option<String>,
    },
    ChainSearch {
        #[serde(flatten)]
        g: PolySpec,
        n_max: u32,
        bounds: Vec<u64>,
        expect_found: bool,
    },
    Extension {
        #[serde(flatten)]
        f: PolySpec,
        n: u32,
        l: u64,
        #[serde(default)]
        variant: LevelVariant,
        #[serde(default)]
        fn_variant: FnVariant,
        #[serde(default)]
        backend: Backend,
        expect_sht: bool,
        expect_fn: bool,
        expect_conclusion: bool,
    },
    SingularScan {
        #[serde(flatten)]
        f: PolySpec,
        e_max: u32,
        expect_empty: bool,
    },
}

/// What a check produced: pass/fail, a JSON payload and a one-line summary.
pub struct Outcome {
    pub pass: bool,
    pub detail: Value,
    pub summary: String,
}

fn quartic_ring() -> CliResult<RingCtx> {
    build_ring(2, 1, None, "x,y,z,w")
}

fn family_ring() -> CliResult<RingCtx> {
    build_ring(2, 1, None, family::FAMILY_VARS)
}

impl CheckOp {
    pub fn kind(&self) -> &'static str {
        match self {
            CheckOp::Fedder { .. } => "fedder",
            CheckOp::PowerMembership { .. } => "power-membership",
            CheckOp::Lambda { .. } => "lambda",
            CheckOp::Oracle { .. } => "oracle",
            CheckOp::Level { .. } => "level",
            CheckOp::Height { .. } => "height",
            CheckOp::ClaimSweep { .. } => "claim-sweep",
            CheckOp::Gamma { .. } => "gamma",
            CheckOp::Residues { .. } => "residues",
            CheckOp::ChainFamily { .. } => "chain-family",
            CheckOp::Chain { .. } => "chain",
            CheckOp::ChainSearch { .. } => "chain-search",
            CheckOp::Extension { .. } => "extension",
            CheckOp::SingularScan { .. } => "singular-scan",
        }
    }

    /// Parses every polynomial and checks simple preconditions without running anything.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: &str| Err(CliError::Config(msg.into()));
        match self {
            CheckOp::Fedder { f, .. }
            | CheckOp::PowerMembership { f, .. }
            | CheckOp::Oracle { f, .. }
            | CheckOp::SingularScan { f, .. } => f.parse().map(drop),
            CheckOp::Level { f, r, .. } => {
                if *r == 0 {
                    return bad("level r must be at least 1");
                }
                f.parse().map(drop)
            }
            CheckOp::Height { f, cap, .. } => {
                if *cap == 0 {
                    return bad("cap must be at least 1");
                }
                f.parse().map(drop)
            }
            CheckOp::Extension { f, n, l, .. } => {
                if *n == 0 || *l == 0 {
                    return bad("n and l must be at least 1");
                }
                f.parse().map(drop)
            }
            CheckOp::Chain { g, a, n, .. } => {
                if *n == 0 {
                    return bad("chain length must be at least 1");
                }
                Poly::parse(g.parse()?.ring(), a)?;
                Ok(())
            }
            CheckOp::ChainSearch { g, bounds, .. } => {
                if g.parse()?.ring().nvars() != bounds.len() {
                    return bad("one exponent bound per variable");
                }
                Ok(())
            }
            CheckOp::ClaimSweep { poly, .. } | CheckOp::Gamma { poly, .. } => {
                Poly::parse(&quartic_ring()?, poly)
                    .map(drop)
                    .map_err(Into::into)
            }
            CheckOp::Lambda { .. } => Ok(()),
            CheckOp::Residues { modulus, .. } => {
                if *modulus == 0 {
                    return bad("modulus must be positive");
                }
                Ok(())
            }
            CheckOp::ChainFamily { m_min, m_max } => {
                if *m_min < 1 || m_max > &511 || m_min > m_max {
                    return bad("chain-family needs 1 <= m_min <= m_max <= 511");
                }
                Ok(())
            }
        }
    }

    pub fn execute(&self, budget: &Budget) -> Result<Outcome, Error> {
        let wrap = |e: CliError| match e {
            CliError::Core(c) => c,
            other => Error::InvalidArgument(other.to_string()),
        };
        self.execute_inner(budget).map_err(wrap)
    }

    fn execute_inner(&self, budget: &Budget) -> CliResult<Outcome> {
        Ok(match self {
            CheckOp::Fedder { f, expect_fpure } => {
                let fpure = fedder_fpure(&f.parse()?)?;
                Outcome {
                    pass: fpure == *expect_fpure,
                    detail: json!({ "fpure": fpure }),
                    summary: if fpure { "F-pure" } else { "not F-pure" }.into(),
                }
            }
            CheckOp::PowerMembership {
                f,
                exponent,
                q,
                expect_member,
            } => {
                let f = f.parse()?;
                let q = q.unwrap_or(f.ring().characteristic());
                let ideal = FrobIdeal::new(f.ring(), q)?;
                let residual = f.trunc_pow_with(*exponent, &ideal, budget)?;
                let member = residual.is_zero();
                Outcome {
                    pass: member == *expect_member,
                    detail: json!({
                        "exponent": exponent,
                        "q": q,
                        "member": member,
                        "residual_terms": residual.len(),
                    }),
                    summary: format!("f^{exponent} {} m^[{q}]", if member { "∈" } else { "∉" }),
                }
            }
            CheckOp::Lambda { p, expect_lambda } => {
                let res = lambda_search(*p)?;
                let checks_ok = res
                    .checks
                    .is_some_and(|c| c.lambda4_ne_256 && c.fpm1_member && c.fpm2_member);
                let pass = res.lambda.is_some()
                    && checks_ok
                    && expect_lambda.is_none_or(|l| res.lambda == Some(l));
                Outcome {
                    pass,
                    summary: match res.lambda {
                        Some(l) => format!("lambda = {l} (p = {p})"),
                        None => format!("no lambda in F_{p}"),
                    },
                    detail: serde_json::to_value(&res).expect("serializable"),
                }
            }
            CheckOp::Oracle {
                f,
                count,
                q,
                expect_member,
            } => {
                let verdict = product_membership_oracle(&f.parse()?, *count, *q)?;
                Outcome {
                    pass: verdict.is_member() == *expect_member,
                    summary: if verdict.is_member() {
                        format!("every product of {count} monomials lies in m^[{q}]")
                    } else {
                        format!("some product of {count} monomials avoids m^[{q}]")
                    },
                    detail: serde_json::to_value(&verdict).expect("serializable"),
                }
            }
            CheckOp::Level {
                f,
                r,
                variant,
                backend,
                expect_member,
                expect_residual,
            } => {
                let f = f.parse()?;
                let out = qfs_level(&f, *r, *variant, *backend, budget)?;
                let member = out.verdict == LevelVerdict::Member;
                let residual_ok = match expect_residual {
                    None => true,
                    Some(s) => {
                        let want = Poly::parse(f.ring(), s)?;
                        out.residual.as_ref() == Some(&want)
                    }
                };
                Outcome {
                    pass: member == *expect_member
                        && out.verdict != LevelVerdict::Unknown
                        && residual_ok,
                    summary: format!("level {r}: {:?} via {:?}", out.verdict, out.backend),
                    detail: serde_json::to_value(&out).expect("serializable"),
                }
            }
            CheckOp::Height {
                f,
                cap,
                variant,
                backend,
                expect_height,
                expect_at_least,
            } => {
                let rep = qfs_height_search(&f.parse()?, *cap, *variant, *backend, budget)?;
                if let HeightVerdict::BudgetExhausted(r) = rep.verdict {
                    return Err(Error::ResourceBudgetExceeded(format!("at level {r}")).into());
                }
                let pass = match (expect_height, expect_at_least) {
                    (Some(h), _) => rep.verdict == HeightVerdict::Height(*h),
                    (None, Some(a)) => rep.verdict == HeightVerdict::AtLeast(*a),
                    (None, None) => true,
                };
                Outcome {
                    pass,
                    summary: verdict_text(&rep.verdict),
                    detail: serde_json::to_value(&rep).expect("serializable"),
                }
            }
            CheckOp::ClaimSweep { sweep, qmax, poly } => {
                let rep = run_sweep(*sweep, *qmax, poly)?;
                let feasible = rep.feasible_count();
                Outcome {
                    pass: feasible == 0 && rep.contradictions.is_empty(),
                    summary: format!(
                        "{} values of q, {feasible} feasible, {} contradictions",
                        rep.entries.len(),
                        rep.contradictions.len()
                    ),
                    detail: json!({
                        "rule": rep.rule,
                        "qs": rep.entries.len(),
                        "feasible": rep
                            .entries
                            .iter()
                            .filter(|e| e.witness.is_some())
                            .collect::<Vec<_>>(),
                        "contradictions": rep.contradictions,
                    }),
                }
            }
            CheckOp::Gamma {
                poly,
                q,
                s,
                expect_witness,
            } => {
                let e = ExponentMatrix::from_poly(&Poly::parse(&quartic_ring()?, poly)?);
                let w = gamma_feasible(&e, *q, *s)?.map(|w| w.gamma);
                Outcome {
                    pass: &w == expect_witness,
                    summary: match &w {
                        Some(g) => format!("witness {g:?}"),
                        None => "infeasible".into(),
                    },
                    detail: json!({ "q": q, "s": s, "witness": w }),
                }
            }
            CheckOp::Residues {
                base,
                modulus,
                k,
                expect,
            } => {
                let got = powers_mod(*base, *modulus, *k);
                Outcome {
                    pass: &got == expect,
                    summary: format!("{got:?}"),
                    detail: json!({ "residues": got }),
                }
            }
            CheckOp::ChainFamily { m_min, m_max } => chain_family(*m_min, *m_max)?,
            CheckOp::Chain {
                g,
                a,
                n,
                expect_certified,
                expect_terminus,
            } => {
                let g = g.parse()?;
                let a = Poly::parse(g.ring(), a)?;
                let rep = chain_verify(&g, &a, *n)?;
                let terminus_ok = match expect_terminus {
                    None => true,
                    Some(t) => rep.chain.last() == Some(&Poly::parse(g.ring(), t)?),
                };
                Outcome {
                    pass: rep.certified == *expect_certified && terminus_ok,
                    summary: format!(
                        "{} (a_{n} = {})",
                        if rep.certified {
                            "certified"
                        } else {
                            "not certified"
                        },
                        rep.chain.last().expect("nonempty chain")
                    ),
                    detail: serde_json::to_value(&rep).expect("serializable"),
                }
            }
            CheckOp::ChainSearch {
                g,
                n_max,
                bounds,
                expect_found,
            } => {
                let g = g.parse()?;
                let options = ChainSearchOptions {
                    budget: *budget,
                    ..Default::default()
                };
                let hit = chain_search(&g, *n_max, bounds, &options)?;
                Outcome {
                    pass: hit.as_ref().is_some_and(|h| h.report.certified) == *expect_found,
                    summary: match &hit {
                        Some(h) => format!("a = {}, n = {}", h.report.a, h.n),
                        None => "no certificate".into(),
                    },
                    detail: serde_json::to_value(&hit).expect("serializable"),
                }
            }
            CheckOp::Extension {
                f,
                n,
                l,
                variant,
                fn_variant,
                backend,
                expect_sht,
                expect_fn,
                expect_conclusion,
            } => {
                let rep =
                    extension_check(&f.parse()?, *n, *l, *variant, *fn_variant, *backend, budget)?;
                Outcome {
                    pass: rep.hypothesis_sht == *expect_sht
                        && rep.hypothesis_fn == *expect_fn
                        && rep.conclusion == *expect_conclusion,
                    summary: format!(
                        "levels 1..{}: {}, f_{n}: {}, l >= p^n: {}, not quasi-F-split: {}",
                        n - 1,
                        rep.hypothesis_sht,
                        rep.hypothesis_fn,
                        rep.l_large_enough,
                        rep.conclusion
                    ),
                    detail: serde_json::to_value(&rep).expect("serializable"),
                }
            }
            CheckOp::SingularScan {
                f,
                e_max,
                expect_empty,
            } => {
                let rep = singular_scan(
                    &f.parse()?,
                    *e_max,
                    qfsplit_core::criteria::DEFAULT_SCAN_BUDGET,
                )?;
                Outcome {
                    pass: rep.points.is_empty() == *expect_empty,
                    summary: format!(
                        "{} singular points over F_{}^e, e <= {e_max}",
                        rep.points.len(),
                        f.p
                    ),
                    detail: serde_json::to_value(&rep).expect("serializable"),
                }
            }
        })
    }
}

pub fn verdict_text(v: &HeightVerdict) -> String {
    match v {
        HeightVerdict::Height(r) => format!("Height({r})"),
        HeightVerdict::AtLeast(r) => format!("AtLeast({r})"),
        HeightVerdict::Undetermined(r) => format!("Undetermined({r})"),
        HeightVerdict::BudgetExhausted(r) => format!("BudgetExhausted({r})"),
    }
}

pub fn run_sweep(
    sweep: Sweep,
    qmax: u64,
    poly: &str,
) -> CliResult<qfsplit_core::combinatorics::SweepReport> {
    let e = ExponentMatrix::from_poly(&Poly::parse(&quartic_ring()?, poly)?);
    let (rule, in_scope): (CountRule, fn(u64) -> bool) = match sweep {
        Sweep::TwentySixMod27 => (CountRule::QMinus2, |q| q % 27 == 26),
        Sweep::Not1Mod27 => (CountRule::QMinus1, |q| q % 27 != 1),
    };
    let qs: Vec<u64> = (1..=qmax).filter(|&q| in_scope(q)).collect();
    Ok(claim_sweep(&e, &qs, rule, in_scope)?)
}

fn chain_family(m_min: u64, m_max: u64) -> CliResult<Outcome> {
    let ring = family_ring()?;
    let mut uncertified = Vec::new();
    let mut mismatches = Vec::new();
    for m in m_min..=m_max {
        let g = Poly::parse(&ring, &family::family_member(m))?;
        let a = Poly::parse(&ring, &family::multiplier(m))?;
        let rep = chain_verify(&g, &a, 10)?;
        if !rep.certified {
            uncertified.push(m);
        }
        for (i, want) in family::expected_chain(m).iter().enumerate() {
            let want = Poly::parse(&ring, want)?.to_string();
            let got = rep.chain[i + 1].to_string();
            if got != want {
                mismatches.push(json!({ "m": m, "i": i + 2, "got": got, "want": want }));
            }
        }
    }
    Ok(Outcome {
        pass: uncertified.is_empty() && mismatches.is_empty(),
        summary: format!(
            "{} chains, {} uncertified, {} mismatched terms",
            m_max - m_min + 1,
            uncertified.len(),
            mismatches.len()
        ),
        detail: json!({
            "m_min": m_min,
            "m_max": m_max,
            "uncertified": uncertified,
            "mismatches": mismatches,
        }),
    })
}
