use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobops::{ker_u, ThetaOp};
use crate::ideal::FrobIdeal;
use crate::poly::{Budget, Mono, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub g: Poly,
    pub a: Poly,
    pub n: u32,
    /// `a_1, ..., a_n`.
    pub chain: Vec<Poly>,
    /// `a_i ∈ Ker(u)` for `i = 1..n-1`.
    pub kernel_flags: Vec<bool>,
    /// `a_n ∉ m^[p]`.
    pub terminus_outside: bool,
    pub certified: bool,
}

/// `a_1 = a·g`, `a_{i+1} = θ(a_i)`; certified when `a_1..a_{n-1}` lie in
/// `Ker(u)` and `a_n ∉ m^[p]`.
pub fn chain_verify(g: &Poly, a: &Poly, n: u32) -> Result<ChainReport> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "chain length must be at least 1".into(),
        ));
    }
    if a.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    let op = ThetaOp::new(g)?;
    let mut chain = Vec::with_capacity(n as usize);
    chain.push(a.mul(g)?);
    for _ in 1..n {
        let next = op.apply(chain.last().expect("chain is nonempty"))?;
        chain.push(next);
    }
    let kernel_flags: Vec<bool> = chain[..chain.len() - 1].iter().map(ker_u).collect();
    let ideal = FrobIdeal::new(g.ring(), g.ring().characteristic())?;
    let terminus_outside = !ideal.contains(chain.last().expect("chain is nonempty"))?;
    let certified = terminus_outside && kernel_flags.iter().all(|&k| k);
    Ok(ChainReport {
        g: g.clone(),
        a: a.clone(),
        n,
        chain,
        kernel_flags,
        terminus_outside,
        certified,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ChainSearchOptions {
    /// Refuse searches with more candidate monomials than this.
    pub max_candidates: u64,
    pub budget: Budget,
}

impl Default for ChainSearchOptions {
    fn default() -> Self {
        ChainSearchOptions {
            max_candidates: 50_000_000,
            budget: Budget::unlimited(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainHit {
    pub a: Mono,
    pub n: u32,
    pub report: ChainReport,
}

/// Length of the shortest certified chain starting at `a`, if any is `<= n_max`.
fn shortest_certificate(
    op: &ThetaOp,
    g: &Poly,
    a: &Poly,
    n_max: u32,
    ideal: &FrobIdeal,
) -> Result<Option<u32>> {
    let mut cur = a.mul(g)?;
    for i in 1..=n_max {
        if !ideal.contains(&cur)? {
            return Ok(Some(i));
        }
        if cur.is_zero() || !ker_u(&cur) || i == n_max {
            return Ok(None);
        }
        cur = op.apply(&cur)?;
    }
    Ok(None)
}

/// All exponent vectors below `bounds`, sorted by degree then lex, both descending.
fn candidates(bounds: &[u64], max: u64) -> Result<Vec<Vec<u64>>> {
    let total = bounds
        .iter()
        .try_fold(1u64, |acc, &b| acc.checked_mul(b.checked_add(1)?))
        .filter(|&t| t <= max)
        .ok_or_else(|| {
            Error::ResourceBudgetExceeded(format!("more than {max} candidate multipliers"))
        })?;
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u64; bounds.len()];
    loop {
        out.push(cur.clone());
        let mut i = bounds.len();
        loop {
            if i == 0 {
                out.sort_by(|a, b| {
                    let da: u128 = a.iter().map(|&x| u128::from(x)).sum();
                    let db: u128 = b.iter().map(|&x| u128::from(x)).sum();
                    db.cmp(&da).then_with(|| b.cmp(a))
                });
                return Ok(out);
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// First monomial multiplier (canonical order) with a certified chain of
/// length `<= n_max`, together with the shortest such length.
pub fn chain_search(
    g: &Poly,
    n_max: u32,
    bounds: &[u64],
    options: &ChainSearchOptions,
) -> Result<Option<ChainHit>> {
    let ring = g.ring();
    if bounds.len() != ring.nvars() {
        return Err(Error::InvalidArgument(format!(
            "expected {} exponent bounds, got {}",
            ring.nvars(),
            bounds.len()
        )));
    }
    if n_max == 0 {
        return Ok(None);
    }
    let op = ThetaOp::new(g)?;
    let ideal = FrobIdeal::new(ring, ring.characteristic())?;
    let cands = candidates(bounds, options.max_candidates)?;
    let found = cands.par_iter().find_map_first(|exps| {
        let step = || -> Result<Option<(Vec<u64>, u32)>> {
            options.budget.check_time()?;
            let a = Poly::monomial(ring, exps)?;
            Ok(shortest_certificate(&op, g, &a, n_max, &ideal)?.map(|n| (exps.clone(), n)))
        };
        step().transpose()
    });
    match found {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok((exps, n))) => {
            let a = Poly::monomial(ring, &exps)?;
            let report = chain_verify(g, &a, n)?;
            Ok(Some(ChainHit {
                a: Mono::new(&exps)?,
                n,
                report,
            }))
        }
    }
}
