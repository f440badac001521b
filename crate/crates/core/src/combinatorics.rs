//! Coefficient-free membership arguments.
//!
//! Every monomial of a product of `s` factors drawn from the support of `f`
//! has the form `∏ M_j^{γ_j}` with `Σ γ_j = s`. Such a product avoids
//! `m^[q]` exactly when, for every variable, the `γ`-weighted sum of that
//! variable's exponents is at most `q - 1`. If no `γ` achieves this, every
//! such product lies in `m^[q]` regardless of how coefficients cancel.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Mono, Poly};

/// One exponent row per support monomial of `f`, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentMatrix {
    rows: Vec<Vec<u64>>,
    nvars: usize,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u64>>, nvars: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != nvars) {
            return Err(Error::InvalidArgument(
                "row length differs from arity".into(),
            ));
        }
        for (i, a) in rows.iter().enumerate() {
            if rows[..i].contains(a) {
                return Err(Error::InvalidArgument(
                    "rows must be pairwise distinct".into(),
                ));
            }
        }
        Ok(ExponentMatrix { rows, nvars })
    }

    pub fn from_poly(f: &Poly) -> Self {
        ExponentMatrix {
            rows: f
                .sorted_terms()
                .into_iter()
                .map(|(m, _)| m.exps().to_vec())
                .collect(),
            nvars: f.ring().nvars(),
        }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `∏ rows[j]^{γ_j}` as an exponent vector.
    pub fn product(&self, gamma: &[u64]) -> Vec<u128> {
        let mut out = vec![0u128; self.nvars];
        for (row, &g) in self.rows.iter().zip(gamma) {
            for (o, &e) in out.iter_mut().zip(row) {
                *o += u128::from(e) * u128::from(g);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaWitness {
    pub gamma: Vec<u64>,
    pub q: u64,
    pub s: u64,
}

impl GammaWitness {
    /// Re-checks `Σγ = s` and every weighted column sum `<= q - 1`.
    pub fn is_valid_for(&self, e: &ExponentMatrix) -> bool {
        let total: u128 = self.gamma.iter().map(|&g| u128::from(g)).sum();
        self.gamma.len() == e.rows.len()
            && total == u128::from(self.s)
            && e.product(&self.gamma)
                .iter()
                .all(|&w| w < u128::from(self.q))
    }
}

/// Default cap on search nodes for [`gamma_feasible`].
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000_000;

/// Lexicographically least `γ` with `Σγ = s` whose product avoids `m^[q]`.
///
/// Depth-first over `γ_0, γ_1, ...` in increasing order. Each coordinate is
/// capped by the remaining per-variable capacity, and a branch is cut when
/// the capacity left in variables still used by unassigned rows cannot hold
/// the remaining count at the smallest remaining row degree.
pub fn gamma_feasible(e: &ExponentMatrix, q: u64, s: u64) -> Result<Option<GammaWitness>> {
    gamma_feasible_with(e, q, s, DEFAULT_NODE_BUDGET)
}

pub fn gamma_feasible_with(
    e: &ExponentMatrix,
    q: u64,
    s: u64,
    node_budget: u64,
) -> Result<Option<GammaWitness>> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let r = e.rows.len();
    if r == 0 {
        return Ok((s == 0).then(|| GammaWitness {
            gamma: Vec::new(),
            q,
            s,
        }));
    }
    // touched[j][i]: some row k >= j has a positive entry in variable i.
    let mut touched = vec![vec![false; e.nvars]; r + 1];
    let mut min_deg = vec![u128::MAX; r + 1];
    for j in (0..r).rev() {
        let deg: u128 = e.rows[j].iter().map(|&x| u128::from(x)).sum();
        min_deg[j] = min_deg[j + 1].min(deg);
        let (head, tail) = touched.split_at_mut(j + 1);
        for ((t, &below), &x) in head[j].iter_mut().zip(&tail[0]).zip(&e.rows[j]) {
            *t = below || x > 0;
        }
    }
    let mut search = GammaSearch {
        rows: &e.rows,
        touched,
        min_deg,
        nodes: 0,
        node_budget,
        gamma: vec![0; r],
    };
    let caps = vec![u128::from(q - 1); e.nvars];
    if search.descend(0, u128::from(s), &caps)? {
        Ok(Some(GammaWitness {
            gamma: search.gamma,
            q,
            s,
        }))
    } else {
        Ok(None)
    }
}

struct GammaSearch<'a> {
    rows: &'a [Vec<u64>],
    touched: Vec<Vec<bool>>,
    min_deg: Vec<u128>,
    nodes: u64,
    node_budget: u64,
    gamma: Vec<u64>,
}

impl GammaSearch<'_> {
    fn viable(&self, j: usize, remaining: u128, caps: &[u128]) -> bool {
        if remaining == 0 {
            return true;
        }
        if j == self.rows.len() {
            return false;
        }
        let room: u128 = caps
            .iter()
            .zip(&self.touched[j])
            .filter(|(_, &t)| t)
            .map(|(&c, _)| c)
            .sum();
        room >= remaining.saturating_mul(self.min_deg[j])
    }

    fn descend(&mut self, j: usize, remaining: u128, caps: &[u128]) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::ResourceBudgetExceeded(format!(
                "gamma search exceeded {} nodes",
                self.node_budget
            )));
        }
        let row = &self.rows[j];
        let last = j + 1 == self.rows.len();
        let mut hi = remaining;
        for (&c, &x) in caps.iter().zip(row) {
            if x > 0 {
                hi = hi.min(c / u128::from(x));
            }
        }
        if last {
            // The final coordinate takes whatever count is left.
            if hi >= remaining {
                self.gamma[j] = remaining as u64;
                return Ok(true);
            }
            return Ok(false);
        }
        let mut next = caps.to_vec();
        for g in 0..=hi {
            for ((n, &c), &x) in next.iter_mut().zip(caps).zip(row) {
                *n = c - g * u128::from(x);
            }
            if !self.viable(j + 1, remaining - g, &next) {
                continue;
            }
            self.gamma[j] = g as u64;
            if self.descend(j + 1, remaining - g, &next)? {
                return Ok(true);
            }
        }
        self.gamma[j] = 0;
        Ok(false)
    }
}

/// Which count a sweep pairs with each q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountRule {
    QMinus2,
    QMinus1,
}

impl CountRule {
    pub fn count(self, q: u64) -> Option<u64> {
        match self {
            CountRule::QMinus2 => q.checked_sub(2),
            CountRule::QMinus1 => q.checked_sub(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub q: u64,
    pub s: u64,
    /// Whether the claim under test asserts infeasibility at this q.
    pub in_scope: bool,
    pub witness: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub rule: CountRule,
    pub entries: Vec<SweepEntry>,
    /// In-scope q values where a witness was nevertheless found.
    pub contradictions: Vec<u64>,
}

impl SweepReport {
    pub fn feasible_count(&self) -> usize {
        self.entries.iter().filter(|e| e.witness.is_some()).count()
    }
}

/// Runs [`gamma_feasible`] for every q and flags in-scope feasible cases.
pub fn claim_sweep<P>(
    e: &ExponentMatrix,
    qs: &[u64],
    rule: CountRule,
    claims_infeasible: P,
) -> Result<SweepReport>
where
    P: Fn(u64) -> bool + Sync,
{
    let entries: Vec<SweepEntry> = qs
        .par_iter()
        .filter_map(|&q| rule.count(q).map(|s| (q, s)))
        .map(|(q, s)| {
            let witness = gamma_feasible(e, q, s)?.map(|w| w.gamma);
            Ok(SweepEntry {
                q,
                s,
                in_scope: claims_infeasible(q),
                witness,
            })
        })
        .collect::<Result<_>>()?;
    let contradictions = entries
        .iter()
        .filter(|en| en.in_scope && en.witness.is_some())
        .map(|en| en.q)
        .collect();
    Ok(SweepReport {
        rule,
        entries,
        contradictions,
    })
}

/// `(b, b^2, ..., b^k) mod modulus`.
pub fn powers_mod(b: u64, modulus: u64, k: usize) -> Vec<u64> {
    let m = u128::from(modulus);
    let base = u128::from(b) % m;
    let mut acc = 1u128;
    (0..k)
        .map(|_| {
            acc = acc * base % m;
            acc as u64
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OracleVerdict {
    /// Every product of `count` support monomials lies in the ideal.
    MemberSound,
    /// Some product avoids the ideal; coefficients might still cancel.
    Unknown { gamma: Vec<u64>, monomial: Vec<u64> },
}

impl OracleVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, OracleVerdict::MemberSound)
    }
}

/// Sound one-sided test: is every product of `count` support monomials of
/// `f` inside `m^[q]`?
pub fn product_membership_oracle(f: &Poly, count: u64, q: u64) -> Result<OracleVerdict> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let e = ExponentMatrix::from_poly(f);
    Ok(match gamma_feasible(&e, q, count)? {
        None => OracleVerdict::MemberSound,
        Some(w) => {
            let monomial = e.product(&w.gamma).iter().map(|&x| x as u64).collect();
            OracleVerdict::Unknown {
                gamma: w.gamma,
                monomial,
            }
        }
    })
}

/// Exponent vector of a witness product as a [`Mono`] (fails on overflow).
pub fn witness_mono(e: &ExponentMatrix, gamma: &[u64]) -> Result<Mono> {
    let v: Vec<u64> = e
        .product(gamma)
        .into_iter()
        .map(|x| u64::try_from(x).map_err(|_| Error::ExponentOverflow))
        .collect::<Result<_>>()?;
    Mono::new(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::poly::RingCtx;

    fn quartic_matrix() -> ExponentMatrix {
        ExponentMatrix::new(
            vec![
                vec![4, 0, 0, 0],
                vec![1, 3, 0, 0],
                vec![0, 1, 3, 0],
                vec![0, 0, 1, 3],
            ],
            4,
        )
        .unwrap()
    }

    /// Unpruned enumeration of all γ with Σγ = s, smallest lexicographic first.
    fn naive(e: &ExponentMatrix, q: u64, s: u64) -> Option<Vec<u64>> {
        fn rec(e: &ExponentMatrix, q: u64, j: usize, left: u64, g: &mut Vec<u64>) -> bool {
            if j + 1 == e.rows().len() {
                g.push(left);
                if e.product(g).iter().all(|&w| w < u128::from(q)) {
                    return true;
                }
                g.pop();
                return false;
            }
            for v in 0..=left {
                g.push(v);
                if rec(e, q, j + 1, left - v, g) {
                    return true;
                }
                g.pop();
            }
            false
        }
        let mut g = Vec::new();
        rec(e, q, 0, s, &mut g).then_some(g)
    }

    #[test]
    fn quartic_fixtures() {
        let e = quartic_matrix();
        assert_eq!(gamma_feasible(&e, 512, 510).unwrap(), None);
        let w = gamma_feasible(&e, 28, 27).unwrap().unwrap();
        assert_eq!(w.gamma, vec![5, 7, 6, 9]);
        assert!(w.is_valid_for(&e));
        assert_eq!(gamma_feasible(&e, 2, 1).unwrap(), None);
    }

    #[test]
    fn matrix_from_poly_uses_canonical_order() {
        let r = RingCtx::with_vars(FieldCtx::prime(2).unwrap(), "x,y,z,w").unwrap();
        let f = Poly::parse(&r, "z*w^3 + y*z^3 + x*y^3 + x^4").unwrap();
        assert_eq!(ExponentMatrix::from_poly(&f), quartic_matrix());
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        let mats = [
            quartic_matrix(),
            ExponentMatrix::new(vec![vec![2, 1, 0], vec![0, 1, 2], vec![1, 1, 1]], 3).unwrap(),
            ExponentMatrix::new(vec![vec![0, 0], vec![1, 0], vec![0, 3]], 2).unwrap(),
            ExponentMatrix::new(vec![vec![3, 0], vec![0, 2]], 2).unwrap(),
        ];
        for e in &mats {
            for q in 1..=30 {
                for s in 0..=24 {
                    let fast = gamma_feasible(e, q, s).unwrap().map(|w| w.gamma);
                    assert_eq!(fast, naive(e, q, s), "q={q} s={s} rows={:?}", e.rows());
                }
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let e = quartic_matrix();
        assert!(matches!(
            gamma_feasible_with(&e, 2000, 1998, 10),
            Err(Error::ResourceBudgetExceeded(_))
        ));
    }

    #[test]
    fn residues() {
        assert_eq!(powers_mod(2, 27, 9), vec![2, 4, 8, 16, 5, 10, 20, 13, 26]);
        assert_eq!(powers_mod(2, 27, 1), vec![2]);
        assert_eq!(powers_mod(10, 7, 3), vec![3, 2, 6]);
    }

    #[test]
    fn oracle_examples() {
        let r = RingCtx::with_vars(FieldCtx::prime(2).unwrap(), "x,y,z,w").unwrap();
        let f = Poly::parse(&r, "x^4 + x*y^3 + y*z^3 + z*w^3").unwrap();
        assert!(product_membership_oracle(&f, 510, 512).unwrap().is_member());
        for n in 1..=9u32 {
            let q = 1u64 << n;
            assert!(product_membership_oracle(&f, q - 1, q).unwrap().is_member());
        }
        let r2 = RingCtx::with_vars(FieldCtx::prime(2).unwrap(), "x,y").unwrap();
        let xy = Poly::parse(&r2, "x*y").unwrap();
        assert_eq!(
            product_membership_oracle(&xy, 1, 2).unwrap(),
            OracleVerdict::Unknown {
                gamma: vec![1],
                monomial: vec![1, 1]
            }
        );
    }

    #[test]
    fn sweep_flags_only_in_scope_witnesses() {
        let e = quartic_matrix();
        let report = claim_sweep(&e, &[27, 28, 29], CountRule::QMinus1, |q| q % 27 != 1).unwrap();
        assert!(report.contradictions.is_empty());
        assert_eq!(report.feasible_count(), 1);
        let forced = claim_sweep(&e, &[28], CountRule::QMinus1, |_| true).unwrap();
        assert_eq!(forced.contradictions, vec![28]);
    }
}
