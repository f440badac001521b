//! The Witt-carry operator Δ, the trace map u and the composite θ.
//!
//! For `g = M_1 + ... + M_r` with pairwise distinct exponent vectors,
//!
//! ```text
//! Δ(g) = Σ_{α} (1/p)·multinomial(p; α_1, ..., α_r) · M_1^{α_1} ⋯ M_r^{α_r}
//! ```
//!
//! over `0 <= α_j <= p - 1`, `Σ α_j = p`, with the integer coefficient reduced
//! mod p. By Wilson's theorem that coefficient is `-(∏ α_j!)^{-1} mod p`.
//!
//! `u` is the trace generator of `Hom(F_* A, A)`: it sends `c·x^a` to
//! `c^{1/p}·x^{(a - (p-1))/p}` when every `a_i ≡ p - 1 (mod p)` and to zero
//! otherwise. `θ(h) = u(Δ(g)·h)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{is_prime, Scalar};
use crate::poly::{Mono, Poly, MAX_EXP};

/// Largest p for which inverse factorials are tabulated up front.
const INV_FACT_TABLE_LIMIT: u64 = 1 << 20;

/// `(1/p)·multinomial(p; α) mod p`, keyed by the sorted nonzero parts of α.
#[derive(Debug)]
pub struct DeltaCoeffTable {
    p: u64,
    inv_fact: Vec<u64>,
    cache: RwLock<FxHashMap<Vec<u64>, u64>>,
}

impl DeltaCoeffTable {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let inv_fact = if p <= INV_FACT_TABLE_LIMIT {
            let mut fact = vec![1u64; p as usize];
            for k in 1..p as usize {
                fact[k] = fact[k - 1] * k as u64 % p;
            }
            fact.iter().map(|&f| mod_inv(f, p)).collect()
        } else {
            Vec::new()
        };
        Ok(DeltaCoeffTable {
            p,
            inv_fact,
            cache: RwLock::new(FxHashMap::default()),
        })
    }

    /// Shared table for `p`, built on first use.
    pub fn for_prime(p: u64) -> Result<Arc<Self>> {
        static TABLES: OnceLock<Mutex<HashMap<u64, Arc<DeltaCoeffTable>>>> = OnceLock::new();
        let tables = TABLES.get_or_init(Default::default);
        let mut guard = tables.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = guard.get(&p) {
            return Ok(t.clone());
        }
        let t = Arc::new(DeltaCoeffTable::new(p)?);
        guard.insert(p, t.clone());
        Ok(t)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(k!)^{-1} mod p` for `k < p`.
    pub fn inv_factorial(&self, k: u64) -> u64 {
        if let Some(&v) = self.inv_fact.get(k as usize) {
            return v;
        }
        let f = (1..=k).fold(1u64, |acc, i| mul_mod(acc, i, self.p));
        mod_inv(f, self.p)
    }

    /// Validates α (parts in `[0, p-1]`, sum `p`) and returns its coefficient.
    pub fn coeff(&self, alpha: &[u64]) -> Result<u64> {
        let p = self.p;
        if let Some(&bad) = alpha.iter().find(|&&a| a >= p) {
            return Err(Error::BadComposition {
                p,
                reason: format!("part {bad} is not below p"),
            });
        }
        let sum: u128 = alpha.iter().map(|&a| u128::from(a)).sum();
        if sum != u128::from(p) {
            return Err(Error::BadComposition {
                p,
                reason: format!("parts sum to {sum}, not {p}"),
            });
        }
        let mut key: Vec<u64> = alpha.iter().copied().filter(|&a| a > 0).collect();
        key.sort_unstable();
        if let Some(&v) = self
            .cache
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(&key)
        {
            return Ok(v);
        }
        let prod = key
            .iter()
            .fold(1u64, |acc, &a| mul_mod(acc, self.inv_factorial(a), p));
        let v = (p - prod) % p;
        self.cache
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, v);
        Ok(v)
    }
}

/// `(1/p)·multinomial(p; α) mod p`.
pub fn delta_coeff(p: u64, alpha: &[u64]) -> Result<u64> {
    DeltaCoeffTable::for_prime(p)?.coeff(alpha)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(p)) as u64
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut base, mut k, mut acc) = (a % p, p - 2, 1u64);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        k >>= 1;
    }
    acc
}

/// The Witt-carry operator on the stored term decomposition of `g`.
///
/// Δ of a monomial (or of zero) is zero. Fails only on exponent overflow.
pub fn delta(g: &Poly) -> Result<Poly> {
    let ring = g.ring();
    let field = ring.field();
    let p = ring.characteristic();
    let terms = g.sorted_terms();
    if terms.len() < 2 {
        return Ok(Poly::zero(ring));
    }
    let table = DeltaCoeffTable::for_prime(p)?;
    let max_part = (p - 1) as usize;
    let powers: Vec<Vec<Scalar>> = terms
        .iter()
        .map(|(_, c)| {
            let mut v = Vec::with_capacity(max_part + 1);
            let mut acc = Scalar::ONE;
            for _ in 0..=max_part {
                v.push(acc);
                acc = field.mul(acc, *c);
            }
            v
        })
        .collect();
    let exps: Vec<&[u64]> = terms.iter().map(|(m, _)| m.exps()).collect();

    let mut out: FxHashMap<Mono, Scalar> = FxHashMap::default();
    let mut walk = Walk {
        p,
        exps: &exps,
        powers: &powers,
        table: &table,
        field,
        out: &mut out,
    };
    walk.descend(
        0,
        p,
        &mut SmallVec::from_elem(0, ring.nvars()),
        Scalar::ONE,
        1,
    )?;
    out.retain(|_, c| !c.is_zero());
    Ok(Poly::from_map(ring, out))
}

struct Walk<'a> {
    p: u64,
    exps: &'a [&'a [u64]],
    powers: &'a [Vec<Scalar>],
    table: &'a DeltaCoeffTable,
    field: &'a crate::field::FieldCtx,
    out: &'a mut FxHashMap<Mono, Scalar>,
}

impl Walk<'_> {
    /// Assigns α_j for terms `j..` with `remaining` still to distribute.
    /// `inv` accumulates `∏ (α_i!)^{-1}` and `coeff` accumulates `∏ c_i^{α_i}`.
    fn descend(
        &mut self,
        j: usize,
        remaining: u64,
        acc: &mut SmallVec<[u64; 6]>,
        coeff: Scalar,
        inv: u64,
    ) -> Result<()> {
        if remaining == 0 {
            let c = (self.p - inv) % self.p;
            let value = self.field.mul(coeff, Scalar(c));
            let e = self.out.entry(Mono::new(acc)?).or_insert(Scalar::ZERO);
            *e = self.field.add(*e, value);
            return Ok(());
        }
        let r = self.exps.len();
        if j == r {
            return Ok(());
        }
        let later_capacity = (r - j - 1) as u64 * (self.p - 1);
        let lo = remaining.saturating_sub(later_capacity);
        let hi = remaining.min(self.p - 1);
        for a in lo..=hi {
            if a == 0 {
                self.descend(j + 1, remaining, acc, coeff, inv)?;
                continue;
            }
            let saved = acc.clone();
            for (slot, &e) in acc.iter_mut().zip(self.exps[j]) {
                *slot = e
                    .checked_mul(a)
                    .and_then(|v| slot.checked_add(v))
                    .filter(|&v| v <= MAX_EXP)
                    .ok_or(Error::ExponentOverflow)?;
            }
            let coeff = self.field.mul(coeff, self.powers[j][a as usize]);
            let inv = inv * self.table.inv_factorial(a) % self.p;
            self.descend(j + 1, remaining - a, acc, coeff, inv)?;
            *acc = saved;
        }
        Ok(())
    }
}

/// The trace map u.
pub fn trace_u(f: &Poly) -> Poly {
    let ring = f.ring();
    let field = ring.field();
    let p = ring.characteristic();
    Poly::from_terms(
        ring,
        f.terms()
            .filter(|(m, _)| m.exps().iter().all(|&e| e % p == p - 1))
            .map(|(m, c)| {
                let exps: Vec<u64> = m.exps().iter().map(|&e| (e - (p - 1)) / p).collect();
                (
                    Mono::new(&exps).expect("exponents only shrink"),
                    field.frob_inv(*c),
                )
            }),
    )
}

/// True when `u(f) = 0`.
pub fn ker_u(f: &Poly) -> bool {
    let p = f.ring().characteristic();
    !f.terms()
        .any(|(m, _)| m.exps().iter().all(|&e| e % p == p - 1))
}

/// `θ(h) = u(Δ(g)·h)`. A supplied Δ(g) is checked against a fresh computation.
pub fn theta(g: &Poly, h: &Poly, delta_cache: Option<&Poly>) -> Result<Poly> {
    let d = delta(g)?;
    if let Some(cached) = delta_cache {
        if cached != &d {
            return Err(Error::CacheMismatch);
        }
    }
    ThetaOp::from_delta(d).apply(h)
}

/// θ for a fixed g with Δ(g) computed once.
#[derive(Clone, Debug)]
pub struct ThetaOp {
    delta: Poly,
}

impl ThetaOp {
    pub fn new(g: &Poly) -> Result<Self> {
        Ok(ThetaOp { delta: delta(g)? })
    }

    fn from_delta(delta: Poly) -> Self {
        ThetaOp { delta }
    }

    pub fn delta(&self) -> &Poly {
        &self.delta
    }

    /// `u(Δ(g)·h)`, forming only the products that survive the trace.
    pub fn apply(&self, h: &Poly) -> Result<Poly> {
        if self.delta.ring() != h.ring() {
            return Err(Error::RingMismatch);
        }
        let ring = h.ring();
        let field = ring.field();
        let p = ring.characteristic();
        let mut out: FxHashMap<Mono, Scalar> = FxHashMap::default();
        for (ma, ca) in self.delta.terms() {
            'pairs: for (mb, cb) in h.terms() {
                let mut exps: SmallVec<[u64; 6]> = SmallVec::with_capacity(ma.len());
                for (&a, &b) in ma.exps().iter().zip(mb.exps()) {
                    // a % p + b % p avoids overflow when testing the residue.
                    if (a % p + b % p) % p != p - 1 {
                        continue 'pairs;
                    }
                    let s = a.checked_add(b).ok_or(Error::ExponentOverflow)?;
                    exps.push((s - (p - 1)) / p);
                }
                let c = field.frob_inv(field.mul(*ca, *cb));
                let e = out.entry(Mono::new(&exps)?).or_insert(Scalar::ZERO);
                *e = field.add(*e, c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Poly::from_map(ring, out))
    }
}
