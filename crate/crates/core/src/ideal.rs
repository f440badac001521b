//! Frobenius-power ideals `(x_i^q : i in S)` and membership.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::{Mono, Poly, RingCtx};

/// The monomial ideal generated by `x_i^q` for `i` in the support.
///
/// With `q = p^e` and full support this is `m^[p^e]` for `m = (x_1, ..., x_N)`.
/// `q` need not be a power of p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobIdeal {
    ring: RingCtx,
    q: u64,
    support: SmallVec<[bool; 6]>,
}

impl FrobIdeal {
    /// `q` over all ring variables.
    pub fn new(ring: &RingCtx, q: u64) -> Result<Self> {
        let all: Vec<usize> = (0..ring.nvars()).collect();
        Self::with_support(ring, q, &all)
    }

    pub fn with_support(ring: &RingCtx, q: u64, support: &[usize]) -> Result<Self> {
        if q == 0 {
            return Err(Error::BadIdeal("q must be at least 1".into()));
        }
        if support.is_empty() {
            return Err(Error::BadIdeal("support must be nonempty".into()));
        }
        let mut mask = SmallVec::from_elem(false, ring.nvars());
        for &i in support {
            if i >= ring.nvars() {
                return Err(Error::BadIdeal(format!("variable index {i} out of range")));
            }
            mask[i] = true;
        }
        Ok(FrobIdeal {
            ring: ring.clone(),
            q,
            support: mask,
        })
    }

    /// `m^[p^e]` over all variables; fails when `p^e` overflows.
    pub fn frobenius_power(ring: &RingCtx, e: u32) -> Result<Self> {
        let q = ring
            .characteristic()
            .checked_pow(e)
            .ok_or_else(|| Error::BadIdeal(format!("p^{e} overflows")))?;
        Self::new(ring, q)
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn support(&self) -> Vec<usize> {
        self.support
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect()
    }

    /// Per-variable exponent thresholds (`None` outside the support).
    pub(crate) fn limits(&self) -> Vec<Option<u64>> {
        self.support.iter().map(|&s| s.then_some(self.q)).collect()
    }

    pub(crate) fn check_ring(&self, ring: &RingCtx) -> Result<()> {
        if &self.ring == ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn contains_mono(&self, m: &Mono) -> bool {
        m.exps()
            .iter()
            .zip(&self.support)
            .any(|(&e, &s)| s && e >= self.q)
    }

    /// Membership of a polynomial: every support monomial must be a member.
    pub fn contains(&self, f: &Poly) -> Result<bool> {
        self.check_ring(f.ring())?;
        Ok(f.terms().all(|(m, _)| self.contains_mono(m)))
    }

    /// Drops every member monomial; `f - reduce(f)` lies in the ideal.
    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        self.check_ring(f.ring())?;
        Ok(self.reduce_unchecked(f))
    }

    pub(crate) fn reduce_unchecked(&self, f: &Poly) -> Poly {
        Poly::from_map(
            f.ring(),
            f.terms()
                .filter(|(m, _)| !self.contains_mono(m))
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        )
    }
}
