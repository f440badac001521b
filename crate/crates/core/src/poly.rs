//! Sparse multivariate polynomials over a [`FieldCtx`].
//!
//! Terms live in a hash map keyed by exponent vector; the canonical order
//! (total degree descending, then lexicographic descending in ring variable
//! order) is imposed only when iterating in order or printing.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Scalar};
use crate::ideal::FrobIdeal;
use crate::text::{is_identifier, Cursor};

/// Largest admissible exponent.
pub const MAX_EXP: u64 = i64::MAX as u64;

/// Below this many term pairs a product is computed on the calling thread.
const PAR_THRESHOLD: usize = 1 << 15;

#[derive(Debug)]
struct RingInner {
    field: FieldCtx,
    vars: Vec<String>,
}

/// A polynomial ring `k[x_1, ..., x_N]` with a fixed variable order.
#[derive(Clone, Debug)]
pub struct RingCtx(Arc<RingInner>);

impl PartialEq for RingCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.vars == other.0.vars)
    }
}

impl Eq for RingCtx {}

impl RingCtx {
    pub fn new<S: AsRef<str>>(field: FieldCtx, vars: &[S]) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::BadVariables(
                "at least one variable is required".into(),
            ));
        }
        let mut names: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref().trim();
            if !is_identifier(v) {
                return Err(Error::BadVariables(format!("`{v}` is not an identifier")));
            }
            if names.iter().any(|n| n == v) {
                return Err(Error::BadVariables(format!("duplicate variable `{v}`")));
            }
            names.push(v.to_string());
        }
        Ok(RingCtx(Arc::new(RingInner { field, vars: names })))
    }

    /// Convenience constructor from a comma-separated variable list.
    pub fn with_vars(field: FieldCtx, vars: &str) -> Result<Self> {
        let list: Vec<&str> = vars.split(',').collect();
        Self::new(field, &list)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.0.field
    }

    pub fn characteristic(&self) -> u64 {
        self.0.field.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// The same field with one more variable appended.
    pub fn extend(&self, name: &str) -> Result<RingCtx> {
        let mut vars = self.0.vars.clone();
        vars.push(name.to_string());
        RingCtx::new(self.0.field.clone(), &vars)
    }

    pub fn format_mono(&self, m: &Mono) -> String {
        let parts: Vec<String> =
            m.0.iter()
                .zip(&self.0.vars)
                .filter(|(e, _)| **e > 0)
                .map(|(&e, v)| {
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// An exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(SmallVec<[u64; 6]>);

impl Serialize for Mono {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl Mono {
    pub fn new(exps: &[u64]) -> Result<Self> {
        if exps.iter().any(|&e| e > MAX_EXP) {
            return Err(Error::ExponentOverflow);
        }
        Ok(Mono(SmallVec::from_slice(exps)))
    }

    pub fn one(nvars: usize) -> Self {
        Mono(SmallVec::from_elem(0, nvars))
    }

    pub fn exps(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u128 {
        self.0.iter().map(|&e| u128::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Mono) -> Result<Mono> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            let s = a.checked_add(*b).filter(|&s| s <= MAX_EXP);
            out.push(s.ok_or(Error::ExponentOverflow)?);
        }
        Ok(Mono(out))
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Graded lexicographic comparison; the canonical order lists terms
    /// from greatest to least under it.
    pub fn grlex_cmp(&self, other: &Mono) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

/// Term-count and wall-clock limits for long computations.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_terms: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn check_terms(&self, terms: usize) -> Result<()> {
        if let Some(max) = self.max_terms {
            if terms > max {
                return Err(Error::ResourceBudgetExceeded(format!(
                    "{terms} terms exceeds the cap of {max}"
                )));
            }
        }
        self.check_time()
    }

    pub fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceBudgetExceeded(
                "wall-time budget exhausted".into(),
            )),
            _ => Ok(()),
        }
    }
}

type TermMap = FxHashMap<Mono, Scalar>;

#[derive(Clone, Debug)]
pub struct Poly {
    ring: RingCtx,
    terms: TermMap,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &RingCtx) -> Self {
        Poly {
            ring: ring.clone(),
            terms: TermMap::default(),
        }
    }

    pub fn one(ring: &RingCtx) -> Self {
        Self::constant(ring, Scalar::ONE)
    }

    pub fn constant(ring: &RingCtx, c: Scalar) -> Self {
        Self::term(ring, Mono::one(ring.nvars()), c)
    }

    pub fn term(ring: &RingCtx, m: Mono, c: Scalar) -> Self {
        let mut terms = TermMap::default();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Unit-coefficient monomial with the given exponents.
    pub fn monomial(ring: &RingCtx, exps: &[u64]) -> Result<Self> {
        if exps.len() != ring.nvars() {
            return Err(Error::InvalidArgument(format!(
                "expected {} exponents, got {}",
                ring.nvars(),
                exps.len()
            )));
        }
        Ok(Self::term(ring, Mono::new(exps)?, Scalar::ONE))
    }

    pub fn var(ring: &RingCtx, index: usize) -> Self {
        let mut m = Mono::one(ring.nvars());
        m.0[index] = 1;
        Self::term(ring, m, Scalar::ONE)
    }

    /// Sums like terms and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (Mono, Scalar)>>(ring: &RingCtx, terms: I) -> Self {
        let field = ring.field();
        let mut map = TermMap::default();
        for (m, c) in terms {
            let e = map.entry(m).or_insert(Scalar::ZERO);
            *e = field.add(*e, c);
        }
        map.retain(|_, c| !c.is_zero());
        Poly {
            ring: ring.clone(),
            terms: map,
        }
    }

    pub fn parse(ring: &RingCtx, text: &str) -> Result<Self> {
        Parser {
            ring,
            cur: Cursor::new(text, 0),
        }
        .poly()
    }

    pub fn ring(&self) -> &RingCtx {
        &self.ring
    }

    pub fn field(&self) -> &FieldCtx {
        self.ring.field()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same as [`Poly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).copied().unwrap_or(Scalar::ZERO)
    }

    /// Terms in unspecified order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in canonical order.
    pub fn sorted_terms(&self) -> Vec<(&Mono, Scalar)> {
        let mut v: Vec<(&Mono, Scalar)> = self.terms.iter().map(|(m, c)| (m, *c)).collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.keys().any(Mono::is_one)
    }

    fn same_ring(&self, other: &Poly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_ring(other)?;
        let field = self.field();
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(m.clone()).or_insert(Scalar::ZERO);
            *e = field.add(*e, *c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> Poly {
        let field = self.field();
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(*c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Scalar) -> Poly {
        let field = self.field();
        Poly::from_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(*a, c))),
        )
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.mul_impl(other, None, &Budget::unlimited())
    }

    /// `reduce(self * other, ideal)`, dropping ideal members as they appear.
    pub fn trunc_mul(&self, other: &Poly, ideal: &FrobIdeal) -> Result<Poly> {
        self.trunc_mul_with(other, ideal, &Budget::unlimited())
    }

    pub fn trunc_mul_with(&self, other: &Poly, ideal: &FrobIdeal, budget: &Budget) -> Result<Poly> {
        ideal.check_ring(&self.ring)?;
        self.mul_impl(other, Some(ideal), budget)
    }

    fn mul_impl(&self, other: &Poly, ideal: Option<&FrobIdeal>, budget: &Budget) -> Result<Poly> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        // Iterate over the larger operand in the outer loop so it can be split.
        let (outer, inner) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let outer: Vec<(&Mono, &Scalar)> = outer.terms.iter().collect();
        let inner: Vec<(&Mono, &Scalar)> = inner.terms.iter().collect();
        let limits = ideal.map(|i| i.limits());
        let field = self.field();

        let terms = if outer.len() * inner.len() < PAR_THRESHOLD || outer.len() < 2 {
            mul_block(field, &outer, &inner, limits.as_deref(), budget)?
        } else {
            let chunk = outer
                .len()
                .div_ceil(rayon::current_num_threads() * 4)
                .max(1);
            let partials: Vec<TermMap> = outer
                .par_chunks(chunk)
                .map(|block| mul_block(field, block, &inner, limits.as_deref(), budget))
                .collect::<Result<_>>()?;
            merge_maps(field, partials)
        };
        budget.check_terms(terms.len())?;
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// `self^n`, exact.
    pub fn pow(&self, n: u64) -> Result<Poly> {
        self.pow_impl(n, None, &Budget::unlimited())
    }

    /// `reduce(self^n, ideal)`, truncating after every product.
    pub fn trunc_pow(&self, n: u64, ideal: &FrobIdeal) -> Result<Poly> {
        self.trunc_pow_with(n, ideal, &Budget::unlimited())
    }

    pub fn trunc_pow_with(&self, n: u64, ideal: &FrobIdeal, budget: &Budget) -> Result<Poly> {
        ideal.check_ring(&self.ring)?;
        self.pow_impl(n, Some(ideal), budget)
    }

    /// Powering by base-p digits: `a^n = prod_i (a^(p^i))^(d_i)`, where each
    /// `a^(p^i)` is an exact Frobenius twist (characteristic p) and each small
    /// digit power is square-and-multiply. Factors are multiplied from the
    /// highest Frobenius power down, since those are the most truncated.
    fn pow_impl(&self, n: u64, ideal: Option<&FrobIdeal>, budget: &Budget) -> Result<Poly> {
        if n == 0 {
            return Ok(Poly::one(&self.ring));
        }
        let p = self.ring.characteristic();
        let mut digits = Vec::new();
        let mut k = n;
        while k > 0 {
            digits.push(k % p);
            k /= p;
        }
        let mut acc: Option<Poly> = None;
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let twisted = self.frobenius_impl(i as u32, ideal)?;
            let part = twisted.square_and_multiply(d, ideal, budget)?;
            let next = match acc {
                None => part,
                Some(a) => a.mul_impl(&part, ideal, budget)?,
            };
            if next.is_zero() {
                return Ok(next);
            }
            acc = Some(next);
        }
        Ok(acc.unwrap_or_else(|| Poly::one(&self.ring)))
    }

    fn square_and_multiply(
        &self,
        n: u64,
        ideal: Option<&FrobIdeal>,
        budget: &Budget,
    ) -> Result<Poly> {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_impl(&base, ideal, budget)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_impl(&base, ideal, budget)?;
            }
        }
        Ok(result)
    }

    /// `self^n` by plain square-and-multiply (no Frobenius shortcut).
    pub fn pow_binary(&self, n: u64) -> Result<Poly> {
        self.square_and_multiply(n, None, &Budget::unlimited())
    }

    /// The k-fold Frobenius `self^(p^k)`, computed termwise.
    pub fn frobenius(&self, k: u32) -> Result<Poly> {
        self.frobenius_impl(k, None)
    }

    fn frobenius_impl(&self, k: u32, ideal: Option<&FrobIdeal>) -> Result<Poly> {
        if k == 0 {
            return Ok(match ideal {
                Some(i) => i.reduce_unchecked(self),
                None => self.clone(),
            });
        }
        let field = self.field();
        let factor = u128::from(self.ring.characteristic())
            .checked_pow(k)
            .ok_or(Error::ExponentOverflow)?;
        let limits = ideal.map(|i| i.limits());
        let mut terms = TermMap::default();
        'terms: for (m, c) in &self.terms {
            let mut out = SmallVec::with_capacity(m.len());
            for (idx, &e) in m.0.iter().enumerate() {
                let limit = limits.as_ref().and_then(|l| l[idx]);
                let scaled = u128::from(e).checked_mul(factor);
                match (scaled, limit) {
                    (Some(s), Some(q)) if s >= u128::from(q) => continue 'terms,
                    (None, Some(_)) => continue 'terms,
                    (Some(s), _) if s <= u128::from(MAX_EXP) => out.push(s as u64),
                    _ => return Err(Error::ExponentOverflow),
                }
            }
            terms.insert(Mono(out), field.frob_pow(*c, k));
        }
        Ok(Poly {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// The common total degree, or `None` when terms differ in degree.
    /// The zero polynomial counts as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u128> {
        let mut degrees = self.terms.keys().map(Mono::degree);
        match degrees.next() {
            None => Some(0),
            Some(d) => degrees.all(|x| x == d).then_some(d),
        }
    }

    pub fn total_degree(&self) -> Option<u128> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Formal partial derivative in variable `var`.
    pub fn partial(&self, var: usize) -> Result<Poly> {
        if var >= self.ring.nvars() {
            return Err(Error::InvalidArgument(format!(
                "variable index {var} out of range"
            )));
        }
        let field = self.field();
        Ok(Poly::from_terms(
            &self.ring,
            self.terms
                .iter()
                .filter(|(m, _)| m.0[var] > 0)
                .map(|(m, c)| {
                    let mut d = m.clone();
                    let e = d.0[var];
                    d.0[var] = e - 1;
                    (d, field.mul(*c, field.from_u64(e)))
                }),
        ))
    }

    /// Re-express `self` in `target`, matching variables by name.
    pub fn embed(&self, target: &RingCtx) -> Result<Poly> {
        if self.field() != target.field() {
            return Err(Error::RingMismatch);
        }
        let map: Vec<usize> = self
            .ring
            .vars()
            .iter()
            .map(|v| {
                target
                    .var_index(v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        let terms = self.terms.iter().map(|(m, c)| {
            let mut out = Mono::one(target.nvars());
            for (i, &e) in m.0.iter().enumerate() {
                out.0[map[i]] = e;
            }
            (out, *c)
        });
        Ok(Poly::from_terms(target, terms))
    }

    /// Evaluates at a point of the coefficient field.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.nvars() {
            return Err(Error::InvalidArgument("point has the wrong arity".into()));
        }
        let field = self.field();
        let mut acc = Scalar::ZERO;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = field.mul(t, field.pow(*x, u128::from(e)));
                }
            }
            acc = field.add(acc, t);
        }
        Ok(acc)
    }

    pub(crate) fn from_map(ring: &RingCtx, terms: FxHashMap<Mono, Scalar>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms,
        }
    }
}

fn mul_block(
    field: &FieldCtx,
    outer: &[(&Mono, &Scalar)],
    inner: &[(&Mono, &Scalar)],
    limits: Option<&[Option<u64>]>,
    budget: &Budget,
) -> Result<TermMap> {
    let mut acc = TermMap::default();
    for (step, (ma, ca)) in outer.iter().enumerate() {
        'inner: for (mb, cb) in inner {
            let mut exps: SmallVec<[u64; 6]> = SmallVec::with_capacity(ma.len());
            for (i, (a, b)) in ma.0.iter().zip(&mb.0).enumerate() {
                let s = a.checked_add(*b).filter(|&s| s <= MAX_EXP);
                match (s, limits.and_then(|l| l[i])) {
                    (Some(s), Some(q)) if s >= q => continue 'inner,
                    (None, Some(_)) => continue 'inner,
                    (Some(s), _) => exps.push(s),
                    (None, None) => return Err(Error::ExponentOverflow),
                }
            }
            let c = field.mul(**ca, **cb);
            let e = acc.entry(Mono(exps)).or_insert(Scalar::ZERO);
            *e = field.add(*e, c);
        }
        if step % 256 == 255 {
            budget.check_terms(acc.len())?;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    Ok(acc)
}

fn merge_maps(field: &FieldCtx, parts: Vec<TermMap>) -> TermMap {
    let mut parts = parts.into_iter();
    let mut acc = parts.next().unwrap_or_default();
    for part in parts {
        for (m, c) in part {
            let e = acc.entry(m).or_insert(Scalar::ZERO);
            *e = field.add(*e, c);
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = self.field();
        let mut first = true;
        for (m, c) in self.sorted_terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = field.format(c);
            let coeff = if field.in_prime_subfield(c) {
                coeff
            } else {
                format!("({coeff})")
            };
            if m.is_one() {
                f.write_str(&coeff)?;
            } else if c == Scalar::ONE {
                f.write_str(&self.ring.format_mono(m))?;
            } else {
                write!(f, "{}*{}", coeff, self.ring.format_mono(m))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct Parser<'a, 'r> {
    ring: &'r RingCtx,
    cur: Cursor<'a>,
}

impl Parser<'_, '_> {
    fn poly(mut self) -> Result<Poly> {
        let field = self.ring.field().clone();
        let mut terms: Vec<(Mono, Scalar)> = Vec::new();
        let mut first = true;
        loop {
            let negative = if self.cur.eat(b'-') {
                true
            } else if first || self.cur.eat(b'+') {
                false
            } else {
                break;
            };
            first = false;
            let (m, c) = self.term()?;
            terms.push((m, if negative { field.neg(c) } else { c }));
        }
        if !self.cur.at_end() {
            return self.cur.error("expected `+`, `-` or end of input");
        }
        Ok(Poly::from_terms(self.ring, terms))
    }

    fn term(&mut self) -> Result<(Mono, Scalar)> {
        let field = self.ring.field();
        let coeff = match self.cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                Some(Scalar(self.cur.nat_mod(field.characteristic())?))
            }
            Some(b'(') => {
                let (inner, base) = self.cur.parenthesized()?;
                Some(field.parse_at(inner, base)?)
            }
            _ => None,
        };
        match coeff {
            Some(c) => {
                if self.cur.eat(b'*') {
                    Ok((self.mono()?, c))
                } else {
                    Ok((Mono::one(self.ring.nvars()), c))
                }
            }
            None => Ok((self.mono()?, Scalar::ONE)),
        }
    }

    fn mono(&mut self) -> Result<Mono> {
        let mut m = Mono::one(self.ring.nvars());
        loop {
            let Some(name) = self.cur.ident() else {
                return self.cur.error("expected a variable");
            };
            let Some(idx) = self.ring.var_index(name) else {
                return Err(Error::UnknownVariable(name.to_string()));
            };
            let e = if self.cur.eat(b'^') {
                self.cur.nat(MAX_EXP, Error::ExponentOverflow)?
            } else {
                1
            };
            m.0[idx] = m.0[idx]
                .checked_add(e)
                .filter(|&s| s <= MAX_EXP)
                .ok_or(Error::ExponentOverflow)?;
            if !self.cur.eat(b'*') {
                return Ok(m);
            }
        }
    }
}
