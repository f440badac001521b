//! Exact arithmetic in F_p and F_{p^e}.
//!
//! An element of F_{p^e} = F_p[g]/(modulus) is the residue vector
//! `(c_0, ..., c_{e-1})` of `c_0 + c_1 g + ... + c_{e-1} g^{e-1}`. A [`Scalar`]
//! stores that vector packed as the base-p integer `sum c_i p^i`, so the
//! representation is canonical and prime-subfield elements are just their
//! residues. Extension-field multiplication goes through discrete log tables
//! built when the context is created.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::Cursor;

/// Upper bound on `e * p^e` for extension fields (irreducibility check and tables).
pub const EXT_VALIDATION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Scalar(pub(crate) u64);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    /// The packed base-p encoding of the residue vector.
    pub fn packed(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct ExtTables {
    /// `exp[k] = gen^k` for `0 <= k < order - 1`.
    exp: Vec<u32>,
    /// `log[v]` for nonzero packed `v`; `log[0]` unused.
    log: Vec<u32>,
}

#[derive(Debug)]
struct FieldInner {
    p: u64,
    e: u32,
    /// Least-significant-first coefficients, monic, length `e + 1`. Empty when `e == 1`.
    modulus: Vec<u64>,
    order: u64,
    ext: Option<ExtTables>,
}

/// A finite field F_{p^e}; cheap to clone and shareable across threads.
#[derive(Clone, Debug)]
pub struct FieldCtx(Arc<FieldInner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Validates `p`, `e` and the modulus and builds the context.
    ///
    /// `modulus` is given least-significant-first (`e + 1` residues, monic) and
    /// must be present exactly when `e > 1`.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u64::from(u32::MAX) {
            return Err(Error::TooLarge(format!("p = {p} exceeds 32 bits")));
        }
        if e == 0 {
            return Err(Error::BadModulus(
                "extension degree must be at least 1".into(),
            ));
        }
        if e == 1 {
            if let Some(m) = modulus {
                // A monic linear modulus is harmless; anything else is a caller error.
                if m.len() != 2 || m[1] % p != 1 {
                    return Err(Error::BadModulus("prime fields take no modulus".into()));
                }
            }
            return Ok(FieldCtx(Arc::new(FieldInner {
                p,
                e: 1,
                modulus: Vec::new(),
                order: p,
                ext: None,
            })));
        }
        let Some(modulus) = modulus else {
            return Err(Error::BadModulus(format!("F_{p}^{e} requires a modulus")));
        };
        let order = checked_order(p, e)?;
        if order.saturating_mul(u64::from(e)) > EXT_VALIDATION_LIMIT {
            return Err(Error::TooLarge(format!(
                "e * p^e = {} * {}^{} exceeds {}",
                e, p, e, EXT_VALIDATION_LIMIT
            )));
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if modulus.len() != e as usize + 1 {
            return Err(Error::BadModulus(format!(
                "expected {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        if modulus[e as usize] != 1 {
            return Err(Error::BadModulus("modulus is not monic".into()));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::BadModulus("modulus is reducible".into()));
        }
        let ext = build_tables(p, e, &modulus, order);
        Ok(FieldCtx(Arc::new(FieldInner {
            p,
            e,
            modulus,
            order,
            ext: Some(ext),
        })))
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Least-significant-first modulus coefficients (empty for prime fields).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    /// The class of the indeterminate `g` in F_p[g]/(modulus).
    pub fn generator(&self) -> Option<Scalar> {
        (self.0.e > 1).then_some(Scalar(self.0.p))
    }

    pub fn contains(&self, a: Scalar) -> bool {
        a.0 < self.0.order
    }

    pub fn check(&self, a: Scalar) -> Result<Scalar> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Scalar {
        Scalar(v.rem_euclid(self.0.p as i64) as u64)
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        Scalar(v % self.0.p)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Scalar> {
        if coeffs.len() > self.0.e as usize {
            return Err(Error::ContextMismatch);
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.0.p + c % self.0.p;
        }
        Ok(Scalar(v))
    }

    /// Residue vector of length `e`, least significant first.
    pub fn coeffs(&self, a: Scalar) -> Vec<u64> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.e)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// True when `a` lies in the prime subfield F_p.
    pub fn in_prime_subfield(&self, a: Scalar) -> bool {
        a.0 < self.0.p
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.0.order).map(Scalar)
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        let p = self.0.p;
        if self.0.e == 1 {
            let s = a.0 + b.0;
            return Scalar(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Scalar(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u64, 1u64);
        while x != 0 || y != 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Scalar(out)
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        let p = self.0.p;
        if self.0.e == 1 {
            return Scalar(if a.0 == 0 { 0 } else { p - a.0 });
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u64, 1u64);
        while x != 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        Scalar(out)
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match &self.0.ext {
            None => Scalar(a.0 * b.0 % self.0.p),
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    return Scalar::ZERO;
                }
                let n = self.0.order - 1;
                let k = (u64::from(t.log[a.0 as usize]) + u64::from(t.log[b.0 as usize])) % n;
                Scalar(u64::from(t.exp[k as usize]))
            }
        }
    }

    /// Checked multiplication: both operands must belong to this field.
    pub fn try_mul(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn pow(&self, a: Scalar, k: u128) -> Scalar {
        if k == 0 {
            return Scalar::ONE;
        }
        if a.0 == 0 {
            return Scalar::ZERO;
        }
        let n = u128::from(self.0.order - 1);
        match &self.0.ext {
            Some(t) => {
                let l = u128::from(t.log[a.0 as usize]) * (k % n) % n;
                Scalar(u64::from(t.exp[l as usize]))
            }
            None => {
                let p = self.0.p;
                let mut k = k % n;
                let mut base = a.0;
                let mut acc = 1u64;
                while k > 0 {
                    if k & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    k >>= 1;
                }
                Scalar(acc)
            }
        }
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, u128::from(self.0.order) - 2))
    }

    /// `a^p`.
    pub fn frob(&self, a: Scalar) -> Scalar {
        if self.0.e == 1 {
            a
        } else {
            self.pow(a, u128::from(self.0.p))
        }
    }

    /// `a^(p^k)`.
    pub fn frob_pow(&self, a: Scalar, k: u32) -> Scalar {
        let k = k % self.0.e;
        if k == 0 {
            a
        } else {
            self.pow(a, u128::from(self.0.p).pow(k))
        }
    }

    /// The unique `b` with `b^p = a`, namely `a^(p^(e-1))`.
    pub fn frob_inv(&self, a: Scalar) -> Scalar {
        self.frob_pow(a, self.0.e - 1)
    }

    /// Canonical text form: an integer in a prime field (and for prime-subfield
    /// elements of an extension), otherwise a polynomial in `g`.
    pub fn format(&self, a: Scalar) -> String {
        if self.in_prime_subfield(a) {
            return a.0.to_string();
        }
        let coeffs = self.coeffs(a);
        let mut parts = Vec::new();
        for (k, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let gpow = match k {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            };
            parts.push(match (k, c) {
                (0, _) => c.to_string(),
                (_, 1) => gpow,
                _ => format!("{c}*{gpow}"),
            });
        }
        parts.join("+")
    }

    /// Parses an integer or, in extension fields, a polynomial in `g`.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        self.parse_at(text, 0)
    }

    pub(crate) fn parse_at(&self, text: &str, base: usize) -> Result<Scalar> {
        let mut cur = Cursor::new(text, base);
        let mut acc = Scalar::ZERO;
        let mut first = true;
        loop {
            let negative = if cur.eat(b'-') {
                true
            } else if first || cur.eat(b'+') {
                false
            } else {
                break;
            };
            first = false;
            let term = self.parse_term(&mut cur)?;
            acc = if negative {
                self.sub(acc, term)
            } else {
                self.add(acc, term)
            };
        }
        if !cur.at_end() {
            return cur.error("unexpected input in field element");
        }
        Ok(acc)
    }

    fn parse_term(&self, cur: &mut Cursor<'_>) -> Result<Scalar> {
        let mut coeff = Scalar::ONE;
        let mut have_coeff = false;
        if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = Scalar(cur.nat_mod(self.0.p)?);
            have_coeff = true;
            if !cur.eat(b'*') {
                return Ok(coeff);
            }
        }
        let at = cur.pos();
        match cur.ident() {
            Some("g") => {}
            Some(other) => {
                return Err(Error::Syntax {
                    pos: at,
                    msg: format!("field elements use `g`, found `{other}`"),
                })
            }
            None if have_coeff => return cur.error("expected `g` after `*`"),
            None => return cur.error("expected a number or `g`"),
        }
        let Some(g) = self.generator() else {
            return Err(Error::GeneratorInPrimeField(self.0.p));
        };
        let k = if cur.eat(b'^') {
            cur.nat(u64::MAX, Error::ExponentOverflow)?
        } else {
            1
        };
        Ok(self.mul(coeff, self.pow(g, u128::from(k))))
    }
}

fn checked_order(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&o| o <= u64::from(u32::MAX))
        .ok_or_else(|| Error::TooLarge(format!("{p}^{e} is too large")))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

// Dense F_p[X] helpers (least-significant-first), used only while validating
// moduli and building tables.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = modpow(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(p, &out, m)
}

fn poly_powmod(p: u64, a: &[u64], mut k: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(p, a, m);
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mulmod(p, &acc, &base, m);
        }
        base = poly_mulmod(p, &base, &base, m);
        k >>= 1;
    }
    acc
}

fn modpow(mut b: u64, mut k: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        k >>= 1;
    }
    acc
}

fn unpack(p: u64, mut v: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    trim(out)
}

fn pack(p: u64, coeffs: &[u64]) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Exhaustive factor search: no monic polynomial of degree `1..=e/2` divides `modulus`.
pub fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let e = modulus.len() - 1;
    if e == 0 {
        return false;
    }
    for d in 1..=e / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut h = unpack(p, low, d);
            h.resize(d, 0);
            h.push(1);
            if poly_rem(p, modulus, &h).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The first monic irreducible of degree `e` in the base-p order of its lower coefficients.
pub fn first_irreducible(p: u64, e: u32) -> Result<Vec<u64>> {
    let count = checked_order(p, e)?;
    for low in 0..count {
        let mut m = unpack(p, low, e as usize);
        m.resize(e as usize, 0);
        m.push(1);
        if is_irreducible(p, &m) {
            return Ok(m);
        }
    }
    Err(Error::BadModulus(format!(
        "no irreducible of degree {e} over F_{p}"
    )))
}

/// A uniformly sampled monic irreducible of degree `e`, by rejection.
pub fn random_irreducible<R: Rng + ?Sized>(p: u64, e: u32, rng: &mut R) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let count = checked_order(p, e)?;
    loop {
        let low = rng.random_range(0..count);
        let mut m = unpack(p, low, e as usize);
        m.resize(e as usize, 0);
        m.push(1);
        if is_irreducible(p, &m) {
            return Ok(m);
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build_tables(p: u64, e: u32, modulus: &[u64], order: u64) -> ExtTables {
    let n = order - 1;
    let factors = prime_factors(n);
    let one = vec![1u64];
    let primitive = (2..order)
        .map(|v| unpack(p, v, e as usize))
        .find(|c| {
            factors
                .iter()
                .all(|&l| poly_powmod(p, c, n / l, modulus) != one)
        })
        .unwrap_or_else(|| unpack(p, 1, e as usize));
    let mut exp = Vec::with_capacity(n as usize);
    let mut log = vec![0u32; order as usize];
    let mut cur = vec![1u64];
    for k in 0..n {
        let v = pack(p, &cur);
        exp.push(v as u32);
        log[v as usize] = k as u32;
        cur = poly_mulmod(p, &cur, &primitive, modulus);
    }
    ExtTables { exp, log }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> FieldCtx {
        FieldCtx::new(2, 3, Some(&[1, 1, 0, 1])).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(FieldCtx::prime(2).unwrap().order(), 2);
        assert_eq!(f8().order(), 8);
        assert_eq!(FieldCtx::new(4, 1, None), Err(Error::NotPrime(4)));
        assert!(matches!(
            FieldCtx::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            FieldCtx::new(2, 3, Some(&[1, 1, 0, 0])),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            FieldCtx::new(2, 3, Some(&[1, 1, 1])),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            FieldCtx::new(2, 3, None),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            FieldCtx::new(3, 13, Some(&[0; 14])),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn prime_field_ops() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.mul(Scalar(3), Scalar(4)), Scalar(2));
        assert_eq!(f5.inv(Scalar(2)).unwrap(), Scalar(3));
        assert_eq!(f5.frob_inv(Scalar(2)), Scalar(2));
        assert_eq!(f5.inv(Scalar(0)), Err(Error::DivisionByZero));
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(f2.inv(Scalar(1)).unwrap(), Scalar(1));
        assert_eq!(f2.frob_inv(Scalar(1)), Scalar(1));
    }

    #[test]
    fn f8_ops() {
        let f = f8();
        let g = f.generator().unwrap();
        let g2 = f.mul(g, g);
        // g * g^2 = g^3 = g + 1
        assert_eq!(f.mul(g, g2), f.parse("g+1").unwrap());
        assert_eq!(f.inv(g).unwrap(), f.parse("g^2+1").unwrap());
        assert_eq!(f.frob_inv(g), f.parse("g^2+g").unwrap());
        assert_eq!(f.frob_inv(g), f.pow(g, 4));
    }

    #[test]
    fn context_mismatch() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(
            f5.try_mul(Scalar(7), Scalar(1)),
            Err(Error::ContextMismatch)
        );
        assert_eq!(f5.try_mul(Scalar(3), Scalar(4)), Ok(Scalar(2)));
    }

    #[test]
    fn format_and_parse() {
        let f = FieldCtx::new(3, 2, Some(&[1, 0, 1])).unwrap();
        for a in f.elements() {
            let s = f.format(a);
            assert_eq!(f.parse(&s).unwrap(), a, "{s}");
        }
        assert_eq!(f.parse("2*g + 2 - g").unwrap(), f.parse("g+2").unwrap());
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.parse("g"), Err(Error::GeneratorInPrimeField(5)));
        assert_eq!(
            f5.parse("123456789012345678901234567890").unwrap(),
            Scalar(0)
        );
    }

    #[test]
    fn exhaustive_frobenius_and_fermat() {
        let configs: Vec<FieldCtx> = vec![
            FieldCtx::prime(2).unwrap(),
            FieldCtx::prime(3).unwrap(),
            FieldCtx::prime(7).unwrap(),
            f8(),
            FieldCtx::new(2, 9, Some(&first_irreducible(2, 9).unwrap())).unwrap(),
            FieldCtx::new(3, 4, Some(&first_irreducible(3, 4).unwrap())).unwrap(),
            FieldCtx::new(5, 3, Some(&first_irreducible(5, 3).unwrap())).unwrap(),
            FieldCtx::new(7, 3, Some(&first_irreducible(7, 3).unwrap())).unwrap(),
        ];
        for f in configs {
            let p = u128::from(f.characteristic());
            for a in f.elements() {
                let b = f.frob_inv(a);
                assert_eq!(f.pow(b, p), a);
                assert_eq!(f.frob_inv(f.pow(a, p)), a);
                assert_eq!(f.pow(a, u128::from(f.order())), a);
            }
        }
    }

    #[test]
    fn irreducible_helpers() {
        assert_eq!(first_irreducible(2, 3).unwrap(), vec![1, 1, 0, 1]);
        let mut rng = rand::rng();
        for _ in 0..5 {
            let m = random_irreducible(3, 3, &mut rng).unwrap();
            assert!(FieldCtx::new(3, 3, Some(&m)).is_ok());
        }
    }
}
