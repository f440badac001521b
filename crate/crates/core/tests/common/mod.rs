#![allow(dead_code)]

use proptest::prelude::*;
use qfsplit_core::field::first_irreducible;
use qfsplit_core::{FieldCtx, Mono, Poly, RingCtx, Scalar};

pub fn prime_ring(p: u64, vars: &str) -> RingCtx {
    RingCtx::with_vars(FieldCtx::prime(p).unwrap(), vars).unwrap()
}

pub fn ext_field(p: u64, e: u32) -> FieldCtx {
    if e == 1 {
        FieldCtx::prime(p).unwrap()
    } else {
        FieldCtx::new(p, e, Some(&first_irreducible(p, e).unwrap())).unwrap()
    }
}

/// The element whose base-p digits are those of `raw mod |F|`.
pub fn scalar(field: &FieldCtx, raw: u64) -> Scalar {
    let p = field.characteristic();
    let mut v = raw % field.order();
    let digits: Vec<u64> = (0..field.degree())
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect();
    field.from_coeffs(&digits).unwrap()
}

/// Raw terms: (exponents, coefficient seed).
pub type RawTerms = Vec<(Vec<u64>, u64)>;

pub fn raw_terms(nvars: usize, max_terms: usize, max_exp: u64) -> impl Strategy<Value = RawTerms> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), any::<u64>()),
        0..=max_terms,
    )
}

pub fn build(ring: &RingCtx, raw: &RawTerms) -> Poly {
    let field = ring.field();
    let mut f = Poly::zero(ring);
    for (exps, c) in raw {
        let t = Poly::term(ring, Mono::new(exps).unwrap(), scalar(field, *c));
        f = f.add(&t).unwrap();
    }
    f
}

/// Like [`build`] but every coefficient is nonzero and monomials are distinct.
pub fn build_nonzero(ring: &RingCtx, raw: &RawTerms) -> Poly {
    let field = ring.field();
    let q = field.order();
    let mut seen = Vec::new();
    let mut f = Poly::zero(ring);
    for (exps, c) in raw {
        if seen.contains(exps) {
            continue;
        }
        seen.push(exps.clone());
        let t = Poly::term(
            ring,
            Mono::new(exps).unwrap(),
            scalar(field, 1 + c % (q - 1)),
        );
        f = f.add(&t).unwrap();
    }
    f
}

pub const SMALL_PRIMES: [u64; 4] = [2, 3, 5, 7];
