mod common;

use std::collections::BTreeMap;

use common::{build_nonzero, ext_field, prime_ring, raw_terms, scalar};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use qfsplit_core::{delta, delta_coeff, Error, Mono, Poly, RingCtx};

type IntPoly = BTreeMap<Vec<u64>, BigInt>;

fn int_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u64> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `((Σ t_i)^p - Σ t_i^p) / p mod p` with each term lifted to the integers.
fn lifted_delta(ring: &RingCtx, f: &Poly) -> Poly {
    let p = ring.characteristic();
    let field = ring.field();
    let terms: Vec<(Vec<u64>, BigInt)> = f
        .terms()
        .map(|(m, c)| (m.exps().to_vec(), BigInt::from(field.coeffs(*c)[0])))
        .collect();
    let sum: IntPoly = terms.iter().cloned().collect();
    let mut power = IntPoly::from([(vec![0; ring.nvars()], BigInt::one())]);
    for _ in 0..p {
        power = int_mul(&power, &sum);
    }
    for (m, c) in &terms {
        let mp: Vec<u64> = m.iter().map(|e| e * p).collect();
        *power.entry(mp).or_insert_with(BigInt::zero) -= c.pow(p as u32);
    }
    let bp = BigInt::from(p);
    let mut out = Poly::zero(ring);
    for (m, c) in power {
        assert!((&c % &bp).is_zero(), "carry not divisible by p");
        let r = ((c / &bp) % &bp + &bp) % &bp;
        let r = r.to_u64().unwrap();
        out = out
            .add(&Poly::term(ring, Mono::new(&m).unwrap(), field.from_u64(r)))
            .unwrap();
    }
    out
}

fn multinomial_oracle(p: u64, alpha: &[u64]) -> u64 {
    let fact = |n: u64| (1..=n).fold(BigUint::one(), |acc, k| acc * k);
    let denom = alpha.iter().fold(BigUint::one(), |acc, &a| acc * fact(a));
    let m = fact(p) / denom / p;
    (m % p).to_u64().unwrap()
}

fn partitions(n: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn delta_matches_integer_lift(pi in 0usize..4, raw in raw_terms(3, 5, 3)) {
        let p = common::SMALL_PRIMES[pi];
        let ring = prime_ring(p, "x,y,z");
        let f = build_nonzero(&ring, &raw);
        prop_assert_eq!(delta(&f).unwrap(), lifted_delta(&ring, &f));
    }

    #[test]
    fn characteristic_two_closed_form(ei in 0usize..3, raw in raw_terms(3, 6, 4)) {
        let field = ext_field(2, [1, 2, 3][ei]);
        let ring = RingCtx::with_vars(field, "x,y,z").unwrap();
        let f = build_nonzero(&ring, &raw);
        let terms: Vec<_> = f.terms().map(|(m, c)| (m.clone(), *c)).collect();
        let mut want = Poly::zero(&ring);
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let m = terms[i].0.checked_mul(&terms[j].0).unwrap();
                let c = ring.field().mul(terms[i].1, terms[j].1);
                want = want.add(&Poly::term(&ring, m, c)).unwrap();
            }
        }
        prop_assert_eq!(delta(&f).unwrap(), want);
    }

    #[test]
    fn delta_coeff_large_primes(
        pi in 0usize..6,
        parts in prop::collection::vec(1u64..40, 1..6),
        perm_seed in any::<u64>(),
    ) {
        let p = [37u64, 41, 53, 61, 89, 97][pi];
        // Spread p over the parts, keeping each below p.
        let total: u64 = parts.iter().sum();
        let mut alpha: Vec<u64> = parts.iter().map(|&x| x * (p - 1) / total.max(p)).collect();
        let used: u64 = alpha.iter().sum();
        alpha.push(p - used);
        alpha.push(0);
        prop_assume!(alpha.iter().all(|&a| a < p));
        let want = multinomial_oracle(p, &alpha);
        prop_assert_eq!(delta_coeff(p, &alpha).unwrap(), want);
        let k = alpha.len();
        alpha.rotate_left((perm_seed % k as u64) as usize);
        alpha.swap(0, (perm_seed / 7 % k as u64) as usize);
        prop_assert_eq!(delta_coeff(p, &alpha).unwrap(), want);
    }
}

#[test]
fn delta_coeff_all_partitions_small_primes() {
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
        let mut all = Vec::new();
        partitions(p, p - 1, &mut Vec::new(), &mut all);
        for alpha in &all {
            assert_eq!(
                delta_coeff(p, alpha).unwrap(),
                multinomial_oracle(p, alpha),
                "p={p} {alpha:?}"
            );
        }
    }
}

#[test]
fn delta_coeff_rejects_bad_compositions() {
    assert!(matches!(
        delta_coeff(5, &[5]),
        Err(Error::BadComposition { p: 5, .. })
    ));
    assert!(matches!(
        delta_coeff(5, &[2, 2]),
        Err(Error::BadComposition { .. })
    ));
    assert!(matches!(
        delta_coeff(5, &[3, 3]),
        Err(Error::BadComposition { .. })
    ));
    assert_eq!(delta_coeff(6, &[3, 3]), Err(Error::NotPrime(6)));
}

#[test]
fn delta_of_monomials_vanishes() {
    let ring = prime_ring(3, "x,y");
    let field = ring.field();
    for raw in [0u64, 1, 2] {
        let f = Poly::term(&ring, Mono::new(&[2, 5]).unwrap(), scalar(field, raw));
        assert!(delta(&f).unwrap().is_zero());
    }
    assert!(delta(&Poly::zero(&ring)).unwrap().is_zero());
}

#[test]
fn binomial_example() {
    let ring = prime_ring(2, "x,y");
    let f = Poly::parse(&ring, "x + y").unwrap();
    assert_eq!(delta(&f).unwrap().to_string(), "x*y");
    let ring = prime_ring(3, "x,y");
    let f = Poly::parse(&ring, "x + y").unwrap();
    // (x + y)^3 - x^3 - y^3 = 3x^2y + 3xy^2.
    assert_eq!(delta(&f).unwrap().to_string(), "x^2*y + x*y^2");
}
