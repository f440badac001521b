mod common;

use common::{ext_field, scalar};
use proptest::prelude::*;
use qfsplit_core::{Error, FieldCtx, Scalar};

const FIELDS: [(u64, u32); 12] = [
    (2, 1),
    (3, 1),
    (7, 1),
    (101, 1),
    (65521, 1),
    (2, 2),
    (2, 3),
    (2, 8),
    (3, 2),
    (3, 3),
    (5, 2),
    (7, 3),
];

/// Schoolbook product of residue vectors reduced by a monic modulus.
fn dense_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            let idx = k - e + i;
            prod[idx] = (prod[idx] + (p - c) * m % p) % p;
        }
    }
    prod.truncate(e);
    prod
}

fn field_strategy() -> impl Strategy<Value = (FieldCtx, Scalar, Scalar, Scalar)> {
    (0..FIELDS.len(), any::<u64>(), any::<u64>(), any::<u64>()).prop_map(|(i, a, b, c)| {
        let (p, e) = FIELDS[i];
        let f = ext_field(p, e);
        let (a, b, c) = (scalar(&f, a), scalar(&f, b), scalar(&f, c));
        (f, a, b, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms((f, a, b, c) in field_strategy()) {
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.zero()), a);
        prop_assert_eq!(f.mul(a, f.one()), a);
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a.is_zero() {
            prop_assert_eq!(f.inv(a), Err(Error::DivisionByZero));
        } else {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn multiplication_matches_dense_oracle((f, a, b, _c) in field_strategy()) {
        let got = f.coeffs(f.mul(a, b));
        let want = if f.is_prime_field() {
            vec![f.coeffs(a)[0] * f.coeffs(b)[0] % f.characteristic()]
        } else {
            dense_mulmod(&f.coeffs(a), &f.coeffs(b), f.modulus(), f.characteristic())
        };
        prop_assert_eq!(got, want);
    }

    #[test]
    fn frobenius_is_an_automorphism((f, a, b, _c) in field_strategy()) {
        prop_assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
        prop_assert_eq!(f.frob(f.mul(a, b)), f.mul(f.frob(a), f.frob(b)));
        prop_assert_eq!(f.frob(f.frob_inv(a)), a);
        prop_assert_eq!(f.frob_inv(f.frob(a)), a);
        prop_assert_eq!(f.frob_pow(a, f.degree()), a);
        prop_assert_eq!(f.pow(a, u128::from(f.order())), a);
    }

    #[test]
    fn format_parse_round_trip((f, a, _b, _c) in field_strategy()) {
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }
}

#[test]
fn prime_subfield_is_fixed_by_frobenius() {
    for (p, e) in FIELDS {
        let f = ext_field(p, e);
        if f.order() > 1 << 16 {
            continue;
        }
        let fixed = f.elements().filter(|&a| f.frob(a) == a).count() as u64;
        assert_eq!(fixed, p, "F_{p}^{e}");
        assert!(f
            .elements()
            .filter(|&a| f.frob(a) == a)
            .all(|a| f.in_prime_subfield(a)));
    }
}
