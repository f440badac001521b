use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldCtx, Scalar};
use crate::ideal::FrobIdeal;
use crate::poly::{Poly, RingCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaChecks {
    pub lambda4_ne_256: bool,
    pub fpm1_member: bool,
    pub fpm2_member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaResult {
    pub p: u64,
    /// First suitable λ in `0..p`, if any.
    pub lambda: Option<u64>,
    pub checks: Option<LambdaChecks>,
    /// Number of λ values examined.
    pub tried: u64,
}

/// `x^4 + y^4 + z^4 + w^4 + λxyzw` over F_p.
pub fn fermat_lambda_quartic(p: u64, lambda: u64) -> Result<Poly> {
    let field = FieldCtx::prime(p)?;
    let ring = RingCtx::with_vars(field.clone(), "x,y,z,w")?;
    let quartic = Poly::parse(&ring, "x^4 + y^4 + z^4 + w^4")?;
    let cross = Poly::monomial(&ring, &[1, 1, 1, 1])?.scale(field.from_u64(lambda));
    quartic.add(&cross)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(p)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Coefficient of `(xyzw)^{p-1}` in `f_λ^{p-1}`, reduced mod p.
///
/// `f_λ^{p-1}` has degree `4(p-1)`, so it avoids `m^[p]` exactly when this
/// coefficient is nonzero.
pub fn corner_coefficient(p: u64, lambda: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = (p - 1) as usize;
    let mut fact = vec![1u64 % p; n + 1];
    for i in 1..=n {
        fact[i] = mul_mod(fact[i - 1], i as u64, p);
    }
    let field = FieldCtx::prime(p)?;
    let inv = |x: u64| field.inv(Scalar(x)).map(|s| s.packed());
    let mut total = 0u64;
    for a in 0..=n / 4 {
        let b = n - 4 * a;
        let denom = mul_mod(pow_mod(fact[a], 4, p), fact[b], p);
        let term = mul_mod(
            mul_mod(fact[n], inv(denom)?, p),
            pow_mod(lambda, b as u64, p),
            p,
        );
        total = (total + term) % p;
    }
    Ok(total)
}

/// Scans `λ = 0, 1, ..., p-1` for a quartic `f_λ` with `λ^4 ≠ 256` whose
/// `(p-1)`-st and `(p-2)`-nd powers both lie in `m^[p]`.
pub fn lambda_search(p: u64) -> Result<LambdaResult> {
    if !is_prime(p) || p % 4 != 1 || p <= 5 {
        return Err(Error::BadPrime(p));
    }
    for lambda in 0..p {
        if pow_mod(lambda, 4, p) == 256 % p {
            continue;
        }
        if corner_coefficient(p, lambda)? != 0 {
            continue;
        }
        let f = fermat_lambda_quartic(p, lambda)?;
        let ideal = FrobIdeal::new(f.ring(), p)?;
        if f.trunc_pow(p - 2, &ideal)?.is_zero() {
            return Ok(LambdaResult {
                p,
                lambda: Some(lambda),
                checks: Some(LambdaChecks {
                    lambda4_ne_256: true,
                    fpm1_member: true,
                    fpm2_member: true,
                }),
                tried: lambda + 1,
            });
        }
    }
    Ok(LambdaResult {
        p,
        lambda: None,
        checks: None,
        tried: p,
    })
}
