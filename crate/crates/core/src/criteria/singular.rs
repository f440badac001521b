use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{first_irreducible, FieldCtx, Scalar};
use crate::poly::Poly;

/// Default cap on `Σ_e p^{N·e}` for [`singular_scan`].
pub const DEFAULT_SCAN_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    /// Degree of the smallest scanned field containing the point.
    pub field_degree: u32,
    /// Projective coordinates; the first nonzero one is 1.
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScannedField {
    pub degree: u32,
    pub modulus: Vec<u64>,
    /// Points of `P^{N-1}` over this field not defined over a smaller one.
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub fields: Vec<ScannedField>,
    pub points: Vec<SingularPoint>,
}

/// A polynomial with coefficients in F_p as `(coefficient, exponents)` pairs.
struct Compiled(Vec<(u64, Vec<u64>)>);

impl Compiled {
    fn new(f: &Poly) -> Self {
        Compiled(
            f.terms()
                .map(|(m, c)| (c.packed(), m.exps().to_vec()))
                .collect(),
        )
    }

    fn max_exp(&self) -> u64 {
        self.0
            .iter()
            .flat_map(|(_, e)| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// `pows[k][c]` holds `c^k`.
    fn vanishes(&self, field: &FieldCtx, pows: &[Vec<Scalar>], point: &[u64]) -> bool {
        let mut acc = Scalar::ZERO;
        for (c, exps) in &self.0 {
            let mut t = Scalar(*c);
            for (&e, &x) in exps.iter().zip(point) {
                t = field.mul(t, pows[e as usize][x as usize]);
            }
            acc = field.add(acc, t);
        }
        acc.is_zero()
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Points of `P^{N-1}(F_{p^e})`, `e <= e_max`, where `f` and all its partial
/// derivatives vanish. Each point is reported once, over its field of definition.
pub fn singular_scan(f: &Poly, e_max: u32, budget: u64) -> Result<ScanReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    f.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if !f.field().is_prime_field() {
        return Err(Error::InvalidArgument(
            "singular_scan needs coefficients in a prime field".into(),
        ));
    }
    if e_max == 0 {
        return Err(Error::InvalidArgument("e_max must be at least 1".into()));
    }
    let ring = f.ring();
    let nvars = ring.nvars();
    let p = ring.characteristic();
    let mut total = 0u64;
    for e in 1..=e_max {
        let q = p.checked_pow(e);
        let pts = q.and_then(|q| q.checked_pow(nvars as u32));
        total = pts.and_then(|x| total.checked_add(x)).unwrap_or(u64::MAX);
        if total > budget {
            return Err(Error::ResourceBudgetExceeded(format!(
                "scanning up to degree {e_max} needs more than {budget} affine points"
            )));
        }
    }

    let mut system = vec![Compiled::new(f)];
    for i in 0..nvars {
        system.push(Compiled::new(&f.partial(i)?));
    }
    let max_exp = system.iter().map(Compiled::max_exp).max().unwrap_or(0) as usize;

    let mut fields = Vec::new();
    let mut points = Vec::new();
    for e in 1..=e_max {
        let modulus = first_irreducible(p, e)?;
        let field = FieldCtx::new(p, e, Some(&modulus))?;
        let q = field.order();
        let elems: Vec<Scalar> = field.elements().collect();
        let pows: Vec<Vec<Scalar>> = (0..=max_exp)
            .map(|k| elems.iter().map(|&c| field.pow(c, k as u128)).collect())
            .collect();
        // Degree of the subfield generated by each element.
        let elem_degree: Vec<u32> = elems
            .iter()
            .map(|&c| {
                (1..=e)
                    .find(|&d| e % d == 0 && field.frob_pow(c, d) == c)
                    .unwrap_or(e)
            })
            .collect();

        let mut new_points = 0u64;
        for lead in 0..nvars {
            let free = nvars - 1 - lead;
            let count = q.pow(free as u32);
            let found: Vec<(bool, Option<SingularPoint>)> = (0..count)
                .into_par_iter()
                .map(|mut idx| {
                    let mut point = vec![0u64; nvars];
                    point[lead] = 1;
                    for slot in point[lead + 1..].iter_mut().rev() {
                        *slot = idx % q;
                        idx /= q;
                    }
                    let deg = point[lead..].iter().fold(1, |acc, &c| {
                        let d = elem_degree[c as usize];
                        acc / gcd(acc, d) * d
                    });
                    if deg != e {
                        return (false, None);
                    }
                    let singular = system.iter().all(|s| s.vanishes(&field, &pows, &point));
                    let hit = singular.then(|| SingularPoint {
                        field_degree: e,
                        coords: point.iter().map(|&c| field.format(Scalar(c))).collect(),
                    });
                    (true, hit)
                })
                .collect();
            for (fresh, hit) in found {
                new_points += u64::from(fresh);
                points.extend(hit);
            }
        }
        fields.push(ScannedField {
            degree: e,
            modulus,
            points: new_points,
        });
    }
    Ok(ScanReport { fields, points })
}
