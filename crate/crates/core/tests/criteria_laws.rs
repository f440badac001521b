mod common;

use common::{build_nonzero, prime_ring, raw_terms, RawTerms};
use proptest::prelude::*;
use qfsplit_core::criteria::{
    corner_coefficient, fermat_lambda_quartic, level_element, ChainSearchOptions,
};
use qfsplit_core::{
    chain_search, fedder_fpure, lambda_search, qfs_height_search, qfs_level, Backend, Budget,
    FrobIdeal, HeightVerdict, LevelVariant, LevelVerdict, Poly,
};

fn no_constant(p: u64, raw: &RawTerms) -> Option<Poly> {
    let ring = prime_ring(p, "x,y,z");
    let f = build_nonzero(&ring, raw);
    (!f.is_zero() && !f.has_constant_term()).then_some(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn height_one_iff_fedder(pi in 0usize..3, raw in raw_terms(3, 4, 3)) {
        let p = [2u64, 3, 5][pi];
        let Some(f) = no_constant(p, &raw) else { return Ok(()) };
        let rep = qfs_height_search(&f, 1, LevelVariant::DeltaFPow, Backend::Poly, &Budget::unlimited()).unwrap();
        prop_assert_eq!(rep.verdict == HeightVerdict::Height(1), fedder_fpure(&f).unwrap());
    }

    #[test]
    fn variants_coincide_in_characteristic_two(raw in raw_terms(3, 4, 3), r in 1u32..7) {
        let Some(f) = no_constant(2, &raw) else { return Ok(()) };
        let b = Budget::unlimited();
        prop_assert_eq!(
            level_element(&f, r, LevelVariant::DeltaF, &b).unwrap(),
            level_element(&f, r, LevelVariant::DeltaFPow, &b).unwrap()
        );
    }

    #[test]
    fn combinatorial_backend_is_sound(
        pi in 0usize..2,
        raw in raw_terms(3, 4, 3),
        r in 1u32..5,
        vi in 0usize..2,
    ) {
        let p = [2u64, 3][pi];
        let variant = [LevelVariant::DeltaF, LevelVariant::DeltaFPow][vi];
        let Some(f) = no_constant(p, &raw) else { return Ok(()) };
        let b = Budget::unlimited();
        let exact = qfs_level(&f, r, variant, Backend::Poly, &b).unwrap().verdict;
        let comb = qfs_level(&f, r, variant, Backend::Combinatorial, &b).unwrap().verdict;
        let pre = qfs_level(&f, r, variant, Backend::CombinatorialPrescreen, &b).unwrap().verdict;
        prop_assert_ne!(exact, LevelVerdict::Unknown);
        if comb == LevelVerdict::Member {
            prop_assert_eq!(exact, LevelVerdict::Member);
        } else {
            prop_assert_eq!(comb, LevelVerdict::Unknown);
        }
        prop_assert_eq!(pre, exact);
    }
}

#[test]
fn corner_coefficient_decides_membership() {
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        for lambda in 0..p {
            let f = fermat_lambda_quartic(p, lambda).unwrap();
            let ideal = FrobIdeal::new(f.ring(), p).unwrap();
            let member = f.trunc_pow(p - 1, &ideal).unwrap().is_zero();
            assert_eq!(
                corner_coefficient(p, lambda).unwrap() == 0,
                member,
                "p={p} λ={lambda}"
            );
        }
    }
}

#[test]
fn lambda_results_are_genuine() {
    for p in [13u64, 17, 29] {
        let res = lambda_search(p).unwrap();
        let lambda = res.lambda.expect("a λ exists");
        assert_ne!(lambda.pow(4) % p, 256 % p);
        let f = fermat_lambda_quartic(p, lambda).unwrap();
        let ideal = FrobIdeal::new(f.ring(), p).unwrap();
        assert!(f.trunc_pow(p - 1, &ideal).unwrap().is_zero());
        assert!(f.trunc_pow(p - 2, &ideal).unwrap().is_zero());
        // No smaller λ passes both tests.
        for mu in 0..lambda {
            let g = fermat_lambda_quartic(p, mu).unwrap();
            let both = g.trunc_pow(p - 1, &ideal).unwrap().is_zero()
                && g.trunc_pow(p - 2, &ideal).unwrap().is_zero();
            assert!(mu.pow(4) % p == 256 % p || !both, "p={p} μ={mu}");
        }
    }
}

#[test]
fn chain_search_is_thread_count_independent() {
    let ring = prime_ring(2, "x,y,z,w,t");
    let g = Poly::parse(&ring, "x^4 + x*y^3 + y*z^3 + z*w^3 + t^4").unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                chain_search(&g, 4, &[3, 3, 3, 3, 7], &ChainSearchOptions::default()).unwrap()
            })
    };
    let single = run(1);
    assert!(single.is_some());
    assert_eq!(run(4), single);
}

#[test]
fn deformed_quartic_keeps_large_height() {
    let ring = prime_ring(2, "x,y,z,w,t");
    let f = Poly::parse(&ring, "x^4 + x*y^3 + y*z^3 + z*w^3 + t^512").unwrap();
    let rep = qfs_height_search(
        &f,
        9,
        LevelVariant::DeltaFPow,
        Backend::CombinatorialPrescreen,
        &Budget::unlimited(),
    )
    .unwrap();
    assert_eq!(rep.verdict, HeightVerdict::AtLeast(10));
}
