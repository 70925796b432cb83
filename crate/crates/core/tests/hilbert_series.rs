mod common;

use common::{q_pascal, series_by_geometric_expansion};
use hrk_core::hilbert::{
    dimension, dimension_dense, gaussian_binomial, gaussian_product, poincare_factorization, poincare_series,
    series_degree, HeightContext, HilbertError,
};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;

#[test]
fn dense_series_matches_geometric_expansion() {
    for (n, m) in [(1, 1), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let ctx = HeightContext::new(n, m).unwrap();
        let series = poincare_series(&ctx).unwrap();
        let deg = series_degree(&ctx).unwrap() as usize;
        let oracle = series_by_geometric_expansion(n, m, deg + 40);
        for (d, c) in oracle.iter().enumerate() {
            let got = series.coefficients().get(d).cloned().unwrap_or_default();
            assert_eq!(got, BigInt::from(*c), "(n, m) = ({n}, {m}), degree {d}");
        }
    }
}

#[test]
fn known_dimensions() {
    let dim = |n, m| dimension(&HeightContext::new(n, m).unwrap()).unwrap();
    assert_eq!(dim(2, 1), BigUint::from(3u8));
    assert_eq!(dim(2, 2), BigUint::from(35u8));
    for m in 0..6 {
        assert_eq!(dim(1, m), BigUint::from(1u8));
    }
}

#[test]
fn gaussian_matches_q_pascal() {
    for top in 0..=14 {
        for bottom in 0..=top + 1 {
            assert_eq!(gaussian_binomial(top, bottom), q_pascal(top, bottom), "({top}, {bottom})");
        }
    }
}

#[test]
fn dense_route_is_capped() {
    let ctx = HeightContext::new(4, 4).unwrap();
    assert!(matches!(poincare_series(&ctx), Err(HilbertError::ResourceLimit { .. })));
    // the cyclotomic route still answers
    assert!(dimension(&ctx).unwrap().is_odd());
}

#[test]
fn bad_contexts() {
    assert!(matches!(HeightContext::new(0, 1), Err(HilbertError::BadGroup(0))));
    let big = HeightContext::new(6, 4).unwrap();
    assert!(matches!(dimension(&big), Err(HilbertError::HeightTooLarge { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_routes_agree(n in 1u32..=3, m in 0u32..=3) {
        let ctx = HeightContext::new(n, m).unwrap();
        let cyc = dimension(&ctx).unwrap();
        prop_assert_eq!(&cyc, &dimension_dense(&ctx).unwrap());
        prop_assert_eq!(&cyc, &gaussian_product(&ctx));
        let f = poincare_factorization(&ctx).unwrap();
        prop_assert_eq!(f.degree(), series_degree(&ctx).unwrap());
    }

    #[test]
    fn gaussian_symmetry(top in 0u64..20, bottom in 0u64..20) {
        prop_assume!(bottom <= top);
        prop_assert_eq!(gaussian_binomial(top, bottom), gaussian_binomial(top, top - bottom));
    }
}
