mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gwprod_core::curve::CurveClass;
use gwprod_core::gw::linalg::{dot, mat_vec};
use gwprod_core::gw::{
    class_dimension_p1, kunneth_sign, reconstruct, stratum_pairing_p1, wdvv_number, GWPairingVector, TargetSpace,
};
use gwprod_core::mbar::{enumerate_strata, pairing_matrix};
use gwprod_core::verify::{point_count, verify_product};
use gwprod_core::Error;

use common::*;

#[test]
fn tree_pairing_matches_exhaustive_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (d, n, sample) in [
        (1, 4, None),
        (1, 6, None),
        (2, 5, None),
        (2, 6, None),
        (2, 7, None),
        (3, 7, Some(150)),
    ] {
        let k = class_dimension_p1(d, n);
        assert!(k >= 0 && k as usize <= n - 3, "d={d} n={n}");
        let mut strata = enumerate_strata(n, n - 3 - k as usize).unwrap();
        if let Some(m) = sample {
            strata.shuffle(&mut rng);
            strata.truncate(m);
        }
        let mut nonzero = 0;
        for s in &strata {
            let e = stratum_pairing_p1(d, n, s).unwrap();
            assert!(!e.degree_mismatch);
            let want = exhaustive_stratum_pairing(d, s);
            assert_eq!(
                e.value,
                num_rational::BigRational::from_integer(want.clone()),
                "d={d} n={n} {}",
                s.key()
            );
            nonzero += usize::from(want != 0.into());
        }
        assert!(nonzero > 0, "d={d} n={n}: all pairings vanish");
    }
}

#[test]
fn mismatched_strata_pair_to_zero() {
    let s = enumerate_strata(6, 0).unwrap().remove(0);
    let e = stratum_pairing_p1(2, 6, &s).unwrap();
    assert!(e.degree_mismatch);
    assert_eq!(e.value, q(0));
}

#[test]
fn degree_one_class_is_the_point() {
    for n in 3..=8 {
        let v = GWPairingVector::p1(1, n).unwrap();
        assert_eq!(v.class_dim, 0);
        assert_eq!(v.values, vec![q(1)], "n={n}");
    }
}

/// The reconstructed class reproduces every pairing it was solved from.
#[test]
fn reconstruction_is_consistent() {
    for (d1, d2) in [(1, 1), (2, 1), (1, 2)] {
        let n = point_count(d1, d2);
        let v1 = GWPairingVector::p1(d1 as u64, n).unwrap();
        let v2 = GWPairingVector::p1(d2 as u64, n).unwrap();
        let m = pairing_matrix(n, v1.class_dim).unwrap();
        let order: Vec<usize> = (0..m.rows.len()).collect();
        let r = reconstruct(&v1, &v2, &m, &order).unwrap();
        let transposed: Vec<Vec<_>> = (0..m.cols.len())
            .map(|c| m.entries.iter().map(|row| row[c].clone()).collect())
            .collect();
        assert_eq!(mat_vec(&transposed, &r.coefficients), v1.values);
        let lhs = wdvv_number(&TargetSpace::p1xp1(), &CurveClass::new(vec![d1 as u64, d2 as u64])).unwrap();
        assert_eq!(dot(&r.coefficients, &v2.values), lhs);
    }
}

#[test]
fn quadric_counts_are_symmetric() {
    let t = TargetSpace::p1xp1();
    for a in 0..=4u64 {
        for b in 0..=4u64 {
            if a + b == 0 {
                continue;
            }
            let x = wdvv_number(&t, &CurveClass::new(vec![a, b])).unwrap();
            let y = wdvv_number(&t, &CurveClass::new(vec![b, a])).unwrap();
            assert_eq!(x, y, "({a},{b})");
            if a == 1 || b == 1 {
                // one ruling: a unique section-type curve through the points
                assert_eq!(x, q(1), "({a},{b})");
            }
        }
    }
    assert_eq!(wdvv_number(&t, &CurveClass::new(vec![3, 2])).unwrap(), q(96));
}

#[test]
fn out_of_range_bidegrees_are_errors() {
    assert!(GWPairingVector::p1(0, 5).is_err());
    assert!(matches!(verify_product(0, 1, 9), Err(Error::DegenerateBidegree(0, 1))));
    assert!(matches!(
        verify_product(3, 3, 9),
        Err(Error::CapExceeded { n: 11, cap: 9 })
    ));
    // n = 9 fits the cap but the pairing matrix does not fit in memory
    assert!(matches!(verify_product(3, 2, 9), Err(Error::TooLarge(_))));
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn sign_matches_summation(pairs in prop::collection::vec((-5i64..=9, -5i64..=9), 0..16)) {
        let (gamma, eps): (Vec<i64>, Vec<i64>) = pairs.into_iter().unzip();
        prop_assert_eq!(kunneth_sign(&gamma, &eps).unwrap(), sign_by_summation(&gamma, &eps));
    }

    #[test]
    fn sign_rejects_length_mismatch(a in prop::collection::vec(0i64..4, 0..6), extra in 1usize..3) {
        let b = vec![0; a.len() + extra];
        prop_assert!(kunneth_sign(&a, &b).is_err());
    }
}
