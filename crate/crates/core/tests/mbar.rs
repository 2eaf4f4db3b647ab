mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use gwprod_core::mbar::{enumerate_strata, evaluate_monomial, pairing_matrix, CycleMonomial};

use common::*;

fn factorial(k: u32) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

#[test]
fn top_monomials_on_m06_match_keel_expansion() {
    let n = 6;
    let mut checked = 0;
    for (divs, psi) in all_top_monomials(n) {
        let m = CycleMonomial::new(n, divs.iter().map(side_mask).collect(), psi.clone()).unwrap();
        assert_eq!(evaluate_monomial(&m).value, oracle_integral(n, &divs, &psi), "{m}");
        checked += 1;
    }
    assert!(checked > 5000);
}

#[test]
fn census_matches_vertex_splitting() {
    for n in 4..=7 {
        let exhaustive = trees_by_splitting(n);
        for (edges, forms) in &exhaustive {
            let strata = enumerate_strata(n, n - 3 - edges).unwrap();
            assert_eq!(strata.len(), forms.len(), "n={n}, {edges} edges");
            assert_eq!(&strata_forms(&strata), forms, "n={n}, {edges} edges");
        }
        assert_eq!(exhaustive.len(), n - 2);
    }
}

#[test]
fn pure_psi_integrals_are_multinomial() {
    for n in 4..=8 {
        let top = n as u32 - 3;
        // every composition of n − 3 into n parts
        let mut a = vec![0u32; n];
        loop {
            if a.iter().sum::<u32>() == top {
                let m = CycleMonomial::new(n, vec![], a.clone()).unwrap();
                let want = factorial(top) / a.iter().map(|&x| factorial(x)).product::<BigInt>();
                assert_eq!(evaluate_monomial(&m).value, BigRational::from_integer(want), "{m}");
            }
            let mut i = 0;
            while i < n && a[i] == top {
                a[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            a[i] += 1;
        }
    }
}

#[test]
fn middle_pairings_are_symmetric() {
    for (n, k) in [(5, 1), (7, 2)] {
        let m = pairing_matrix(n, k).unwrap();
        assert!(m.is_symmetric(), "n={n}");
    }
    let m = pairing_matrix(7, 2).unwrap();
    assert_eq!(m.rows.len(), 490);
}

#[test]
fn wrong_degree_is_flagged_not_failed() {
    let m = CycleMonomial::parse_factors(6, r#"["1,2"]"#).unwrap();
    let e = evaluate_monomial(&m);
    assert!(e.degree_mismatch);
    assert_eq!(e.value, q(0));
}

#[test]
fn bad_factors_are_rejected() {
    for text in [
        r#"["1"]"#,
        r#"["1,2,3,4,5"]"#,
        r#"["psi9"]"#,
        r#"["1,9"]"#,
        "{}",
        "nope",
    ] {
        assert!(CycleMonomial::parse_factors(5, text).is_err(), "{text}");
    }
}

fn top_monomial(n: usize) -> impl Strategy<Value = CycleMonomial> {
    let sides = all_sides(n);
    let k = sides.len() + n;
    prop::collection::vec(0..k, n - 3).prop_map(move |pick| {
        let mut psi = vec![0u32; n];
        let mut divs = Vec::new();
        for g in pick {
            if g < sides.len() {
                divs.push(side_mask(&sides[g]));
            } else {
                psi[g - sides.len()] += 1;
            }
        }
        CycleMonomial::new(n, divs, psi).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn relabeling_preserves_integrals(
        (m, perm) in (6usize..=8).prop_flat_map(|n| {
            (top_monomial(n), Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        prop_assert_eq!(evaluate_monomial(&m.relabel(&perm)).value, evaluate_monomial(&m).value);
    }

    /// Multiplying by `ψ_{n+1}` on `M̄_{0,n+1}` scales the integral by
    /// `n − 2`: the dilaton equation.
    #[test]
    fn dilaton(
        (n, hits) in (4usize..=7).prop_flat_map(|n| (Just(n), prop::collection::vec(0..n, n - 3)))
    ) {
        let mut psi = vec![0u32; n];
        for i in hits {
            psi[i] += 1;
        }
        let base = evaluate_monomial(&CycleMonomial::new(n, vec![], psi.clone()).unwrap()).value;
        psi.push(1);
        let lifted = evaluate_monomial(&CycleMonomial::new(n + 1, vec![], psi).unwrap()).value;
        prop_assert_eq!(lifted, base * q(n as i64 - 2));
    }
}
