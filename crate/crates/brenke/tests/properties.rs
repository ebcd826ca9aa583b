//! Randomized property tests for the exact-arithmetic core.

use brenke::families::{dunkl_apply, dunkl_apply_definitional, hermite_family, DunklParameter};
use brenke::oracle::{expand_in_basis, BasisSet};
use brenke::scalar::pochhammer;
use brenke::{Polynomial, PowerSeries, Scalar};
use proptest::prelude::*;

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    ((-20i64..=20), (1i64..=6)).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn coeff_vec(len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    proptest::collection::vec(scalar_strategy(), len)
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(scalar_strategy(), 1..=(max_deg + 1))
        .prop_map(Polynomial::from_coeffs)
}

fn dunkl_strategy() -> impl Strategy<Value = DunklParameter> {
    ((-10i64..=10), (1i64..=4)).prop_filter_map("pole of gamma_mu", |(n, d)| {
        DunklParameter::new(Scalar::ratio(n, d)).ok()
    })
}

proptest! {
    #[test]
    fn pochhammer_addition_law(
        alpha in scalar_strategy(),
        m in 0usize..=12,
        n in 0usize..=12,
    ) {
        let shifted = &alpha + &Scalar::int(m as i64);
        prop_assert_eq!(
            pochhammer(&alpha, m + n),
            pochhammer(&alpha, m) * pochhammer(&shifted, n)
        );
    }

    #[test]
    fn series_multiplication_commutes(
        order in 0usize..=10,
        seed_a in proptest::collection::vec(((-20i64..=20), (1i64..=6)), 11),
        seed_b in proptest::collection::vec(((-20i64..=20), (1i64..=6)), 11),
    ) {
        let a = PowerSeries::from_coeffs(
            seed_a[..=order].iter().map(|&(n, d)| Scalar::ratio(n, d)).collect(),
        );
        let b = PowerSeries::from_coeffs(
            seed_b[..=order].iter().map(|&(n, d)| Scalar::ratio(n, d)).collect(),
        );
        prop_assert_eq!(a.mul(&b, order).unwrap(), b.mul(&a, order).unwrap());
    }

    #[test]
    fn series_multiplication_associates(
        order in 0usize..=8,
        seed in proptest::collection::vec(((-20i64..=20), (1i64..=6)), 27),
    ) {
        let mk = |chunk: &[(i64, i64)]| {
            PowerSeries::from_coeffs(chunk.iter().map(|&(n, d)| Scalar::ratio(n, d)).collect())
        };
        let a = mk(&seed[0..=order]);
        let b = mk(&seed[9..=9 + order]);
        let c = mk(&seed[18..=18 + order]);
        let left = a.mul(&b, order).unwrap().mul(&c, order).unwrap();
        let right = a.mul(&b.mul(&c, order).unwrap(), order).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_reciprocal_is_inverse(
        order in 0usize..=10,
        seed in proptest::collection::vec(((-20i64..=20), (1i64..=6)), 11),
    ) {
        let mut coeffs: Vec<Scalar> =
            seed[..=order].iter().map(|&(n, d)| Scalar::ratio(n, d)).collect();
        if coeffs[0].is_zero() {
            coeffs[0] = Scalar::one();
        }
        let s = PowerSeries::from_coeffs(coeffs);
        let recip = s.reciprocal(order).unwrap();
        prop_assert_eq!(s.mul(&recip, order).unwrap(), PowerSeries::one(order));
    }

    #[test]
    fn basis_expansion_is_left_inverse(coeffs in coeff_vec(1).prop_union(coeff_vec(11))) {
        let n_max = coeffs.len() - 1;
        let h = hermite_family(n_max).unwrap();
        let basis = BasisSet::from_family(&h, n_max).unwrap();
        let mut target = Polynomial::zero();
        for (m, c) in coeffs.iter().enumerate() {
            target = target.add(&basis.poly(m).scale(c));
        }
        let mut recovered = expand_in_basis(&target, &basis).unwrap();
        recovered.resize(n_max + 1, Scalar::zero());
        prop_assert_eq!(recovered, coeffs);
    }

    #[test]
    fn dunkl_monomial_rule_matches_definition(
        mu in dunkl_strategy(),
        p in poly_strategy(10),
    ) {
        prop_assert_eq!(dunkl_apply(&mu, &p), dunkl_apply_definitional(&mu, &p));
    }
}
