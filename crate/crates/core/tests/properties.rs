//! Cross-module invariants of `S(x)`, checked on random rationals.

use proptest::prelude::*;

use sierp::kronapply::KronOperator;
use sierp::sierpmatrix::{build_s, mat_inverse, mat_mul, s_entry, theorem2_summand_oracle};
use sierp::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

fn vector(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(rational(), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_adds_parameters(x in rational(), y in rational(), k in 0u32..=5) {
        let n = 1 << k;
        let prod = mat_mul(&build_s(&x, n).unwrap(), &build_s(&y, n).unwrap()).unwrap();
        prop_assert_eq!(prod, build_s(&(&x + &y), n).unwrap());
    }

    #[test]
    fn nonzero_x_keeps_sierpinski_support(x in rational(), k in 0u32..=6) {
        prop_assume!(!x.is_zero());
        let n = 1 << k;
        let (sx, s) = (build_s(&x, n).unwrap(), build_s(&Rational::one(), n).unwrap());
        for i in 0..n {
            for j in 0..=i {
                prop_assert_eq!(sx.is_nonzero(i, j), s.is_nonzero(i, j));
            }
        }
    }

    #[test]
    fn inverse_negates_parameter(x in rational(), k in 0u32..=5) {
        let n = 1 << k;
        prop_assert_eq!(
            mat_inverse(&build_s(&x, n).unwrap()).unwrap(),
            build_s(&-&x, n).unwrap()
        );
    }

    #[test]
    fn leading_block_is_smaller_window(x in rational(), k in 1u32..=6) {
        let big = build_s(&x, 1 << k).unwrap();
        prop_assert_eq!(big.leading_block(1 << (k - 1)).unwrap(), build_s(&x, 1 << (k - 1)).unwrap());
    }

    #[test]
    fn summand_oracle_matches_entry(i in 0usize..=64, j in 0usize..=64, x in rational(), y in rational()) {
        prop_assume!(j <= i);
        let n = (i + 1).next_power_of_two();
        let sum = build_s(&(&x + &y), n).unwrap();
        prop_assert_eq!(&theorem2_summand_oracle(i, j, &x, &y), sum.get(i, j).unwrap());
        prop_assert_eq!(theorem2_summand_oracle(i, j, &x, &y), s_entry(&(&x + &y), i, j));
    }

    #[test]
    fn kron_apply_matches_dense(x in rational(), v in vector(64)) {
        let op = KronOperator::new(6, x.clone());
        prop_assert_eq!(op.apply(&v).unwrap(), build_s(&x, 64).unwrap().mat_vec(&v).unwrap());
    }

    #[test]
    fn kron_stages_commute(x in rational(), v in vector(32), order in Just((0u32..5).collect::<Vec<_>>()).prop_shuffle()) {
        let op = KronOperator::new(5, x);
        let (default, _) = op.apply_counted(&v).unwrap();
        let (shuffled, stats) = op.apply_in_order(&v, &order).unwrap();
        prop_assert_eq!(default, shuffled);
        prop_assert_eq!(stats.updates, 5 * 16);
    }

    #[test]
    fn kron_operators_compose(x in rational(), y in rational(), v in vector(16)) {
        let (ox, oy) = (KronOperator::new(4, x.clone()), KronOperator::new(4, y.clone()));
        let chained = oy.apply(&ox.apply(&v).unwrap()).unwrap();
        prop_assert_eq!(chained, KronOperator::new(4, &x + &y).apply(&v).unwrap());
        prop_assert_eq!(ox.solve(&ox.apply(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn kron_materialize_matches_build(x in rational(), k in 0u32..=8) {
        prop_assert_eq!(KronOperator::new(k, x.clone()).materialize().unwrap(), build_s(&x, 1 << k).unwrap());
    }
}
