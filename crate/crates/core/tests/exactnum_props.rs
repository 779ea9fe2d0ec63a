use mzv_core::exactnum::{binomial, in_z1p, padic_valuation, Rational, Valuation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-100_000i64..100_000, 1i64..100_000).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |x| *x != Rational::from_integer(0.into()))
}

fn add(a: Valuation, b: Valuation) -> Valuation {
    match (a, b) {
        (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
        _ => Valuation::Infinite,
    }
}

proptest! {
    #[test]
    fn valuation_is_multiplicative(a in nonzero(), b in nonzero(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let v = |x: &Rational| padic_valuation(x, p).unwrap();
        prop_assert_eq!(v(&(&a * &b)), add(v(&a), v(&b)));
    }

    #[test]
    fn z1p_is_a_ring(a in rational(), b in rational(), p in prop::sample::select(vec![2u64, 3])) {
        prop_assume!(in_z1p(&a, p) && in_z1p(&b, p));
        prop_assert!(in_z1p(&(&a + &b), p));
        prop_assert!(in_z1p(&(&a * &b), p));
        prop_assert!(in_z1p(&-&a, p));
    }

    #[test]
    fn z1p_matches_valuation_of_denominator(a in rational(), p in prop::sample::select(vec![2u64, 3])) {
        let den = Rational::from_integer(a.denom().clone());
        prop_assert_eq!(in_z1p(&a, p), padic_valuation(&den, p).unwrap() == Valuation::Finite(0));
    }
}

#[test]
fn pascal_rule() {
    for n in 1..=64i64 {
        assert_eq!(binomial(n, 0), BigInt::from(1));
        assert_eq!(binomial(n, n), BigInt::from(1));
        for k in 1..n {
            assert_eq!(
                binomial(n, k),
                binomial(n - 1, k - 1) + binomial(n - 1, k),
                "C({n},{k})"
            );
        }
    }
}
