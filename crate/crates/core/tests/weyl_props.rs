mod common;

use common::weyl_op;
use normcross::weyl::{divide_by_theta, normal_order, Letter, WeylOp};
use proptest::prelude::*;

fn arb3() -> impl Strategy<Value = WeylOp> {
    (1usize..=3).prop_flat_map(|n| weyl_op(n, 3, 4))
}

fn triple() -> impl Strategy<Value = (WeylOp, WeylOp, WeylOp)> {
    (1usize..=3).prop_flat_map(|n| (weyl_op(n, 3, 3), weyl_op(n, 3, 3), weyl_op(n, 3, 3)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associative_and_distributive((p, q, r) in triple()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&q + &r) * &p, &(&q * &p) + &(&r * &p));
    }

    #[test]
    fn one_is_neutral(p in arb3()) {
        let one = WeylOp::one(p.dim());
        prop_assert_eq!(&p * &one, p.clone());
        prop_assert_eq!(&one * &p, p);
    }

    #[test]
    fn transpose_reverses_products((p, q, _) in triple()) {
        prop_assert_eq!((&p * &q).transpose(), &q.transpose() * &p.transpose());
        prop_assert_eq!(p.transpose().transpose(), p);
    }

    #[test]
    fn division_reconstructs(p in (1usize..=3).prop_flat_map(|n| weyl_op(n, 4, 6))) {
        let div = divide_by_theta(&p);
        prop_assert_eq!(div.reconstruct(), p.clone());
        prop_assert_eq!(div.quotients.len(), p.dim());
        for (m, _) in div.remainder.terms() {
            prop_assert!(m.is_theta_free());
        }
    }

    #[test]
    fn text_and_json_round_trip(p in arb3()) {
        prop_assert_eq!(WeylOp::parse(p.dim(), &p.to_string()).unwrap(), p.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<WeylOp>(&json).unwrap(), p);
    }

    #[test]
    fn normal_order_is_idempotent(p in arb3()) {
        // re-reading each ordered term as a word changes nothing
        let mut acc = WeylOp::zero(p.dim());
        for (m, c) in p.terms() {
            let mut word = Vec::new();
            for i in 0..p.dim() {
                word.extend(std::iter::repeat_n(Letter::X(i), m.x[i] as usize));
            }
            for i in 0..p.dim() {
                word.extend(std::iter::repeat_n(Letter::D(i), m.d[i] as usize));
            }
            acc = &acc + &normal_order(p.dim(), c.clone(), &word).unwrap();
        }
        prop_assert_eq!(acc, p);
    }
}

#[test]
fn commutators() {
    for n in 1..=3 {
        for i in 0..n {
            for j in 0..n {
                let (d, x) = (WeylOp::d(n, i), WeylOp::x(n, j));
                let comm = &(&d * &x) - &(&x * &d);
                let want = if i == j {
                    WeylOp::one(n)
                } else {
                    WeylOp::zero(n)
                };
                assert_eq!(comm, want, "[d{}, x{}]", i + 1, j + 1);
            }
        }
    }
}
