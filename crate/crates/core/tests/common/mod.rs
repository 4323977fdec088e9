#![allow(dead_code)]

use normcross::dist::{Atom, Dist, Side};
use normcross::oracle::{Poly, TestFunction};
use normcross::scalar;
use normcross::weyl::{Monomial, WeylOp};
use proptest::prelude::*;
use rand::Rng;

pub fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Plus), Just(Side::Minus)]
}

pub fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (0u32..4).prop_map(Atom::Delta),
        (-4i64..3, 0u32..3, side()).prop_map(|(a, j, s)| Atom::pf(a, j, s)),
    ]
}

/// Random operator in `n` variables with at most `terms` terms of degree `<= degree`.
pub fn weyl_op(n: usize, degree: u32, terms: usize) -> impl Strategy<Value = WeylOp> {
    let exps = proptest::collection::vec(0..=degree, 2 * n);
    proptest::collection::vec((exps, -5i64..=5), 0..=terms).prop_map(move |raw| {
        let terms = raw.into_iter().filter_map(|(e, c)| {
            let (x, d) = e.split_at(n);
            let m = Monomial::new(x.to_vec(), d.to_vec());
            (m.degree() <= degree).then(|| (m, scalar::int(c)))
        });
        WeylOp::from_terms(n, terms).unwrap()
    })
}

pub fn dist(n: usize, terms: usize) -> impl Strategy<Value = Dist> {
    proptest::collection::vec((proptest::collection::vec(atom(), n), -3i64..=3), 0..=terms)
        .prop_map(move |raw| {
            Dist::from_terms(n, raw.into_iter().map(|(a, c)| (a, scalar::int(c)))).unwrap()
        })
}

/// Same generator with a plain RNG, for the fixed-seed acceptance runs.
pub fn random_op<R: Rng>(rng: &mut R, n: usize, degree: u32, terms: usize) -> WeylOp {
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=terms) {
        let total = rng.gen_range(0..=degree);
        let mut exps = vec![0u32; 2 * n];
        for _ in 0..total {
            exps[rng.gen_range(0..2 * n)] += 1;
        }
        let (x, d) = exps.split_at(n);
        out.push((
            Monomial::new(x.to_vec(), d.to_vec()),
            scalar::int(rng.gen_range(-5..=5)),
        ));
    }
    WeylOp::from_terms(n, out).unwrap()
}

pub fn random_atom<R: Rng>(rng: &mut R) -> Atom {
    if rng.gen_bool(0.3) {
        Atom::Delta(rng.gen_range(0..3))
    } else {
        let side = if rng.gen_bool(0.5) {
            Side::Plus
        } else {
            Side::Minus
        };
        Atom::pf(rng.gen_range(-3..3), rng.gen_range(0..3), side)
    }
}

pub fn random_test_function<R: Rng>(rng: &mut R, n: usize) -> TestFunction {
    let factors = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            let mut c: Vec<i64> = (0..len).map(|_| rng.gen_range(-2..=2)).collect();
            if c.iter().all(|&v| v == 0) {
                c[0] = 1;
            }
            Poly::from_ints(&c)
        })
        .collect();
    TestFunction::new(factors).unwrap()
}
