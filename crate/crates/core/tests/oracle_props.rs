mod common;

use common::{random_atom, random_op, random_test_function};
use normcross::dist::{Atom, Dist, Side};
use normcross::laurent::expand_product;
use normcross::oracle::{
    cross_check, duality_sides, pair, pair_atom, pair_atom_with, CrossCheckConfig, OracleConfig,
    Poly, TestFunction,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transpose_duality(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_op(&mut rng, n, 3, 3);
        let u = Dist::from_tensor((0..n).map(|_| random_atom(&mut rng)).collect(), normcross::scalar::int(1));
        let phi = random_test_function(&mut rng, n);
        let (l, r) = duality_sides(&p, &u, &phi).unwrap();
        prop_assert!((l.value - r.value).abs() <= 1e-8 * l.value.abs().max(1.0), "{} vs {}", l.value, r.value);
    }

    #[test]
    fn pairing_is_linear(a in common::atom(), b in common::atom(), c in -3i64..=3) {
        let phi = TestFunction::new(vec![Poly::from_ints(&[1, -1, 1])]).unwrap();
        let u = &Dist::atom(a) + &Dist::atom(b).scale(&normcross::scalar::int(c));
        let sum = pair(&u, &phi).unwrap().value;
        let parts = pair_atom(a, phi.factor(0)).unwrap().value + c as f64 * pair_atom(b, phi.factor(0)).unwrap().value;
        prop_assert!((sum - parts).abs() < 1e-9 * parts.abs().max(1.0));
    }
}

#[test]
fn minus_side_is_the_reflection() {
    let p = Poly::from_ints(&[1, 3, -1]);
    for (a, j) in [(-2, 0), (-1, 1), (0, 2), (1, 0)] {
        let minus = pair_atom(Atom::pf(a, j, Side::Minus), &p).unwrap().value;
        let plus = pair_atom(Atom::pf(a, j, Side::Plus), &p.reflect())
            .unwrap()
            .value;
        assert!((minus - plus).abs() < 1e-14);
    }
}

#[test]
fn finite_part_against_gamma_series() {
    // ∫_0^∞ t^λ e^{-t^2} = Γ((λ+1)/2)/2; the ε^0 term at λ = -1 is -γ/2
    let v = pair_atom(Atom::pf(-1, 0, Side::Plus), &Poly::one())
        .unwrap()
        .value;
    assert!((v + EULER_GAMMA / 2.0).abs() < 1e-12);
    // Pf(0, j) is a plain Mellin derivative: ∫ (log t)^j t^0 e^{-t^2}; j = 1 gives -√π(γ + 2 ln 2)/4
    let want = -std::f64::consts::PI.sqrt() * (EULER_GAMMA + 2.0 * 2f64.ln()) / 4.0;
    let v = pair_atom(Atom::pf(0, 1, Side::Plus), &Poly::one())
        .unwrap()
        .value;
    assert!((v - want).abs() < 1e-12, "{v} vs {want}");
}

#[test]
fn doubling_panels_changes_little() {
    let phi = TestFunction::gaussian(1);
    let atoms = expand_product(3, 2).unwrap();
    let mut coarse = OracleConfig::default();
    let mut fine = OracleConfig::default();
    coarse.quad.initial_panels = 8;
    fine.quad.initial_panels = 16;
    for (_, u) in atoms.iter() {
        for (tensor, _) in u.terms() {
            for &a in tensor {
                let c = pair_atom_with(a, phi.factor(0), &coarse).unwrap().value;
                let f = pair_atom_with(a, phi.factor(0), &fine).unwrap().value;
                assert!((c - f).abs() < 1e-10, "{a:?}");
            }
        }
    }
}

#[test]
fn fit_is_stable_in_the_radius() {
    for n in 1..=3 {
        let phi = TestFunction::gaussian(n);
        let at = |r: f64| {
            let cfg = CrossCheckConfig {
                radius: r,
                ..Default::default()
            };
            cross_check(n, 0, &phi, &cfg).unwrap()
        };
        let (a, b) = (at(0.2), at(0.3));
        for (x, y) in a.degrees.iter().zip(&b.degrees) {
            assert!((x.fitted - y.fitted).abs() < 1e-7, "n={n} d={}", x.degree);
        }
    }
}
