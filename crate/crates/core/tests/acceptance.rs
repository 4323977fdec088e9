//! One line per acceptance criterion: `PASS`/`FAIL`, detail, elapsed vs budget.

mod common;

use std::time::{Duration, Instant};

use common::{random_atom, random_op, random_test_function};
use normcross::annih::{
    completeness_report, generators, generators_nc, target, target_nc, MAX_SLACK,
};
use normcross::dist::{apply, Atom, Dist};
use normcross::laurent::expand_product;
use normcross::oracle::{cross_check, duality_sides, CrossCheckConfig, TestFunction};
use normcross::scalar;
use normcross::weyl::{divide_by_theta, theta, WeylOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let ok = out.pass && elapsed <= budget;
    println!(
        "[{}] {id}. {name}: {} ({:.2?} / {:.0?})",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed,
        budget
    );
    ok
}

fn leading_coefficient() -> Outcome {
    let bad: Vec<usize> = (1..=4usize)
        .filter(|&n| {
            let lead = Dist::from_tensor(vec![Atom::delta(); n], scalar::int(1 << (n - 1)));
            expand_product(n, 0).unwrap().coeff(-(n as i64)) != Some(&lead)
        })
        .collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("u_(-n) = 2^(n-1) δ^n for n = 1..4, mismatches {bad:?}"),
    }
}

fn pole_order() -> Outcome {
    let bad: Vec<usize> = (1..=4usize)
        .filter(|&n| {
            let s = expand_product(n, 1).unwrap();
            let lowest = s.iter().find(|(_, u)| !u.is_zero()).map(|(d, _)| d);
            lowest != Some(-(n as i64)) || s.min_degree() != -(n as i64)
        })
        .collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("lowest nonzero degree is -n, mismatches {bad:?}"),
    }
}

fn generator_annihilation() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=4 {
        for k in 0..n {
            let u = target(n, k).unwrap();
            for g in generators(n, k).unwrap().ops() {
                checked += 1;
                if !apply(g, &u).unwrap().is_zero() {
                    failures.push(format!("n={n} k={k} {g}"));
                }
            }
        }
        for m in 1..=n {
            for k in 0..m {
                let u = target_nc(n, m, k).unwrap();
                for g in generators_nc(n, m, k).unwrap().ops() {
                    checked += 1;
                    if !apply(g, &u).unwrap().is_zero() {
                        failures.push(format!("n={n} m={m} k={k} {g}"));
                    }
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{checked} generator applications, failures {failures:?}"),
    }
}

fn shift_identities() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=4usize {
        let s = expand_product(n, 1).unwrap();
        for i in 0..n {
            let t = theta(n, i);
            let euler = &WeylOp::x(n, i) * &WeylOp::d(n, i);
            for k in 0..=n as i64 {
                checked += 1;
                let lhs = apply(&t, &s.coeff_or_zero(-k).unwrap()).unwrap();
                if lhs != s.coeff_or_zero(-k - 1).unwrap() {
                    failures.push(format!("shift n={n} i={} k={k}", i + 1));
                }
            }
            for d in -(n as i64)..=1 {
                checked += 1;
                let u = s.coeff_or_zero(d).unwrap();
                let want = &s.coeff_or_zero(d - 1).unwrap() - &u;
                if apply(&euler, &u).unwrap() != want {
                    failures.push(format!("euler n={n} i={} d={d}", i + 1));
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{checked} identities, failures {failures:?}"),
    }
}

fn delta_count() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=4 {
        let s = expand_product(n, 0).unwrap();
        for k in 0..n {
            let u = s.coeff(k as i64 - n as i64).unwrap();
            if u.min_delta_count().is_none_or(|c| c < n - k) {
                failures.push((n, k));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("every term of u_(-n+k) has >= n-k deltas, failures {failures:?}"),
    }
}

fn completeness() -> Outcome {
    let mut failures = Vec::new();
    let mut dims = Vec::new();
    let mut max_slack = 0;
    for n in 1..=3 {
        for k in 0..n {
            let r = completeness_report(n, k, 3, 2).unwrap();
            max_slack = max_slack.max(r.slack_used);
            dims.push(format!("({n},{k}):{}", r.annihilator_dim));
            if !r.passed || r.slack_used > MAX_SLACK {
                failures.push(format!("n={n} k={k} unresolved {}", r.unresolved.len()));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "d = 3, slack used <= {max_slack}, annihilator dims {}, failures {failures:?}",
            dims.join(" ")
        ),
    }
}

fn division() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let p = random_op(&mut rng, n, 4, 6);
        let div = divide_by_theta(&p);
        if div.reconstruct() != p || !div.remainder.terms().all(|(m, _)| m.is_theta_free()) {
            failures += 1;
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("100 random operators, {failures} failures"),
    }
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    for trial in 0..20 {
        let n = rng.gen_range(1..=2);
        let p = random_op(&mut rng, n, 3, 3);
        let u = Dist::from_tensor(
            (0..n).map(|_| random_atom(&mut rng)).collect(),
            scalar::int(1),
        );
        let phi = random_test_function(&mut rng, n);
        match duality_sides(&p, &u, &phi) {
            Ok((l, r)) => worst = worst.max((l.value - r.value).abs() / l.value.abs().max(1.0)),
            Err(e) => errors.push(format!("trial {trial}: {e}")),
        }
    }
    Outcome {
        pass: errors.is_empty() && worst <= 1e-8,
        detail: format!("20 triples, worst relative gap {worst:.2e}, errors {errors:?}"),
    }
}

fn numerical_cross_check() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for n in 1..=3usize {
        let r = cross_check(
            n,
            0,
            &TestFunction::gaussian(n),
            &CrossCheckConfig::default(),
        )
        .unwrap();
        if !r.passed {
            failures.push(format!("n={n}"));
        }
        let lead = r.degrees[0].fitted;
        if (lead - (1 << (n - 1)) as f64).abs() > 1e-6 * lead.abs().max(1.0) {
            failures.push(format!("n={n} c_(-n) = {lead}"));
        }
        let worst = r.degrees.iter().map(|d| d.rel_err).fold(0.0, f64::max);
        notes.push(format!("n={n}: c_(-n)={lead:.9} worst {worst:.1e}"));
        if n == 2 {
            let sub = r.degrees[1].fitted;
            if (sub + 2.0 * EULER_GAMMA).abs() > 1e-6 {
                failures.push(format!("n=2 c_(-1) = {sub}"));
            }
            notes.push(format!("c_(-1)={sub:.9}"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{}, failures {failures:?}", notes.join("; ")),
    }
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "leading coefficient", s(1), leading_coefficient),
        run(2, "pole order", s(1), pole_order),
        run(3, "generator annihilation", s(10), generator_annihilation),
        run(4, "shift identities", s(10), shift_identities),
        run(5, "delta count", s(1), delta_count),
        run(6, "bounded-degree completeness", s(300), completeness),
        run(7, "division contract", s(5), division),
        run(8, "transpose duality", s(30), duality),
        run(9, "numerical cross-check", s(120), numerical_cross_check),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
