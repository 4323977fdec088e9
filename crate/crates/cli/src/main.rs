use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use normcross::annih::{
    completeness_report, generators_nc, target_nc, verify_nc, CompletenessReport,
};
use normcross::dist::{render_with, Atom, Dist, Side, TextStyle};
use normcross::laurent::expand_product;
use normcross::oracle::{
    cross_check, duality_sides, CrossCheckConfig, CrossCheckReport, Poly, TestFunction,
};
use normcross::weyl::{divide_by_theta, Monomial, WeylOp};
use normcross::{scalar, Error};

#[derive(Parser)]
#[command(
    name = "normcross",
    version,
    about = "Laurent expansion and annihilators of (x1...xn)_+^λ at λ = -1"
)]
struct Cli {
    #[arg(
        long,
        global = true,
        value_enum,
        env = "NORMCROSS_FORMAT",
        default_value = "text"
    )]
    format: Format,
    /// Render deltas and derivatives with unicode symbols.
    #[arg(long, global = true)]
    unicode: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients u_d for d in [-n, J].
    Expand {
        #[arg(short)]
        n: usize,
        #[arg(short = 'J', default_value_t = 2)]
        order: u32,
    },
    /// List the annihilator generators of u_(-n+k).
    Generators(Target),
    /// Check that the generators kill u_(-n+k).
    Verify {
        #[command(flatten)]
        target: Target,
        /// Also run the bounded-degree completeness check.
        #[arg(long)]
        complete: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Bounded-degree completeness of the generator set.
    Complete {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Fit the local zeta function and compare against the symbolic coefficients.
    Zeta {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Zeta cross-check plus random transpose-duality trials.
    Crosscheck {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance for the duality trials.
        #[arg(long, default_value_t = 1e-8)]
        duality_tol: f64,
    },
    /// Divide an operator by the thetas d_i x_i.
    Divide {
        #[arg(short)]
        n: Option<usize>,
        /// Operator such as "x1^2 d1 + 3 x1 d2".
        op: String,
    },
}

#[derive(Args)]
struct Target {
    #[arg(short)]
    n: usize,
    #[arg(short)]
    k: usize,
    /// Number of crossing variables; defaults to n.
    #[arg(short)]
    m: Option<usize>,
}

#[derive(Args)]
struct Bounds {
    #[arg(short, default_value_t = 3)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    slack: u32,
}

#[derive(Args)]
struct FitArgs {
    #[arg(short = 'J', default_value_t = 2)]
    order: u32,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 0.25)]
    radius: f64,
    #[arg(long, default_value_t = 16)]
    samples: usize,
    /// Write the zeta samples as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Quadrature { .. } | Error::PoleProximity { .. } | Error::Json(_) => {
                Failure::Runtime(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = if cli.unicode {
        TextStyle::Unicode
    } else {
        TextStyle::Ascii
    };
    match run(&cli.command, style) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                ),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn require_n(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    Ok(())
}

fn check_target(t: &Target) -> Result<usize, Failure> {
    require_n(t.n)?;
    let m = t.m.unwrap_or(t.n);
    if m == 0 || m > t.n {
        return Err(Failure::Usage(format!(
            "m must lie in 1..={}, got {m}",
            t.n
        )));
    }
    if t.k >= m {
        return Err(Failure::Usage(format!(
            "k must be at most {}, got {}",
            m - 1,
            t.k
        )));
    }
    Ok(m)
}

fn run(cmd: &Command, style: TextStyle) -> Result<Output, Failure> {
    match cmd {
        Command::Expand { n, order } => {
            require_n(*n)?;
            let s = expand_product(*n, *order)?;
            let mut text = String::new();
            for (d, u) in s.iter() {
                writeln!(text, "u_{d} = {}", render_with(u, style)).unwrap();
            }
            Ok(Output {
                text,
                json: serde_json::to_value(&s).map_err(Error::from)?,
                ok: true,
            })
        }
        Command::Generators(t) => {
            let m = check_target(t)?;
            let gens = generators_nc(t.n, m, t.k)?;
            let mut text = String::new();
            for g in &gens.generators {
                writeln!(text, "{}  [{}]", g.op, label(g.label)).unwrap();
            }
            Ok(Output {
                text,
                json: serde_json::to_value(&gens).map_err(Error::from)?,
                ok: true,
            })
        }
        Command::Verify {
            target,
            complete,
            bounds,
        } => {
            let m = check_target(target)?;
            let annihilates = verify_nc(target.n, m, target.k)?;
            let u = target_nc(target.n, m, target.k)?;
            let gens = generators_nc(target.n, m, target.k)?;
            let failures = gens.failures(&u)?;
            let mut text = format!(
                "generators of u_{} (n={}, m={m}): {}\n",
                target.k as i64 - m as i64,
                target.n,
                if annihilates {
                    "all annihilate"
                } else {
                    "FAILED"
                }
            );
            for &i in &failures {
                writeln!(text, "  does not annihilate: {}", gens.generators[i].op).unwrap();
            }
            let mut json = json!({
                "n": target.n,
                "m": m,
                "k": target.k,
                "annihilates": annihilates,
                "failures": failures.iter().map(|&i| gens.generators[i].op.to_string()).collect::<Vec<_>>(),
            });
            let mut ok = annihilates;
            if *complete {
                if m != target.n {
                    return Err(Failure::Usage("--complete needs m = n".into()));
                }
                let report = completeness_report(target.n, target.k, bounds.d, bounds.slack)?;
                text.push_str(&completeness_text(&report));
                ok &= report.passed;
                json["completeness"] = serde_json::to_value(&report).map_err(Error::from)?;
            }
            Ok(Output { text, json, ok })
        }
        Command::Complete { target, bounds } => {
            let m = check_target(target)?;
            if m != target.n {
                return Err(Failure::Usage("completeness needs m = n".into()));
            }
            let report = completeness_report(target.n, target.k, bounds.d, bounds.slack)?;
            Ok(Output {
                text: completeness_text(&report),
                ok: report.passed,
                json: serde_json::to_value(&report).map_err(Error::from)?,
            })
        }
        Command::Zeta { n, fit } => {
            let report = zeta_report(*n, fit)?;
            Ok(Output {
                text: zeta_text(&report),
                ok: report.passed,
                json: serde_json::to_value(&report).map_err(Error::from)?,
            })
        }
        Command::Crosscheck {
            n,
            fit,
            trials,
            seed,
            duality_tol,
        } => {
            let report = zeta_report(*n, fit)?;
            let mut text = zeta_text(&report);
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for _ in 0..*trials {
                let (p, u, phi) = random_triple(&mut rng, *n);
                let (l, r) = duality_sides(&p, &u, &phi)?;
                let gap = (l.value - r.value).abs() / l.value.abs().max(1.0);
                worst = worst.max(gap);
                rows.push(json!({
                    "op": p.to_string(),
                    "dist": u.to_string(),
                    "lhs": l.value,
                    "rhs": r.value,
                    "rel_gap": gap,
                }));
            }
            let dual_ok = worst <= *duality_tol;
            writeln!(
                text,
                "duality: {trials} trials, worst relative gap {worst:.3e} ({})",
                if dual_ok { "pass" } else { "FAIL" }
            )
            .unwrap();
            Ok(Output {
                text,
                ok: report.passed && dual_ok,
                json: json!({
                    "zeta": serde_json::to_value(&report).map_err(Error::from)?,
                    "duality": { "seed": seed, "tol": duality_tol, "worst": worst, "passed": dual_ok, "trials": rows },
                }),
            })
        }
        Command::Divide { n, op } => {
            let p = match n {
                Some(n) => {
                    require_n(*n)?;
                    WeylOp::parse(*n, op)?
                }
                None => op.parse::<WeylOp>()?,
            };
            let div = divide_by_theta(&p);
            let mut text = String::new();
            for (i, q) in div.quotients.iter().enumerate() {
                writeln!(text, "Q{} = {q}", i + 1).unwrap();
            }
            writeln!(text, "R = {}", div.remainder).unwrap();
            Ok(Output {
                text,
                json: serde_json::to_value(&div).map_err(Error::from)?,
                ok: true,
            })
        }
    }
}

fn label(l: normcross::annih::Label) -> &'static str {
    use normcross::annih::Label::*;
    match l {
        SubsetProduct => "subset product",
        EulerDifference => "euler difference",
        TransversalDerivative => "transversal derivative",
    }
}

fn completeness_text(r: &CompletenessReport) -> String {
    let mut text = format!(
        "completeness n={} k={} degree<={}: annihilator dim {}, members {}, {}\n",
        r.n,
        r.k,
        r.degree_bound,
        r.annihilator_dim,
        r.members,
        if r.passed { "pass" } else { "FAIL" }
    );
    text.push_str("  slack  span rank  resolved  remaining\n");
    for s in &r.slack_trace {
        writeln!(
            text,
            "  {:>5}  {:>9}  {:>8}  {:>9}",
            s.slack, s.span_rank, s.resolved, s.remaining
        )
        .unwrap();
    }
    for p in &r.unresolved {
        writeln!(text, "  unresolved: {p}").unwrap();
    }
    text
}

fn zeta_report(n: usize, fit: &FitArgs) -> Result<CrossCheckReport, Failure> {
    require_n(n)?;
    let cfg = CrossCheckConfig {
        tol: fit.tol,
        radius: fit.radius,
        samples: fit.samples,
        ..Default::default()
    };
    let report = cross_check(n, fit.order, &TestFunction::gaussian(n), &cfg)?;
    if let Some(path) = &fit.csv {
        std::fs::write(path, report.samples_csv())
            .map_err(|e| Failure::Runtime(format!("writing {}: {e}", path.display())))?;
    }
    Ok(report)
}

fn zeta_text(r: &CrossCheckReport) -> String {
    let mut text = format!(
        "zeta n={} radius={} fit residual {:.3e}{}\n",
        r.n,
        r.radius,
        r.fit_residual,
        if r.ill_conditioned {
            " (ill-conditioned)"
        } else {
            ""
        }
    );
    text.push_str("  d  fitted               symbolic             abs err\n");
    for d in &r.degrees {
        writeln!(
            text,
            "{:>3}  {:>19.12}  {:>19.12}  {:.3e} {}",
            d.degree,
            d.fitted,
            d.symbolic,
            d.abs_err,
            if d.pass { "" } else { "FAIL" }
        )
        .unwrap();
    }
    writeln!(text, "{}", if r.passed { "pass" } else { "FAIL" }).unwrap();
    text
}

fn random_triple(rng: &mut ChaCha8Rng, n: usize) -> (WeylOp, Dist, TestFunction) {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0u32; 2 * n];
        for _ in 0..rng.gen_range(0..=3) {
            e[rng.gen_range(0..2 * n)] += 1;
        }
        let (x, d) = e.split_at(n);
        terms.push((
            Monomial::new(x.to_vec(), d.to_vec()),
            scalar::int(rng.gen_range(-5..=5)),
        ));
    }
    let p = WeylOp::from_terms(n, terms).expect("consistent dimension");
    let atoms = (0..n)
        .map(|_| {
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
        })
        .collect();
    let factors = (0..n)
        .map(|_| {
            let c: Vec<i64> = (0..rng.gen_range(1..=3))
                .map(|_| rng.gen_range(-2..=2))
                .collect();
            let p = Poly::from_ints(&c);
            if p.is_zero() {
                Poly::one()
            } else {
                p
            }
        })
        .collect();
    let phi = TestFunction::new(factors).expect("nonempty");
    (p, Dist::from_tensor(atoms, scalar::int(1)), phi)
}
