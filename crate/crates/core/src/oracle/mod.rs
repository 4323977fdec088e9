//! Floating-point checks of the symbolic layer.
//!
//! Atoms are paired with separable test functions by finite-part quadrature.
//! For `a <= -1`, `m = -a`:
//!
//! ```text
//! <Pf(a, j, +), φ> = ∫_0^1 t^a (log t)^j [φ(t) - Σ_{i<m} φ_i t^i] dt
//!                  + ∫_1^∞ t^a (log t)^j φ(t) dt
//!                  + Σ_{i<m-1} j! (-1)^j φ_i / (a+i+1)^(j+1)
//! ```
//!
//! with `φ_i = φ^(i)(0)/i!` computed exactly. The first integral is taken in
//! `t = exp(-s)`, where the subtracted integrand `t^-m [φ - ...]` is evaluated
//! from its Taylor tail, so nothing cancels near `t = 0`.
//!
//! The local zeta function `Z(λ) = <(x1...xn)_+^λ, φ>` is sampled on a circle
//! around `λ = -1` and its Laurent coefficients recovered by least squares.

mod fit;
mod quad;
mod testfn;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{apply, Atom, Dist, Side};
use crate::laurent::{expand_product, sign_set};
use crate::scalar::{self, Scalar};
use crate::weyl::WeylOp;
use crate::{Error, Result};

pub use fit::{laurent_fit, LaurentFit};
pub use quad::{integrate, QuadConfig, QuadResult, QuadValue};
pub use testfn::{apply_smooth, Poly, SmoothSum, TestFunction};

/// Numerical value with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub quad: QuadConfig,
    /// Largest acceptable error estimate for a single pairing.
    pub target: f64,
    /// Extra Taylor terms beyond the subtraction order.
    pub tail_terms: usize,
    /// Upper end of the `[1, ∞)` integrals; `exp(-t^2)` is negligible beyond it.
    pub upper_cutoff: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            quad: QuadConfig::default(),
            target: 1e-10,
            tail_terms: 60,
            upper_cutoff: 12.0,
        }
    }
}

/// `s` beyond which `s^j exp(-rate s)` stays below `1e-18`.
fn decay_cutoff(rate: f64, j: u32) -> f64 {
    let mut s = 40.0 / rate;
    while (j as f64) * s.ln() - rate * s > (1e-18f64).ln() {
        s += 5.0;
    }
    s
}

/// Evaluates `Σ_{i>=m} c_i t^(i-m)` by Horner.
fn tail_series(coeffs: &[f64], m: usize, t: f64) -> f64 {
    coeffs[m..].iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn check(est: Estimate, cfg: &OracleConfig) -> Result<Estimate> {
    if !est.error.is_finite() || est.error > cfg.target || !est.value.is_finite() {
        return Err(Error::Quadrature {
            achieved: est.error,
            target: cfg.target,
        });
    }
    Ok(est)
}

/// `<atom, p(t) exp(-t^2)>` with the default configuration.
pub fn pair_atom(atom: Atom, p: &Poly) -> Result<Estimate> {
    pair_atom_with(atom, p, &OracleConfig::default())
}

pub fn pair_atom_with(atom: Atom, p: &Poly, cfg: &OracleConfig) -> Result<Estimate> {
    let (a, j, side) = match atom {
        Atom::Delta(m) => {
            let c = p.taylor(m as usize + 1).pop().expect("nonempty");
            let v = scalar::sign(m) * scalar::factorial(m) * c;
            return Ok(Estimate {
                value: scalar::to_f64(&v),
                error: 0.0,
            });
        }
        Atom::Pf { a, j, side } => (a, j, side),
    };
    let q = match side {
        Side::Plus => p.clone(),
        Side::Minus => p.reflect(),
    };
    let m = if a < 0 { (-a) as usize } else { 0 };
    let degree = q.coeffs().len();
    let exact = q.taylor(m + degree + cfg.tail_terms);
    let coeffs: Vec<f64> = exact.iter().map(scalar::to_f64).collect();
    let jf = j as i32;

    // ∫_0^1 t^a (log t)^j g(t) dt with t = e^{-s}
    let rate = if a < 0 { 1.0 } else { (a + 1) as f64 };
    let lower = integrate(
        |s: f64| {
            let t = (-s).exp();
            let g = if m == 0 {
                q.eval(t) * (-t * t).exp()
            } else {
                tail_series(&coeffs, m, t)
            };
            (-s).powi(jf) * (-rate * s).exp() * g
        },
        0.0,
        decay_cutoff(rate, j),
        &cfg.quad,
    );
    let upper = integrate(
        |t: f64| t.powf(a as f64) * t.ln().powi(jf) * q.eval(t) * (-t * t).exp(),
        1.0,
        cfg.upper_cutoff,
        &cfg.quad,
    );
    let mut finite = Scalar::zero();
    for (i, c) in exact.iter().enumerate().take(m.saturating_sub(1)) {
        let denom = scalar::int(a + i as i64 + 1);
        let mut pow = denom.clone();
        for _ in 0..j {
            pow *= &denom;
        }
        finite += scalar::factorial(j) * scalar::sign(j) * c / pow;
    }
    check(
        Estimate {
            value: lower.value + upper.value + scalar::to_f64(&finite),
            error: lower.error + upper.error,
        },
        cfg,
    )
}

/// `<u, φ>` for a separable test function.
pub fn pair(u: &Dist, phi: &TestFunction) -> Result<Estimate> {
    pair_with(u, phi, &OracleConfig::default())
}

pub fn pair_with(u: &Dist, phi: &TestFunction, cfg: &OracleConfig) -> Result<Estimate> {
    if u.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: phi.dim(),
        });
    }
    let mut keys: Vec<(usize, Atom)> = u
        .terms()
        .flat_map(|(atoms, _)| atoms.iter().copied().enumerate())
        .collect();
    keys.sort();
    keys.dedup();
    let values: BTreeMap<(usize, Atom), Estimate> = keys
        .par_iter()
        .map(|&(i, atom)| pair_atom_with(atom, phi.factor(i), cfg).map(|e| ((i, atom), e)))
        .collect::<Result<_>>()?;
    let mut value = 0.0;
    let mut error = 0.0;
    for (atoms, c) in u.terms() {
        let c = scalar::to_f64(c);
        let parts: Vec<Estimate> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| values[&(i, *a)])
            .collect();
        let prod: f64 = parts.iter().map(|e| e.value).product();
        let err: f64 = (0..parts.len())
            .map(|i| {
                parts[i].error
                    * parts
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i)
                        .map(|(_, e)| e.value.abs())
                        .product::<f64>()
            })
            .sum();
        value += c * prod;
        error += c.abs() * err;
    }
    Ok(Estimate { value, error })
}

/// `<u, Σ c_k φ_k>`.
pub fn pair_smooth(u: &Dist, sum: &SmoothSum) -> Result<Estimate> {
    let mut value = 0.0;
    let mut error = 0.0;
    for (c, phi) in &sum.terms {
        let e = pair(u, phi)?;
        let c = scalar::to_f64(c);
        value += c * e.value;
        error += c.abs() * e.error;
    }
    Ok(Estimate { value, error })
}

/// Both sides of `<P u, φ> = <u, P^t φ>`.
pub fn duality_sides(p: &WeylOp, u: &Dist, phi: &TestFunction) -> Result<(Estimate, Estimate)> {
    let lhs = pair(&apply(p, u)?, phi)?;
    let rhs = pair_smooth(u, &apply_smooth(&p.transpose(), phi)?)?;
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaConfig {
    pub oracle: OracleConfig,
    /// Samples closer than this to the pole are rejected.
    pub pole_floor: f64,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig {
            oracle: OracleConfig::default(),
            pole_floor: 1e-3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaSample {
    pub lambda: Complex64,
    pub value: Complex64,
    pub error: f64,
}

/// `∫_0^∞ t^λ q(t) exp(-t^2) dt`, continued to `Re λ > -2` by subtracting `φ(0)`.
fn mellin_factor(lambda: Complex64, q: &Poly, cfg: &OracleConfig) -> Result<(Complex64, f64)> {
    let exact = q.taylor(1 + q.coeffs().len() + cfg.tail_terms);
    let coeffs: Vec<f64> = exact.iter().map(scalar::to_f64).collect();
    let phi0 = coeffs[0];
    let rate = (lambda.re + 2.0).max(1e-3);
    // ∫_0^1 t^λ (φ - φ(0)) dt = ∫_0^∞ e^{-(λ+2)s} T_1(e^{-s}) ds
    let lower = integrate(
        |s: f64| (-(lambda + 2.0) * s).exp() * tail_series(&coeffs, 1, (-s).exp()),
        0.0,
        decay_cutoff(rate, 0),
        &cfg.quad,
    );
    let upper = integrate(
        |t: f64| (lambda * t.ln()).exp() * (q.eval(t) * (-t * t).exp()),
        1.0,
        cfg.upper_cutoff,
        &cfg.quad,
    );
    let error = lower.error + upper.error;
    if error > cfg.target {
        return Err(Error::Quadrature {
            achieved: error,
            target: cfg.target,
        });
    }
    Ok((lower.value + upper.value + phi0 / (lambda + 1.0), error))
}

/// `Z(λ) = <(x1...xn)_+^λ, φ>` for `Re λ > -2`, `λ != -1`.
pub fn zeta(n: usize, lambda: Complex64, phi: &TestFunction) -> Result<ZetaSample> {
    zeta_with(n, lambda, phi, &ZetaConfig::default())
}

pub fn zeta_with(
    n: usize,
    lambda: Complex64,
    phi: &TestFunction,
    cfg: &ZetaConfig,
) -> Result<ZetaSample> {
    if phi.dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: phi.dim(),
        });
    }
    let distance = (lambda + 1.0).norm();
    if distance < cfg.pole_floor {
        return Err(Error::PoleProximity {
            lambda: lambda.to_string(),
            distance,
            floor: cfg.pole_floor,
        });
    }
    if lambda.re <= -2.0 {
        return Err(Error::InvalidArgument(format!(
            "Re λ must exceed -2 for the continued integral, got {lambda}"
        )));
    }
    // factor i evaluated on each side: (+) uses p_i(t), (-) uses p_i(-t)
    let mut factors = Vec::with_capacity(n);
    for q in phi.factors() {
        let plus = mellin_factor(lambda, q, &cfg.oracle)?;
        let minus = mellin_factor(lambda, &q.reflect(), &cfg.oracle)?;
        factors.push([plus, minus]);
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for sigma in sign_set(n)? {
        let parts: Vec<(Complex64, f64)> = sigma
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, &s)| factors[i][usize::from(s < 0)])
            .collect();
        value += parts.iter().map(|p| p.0).product::<Complex64>();
        error += (0..n)
            .map(|i| {
                parts[i].1
                    * parts
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i)
                        .map(|(_, p)| p.0.norm())
                        .product::<f64>()
            })
            .sum::<f64>();
    }
    Ok(ZetaSample {
        lambda,
        value,
        error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossCheckConfig {
    pub tol: f64,
    pub radius: f64,
    pub samples: usize,
    /// Relative fit residual above which the fit is flagged.
    pub residual_tol: f64,
    pub zeta: ZetaConfig,
}

impl Default for CrossCheckConfig {
    fn default() -> Self {
        CrossCheckConfig {
            tol: 1e-6,
            radius: 0.25,
            samples: 16,
            residual_tol: 1e-4,
            zeta: ZetaConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCheck {
    pub degree: i64,
    pub fitted: f64,
    pub fitted_im: f64,
    pub symbolic: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub n: usize,
    #[serde(rename = "J")]
    pub order: u32,
    pub radius: f64,
    pub tol: f64,
    pub fit_residual: f64,
    pub ill_conditioned: bool,
    pub degrees: Vec<DegreeCheck>,
    pub passed: bool,
    #[serde(skip)]
    pub samples: Vec<ZetaSample>,
    #[serde(skip)]
    pub fit: LaurentFit,
}

impl CrossCheckReport {
    /// Zeta samples as CSV: `re_lambda,im_lambda,re_z,im_z,error`.
    pub fn samples_csv(&self) -> String {
        let mut out = String::from("re_lambda,im_lambda,re_z,im_z,error\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.3e}\n",
                s.lambda.re, s.lambda.im, s.value.re, s.value.im, s.error
            ));
        }
        out
    }
}

/// Samples of `Z` at `λ = -1 + r e^{2πik/N}`.
pub fn sample_circle(
    n: usize,
    phi: &TestFunction,
    radius: f64,
    count: usize,
    cfg: &ZetaConfig,
) -> Result<Vec<ZetaSample>> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            let lambda = Complex64::new(-1.0, 0.0) + Complex64::from_polar(radius, theta);
            zeta_with(n, lambda, phi, cfg)
        })
        .collect()
}

/// Fits the zeta samples and compares `c_d` against `<u_d, φ>` for
/// `d ∈ [-n, min(0, J)]`.
pub fn cross_check(
    n: usize,
    order: u32,
    phi: &TestFunction,
    cfg: &CrossCheckConfig,
) -> Result<CrossCheckReport> {
    if cfg.tol <= 0.0 || cfg.radius <= 0.0 || cfg.radius >= 1.0 {
        return Err(Error::InvalidArgument(
            "need tol > 0 and 0 < radius < 1".into(),
        ));
    }
    let samples = sample_circle(n, phi, cfg.radius, cfg.samples, &cfg.zeta)?;
    // fit as many degrees as the samples allow; the tail otherwise dominates the residual
    let fit_order = (order as i64).max((cfg.samples / 2) as i64 - n as i64 - 1) as u32;
    let fit = laurent_fit(&samples, n, fit_order)?;
    let exp = expand_product(n, order)?;
    let mut degrees = Vec::new();
    for d in -(n as i64)..=0.min(order as i64) {
        let fitted = fit.coeff(d).expect("fitted degree");
        let symbolic = pair_with(
            exp.coeff(d).expect("expanded degree"),
            phi,
            &cfg.zeta.oracle,
        )?
        .value;
        let abs_err = (fitted - symbolic).norm();
        let scale = fitted.norm().max(1.0);
        degrees.push(DegreeCheck {
            degree: d,
            fitted: fitted.re,
            fitted_im: fitted.im,
            symbolic,
            abs_err,
            rel_err: abs_err / scale,
            pass: abs_err <= cfg.tol * scale,
        });
    }
    let passed = degrees.iter().all(|d| d.pass);
    Ok(CrossCheckReport {
        n,
        order,
        radius: cfg.radius,
        tol: cfg.tol,
        fit_residual: fit.residual,
        ill_conditioned: fit.residual > cfg.residual_tol,
        degrees,
        passed,
        samples,
        fit,
    })
}
