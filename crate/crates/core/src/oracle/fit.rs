//! Least-squares Laurent fit on a circle around `λ = -1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::ZetaSample;
use crate::{Error, Result};

/// Coefficients `c_d`, `d = min_degree ..`, of `Σ c_d ε^d` with `ε = λ + 1`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LaurentFit {
    pub min_degree: i64,
    pub coeffs: Vec<Complex64>,
    /// `|A c - z| / |z|` over the samples.
    pub residual: f64,
    pub radius: f64,
}

impl LaurentFit {
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, d: i64) -> Option<Complex64> {
        if d < self.min_degree {
            return None;
        }
        self.coeffs.get((d - self.min_degree) as usize).copied()
    }

    pub fn eval(&self, eps: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * eps.powi((self.min_degree + k as i64) as i32))
            .sum()
    }
}

/// Fits degrees `-n ..= order` to the samples.
///
/// Columns are scaled to `(ε/r)^d` so the system stays well conditioned when
/// `r` is small; coefficients are rescaled afterwards.
pub fn laurent_fit(samples: &[ZetaSample], n: usize, order: u32) -> Result<LaurentFit> {
    let lo = -(n as i64);
    let hi = order as i64;
    let unknowns = (hi - lo + 1) as usize;
    if samples.len() < 2 * unknowns {
        return Err(Error::InvalidArgument(format!(
            "need at least {} samples for {} coefficients, got {}",
            2 * unknowns,
            unknowns,
            samples.len()
        )));
    }
    let eps: Vec<Complex64> = samples.iter().map(|s| s.lambda + 1.0).collect();
    let radius = eps.iter().map(|e| e.norm()).sum::<f64>() / eps.len() as f64;
    if radius <= 0.0 {
        return Err(Error::InvalidArgument("samples sit on the pole".into()));
    }
    let a = DMatrix::from_fn(samples.len(), unknowns, |r, c| {
        (eps[r] / radius).powi((lo + c as i64) as i32)
    });
    let z = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.value));
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&z, 1e-14)
        .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
    let resid = (&a * &x - &z).norm() / z.norm().max(f64::MIN_POSITIVE);
    let coeffs = x
        .iter()
        .enumerate()
        .map(|(k, c)| c / radius.powi((lo + k as i64) as i32))
        .collect();
    Ok(LaurentFit {
        min_degree: lo,
        coeffs,
        residual: resid,
        radius,
    })
}
