//! Separable test functions `φ(x) = Π p_i(x_i) exp(-x_i^2)`.

use num_traits::{One, Zero};

use crate::scalar::{self, Scalar};
use crate::weyl::WeylOp;
use crate::{Error, Result};

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn one() -> Self {
        Poly(vec![Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + scalar::to_f64(c))
    }

    /// `p(-t)`.
    pub fn reflect(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `t p(t)`.
    pub fn mul_t(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(Scalar::zero());
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    /// Polynomial part of `d/dt [p(t) exp(-t^2)]`, i.e. `p' - 2 t p`.
    pub fn gauss_derivative(&self) -> Poly {
        let len = self.0.len() + 1;
        let mut v = vec![Scalar::zero(); len];
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                v[i - 1] += c * scalar::int(i as i64);
            }
            v[i + 1] -= c * scalar::int(2);
        }
        Poly::new(v)
    }

    /// First `count` Taylor coefficients of `p(t) exp(-t^2)` at 0, exactly.
    pub fn taylor(&self, count: usize) -> Vec<Scalar> {
        // exp(-t^2) = sum_k (-1)^k t^(2k) / k!
        let mut out = vec![Scalar::zero(); count];
        for (i, c) in self.0.iter().enumerate() {
            let mut k = 0;
            while i + 2 * k < count {
                out[i + 2 * k] += c * scalar::sign(k as u32) / scalar::factorial(k as u32);
                k += 1;
            }
        }
        out
    }
}

/// `φ(x) = Π_i p_i(x_i) exp(-x_i^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TestFunction {
    factors: Vec<Poly>,
}

impl TestFunction {
    pub fn new(factors: Vec<Poly>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "test function needs at least one variable".into(),
            ));
        }
        Ok(TestFunction { factors })
    }

    /// `exp(-|x|^2)`.
    pub fn gaussian(n: usize) -> Self {
        TestFunction {
            factors: vec![Poly::one(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, i: usize) -> &Poly {
        &self.factors[i]
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    /// Exact value `φ(0)`.
    pub fn value_at_origin(&self) -> Scalar {
        self.factors
            .iter()
            .map(|p| p.coeffs().first().cloned().unwrap_or_else(Scalar::zero))
            .fold(Scalar::one(), |a, b| a * b)
    }
}

/// Finite sum `Σ c_k φ_k` of separable test functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothSum {
    pub n: usize,
    pub terms: Vec<(Scalar, TestFunction)>,
}

/// `P φ` for a normal-ordered operator, as a sum of separable functions.
pub fn apply_smooth(p: &WeylOp, phi: &TestFunction) -> Result<SmoothSum> {
    if p.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: phi.dim(),
        });
    }
    let mut terms = Vec::with_capacity(p.term_count());
    for (mono, c) in p.terms() {
        let factors: Vec<Poly> = phi
            .factors
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let mut q = q.clone();
                for _ in 0..mono.d[i] {
                    q = q.gauss_derivative();
                }
                for _ in 0..mono.x[i] {
                    q = q.mul_t();
                }
                q
            })
            .collect();
        if factors.iter().any(Poly::is_zero) {
            continue;
        }
        terms.push((c.clone(), TestFunction { factors }));
    }
    Ok(SmoothSum {
        n: phi.dim(),
        terms,
    })
}
