//! Laurent expansion of `(x1 ... xn)_+^λ` about `λ = -1`.
//!
//! Writing `ε = λ + 1`, one variable gives
//! `t_+^λ = ε^-1 δ(t) + sum_{j>=1} ε^(j-1) h_j(t)` with
//! `h_j = (1/j!) d/dt (log t_+)^j = Pf(-1, j-1, +) / (j-1)!`.
//! The product splits over the sign vectors with `σ_1 ... σ_n = 1`, and the
//! coefficient of `ε^(k-n)` is `sum_σ sum_{|α|=k} h_α(σx)`.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{apply, Atom, Dist, Side};
use crate::scalar::{self, Scalar};
use crate::weyl::{compositions, theta, WeylOp};
use crate::{Error, Result};

/// Truncation order used when none is given.
pub const DEFAULT_ORDER: u32 = 2;

/// Truncated Laurent series in `ε = λ + 1` with distribution coefficients,
/// holding degrees `-n ..= order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentDist {
    n: usize,
    order: i64,
    /// `coeffs[d + n]` is the coefficient of `ε^d`.
    coeffs: Vec<Dist>,
}

impl LaurentDist {
    fn zeros(n: usize, order: i64) -> Self {
        let len = (order + n as i64 + 1).max(0) as usize;
        LaurentDist {
            n,
            order,
            coeffs: vec![Dist::zero(n); len],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn min_degree(&self) -> i64 {
        -(self.n as i64)
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_degree()..=self.order
    }

    /// Coefficient of `ε^d`; `None` outside the stored window.
    pub fn coeff(&self, d: i64) -> Option<&Dist> {
        if d < self.min_degree() || d > self.order {
            return None;
        }
        self.coeffs.get((d + self.n as i64) as usize)
    }

    /// Coefficient of `ε^d`, with zero below the pole order.
    pub fn coeff_or_zero(&self, d: i64) -> Result<Dist> {
        if d < self.min_degree() {
            return Ok(Dist::zero(self.n));
        }
        self.coeff(d).cloned().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "degree {d} exceeds truncation order {}",
                self.order
            ))
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Dist)> {
        self.degrees().zip(self.coeffs.iter())
    }

    fn slot(&mut self, d: i64) -> &mut Dist {
        &mut self.coeffs[(d + self.n as i64) as usize]
    }

    /// Product of two truncated series, tensoring the coefficients.
    ///
    /// The result keeps every degree that both inputs determine exactly.
    pub fn tensor(&self, other: &LaurentDist) -> LaurentDist {
        let order = (self.order - other.n as i64).min(other.order - self.n as i64);
        let mut out = LaurentDist::zeros(self.n + other.n, order);
        for d in out.degrees() {
            let mut acc = Dist::zero(self.n + other.n);
            for (d1, a) in self.iter() {
                if let Some(b) = other.coeff(d - d1) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &a.tensor(b);
                    }
                }
            }
            *out.slot(d) = acc;
        }
        out
    }

    /// Drops degrees above `order`.
    pub fn truncate(&self, order: i64) -> LaurentDist {
        let mut out = self.clone();
        if order < self.order {
            out.coeffs
                .truncate((order + self.n as i64 + 1).max(0) as usize);
            out.order = order;
        }
        out
    }

    /// Checks `d_i x_i u_d = u_(d-1)` for every `i` (with `u_(-n-1) = 0`).
    pub fn shift_holds(&self, d: i64) -> Result<bool> {
        let target = self.coeff_or_zero(d - 1)?;
        let u = self.coeff_or_zero(d)?;
        for i in 0..self.n {
            if apply(&theta(self.n, i), &u)? != target {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks `x_i d_i u_d = -u_d + u_(d-1)` for every `i`.
    pub fn euler_holds(&self, d: i64) -> Result<bool> {
        let u = self.coeff_or_zero(d)?;
        let target = &self.coeff_or_zero(d - 1)? - &u;
        for i in 0..self.n {
            let euler = &WeylOp::x(self.n, i) * &WeylOp::d(self.n, i);
            if apply(&euler, &u)? != target {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A vector `σ ∈ {1, -1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("signs must be +1 or -1".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn product(&self) -> i8 {
        self.0.iter().product()
    }

    pub fn side(&self, i: usize) -> Side {
        Side::from_sign(self.0[i])
    }
}

/// Sign vectors with product `+1`, enumerated in binary order (bit `i` set
/// means `σ_(i+1) = -1`).
pub fn sign_set(n: usize) -> Result<Vec<SignVector>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    if n > 20 {
        return Err(Error::InvalidArgument(format!(
            "dimension {n} is too large"
        )));
    }
    Ok((0u32..1 << n)
        .filter(|bits| bits.count_ones() % 2 == 0)
        .map(|bits| {
            SignVector(
                (0..n)
                    .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                    .collect(),
            )
        })
        .collect())
}

/// `h_j` as a one-variable distribution on the given side.
pub fn h_atom(j: u32, side: Side) -> Dist {
    if j == 0 {
        Dist::atom(Atom::delta())
    } else {
        Dist::from_tensor(
            vec![Atom::pf(-1, j - 1, side)],
            Scalar::one() / scalar::factorial(j - 1),
        )
    }
}

/// Expansion of `t_+^λ` (side `+`) or `(-t)_+^λ` (side `-`) up to `ε^order`.
pub fn expand_one_var(side: Side, order: u32) -> LaurentDist {
    let mut out = LaurentDist::zeros(1, order as i64);
    for j in 0..=order + 1 {
        *out.slot(j as i64 - 1) = h_atom(j, side);
    }
    out
}

/// Expansion of `(x1 ... xn)_+^λ` as a truncated series product of one-variable
/// expansions, summed over the sign set.
pub fn expand_product(n: usize, order: u32) -> Result<LaurentDist> {
    let signs = sign_set(n)?;
    // each factor must reach `order + n - 1` for the product to be exact up to `order`
    let inner = order + n as u32 - 1;
    let factors = [Side::Plus, Side::Minus].map(|s| expand_one_var(s, inner));
    let partials: Vec<LaurentDist> = signs
        .par_iter()
        .map(|sigma| {
            let pick = |i: usize| match sigma.side(i) {
                Side::Plus => &factors[0],
                Side::Minus => &factors[1],
            };
            (1..n).fold(pick(0).clone(), |acc, i| acc.tensor(pick(i)))
        })
        .collect();
    let mut total = LaurentDist::zeros(n, order as i64);
    for part in &partials {
        let part = part.truncate(order as i64);
        for d in total.degrees() {
            let sum = &total.coeffs[(d + n as i64) as usize] + part.coeff(d).expect("window");
            *total.slot(d) = sum;
        }
    }
    Ok(total)
}

/// Coefficient of `ε^d` from the closed formula `sum_σ sum_{|α|=d+n} h_α(σx)`.
pub fn coefficient_direct(n: usize, d: i64) -> Result<Dist> {
    let signs = sign_set(n)?;
    let k = d + n as i64;
    if k < 0 {
        return Ok(Dist::zero(n));
    }
    let mut alphas = Vec::new();
    let mut buf = vec![0u32; n];
    compositions(&mut buf, 0, k as u32, &mut |a| alphas.push(a.to_vec()));
    let mut h_cache: BTreeMap<(u32, Side), Dist> = BTreeMap::new();
    for alpha in &alphas {
        for &j in alpha {
            for side in [Side::Plus, Side::Minus] {
                h_cache.entry((j, side)).or_insert_with(|| h_atom(j, side));
            }
        }
    }
    let mut out = Dist::zero(n);
    for sigma in &signs {
        for alpha in &alphas {
            let term = alpha
                .iter()
                .enumerate()
                .fold(Dist::from_tensor(vec![], Scalar::one()), |acc, (i, &j)| {
                    acc.tensor(&h_cache[&(j, sigma.side(i))])
                });
            out = &out + &term;
        }
    }
    Ok(out)
}

/// Expansion assembled from [`coefficient_direct`].
pub fn expand_direct(n: usize, order: u32) -> Result<LaurentDist> {
    let mut out = LaurentDist::zeros(n, order as i64);
    for d in out.degrees() {
        *out.slot(d) = coefficient_direct(n, d)?;
    }
    Ok(out)
}

/// Checks `d_i x_i u_(-k) = u_(-k-1)` for all `i`, for `0 <= k <= n`.
pub fn shift_check(n: usize, k: usize) -> Result<bool> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    expand_product(n, 0)?.shift_holds(-(k as i64))
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    n: usize,
    #[serde(rename = "J")]
    order: i64,
    coeffs: BTreeMap<String, Dist>,
}

struct CoeffMap<'a>(&'a LaurentDist);

impl Serialize for CoeffMap<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // ascending degree, not string order
        s.collect_map(self.0.iter().map(|(d, u)| (d.to_string(), u)))
    }
}

impl Serialize for LaurentDist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            n: usize,
            #[serde(rename = "J")]
            order: i64,
            coeffs: CoeffMap<'a>,
        }
        Out {
            n: self.n,
            order: self.order,
            coeffs: CoeffMap(self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentDist {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LaurentRepr::deserialize(de)?;
        let mut out = LaurentDist::zeros(repr.n, repr.order);
        for (key, u) in repr.coeffs {
            let d: i64 = key.parse().map_err(D::Error::custom)?;
            if d < out.min_degree() || d > out.order || u.dim() != repr.n {
                return Err(D::Error::custom(format!(
                    "coefficient {key} outside window"
                )));
            }
            *out.slot(d) = u;
        }
        Ok(out)
    }
}
