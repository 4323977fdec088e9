//! The Weyl algebra: differential operators with polynomial coefficients.
//!
//! Every operator is stored in normal order, `sum c_{ab} x^a d^b` with all
//! multiplications to the left of all derivatives. This form is unique, so
//! equality of operators is equality of their term maps.
//!
//! Variables are indexed from `0` in the API and rendered from `1` in text
//! (`x1`, `d1`, ...).

mod divide;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{self, Scalar};
use crate::{Error, Result};

pub use divide::{divide_by_theta, theta, ThetaDivision};

/// Exponent vector in `N^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// `|a|`, the sum of the entries.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `[a]`, the largest entry (0 for the empty index).
    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

/// A normal-ordered monomial `x^a d^b`.
///
/// The ordering is graded: higher total degree `|a|+|b|` sorts first, ties
/// are broken by the x-block and then the d-block in descending lexicographic
/// order. Term maps iterate in this order, which is also the rendering order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: MultiIndex,
    pub d: MultiIndex,
}

impl Monomial {
    pub fn new(x: Vec<u32>, d: Vec<u32>) -> Self {
        assert_eq!(x.len(), d.len(), "x and d blocks must have equal length");
        Monomial {
            x: MultiIndex(x),
            d: MultiIndex(d),
        }
    }

    pub fn one(n: usize) -> Self {
        Monomial {
            x: MultiIndex::zeros(n),
            d: MultiIndex::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn degree(&self) -> u32 {
        self.x.total() + self.d.total()
    }

    /// True when no variable carries both `x_i` and `d_i`.
    pub fn is_theta_free(&self) -> bool {
        self.x.0.iter().zip(&self.d.0).all(|(a, b)| a * b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.x.cmp(&self.x))
            .then_with(|| other.d.cmp(&self.d))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One letter of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    X(usize),
    D(usize),
}

/// Falling factorial `c (c-1) ... (c-k+1)`.
fn falling(c: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (c - i))
}

fn binomial(b: u32, k: u32) -> BigInt {
    falling(b, k) / falling(k, k)
}

/// Normal-ordered expansion of `(x^a d^b) * (x^c d^e)`.
///
/// Per variable, `d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k)`.
pub(crate) fn monomial_product(left: &Monomial, right: &Monomial) -> Vec<(Monomial, BigInt)> {
    let n = left.dim();
    let mut out = vec![(Monomial::one(n), BigInt::one())];
    for i in 0..n {
        let b = left.d[i];
        let c = right.x[i];
        let mut next = Vec::with_capacity(out.len() * (b.min(c) as usize + 1));
        for k in 0..=b.min(c) {
            let weight = binomial(b, k) * falling(c, k);
            for (mono, coeff) in &out {
                let mut mono = mono.clone();
                mono.x.0[i] = left.x[i] + c - k;
                mono.d.0[i] = b + right.d[i] - k;
                next.push((mono, coeff * &weight));
            }
        }
        out = next;
    }
    out
}

/// Normal-ordered differential operator with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "text::WeylOpRepr", into = "text::WeylOpRepr")]
pub struct WeylOp {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl WeylOp {
    pub fn zero(n: usize) -> Self {
        WeylOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::monomial(Monomial::one(n), c)
    }

    pub fn monomial(mono: Monomial, c: Scalar) -> Self {
        let mut op = WeylOp::zero(mono.dim());
        op.add_term(mono, c);
        op
    }

    /// The multiplication operator `x_i`.
    pub fn x(n: usize, i: usize) -> Self {
        Self::monomial(
            Monomial {
                x: MultiIndex::unit(n, i),
                d: MultiIndex::zeros(n),
            },
            Scalar::one(),
        )
    }

    /// The derivative `d_i`.
    pub fn d(n: usize, i: usize) -> Self {
        Self::monomial(
            Monomial {
                x: MultiIndex::zeros(n),
                d: MultiIndex::unit(n, i),
            },
            Scalar::one(),
        )
    }

    pub fn letter(n: usize, letter: Letter) -> Result<Self> {
        let i = match letter {
            Letter::X(i) | Letter::D(i) => i,
        };
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        Ok(match letter {
            Letter::X(i) => Self::x(n, i),
            Letter::D(i) => Self::d(n, i),
        })
    }

    /// Builds an operator from `(monomial, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut op = WeylOp::zero(n);
        for (mono, c) in terms {
            if mono.dim() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: mono.dim(),
                });
            }
            op.add_term(mono, c);
        }
        Ok(op)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Bernstein degree, `None` for the zero operator.
    pub fn degree(&self) -> Option<u32> {
        // the first key has the largest degree
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn scale(&self, c: &Scalar) -> WeylOp {
        if c.is_zero() {
            return WeylOp::zero(self.n);
        }
        WeylOp {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn check_dim(&self, other: &WeylOp) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Normal-ordered product `self * other`.
    pub fn multiply(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_dim(other)?;
        let mut out = WeylOp::zero(self.n);
        for (lm, lc) in &self.terms {
            for (rm, rc) in &other.terms {
                let c = lc * rc;
                for (mono, k) in monomial_product(lm, rm) {
                    out.add_term(mono, &c * Scalar::from_integer(k));
                }
            }
        }
        Ok(out)
    }

    /// Formal transpose: `x^a d^b` maps to `(-d)^b x^a`, re-normal-ordered.
    pub fn transpose(&self) -> WeylOp {
        let n = self.n;
        let mut out = WeylOp::zero(n);
        for (mono, c) in &self.terms {
            let c = c * scalar::sign(mono.d.total());
            let dpart = Monomial {
                x: MultiIndex::zeros(n),
                d: mono.d.clone(),
            };
            let xpart = Monomial {
                x: mono.x.clone(),
                d: MultiIndex::zeros(n),
            };
            for (m, k) in monomial_product(&dpart, &xpart) {
                out.add_term(m, &c * Scalar::from_integer(k));
            }
        }
        out
    }

    /// Re-embeds the operator into `n_new >= n` variables (new variables unused).
    pub fn embed(&self, n_new: usize) -> Result<WeylOp> {
        if n_new < self.n {
            return Err(Error::InvalidArgument(format!(
                "cannot embed dimension {} into {}",
                self.n, n_new
            )));
        }
        let pad = |m: &MultiIndex| {
            let mut v = m.0.clone();
            v.resize(n_new, 0);
            MultiIndex(v)
        };
        Ok(WeylOp {
            n: n_new,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial {
                            x: pad(&m.x),
                            d: pad(&m.d),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        })
    }
}

/// Normal-orders `prefactor * letter_1 * letter_2 * ...`.
pub fn normal_order(n: usize, prefactor: Scalar, word: &[Letter]) -> Result<WeylOp> {
    let mut acc = WeylOp::constant(n, prefactor);
    for &letter in word {
        acc = acc.multiply(&WeylOp::letter(n, letter)?)?;
    }
    Ok(acc)
}

/// All monomials `x^a d^b` with `|a|+|b| <= degree`, by ascending degree.
///
/// Within one degree the order matches [`Monomial`]'s ordering.
pub fn monomials_up_to(n: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=degree {
        let mut layer = Vec::new();
        let mut exps = vec![0u32; 2 * n];
        compositions(&mut exps, 0, deg, &mut |e| {
            layer.push(Monomial::new(e[..n].to_vec(), e[n..].to_vec()));
        });
        layer.sort();
        out.extend(layer);
    }
    out
}

/// Calls `f` on every vector of length `buf.len()` with entries summing to `total`.
pub(crate) fn compositions(buf: &mut [u32], pos: usize, total: u32, f: &mut impl FnMut(&[u32])) {
    if pos + 1 == buf.len() {
        buf[pos] = total;
        f(buf);
        buf[pos] = 0;
        return;
    }
    if buf.is_empty() {
        if total == 0 {
            f(buf);
        }
        return;
    }
    for v in (0..=total).rev() {
        buf[pos] = v;
        compositions(buf, pos + 1, total - v, f);
    }
    buf[pos] = 0;
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self))
    }
}

impl std::str::FromStr for WeylOp {
    type Err = Error;

    /// Parses with the dimension inferred from the largest variable index.
    fn from_str(s: &str) -> Result<Self> {
        text::parse_infer(s)
    }
}

impl WeylOp {
    /// Parses the text grammar (`"x1^2 d1 + 2 x1"`) in a fixed dimension.
    ///
    /// Factors may appear in any order; the result is normal-ordered.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        text::parse(n, s)
    }
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        self.try_add(&-rhs).expect("operator dimensions differ")
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        WeylOp {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        self.multiply(rhs).expect("operator dimensions differ")
    }
}
