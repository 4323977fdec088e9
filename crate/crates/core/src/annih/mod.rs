//! Annihilators of the principal Laurent coefficients.
//!
//! For `f = x1 ... xn` the coefficient `u_(-n+k)`, `0 <= k <= n-1`, is
//! annihilated by the products `x_(j_1) ... x_(j_(k+1))` over `(k+1)`-subsets
//! and by the Euler differences `x1 d1 - xi di`. Completeness of this set is
//! checked on the slice of operators of bounded degree: the annihilating
//! operators are computed as a rational null space, and each basis element
//! must lie in the span of `M g` over monomials `M` and generators `g`.

pub mod linalg;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{apply, Dist};
use crate::laurent::expand_product;
use crate::weyl::{monomial_product, monomials_up_to, Monomial, WeylOp};
use crate::{Error, Result, Scalar};

use linalg::{nullspace, Echelon, SparseVec};

/// Slack tried after the requested one fails.
pub const MAX_SLACK: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    SubsetProduct,
    EulerDifference,
    TransversalDerivative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledOp {
    pub op: WeylOp,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub n: usize,
    pub generators: Vec<LabeledOp>,
}

impl GeneratorSet {
    pub fn ops(&self) -> impl Iterator<Item = &WeylOp> {
        self.generators.iter().map(|g| &g.op)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Indices of generators that do not annihilate `u`.
    pub fn failures(&self, u: &Dist) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for (i, g) in self.ops().enumerate() {
            if !apply(g, u)?.is_zero() {
                bad.push(i);
            }
        }
        Ok(bad)
    }

    pub fn annihilates(&self, u: &Dist) -> Result<bool> {
        Ok(self.failures(u)?.is_empty())
    }
}

fn subsets(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if pool.len() < size {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in pool.iter().enumerate() {
        for mut rest in subsets(&pool[i + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product_of_coordinates(n: usize, idx: &[usize]) -> WeylOp {
    let mut x = vec![0; n];
    for &i in idx {
        x[i] += 1;
    }
    WeylOp::monomial(Monomial::new(x, vec![0; n]), Scalar::one())
}

fn euler(n: usize, i: usize) -> WeylOp {
    &WeylOp::x(n, i) * &WeylOp::d(n, i)
}

/// Generators for `f = x1 ... xm` inside `n >= m` variables, `0 <= k <= m-1`.
///
/// Emits the `(k+1)`-subset products of `x1..xm`, the differences
/// `x1 d1 - xi di` for `2 <= i <= m`, and `dj` for `m < j <= n`.
pub fn generators_nc(n: usize, m: usize, k: usize) -> Result<GeneratorSet> {
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    if k >= m {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= k <= m - 1, got k = {k}, m = {m}"
        )));
    }
    let pool: Vec<usize> = (0..m).collect();
    let mut generators: Vec<LabeledOp> = subsets(&pool, k + 1)
        .into_iter()
        .map(|s| LabeledOp {
            op: product_of_coordinates(n, &s),
            label: Label::SubsetProduct,
        })
        .collect();
    generators.extend((1..m).map(|i| LabeledOp {
        op: &euler(n, 0) - &euler(n, i),
        label: Label::EulerDifference,
    }));
    generators.extend((m..n).map(|j| LabeledOp {
        op: WeylOp::d(n, j),
        label: Label::TransversalDerivative,
    }));
    Ok(GeneratorSet { n, generators })
}

/// Generators claimed for `Ann u_(-n+k)`.
pub fn generators(n: usize, k: usize) -> Result<GeneratorSet> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    generators_nc(n, n, k)
}

/// `u_(-n+k)` for `f = x1 ... xn`.
pub fn target(n: usize, k: usize) -> Result<Dist> {
    if n == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= k <= n - 1, got k = {k}, n = {n}"
        )));
    }
    let exp = expand_product(n, 0)?;
    Ok(exp
        .coeff(k as i64 - n as i64)
        .expect("principal part")
        .clone())
}

/// `u_(-m+k)` for `f = x1 ... xm`, extended as constant in `x_(m+1) .. x_n`.
pub fn target_nc(n: usize, m: usize, k: usize) -> Result<Dist> {
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    Ok(target(m, k)?.tensor(&Dist::one(n - m)))
}

/// Exact check that every generator of [`generators`] kills `u_(-n+k)`.
pub fn verify(n: usize, k: usize) -> Result<bool> {
    generators(n, k)?.annihilates(&target(n, k)?)
}

pub fn verify_nc(n: usize, m: usize, k: usize) -> Result<bool> {
    generators_nc(n, m, k)?.annihilates(&target_nc(n, m, k)?)
}

/// Basis of `{P : deg P <= degree, P u = 0}` over the rationals.
///
/// Columns are the monomials of [`monomials_up_to`]; basis vectors come from
/// the reduced row echelon form, so the output is reproducible.
pub fn annihilator_space(u: &Dist, degree: u32) -> Result<Vec<WeylOp>> {
    let n = u.dim();
    let monos = monomials_up_to(n, degree);
    let images: Vec<Dist> = monos
        .par_iter()
        .map(|m| apply(&WeylOp::monomial(m.clone(), Scalar::one()), u))
        .collect::<Result<_>>()?;
    let mut row_index = BTreeMap::new();
    for img in &images {
        for (atoms, _) in img.terms() {
            let next = row_index.len();
            row_index.entry(atoms.clone()).or_insert(next);
        }
    }
    let mut matrix = vec![vec![Scalar::zero(); monos.len()]; row_index.len()];
    for (col, img) in images.iter().enumerate() {
        for (atoms, c) in img.terms() {
            matrix[row_index[atoms]][col] = c.clone();
        }
    }
    let basis = nullspace(matrix, monos.len());
    basis
        .into_iter()
        .map(|v| {
            WeylOp::from_terms(
                n,
                monos.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero()),
            )
        })
        .collect()
}

fn as_vector(op: &WeylOp) -> SparseVec<Monomial> {
    op.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Span of `M g` over generators `g` and monomials `M` with `deg(M g) <= bound`.
#[derive(Clone, Debug)]
pub struct IdealSlice {
    pub n: usize,
    pub bound: u32,
    echelon: Echelon<Monomial>,
}

impl IdealSlice {
    pub fn new(gens: &GeneratorSet, bound: u32) -> Self {
        let n = gens.n;
        let mut products: Vec<(u32, SparseVec<Monomial>)> = gens
            .ops()
            .filter_map(|g| g.degree().map(|e| (g, e)))
            .filter(|&(_, e)| e <= bound)
            .flat_map(|(g, e)| {
                monomials_up_to(n, bound - e)
                    .into_iter()
                    .map(move |m| (g, m))
            })
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(g, m)| {
                let mut v: SparseVec<Monomial> = BTreeMap::new();
                for (gm, gc) in g.terms() {
                    for (mono, k) in monomial_product(&m, gm) {
                        let slot = v.entry(mono).or_insert_with(Scalar::zero);
                        *slot += gc * Scalar::from_integer(k);
                    }
                }
                v.retain(|_, c| !c.is_zero());
                let deg = v.keys().next().map(Monomial::degree).unwrap_or(0);
                (deg, v)
            })
            .collect();
        // sparse low-degree rows first keeps fill-in small
        products.sort_by_key(|(deg, v)| (*deg, v.len()));
        let mut echelon = Echelon::new();
        for (_, v) in products {
            echelon.insert(v);
        }
        IdealSlice { n, bound, echelon }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, p: &WeylOp) -> bool {
        p.degree().is_none_or(|d| d <= self.bound) && self.echelon.contains(as_vector(p))
    }
}

/// True iff `P` is a combination of `M g` with `deg(M g) <= deg P + slack`.
///
/// `false` only means no certificate was found at this slack.
pub fn ideal_membership(p: &WeylOp, gens: &GeneratorSet, slack: u32) -> Result<bool> {
    if p.dim() != gens.n {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: gens.n,
        });
    }
    let Some(deg) = p.degree() else {
        return Ok(true);
    };
    Ok(IdealSlice::new(gens, deg + slack).contains(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Member,
    /// `P` does not annihilate the target, so it cannot be in the ideal.
    Refuted,
    /// Annihilates, but no certificate within the slack.
    Unresolved,
}

/// Membership test that separates refutation from an inconclusive search.
pub fn classify_membership(
    p: &WeylOp,
    gens: &GeneratorSet,
    u: &Dist,
    slack: u32,
) -> Result<Membership> {
    if !apply(p, u)?.is_zero() {
        return Ok(Membership::Refuted);
    }
    Ok(if ideal_membership(p, gens, slack)? {
        Membership::Member
    } else {
        Membership::Unresolved
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SlackStep {
    pub slack: u32,
    pub span_rank: usize,
    pub resolved: usize,
    pub remaining: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletenessReport {
    pub n: usize,
    pub k: usize,
    pub degree_bound: u32,
    pub slack_used: u32,
    pub slack_trace: Vec<SlackStep>,
    pub annihilator_dim: usize,
    pub members: usize,
    pub unresolved: Vec<WeylOp>,
    pub passed: bool,
}

/// Checks that every operator of degree `<= degree` killing `u_(-n+k)` lies in
/// the ideal of [`generators`], trying `slack` and then [`MAX_SLACK`].
pub fn completeness_report(
    n: usize,
    k: usize,
    degree: u32,
    slack: u32,
) -> Result<CompletenessReport> {
    if degree == 0 {
        return Err(Error::InvalidArgument(
            "degree bound must be at least 1".into(),
        ));
    }
    let u = target(n, k)?;
    let gens = generators(n, k)?;
    let basis = annihilator_space(&u, degree)?;
    let mut pending = basis.clone();
    let mut trace = Vec::new();
    let mut slack_used = slack;
    let mut schedule = vec![slack];
    if slack < MAX_SLACK {
        schedule.push(MAX_SLACK);
    }
    for s in schedule {
        slack_used = s;
        let slice = IdealSlice::new(&gens, degree + s);
        let before = pending.len();
        pending.retain(|p| !slice.contains(p));
        trace.push(SlackStep {
            slack: s,
            span_rank: slice.rank(),
            resolved: before - pending.len(),
            remaining: pending.len(),
        });
        if pending.is_empty() {
            break;
        }
    }
    Ok(CompletenessReport {
        n,
        k,
        degree_bound: degree,
        slack_used,
        slack_trace: trace,
        annihilator_dim: basis.len(),
        members: basis.len() - pending.len(),
        passed: pending.is_empty(),
        unresolved: pending,
    })
}
