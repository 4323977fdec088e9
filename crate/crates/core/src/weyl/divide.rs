//! Division by the operators `theta_i = d_i x_i`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{Monomial, WeylOp};
use crate::scalar::{self, Scalar};

/// `d_i x_i`, normal-ordered as `x_i d_i + 1`.
pub fn theta(n: usize, i: usize) -> WeylOp {
    &(&WeylOp::x(n, i) * &WeylOp::d(n, i)) + &WeylOp::one(n)
}

/// Result of writing `P = sum_i Q_i d_i x_i + R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaDivision {
    pub quotients: Vec<WeylOp>,
    /// Every term `x^a d^b` of the remainder has `a_i b_i = 0` for all `i`.
    pub remainder: WeylOp,
}

impl ThetaDivision {
    /// Recomputes `sum_i Q_i d_i x_i + R`.
    pub fn reconstruct(&self) -> WeylOp {
        let n = self.remainder.dim();
        self.quotients
            .iter()
            .enumerate()
            .fold(self.remainder.clone(), |acc, (i, q)| {
                &acc + &(q * &theta(n, i))
            })
    }
}

/// Divides `P` by `d_1 x_1, ..., d_n x_n`.
///
/// A term `c x^a d^b` with `a_i, b_i >= 1` (smallest such `i`) is rewritten as
/// `c x^(a-e_i) d^(b-e_i) * theta_i - c b_i x^(a-e_i) d^(b-e_i)`, using
/// `theta_i d_i^k = d_i^k (theta_i - k)`. The leftover term has lower degree,
/// so the worklist drains.
pub fn divide_by_theta(p: &WeylOp) -> ThetaDivision {
    let n = p.dim();
    let mut quotients = vec![WeylOp::zero(n); n];
    let mut remainder = WeylOp::zero(n);
    let mut pending: BTreeMap<Monomial, Scalar> = p.terms.clone();

    while let Some((mono, c)) = pending.pop_first() {
        let Some(i) = (0..n).find(|&i| mono.x[i] > 0 && mono.d[i] > 0) else {
            remainder.add_term(mono, c);
            continue;
        };
        let b_i = mono.d[i];
        let mut lower = mono;
        lower.x.0[i] -= 1;
        lower.d.0[i] -= 1;
        quotients[i].add_term(lower.clone(), c.clone());
        let rest = -(c * scalar::int(b_i as i64));
        let slot = pending.entry(lower.clone()).or_insert_with(Scalar::zero);
        *slot += rest;
        if slot.is_zero() {
            pending.remove(&lower);
        }
    }
    ThetaDivision {
        quotients,
        remainder,
    }
}
