//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::Scalar;

/// Sparse vector keyed by an ordered coordinate type.
pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// Null space of a dense `rows x cols` matrix, from its reduced row echelon form.
///
/// One basis vector per free column, in increasing column order; the free
/// entry is 1 and pivot entries are read off the RREF.
pub fn nullspace(mut rows: Vec<Vec<Scalar>>, cols: usize) -> Vec<Vec<Scalar>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Scalar::one() / &rows[r][c];
        for v in rows[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let is_pivot: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Incrementally built row echelon basis of a subspace of sparse vectors.
///
/// Each stored row is monic and indexed by its leading key (the first key in
/// the map order). Leading keys are distinct, so any nonzero vector of the
/// span has a stored leading key and leading-term reduction decides membership.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` until its leading key is not a pivot (or it vanishes).
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        while let Some((lead, c)) = v.first_key_value() {
            let Some(row) = self.rows.get(lead) else {
                break;
            };
            let c = c.clone();
            for (k, rv) in row {
                let slot = v.entry(k.clone()).or_insert_with(Scalar::zero);
                *slot -= &c * rv;
                if slot.is_zero() {
                    v.remove(k);
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut v = self.reduce(v);
        let Some((lead, c)) = v.first_key_value() else {
            return false;
        };
        let lead = lead.clone();
        let inv = Scalar::one() / c;
        for val in v.values_mut() {
            *val *= &inv;
        }
        self.rows.insert(lead, v);
        true
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }
}
