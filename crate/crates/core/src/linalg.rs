//! Exact sparse row reduction over ℚ.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::Rational;

/// Sparse vector: column index → nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Rational>;

/// Incrementally built row-echelon basis. Each stored row has leading
/// coefficient 1 at its pivot column, and no two rows share a pivot.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` by the stored rows until its leading column is not a pivot.
    /// Returns the (possibly empty) remainder.
    pub fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        loop {
            let Some((&lead, coef)) = v.iter().next() else {
                return v;
            };
            let Some(row) = self.rows.get(&lead) else {
                return v;
            };
            let coef = coef.clone();
            axpy(&mut v, &-coef, row);
        }
    }

    /// Adds `v` to the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce_leading(v);
        let Some((&lead, coef)) = v.iter().next() else {
            return false;
        };
        if !coef.is_one() {
            let inv = Rational::one() / coef.clone();
            for c in v.values_mut() {
                *c *= &inv;
            }
        }
        self.rows.insert(lead, v);
        true
    }

    /// Fully reduces `v` modulo the span: every pivot column is cleared.
    pub fn normal_form(&self, v: SparseVec) -> SparseVec {
        let mut v = v;
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(&c, x)| (c, x.clone()));
            let Some((col, coef)) = next else {
                return v;
            };
            axpy(&mut v, &-coef, &self.rows[&col]);
            cursor = col + 1;
        }
    }
}

/// `v += s · w`
pub fn axpy(v: &mut SparseVec, s: &Rational, w: &SparseVec) {
    for (&c, x) in w {
        let delta = s * x;
        let entry = v.entry(c).or_insert_with(Rational::zero);
        *entry += delta;
        if entry.is_zero() {
            v.remove(&c);
        }
    }
}

/// Exact rank of a family of sparse rows.
pub fn rank<I: IntoIterator<Item = SparseVec>>(rows: I) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}
