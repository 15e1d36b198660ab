//! Sparse row echelon forms over a field tower.
//!
//! Rows are sparse maps from column index to scalar. A row's pivot is its
//! smallest column, normalized to one, so callers choose the column order
//! to decide which monomials become leading terms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::numfield::{Tower, TowerElement};

pub type SparseVec = BTreeMap<usize, TowerElement>;

/// Columns at or above this index carry bookkeeping tags, never pivots of
/// real data.
pub const TAG_BASE: usize = usize::MAX / 2;

pub fn axpy(v: &mut SparseVec, c: &TowerElement, row: &SparseVec) {
    for (k, x) in row {
        let p = c * x;
        match v.get_mut(k) {
            Some(y) => {
                let s = &*y - &p;
                if s.is_zero() {
                    v.remove(k);
                } else {
                    *y = s;
                }
            }
            None => {
                v.insert(*k, -p);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Echelon {
    tower: Tower,
    rows: Vec<SparseVec>,
    by_pivot: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(tower: &Tower) -> Self {
        Echelon { tower: tower.clone(), rows: Vec::new(), by_pivot: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_pivot.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.by_pivot.contains_key(&col)
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Eliminates every pivot column below `limit` from `v`.
    pub fn reduce_below(&self, mut v: SparseVec, limit: usize) -> SparseVec {
        let mut pos = 0usize;
        loop {
            let next = v.range(pos..limit).map(|(k, _)| *k).find(|k| self.by_pivot.contains_key(k));
            let Some(col) = next else { break };
            let c = v[&col].clone();
            axpy(&mut v, &c, &self.rows[self.by_pivot[&col]]);
            pos = col + 1;
        }
        v
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_below(v, usize::MAX)
    }

    /// Adds `v` to the row space. Returns the pivot of the new row, or
    /// `None` if `v` was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let v = self.reduce(v);
        self.push_reduced(v)
    }

    /// Like [`insert`](Self::insert) but only eliminates real columns, so
    /// tag columns accumulate the combination used.
    pub fn insert_tagged(&mut self, v: SparseVec) -> Option<usize> {
        let v = self.reduce_below(v, TAG_BASE);
        self.push_reduced(v)
    }

    fn push_reduced(&mut self, mut v: SparseVec) -> Option<usize> {
        let (&pivot, lead) = v.iter().next()?;
        let inv = lead.inv().expect("nonzero pivot");
        for x in v.values_mut() {
            *x = &*x * &inv;
        }
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(v);
        Some(pivot)
    }

    /// Back-substitutes so every pivot column is zero outside its own row.
    pub fn into_reduced(mut self) -> Self {
        let pivots: Vec<usize> = self.by_pivot.keys().copied().collect();
        for &p in pivots.iter().rev() {
            let r = self.by_pivot[&p];
            let row = self.rows[r].clone();
            for (i, other) in self.rows.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                if let Some(c) = other.get(&p).cloned() {
                    axpy(other, &c, &row);
                }
            }
        }
        self
    }

    /// Rows sorted by pivot.
    pub fn sorted_rows(&self) -> Vec<SparseVec> {
        self.by_pivot.values().map(|&i| self.rows[i].clone()).collect()
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    /// Index into [`rows`](Self::rows) of the row with the given pivot.
    pub fn pivot_row(&self, col: usize) -> Option<&usize> {
        self.by_pivot.get(&col)
    }
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn invert(m: &[Vec<TowerElement>], tower: &Tower) -> Option<Vec<Vec<TowerElement>>> {
    let n = m.len();
    let mut a: Vec<Vec<TowerElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|k| if k == i { TowerElement::one(tower) } else { TowerElement::zero(tower) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].inv().ok()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
