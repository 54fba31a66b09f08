//! Exact sparse linear algebra: echelon forms, ranks and canonical nullspaces.
//!
//! Rows are inserted one at a time and reduced against the pivots found so
//! far, always pivoting on the leftmost nonzero column. The final reduced row
//! echelon form is unique, so nullspace bases come out canonical: one vector
//! per free column, with a 1 in that column.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Sparse vector: strictly increasing column indices, no stored zeros.
pub type SparseVec<S> = Vec<(usize, S)>;

/// `a - factor * b`.
pub fn sub_scaled<S: Scalar>(a: &[(usize, S)], b: &[(usize, S)], factor: &S) -> SparseVec<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = -(factor.clone() * b[j].1.clone());
            if !v.is_negligible() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.clone() - factor.clone() * b[j].1.clone();
            if !v.is_negligible() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_from_dense<S: Scalar>(row: &[S]) -> SparseVec<S> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_negligible())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub fn dense_from_sparse<S: Scalar>(row: &[(usize, S)], cols: usize) -> Vec<S> {
    let mut out = vec![S::zero(); cols];
    for (i, v) in row {
        out[*i] = v.clone();
    }
    out
}

/// Incrementally built row echelon form with monic pivots.
#[derive(Debug, Clone)]
pub struct Echelon<S: Scalar> {
    cols: usize,
    pivots: BTreeMap<usize, SparseVec<S>>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` by the current pivots; returns the remainder.
    pub fn reduce(&self, mut row: SparseVec<S>) -> SparseVec<S> {
        let mut start = 0;
        loop {
            let Some(pos) = row.iter().position(|(c, _)| *c >= start) else {
                return row;
            };
            let (col, value) = row[pos].clone();
            match self.pivots.get(&col) {
                Some(p) => row = sub_scaled(&row, p, &value),
                None => start = col + 1,
            }
        }
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: SparseVec<S>) -> bool {
        let mut row = row;
        loop {
            let Some((col, lead)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&col) {
                Some(p) => row = sub_scaled(&row, p, &lead),
                None => {
                    let inv = S::one() / lead;
                    let row: SparseVec<S> = row.into_iter().map(|(c, v)| (c, v * inv.clone())).collect();
                    self.pivots.insert(col, row);
                    return true;
                }
            }
        }
    }

    /// Reduced row echelon form, rows keyed by pivot column.
    pub fn rref(&self) -> BTreeMap<usize, SparseVec<S>> {
        let mut done: BTreeMap<usize, SparseVec<S>> = BTreeMap::new();
        for (&col, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            // clear entries in later pivot columns, which are already reduced
            loop {
                let hit = r
                    .iter()
                    .skip(1)
                    .find(|(c, _)| done.contains_key(c))
                    .map(|(c, v)| (*c, v.clone()));
                match hit {
                    Some((c, v)) => r = sub_scaled(&r, &done[&c], &v),
                    None => break,
                }
            }
            done.insert(col, r);
        }
        done
    }

    /// Canonical nullspace basis, one vector per non-pivot column.
    pub fn nullspace(&self) -> Vec<SparseVec<S>> {
        let rref = self.rref();
        let mut by_free: BTreeMap<usize, SparseVec<S>> = BTreeMap::new();
        for free in (0..self.cols).filter(|c| !rref.contains_key(c)) {
            by_free.insert(free, vec![(free, S::one())]);
        }
        for (&pc, row) in &rref {
            for (c, v) in row.iter().skip(1) {
                if let Some(vec) = by_free.get_mut(c) {
                    vec.push((pc, -v.clone()));
                }
            }
        }
        by_free
            .into_values()
            .map(|mut v| {
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }
}

/// Canonical nullspace of a dense matrix given by rows.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], cols: usize) -> Vec<Vec<S>> {
    let mut ech = Echelon::new(cols);
    for r in rows {
        ech.insert(sparse_from_dense(r));
    }
    ech.nullspace()
        .into_iter()
        .map(|v| dense_from_sparse(&v, cols))
        .collect()
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], cols: usize) -> usize {
    let mut ech = Echelon::new(cols);
    for r in rows {
        ech.insert(sparse_from_dense(r));
    }
    ech.rank()
}

/// Unique solution of `A x = b` for square invertible `A`, if it exists.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    // nullspace of [A | -b] with last coordinate 1
    let rows: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(-bi.clone());
            r
        })
        .collect();
    if rank(a, n) != n {
        return None;
    }
    let ns = nullspace(&rows, n + 1);
    let v = ns.into_iter().find(|v| !v[n].is_negligible())?;
    let scale = v[n].clone();
    Some(v[..n].iter().map(|x| x.clone() / scale.clone()).collect())
}
