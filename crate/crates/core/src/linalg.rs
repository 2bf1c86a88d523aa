//! Sparse exact linear algebra over the rationals.
//!
//! Matrices are stored column-major; a column is a sorted sparse vector.
//! Everything is computed by exact Gaussian elimination — no floating point,
//! no tolerances — so ranks and kernels are canonical values independent of
//! pivot choices and scheduling.

use crate::scalar::Scalar;
use num_traits::Zero;

/// Sorted sparse vector: strictly increasing indices, no explicit zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `a + c*b` for sorted sparse vectors.
pub fn add_scaled(a: &SparseVec, b: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ia, va)), Some((ib, vb))) => {
                if ia < ib {
                    out.push((*ia, va.clone()));
                    i += 1;
                } else if ib < ia {
                    out.push((*ib, vb * c));
                    j += 1;
                } else {
                    let v = va + vb * c;
                    if !v.is_zero() {
                        out.push((*ia, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ia, va)), None) => {
                out.push((*ia, va.clone()));
                i += 1;
            }
            (None, Some((ib, vb))) => {
                out.push((*ib, vb * c));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub fn scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Builds a sparse vector from unsorted, possibly repeating entries.
pub fn collect_sparse(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut entries: Vec<(usize, Scalar)> = entries.into_iter().collect();
    entries.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Row-space free echelon basis built incrementally.
///
/// Each stored vector has a designated pivot coordinate, normalized to 1 and
/// eliminated from all other stored vectors (reduced echelon form, up to
/// ordering). Pivot coordinates are chosen by a caller-supplied preference,
/// which is what lets the fat-diagonal quotient force its pivots away from
/// section coordinates.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    /// `(pivot, vector)`, vector normalized so `vector[pivot] == 1`.
    rows: Vec<(usize, SparseVec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _)| *p)
    }

    /// Eliminates all pivot coordinates of `v` against the stored basis.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        for (pivot, row) in &self.rows {
            if let Ok(k) = v.binary_search_by_key(pivot, |(i, _)| *i) {
                let c = -v[k].1.clone();
                v = add_scaled(&v, row, &c);
            }
        }
        v
    }

    /// Reduces `v` and, if nonzero, stores it with the smallest-index pivot.
    /// Returns whether the vector enlarged the span.
    pub fn absorb(&mut self, v: SparseVec) -> bool {
        self.absorb_with_pivot_pref(v, |i| i).is_some()
    }

    /// Reduces `v`; if nonzero, pivots on the nonzero coordinate minimizing
    /// `pref` and stores the result. Returns the chosen pivot.
    pub fn absorb_with_pivot_pref<K: Ord>(
        &mut self,
        v: SparseVec,
        pref: impl Fn(usize) -> K,
    ) -> Option<usize> {
        let v = self.reduce(v);
        if v.is_empty() {
            return None;
        }
        let pivot = v.iter().map(|(i, _)| *i).min_by_key(|i| pref(*i)).unwrap();
        let k = v.binary_search_by_key(&pivot, |(i, _)| *i).unwrap();
        let inv = v[k].1.clone().recip();
        let v = scale(&v, &inv);
        // Keep reduced form: eliminate the new pivot from stored rows.
        for (_, row) in self.rows.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&pivot, |(i, _)| *i) {
                let c = -row[k].1.clone();
                *row = add_scaled(row, &v, &c);
            }
        }
        self.rows.push((pivot, v));
        Some(pivot)
    }
}

/// Column-major sparse matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for j in 0..n {
            m.cols[j] = vec![(j, Scalar::from_integer(1.into()))];
        }
        m
    }

    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.iter().all(|(i, v)| *i < nrows && !v.is_zero())));
        SparseMatrix { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &SparseVec> {
        self.cols.iter()
    }

    pub fn set_column(&mut self, j: usize, col: SparseVec) {
        self.cols[j] = col;
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// Matrix-vector product (`v` in column coordinates).
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, c) in v {
            acc = add_scaled(&acc, &self.cols[*j], c);
        }
        acc
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows(), "composition shape mismatch");
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for c in &self.cols {
            ech.absorb(c.clone());
        }
        ech.rank()
    }

    /// Basis of `{ x : self · x = 0 }`, as sparse vectors in column space.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        // Augment each column with an indicator coordinate below the matrix
        // block; columns reducing to zero in the top block expose a kernel
        // combination in the bottom block.
        let top = self.nrows;
        let mut ech = Echelon::new();
        let mut kernel = Vec::new();
        for (j, col) in self.cols.iter().enumerate() {
            let mut v = col.clone();
            v.push((top + j, Scalar::from_integer(1.into())));
            let r = ech.reduce(v);
            if r.first().map_or(true, |(i, _)| *i >= top) {
                kernel.push(r.into_iter().map(|(i, c)| (i - top, c)).collect());
            } else {
                // Pivot preference: always pivot inside the top block.
                ech.absorb_with_pivot_pref(r, |i| (usize::from(i >= top), i));
            }
        }
        kernel
    }

    /// First column index where the two matrices differ.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<usize> {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols(), other.ncols());
        (0..self.ncols()).find(|&j| self.cols[j] != other.cols[j])
    }
}

/// One-time factorization for solving `A·y = b` repeatedly.
pub struct Solver {
    ech: Echelon,
    nrows: usize,
    ncols: usize,
}

impl Solver {
    pub fn new(a: &SparseMatrix) -> Self {
        let top = a.nrows();
        let mut ech = Echelon::new();
        for (j, col) in a.columns().enumerate() {
            let mut v = col.clone();
            v.push((top + j, Scalar::from_integer(1.into())));
            ech.absorb_with_pivot_pref(v, |i| (usize::from(i >= top), i));
        }
        Solver { ech, nrows: top, ncols: a.ncols() }
    }

    /// Some solution `y` of `A·y = b`, or `None` if `b` is outside the column
    /// space.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let r = self.ech.reduce(b.clone());
        if r.iter().any(|(i, _)| *i < self.nrows) {
            return None;
        }
        debug_assert!(r.iter().all(|(i, _)| *i - self.nrows < self.ncols));
        Some(r.into_iter().map(|(i, c)| (i - self.nrows, -c)).collect())
    }
}
