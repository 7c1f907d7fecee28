use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::dense::DenseMatrix;

/// CSR sparse matrix with strictly increasing column indices per row.
///
/// The single sparse format in the crate: adjacency matrices, the incidence
/// matrix and both normalized propagation matrices all live here. Stored
/// zeros are kept only where an operation must preserve a pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix<S: Scalar = f64> {
    rows: usize,
    cols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<S>,
}

impl<S: Scalar> SparseMatrix<S> {
    /// Matrix with no stored entries.
    pub fn empty(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_offsets: vec![0; rows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![S::one(); n],
        }
    }

    /// Build from (row, col, value) triplets. Duplicates are rejected.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, S)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, S)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Invalid(format!(
                    "entry ({r},{c}) out of bounds for {rows}x{cols}"
                )));
            }
            entries.push((r, c, v));
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::Invalid(format!(
                    "duplicate entry at ({},{})",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut row_offsets = vec![0usize; rows + 1];
        for &(r, _, _) in &entries {
            row_offsets[r + 1] += 1;
        }
        for i in 0..rows {
            row_offsets[i + 1] += row_offsets[i];
        }
        Ok(SparseMatrix {
            rows,
            cols,
            row_offsets,
            col_indices: entries.iter().map(|&(_, c, _)| c).collect(),
            values: entries.into_iter().map(|(_, _, v)| v).collect(),
        })
    }

    pub fn from_dense(d: &DenseMatrix<S>) -> Self {
        let mut triplets = Vec::new();
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let v = d.at(r, c);
                if v != S::zero() {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(d.rows(), d.cols(), triplets).expect("dense scan yields no duplicates")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// (column, value) pairs stored in row `r`.
    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, S)> + '_ {
        let lo = self.row_offsets[r];
        let hi = self.row_offsets[r + 1];
        self.col_indices[lo..hi]
            .iter()
            .zip(&self.values[lo..hi])
            .map(|(&c, &v)| (c, v))
    }

    /// All stored entries as `(row, col, value)` in CSR order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..self.rows).flat_map(move |r| self.row_entries(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [S] {
        &mut self.values
    }

    /// Stored value at (r, c), or zero.
    pub fn get(&self, r: usize, c: usize) -> S {
        let lo = self.row_offsets[r];
        let hi = self.row_offsets[r + 1];
        match self.col_indices[lo..hi].binary_search(&c) {
            Ok(pos) => self.values[lo + pos],
            Err(_) => S::zero(),
        }
    }

    /// Index into `values()` of the stored entry (r, c), if present.
    pub fn entry_index(&self, r: usize, c: usize) -> Option<usize> {
        let lo = self.row_offsets[r];
        let hi = self.row_offsets[r + 1];
        self.col_indices[lo..hi].binary_search(&c).ok().map(|p| lo + p)
    }

    pub fn same_pattern(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.row_offsets == other.row_offsets
            && self.col_indices == other.col_indices
    }

    pub fn to_dense(&self) -> DenseMatrix<S> {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            *d.at_mut(r, c) = v;
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let triplets: Vec<_> = self.entries().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.cols, self.rows, triplets).expect("transpose keeps entries unique")
    }

    pub fn is_symmetric(&self, tol: S) -> bool {
        if self.rows != self.cols {
            return false;
        }
        self.entries()
            .all(|(r, c, v)| (self.get(c, r) - v).abs() <= tol)
    }

    /// Sparse-dense product `self * rhs`.
    pub fn spmm(&self, rhs: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
        if self.cols != rhs.rows() {
            return Err(Error::shape(
                "spmm",
                format!("{}x{} * {}x{}", self.rows, self.cols, rhs.rows(), rhs.cols()),
            ));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols());
        for r in 0..self.rows {
            let lo = self.row_offsets[r];
            let hi = self.row_offsets[r + 1];
            for idx in lo..hi {
                let c = self.col_indices[idx];
                let v = self.values[idx];
                let src = rhs.row(c);
                let dst = out.row_mut(r);
                for (o, &x) in dst.iter_mut().zip(src) {
                    *o += v * x;
                }
            }
        }
        Ok(out)
    }

    /// `self^T * rhs` by scattering rows; avoids building the transpose.
    pub fn spmm_t(&self, rhs: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
        if self.rows != rhs.rows() {
            return Err(Error::shape(
                "spmm_t",
                format!(
                    "{}x{}^T * {}x{}",
                    self.rows,
                    self.cols,
                    rhs.rows(),
                    rhs.cols()
                ),
            ));
        }
        let mut out = DenseMatrix::zeros(self.cols, rhs.cols());
        for r in 0..self.rows {
            let src = rhs.row(r);
            for (c, v) in self.row_entries(r) {
                let dst = out.row_mut(c);
                for (o, &x) in dst.iter_mut().zip(src) {
                    *o += v * x;
                }
            }
        }
        Ok(out)
    }

    /// Replace stored values with `gate[k] * value[k]`, pattern untouched.
    ///
    /// `gate` is aligned with the CSR storage order of `self`.
    pub fn masked_hadamard(&self, gate: &[S]) -> Result<Self> {
        if gate.len() != self.nnz() {
            return Err(Error::shape(
                "masked_hadamard",
                format!("{} gate values for {} stored entries", gate.len(), self.nnz()),
            ));
        }
        let mut out = self.clone();
        for (o, &g) in out.values.iter_mut().zip(gate) {
            *o = *o * g;
        }
        Ok(out)
    }

    /// Symmetric normalization `D^{-1/2} (A + I) D^{-1/2}`.
    ///
    /// With `add_self_loops` the degree matrix is taken from `A + I`, so an
    /// isolated node normalizes to a lone diagonal 1. Without the flag,
    /// zero-degree rows stay zero.
    pub fn sym_normalize(&self, add_self_loops: bool) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Invalid(format!(
                "sym_normalize needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if !self.is_symmetric(S::zero()) {
            return Err(Error::Invalid("sym_normalize needs a symmetric matrix".into()));
        }
        if self.values.iter().any(|v| *v < S::zero()) {
            return Err(Error::Invalid("sym_normalize needs nonnegative entries".into()));
        }
        let n = self.rows;
        let mut with_loops: Vec<(usize, usize, S)> = Vec::with_capacity(self.nnz() + n);
        let mut degree = vec![S::zero(); n];
        let mut has_diag = vec![false; n];
        for (r, c, v) in self.entries() {
            let v = if add_self_loops && r == c {
                has_diag[r] = true;
                v + S::one()
            } else {
                v
            };
            with_loops.push((r, c, v));
            degree[r] += v;
        }
        if add_self_loops {
            for i in 0..n {
                if !has_diag[i] {
                    with_loops.push((i, i, S::one()));
                    degree[i] += S::one();
                }
            }
        }
        let inv_sqrt: Vec<S> = degree
            .iter()
            .map(|&d| {
                if d > S::zero() {
                    S::one() / d.sqrt()
                } else {
                    S::zero()
                }
            })
            .collect();
        let normalized = with_loops
            .into_iter()
            .map(|(r, c, v)| (r, c, inv_sqrt[r] * v * inv_sqrt[c]));
        Self::from_triplets(n, n, normalized)
    }
}
