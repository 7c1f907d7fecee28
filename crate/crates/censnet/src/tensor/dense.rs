use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
///
/// Holds node/edge feature blocks, hidden layers and trainable weights.
/// Zero-sized dimensions are legal; an edgeless graph carries a `0 x d`
/// feature block through every kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix<S: Scalar = f64> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(
                "from_vec",
                format!("{} values for a {rows}x{cols} matrix", data.len()),
            ));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Build from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::shape(
                    "from_rows",
                    format!("row {i} has {} entries, expected {c}", row.len()),
                ));
            }
            data.extend_from_slice(row);
        }
        Ok(DenseMatrix { rows: r, cols: c, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    /// n x 1 column vector.
    pub fn column(values: Vec<S>) -> Self {
        let rows = values.len();
        DenseMatrix {
            rows,
            cols: 1,
            data: values,
        }
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
    pub fn at(&self, r: usize, c: usize) -> S {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut S {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [S] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self * rhs`, shape-checked.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape(
                "matmul",
                format!("{}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        matmul_into(self, rhs, &mut out);
        Ok(out)
    }

    /// `self^T * rhs` without materializing the transpose.
    pub fn matmul_at_b(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::shape(
                "matmul_at_b",
                format!("{}x{}^T * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let mut out = Self::zeros(self.cols, rhs.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let b_row = rhs.row(i);
            for (k, &a) in a_row.iter().enumerate() {
                if a != S::zero() {
                    let out_row = out.row_mut(k);
                    for (o, &b) in out_row.iter_mut().zip(b_row) {
                        *o += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * rhs^T` without materializing the transpose.
    pub fn matmul_a_bt(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::shape(
                "matmul_a_bt",
                format!("{}x{} * {}x{}^T", self.rows, self.cols, rhs.rows, rhs.cols),
            ));
        }
        let mut out = Self::zeros(self.rows, rhs.rows);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = out.row_mut(i);
            for (j, o) in out_row.iter_mut().enumerate() {
                let b_row = rhs.row(j);
                let mut acc = S::zero();
                for (&a, &b) in a_row.iter().zip(b_row) {
                    acc += a * b;
                }
                *o = acc;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::shape(
                "add",
                format!("{:?} + {:?}", self.shape(), rhs.shape()),
            ));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&rhs.data) {
            *o += b;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::shape(
                "sub",
                format!("{:?} - {:?}", self.shape(), rhs.shape()),
            ));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&rhs.data) {
            *o -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: S) -> Self {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o = *o * factor;
        }
        out
    }

    /// Elementwise product, shape-checked.
    pub fn hadamard(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::shape(
                "hadamard",
                format!("{:?} . {:?}", self.shape(), rhs.shape()),
            ));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&rhs.data) {
            *o = *o * b;
        }
        Ok(out)
    }

    /// Sum of each row, returned as an `n x 1` column.
    pub fn row_sum(&self) -> Self {
        let mut out = Self::zeros(self.rows, 1);
        for r in 0..self.rows {
            out.data[r] = self.row(r).iter().copied().sum();
        }
        out
    }

    /// Copy of the selected columns, in the given order.
    pub fn col_select(&self, cols: &[usize]) -> Result<Self> {
        for &c in cols {
            if c >= self.cols {
                return Err(Error::shape(
                    "col_select",
                    format!("column {c} out of range for {} columns", self.cols),
                ));
            }
        }
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            let src = self.row(r);
            for (k, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + k] = src[c];
            }
        }
        Ok(out)
    }

    /// Stack `self` on top of `rhs`.
    pub fn concat_rows(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols && self.rows != 0 && rhs.rows != 0 {
            return Err(Error::shape(
                "concat_rows",
                format!("{} vs {} columns", self.cols, rhs.cols),
            ));
        }
        let cols = if self.rows == 0 { rhs.cols } else { self.cols };
        let mut data = Vec::with_capacity((self.rows + rhs.rows) * cols);
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&rhs.data);
        Ok(DenseMatrix {
            rows: self.rows + rhs.rows,
            cols,
            data,
        })
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Sum of all entries.
    pub fn sum(&self) -> S {
        self.data.iter().copied().sum()
    }

    /// Largest absolute difference against another matrix of the same shape.
    pub fn max_abs_diff(&self, rhs: &Self) -> S {
        debug_assert_eq!(self.shape(), rhs.shape());
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(S::zero(), S::max)
    }
}

/// Number of worker threads for the dense kernels: `CENSNET_THREADS`, default 1.
pub fn kernel_threads() -> usize {
    use std::sync::OnceLock;
    static THREADS: OnceLock<usize> = OnceLock::new();
    *THREADS.get_or_init(|| {
        std::env::var("CENSNET_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .unwrap_or(1)
    })
}

/// ikj product kernel with zero-skip on the left operand.
///
/// Rows of the output are independent, so the row partition used for
/// multi-threading cannot change the result.
fn matmul_into<S: Scalar>(a: &DenseMatrix<S>, b: &DenseMatrix<S>, out: &mut DenseMatrix<S>) {
    let threads = kernel_threads().min(a.rows.max(1));
    if threads <= 1 || a.rows < 64 {
        matmul_rows(a, b, out.data_mut(), 0, a.rows);
        return;
    }
    let chunk = a.rows.div_ceil(threads);
    let cols = out.cols;
    let data = out.data_mut();
    std::thread::scope(|scope| {
        for (t, slab) in data.chunks_mut(chunk * cols).enumerate() {
            let lo = t * chunk;
            let hi = (lo + slab.len() / cols).min(a.rows);
            scope.spawn(move || matmul_rows(a, b, slab, lo, hi));
        }
    });
}

fn matmul_rows<S: Scalar>(
    a: &DenseMatrix<S>,
    b: &DenseMatrix<S>,
    out: &mut [S],
    lo: usize,
    hi: usize,
) {
    let n = b.cols;
    for i in lo..hi {
        let out_row = &mut out[(i - lo) * n..(i - lo + 1) * n];
        for (k, &av) in a.row(i).iter().enumerate() {
            if av != S::zero() {
                let b_row = b.row(k);
                for (o, &bv) in out_row.iter_mut().zip(b_row) {
                    *o += av * bv;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = DenseMatrix<f64>;

    #[test]
    fn transpose_is_involution() {
        let m = M::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn matmul_identity() {
        let m = M::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let i = M::identity(2);
        assert_eq!(m.matmul(&i).unwrap(), m);
    }

    #[test]
    fn row_sum_hand_case() {
        let m = M::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let s = m.row_sum();
        assert_eq!(s.data(), &[3.0, 7.0]);
    }

    #[test]
    fn matmul_shape_mismatch_is_error() {
        let a = M::zeros(2, 3);
        let b = M::zeros(2, 3);
        assert!(a.matmul(&b).is_err());
    }

    #[test]
    fn transposed_products_match_explicit_transpose() {
        let a = M::from_rows(&[vec![1.0, -2.0, 0.5], vec![0.0, 3.0, 1.0]]).unwrap();
        let b = M::from_rows(&[vec![2.0, 1.0], vec![-1.0, 0.5], vec![4.0, -3.0]]).unwrap();
        let x = M::column(vec![1.0, 2.0]);
        assert_eq!(
            a.matmul_at_b(&x).unwrap(),
            a.transpose().matmul(&x).unwrap()
        );
        assert_eq!(
            a.matmul_a_bt(&b.transpose()).unwrap(),
            a.matmul(&b).unwrap()
        );
    }

    #[test]
    fn col_select_and_concat() {
        let m = M::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let sel = m.col_select(&[2, 0]).unwrap();
        assert_eq!(sel.data(), &[3.0, 1.0, 6.0, 4.0]);
        let stacked = m.concat_rows(&m).unwrap();
        assert_eq!(stacked.rows(), 4);
        assert_eq!(stacked.row(2), m.row(0));
    }
}
