//! CensNet: co-embedding of nodes and edges with graph neural networks.
//!
//! The library alternates graph convolutions between a graph and its line
//! graph so node embeddings are gated by edge features and vice versa. On top
//! of the two propagation rules it provides task heads and training loops for
//! semi-supervised node classification, multi-task graph classification,
//! graph regression, and unsupervised link prediction through a variational
//! autoencoder.
//!
//! Everything numeric is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the aliases below fix the default `f64` working precision.

pub mod error;
pub mod graph;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default-precision dense matrix.
pub type Dense64 = tensor::DenseMatrix<f64>;
/// Default-precision sparse matrix.
pub type Sparse64 = tensor::SparseMatrix<f64>;
/// Single-precision dense matrix.
pub type Dense32 = tensor::DenseMatrix<f32>;
/// Single-precision sparse matrix.
pub type Sparse32 = tensor::SparseMatrix<f32>;
