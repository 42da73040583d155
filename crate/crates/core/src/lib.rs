//! Low-rank compression of kernel matrices by skeletonized interpolation.
//!
//! A kernel block `K[i, j] = k(x_i, y_j)` between two well-separated point
//! clusters is factored as `K[X, Ŷ] K[X̂, Ŷ]⁻¹ K[X̂, Y]`, where the skeletons
//! `X̂`, `Ŷ` are picked by column-pivoted QR from small candidate sets. Four
//! candidate generators are provided: tensor Chebyshev grids on a PCA box,
//! Fibonacci points on a bounding sphere, maximally-dispersed vertices and
//! random vertices.
//!
//! Module map:
//!
//! * [`geometry`]: point clouds, cluster statistics, bounding volumes,
//!   partitioning, synthetic generators and the point-file format.
//! * [`kernels`]: radial kernels and dense block assembly.
//! * [`linalg`]: dense matrices, truncated pivoted QR, LU, Jacobi SVD.
//! * [`initsel`]: the candidate-set generators and their weights.
//! * [`si`]: skeleton selection, the stable factorization, the adaptive
//!   tolerance loop and SVD recompression.
//! * [`bench`]: the pair sweep harness and its CSV output.

pub mod bench;
pub mod error;
pub mod geometry;
pub mod initsel;
pub mod kernels;
pub mod linalg;
pub mod si;

pub use error::{Error, Result};
