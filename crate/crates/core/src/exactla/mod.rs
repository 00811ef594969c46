//! Exact linear algebra over Gaussian rationals.

pub mod chart;
pub mod matrix;
pub mod subspace;

pub use chart::{CoordinateChart, ValueKind};
pub use matrix::{
    direct_sum_report, is_positive_definite, kernel_basis, leading_minors, rank, solve,
    DirectSumReport, Echelon, ExactMatrix, RowSpace, SparseVec,
};
pub use subspace::{gram, is_direct_sum, orthogonal_complement, SubspaceBasis};
