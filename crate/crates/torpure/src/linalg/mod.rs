//! Exact arbitrary-precision integer and rational linear algebra: normal
//! forms, kernels and lattice arithmetic.

pub mod lattice;
pub mod matrix;
pub mod normal_forms;
pub mod solve;

pub use lattice::Lattice;
pub use matrix::{
    dot, gcd_vec, is_zero_vec, primitive_vector, same_ray, vec_from_i64, vec_sub, IntMatrix,
};
pub use normal_forms::{hnf, snf, HnfDecomposition, SmithDecomposition};
pub use solve::{gcd_maximal_minors, integer_kernel, solve_integer, solve_rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
}
