//! Exact rational linear algebra: scalars, sparse vectors and matrices, rank,
//! kernels, images and quotients.

mod echelon;
pub mod field;
mod rank;
mod rational;
mod sparse;

pub use echelon::{
    image_basis, kernel_basis, quotient_dim, quotient_projection, EchelonBuilder, SubspaceBasis,
};
pub use rank::{rank, rank_mod_p, DENSE_THRESHOLD};
pub use rational::{ParseRationalError, Rational};
pub use sparse::{SparseMatrix, SparseVec};
