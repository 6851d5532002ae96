//! Finite groups and finite-dimensional algebras given by structure constants.

mod finite;
mod group;

pub use finite::{
    direct_sum, group_algebra, matrix_algebra, same_algebra, unitize, zero_algebra,
    AlgebraElement, AlgebraError, AssociativityCheck, FiniteAlgebra,
};
pub use group::{GroupError, GroupTable};
