//! Hochschild chain complexes with bimodule coefficients, their homology and
//! cohomology, and explicit contracting homotopies.

mod cochain;
mod complex;
mod homotopy;

use thiserror::Error;

pub use cochain::{direct_cochain_complex, CochainComplex};
pub use complex::{
    chain_index, decode_chain, hochschild_complex, homology, ChainComplex, HomologyReport,
};
pub use homotopy::{
    bar_homotopy_check, hunital_homotopy_check, HomotopyCertificate, Violation,
    DEFAULT_STREAM_CAP, MAX_STREAM_DEGREE,
};

/// Default highest degree of an assembled complex.
pub const DEFAULT_MAX_DEGREE: usize = 4;
/// Default bound on the dimension of any assembled chain space.
pub const DEFAULT_CHAIN_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HochschildError {
    #[error("chain space in degree {degree} has dimension {dim}, above the cap {cap}")]
    SizeGuard { degree: usize, dim: u128, cap: usize },
    #[error("coefficient bimodule is not over the given algebra on both sides")]
    AlgebraMismatch,
    #[error("d_{degree} ∘ d_{} is nonzero on basis chain {column}", .degree + 1)]
    NotAComplex { degree: usize, column: usize },
    #[error("degree {requested} requested, streamed checks support up to {max}")]
    DegreeTooHigh { requested: usize, max: usize },
    #[error("splitting is invalid: {0}")]
    BadSplitting(String),
}

/// `dim X · D^n` without overflow, checked against `cap`.
pub(crate) fn guarded_dim(x_dim: usize, d: usize, n: usize, cap: usize) -> Result<usize, HochschildError> {
    let mut dim = x_dim as u128;
    for _ in 0..n {
        dim = dim.saturating_mul(d as u128);
    }
    if dim > cap as u128 {
        return Err(HochschildError::SizeGuard { degree: n, dim, cap });
    }
    Ok(dim as usize)
}
