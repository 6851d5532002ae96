//! The Hochschild cochain complex `C^n(A, X*) = Hom(A^{⊗n}, X*)` built
//! directly from the coboundary formula
//!
//! `(δf)(a_1, ..., a_{n+1}) = a_1·f(a_2, ...) + Σ_{k=1}^{n} (-1)^k f(..., a_k a_{k+1}, ...)
//!  + (-1)^{n+1} f(a_1, ..., a_n)·a_{n+1}`
//!
//! with the dual actions `(a·φ)(x) = φ(x·a)` and `(φ·a)(x) = φ(a·x)`.
//! A cochain is identified with its values on the basis chains
//! `(x_j; a_1, ..., a_n)`, indexed as in the chain complex.

use rayon::prelude::*;

use super::complex::{chain_index, decode_chain};
use super::{guarded_dim, HochschildError};
use crate::algebra::{same_algebra, FiniteAlgebra};
use crate::bimodule::Bimodule;
use crate::linalg::{rank, Rational, SparseMatrix, SparseVec};

#[derive(Clone, Debug)]
pub struct CochainComplex {
    dims: Vec<usize>,
    /// `coboundaries[n]` is `δ^n: C^n → C^{n+1}`.
    coboundaries: Vec<SparseMatrix>,
}

impl CochainComplex {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn coboundary(&self, n: usize) -> &SparseMatrix {
        &self.coboundaries[n]
    }

    /// `dim H^n = dim C^n − rank δ^n − rank δ^{n−1}`, the top degree
    /// computed with `δ^N = 0`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.coboundaries.iter().map(rank).collect();
        (0..self.dims.len())
            .map(|n| {
                let out = ranks.get(n).copied().unwrap_or(0);
                let inc = if n == 0 { 0 } else { ranks[n - 1] };
                self.dims[n] - out - inc
            })
            .collect()
    }
}

/// Builds `δ^0, ..., δ^{N-1}` row by row: row `(x_j; a_1..a_{n+1})` of `δ^n`
/// is the functional `f ↦ ⟨(δf)(a_1, ..., a_{n+1}), x_j⟩`.
pub fn direct_cochain_complex(
    a: &FiniteAlgebra,
    x: &Bimodule,
    max_degree: usize,
    cap: usize,
) -> Result<CochainComplex, HochschildError> {
    if !a.same_structure(x.left_algebra()) || !same_algebra(x.left_algebra(), x.right_algebra()) {
        return Err(HochschildError::AlgebraMismatch);
    }
    let d = a.dim();
    let dims = (0..=max_degree)
        .map(|n| guarded_dim(x.dim(), d, n, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let coboundaries = (0..max_degree)
        .map(|n| {
            let rows: Vec<SparseVec> = (0..dims[n + 1])
                .into_par_iter()
                .map(|row| coboundary_row(a, x, n, row))
                .collect();
            // assembled as the transpose of the row list
            SparseMatrix::from_columns(dims[n], rows).transpose()
        })
        .collect();
    Ok(CochainComplex { dims, coboundaries })
}

fn coboundary_row(a: &FiniteAlgebra, x: &Bimodule, n: usize, row: usize) -> SparseVec {
    let d = a.dim();
    let (j, args) = decode_chain(row, n + 1, d);
    let mut terms: Vec<(usize, Rational)> = Vec::new();
    // a_1·f(a_2, ...) evaluated at x_j is f(a_2, ...)(x_j·a_1)
    for (i, v) in x.right_action(args[0]).column(j) {
        terms.push((chain_index(i, &args[1..], d), v.clone()));
    }
    for k in 0..n {
        let sign_neg = k % 2 == 0;
        for (b, v) in a.basis_product(args[k], args[k + 1]) {
            let mut merged = args[..k].to_vec();
            merged.push(b);
            merged.extend_from_slice(&args[k + 2..]);
            terms.push((chain_index(j, &merged, d), if sign_neg { -v } else { v.clone() }));
        }
    }
    // f(a_1, ..., a_n)·a_{n+1} evaluated at x_j is f(a_1, ..., a_n)(a_{n+1}·x_j)
    let sign_neg = n % 2 == 0;
    for (i, v) in x.left_action(args[n]).column(j) {
        terms.push((chain_index(i, &args[..n], d), if sign_neg { -v } else { v.clone() }));
    }
    SparseVec::from_terms(terms)
}
