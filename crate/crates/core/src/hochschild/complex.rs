use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{guarded_dim, HochschildError};
use crate::algebra::{same_algebra, FiniteAlgebra};
use crate::bimodule::Bimodule;
use crate::linalg::{rank, Rational, SparseMatrix, SparseVec};

/// Index of `x ⊗ a_1 ⊗ ... ⊗ a_n` in `X ⊗ A^{⊗n}` (lexicographic, `X` major).
pub fn chain_index(x: usize, factors: &[usize], d: usize) -> usize {
    factors.iter().fold(x, |acc, &a| acc * d + a)
}

/// Inverse of [`chain_index`] for a chain of `n` algebra factors.
pub fn decode_chain(mut index: usize, n: usize, d: usize) -> (usize, Vec<usize>) {
    let mut factors = vec![0; n];
    for slot in factors.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    (index, factors)
}

/// A bounded chain complex `C_0 ← C_1 ← ... ← C_N` of finite-dimensional
/// spaces. `boundaries[n - 1]` is `d_n: C_n → C_{n-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Checks shapes and `d ∘ d = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self, HochschildError> {
        assert_eq!(boundaries.len() + 1, dims.len(), "one boundary per positive degree");
        for (n, d) in boundaries.iter().enumerate() {
            assert_eq!(d.shape(), (dims[n], dims[n + 1]), "boundary d_{} has the wrong shape", n + 1);
        }
        let c = ChainComplex { dims, boundaries };
        c.verify_d_squared()?;
        Ok(c)
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_n` for `1 ≤ n ≤ max_degree`.
    pub fn boundary(&self, n: usize) -> &SparseMatrix {
        &self.boundaries[n - 1]
    }

    pub fn boundaries(&self) -> &[SparseMatrix] {
        &self.boundaries
    }

    /// `d_n ∘ d_{n+1} = 0`, checked column by column of `d_{n+1}`.
    pub fn verify_d_squared(&self) -> Result<(), HochschildError> {
        for n in 1..self.boundaries.len() {
            let (lower, upper) = (&self.boundaries[n - 1], &self.boundaries[n]);
            let bad = (0..upper.cols())
                .into_par_iter()
                .find_first(|&c| !lower.mul_vec(&upper.column_vec(c)).is_empty());
            if let Some(column) = bad {
                return Err(HochschildError::NotAComplex { degree: n, column });
            }
        }
        Ok(())
    }
}

/// Assembles `X ⊗ A^{⊗n}` for `0 ≤ n ≤ max_degree` with the Hochschild
/// boundary
///
/// `d(x ⊗ a_1 ⊗ ... ⊗ a_n) = x a_1 ⊗ a_2 ⊗ ... + Σ_{k=1}^{n-1} (-1)^k x ⊗ ... ⊗ a_k a_{k+1} ⊗ ...
///  + (-1)^n a_n x ⊗ a_1 ⊗ ... ⊗ a_{n-1}`.
pub fn hochschild_complex(
    a: &FiniteAlgebra,
    x: &Bimodule,
    max_degree: usize,
    cap: usize,
) -> Result<ChainComplex, HochschildError> {
    if !a.same_structure(x.left_algebra()) || !same_algebra(x.left_algebra(), x.right_algebra()) {
        return Err(HochschildError::AlgebraMismatch);
    }
    let d = a.dim();
    let dims = (0..=max_degree)
        .map(|n| guarded_dim(x.dim(), d, n, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let boundaries = (1..=max_degree)
        .map(|n| boundary_matrix(a, x, n, dims[n - 1], dims[n]))
        .collect();
    ChainComplex::new(dims, boundaries)
}

fn boundary_matrix(a: &FiniteAlgebra, x: &Bimodule, n: usize, rows: usize, cols: usize) -> SparseMatrix {
    let d = a.dim();
    let columns: Vec<SparseVec> = (0..cols)
        .into_par_iter()
        .map(|c| {
            let (xi, f) = decode_chain(c, n, d);
            let mut terms: Vec<(usize, Rational)> = Vec::new();
            // x a_1 ⊗ a_2 ⊗ ... ⊗ a_n
            let tail = chain_index(0, &f[1..], d);
            let shift = d.pow(n as u32 - 1);
            for (y, v) in x.right_action(f[0]).column(xi) {
                terms.push((y * shift + tail, v.clone()));
            }
            // inner faces
            let mut g = f.clone();
            for k in 0..n - 1 {
                let sign = if k % 2 == 0 { -1 } else { 1 };
                for (b, v) in a.basis_product(f[k], f[k + 1]) {
                    g.clear();
                    g.extend_from_slice(&f[..k]);
                    g.push(b);
                    g.extend_from_slice(&f[k + 2..]);
                    let v = if sign < 0 { -v } else { v.clone() };
                    terms.push((chain_index(xi, &g, d), v));
                }
            }
            // (-1)^n a_n x ⊗ a_1 ⊗ ... ⊗ a_{n-1}
            let head = chain_index(0, &f[..n - 1], d);
            for (y, v) in x.left_action(f[n - 1]).column(xi) {
                let v = if n % 2 == 1 { -v } else { v.clone() };
                terms.push((y * shift + head, v));
            }
            SparseVec::from_terms(terms)
        })
        .collect();
    SparseMatrix::from_columns(rows, columns)
}

/// Homology and cohomology dimensions of a complex.
///
/// `homology_dims[n] = dim C_n − rank d_n − rank d_{n+1}`. The top degree is
/// computed with `d_{N+1} = 0` and is therefore only an upper bound; it is
/// flagged by `truncated_degree`. Cohomology is computed from the transposed
/// boundaries, independently of the homology ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyReport {
    pub algebra_name: String,
    pub coefficient_name: String,
    pub max_degree: usize,
    pub chain_dims: Vec<usize>,
    pub boundary_ranks: Vec<usize>,
    pub homology_dims: Vec<usize>,
    pub cohomology_dims: Vec<usize>,
    pub truncated_degree: usize,
    pub timings: Vec<Duration>,
}

impl HomologyReport {
    /// Degrees whose values do not depend on the truncation.
    pub fn certified_degrees(&self) -> std::ops::Range<usize> {
        0..self.truncated_degree
    }

    /// Homology dims in the certified degrees.
    pub fn certified_homology(&self) -> &[usize] {
        &self.homology_dims[..self.truncated_degree]
    }

    pub fn certified_cohomology(&self) -> &[usize] {
        &self.cohomology_dims[..self.truncated_degree]
    }
}

fn betti(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    let r = |n: usize| if n == 0 || n > ranks.len() { 0 } else { ranks[n - 1] };
    (0..dims.len()).map(|n| dims[n] - r(n) - r(n + 1)).collect()
}

/// Computes homology and cohomology dimensions of `c`.
pub fn homology(c: &ChainComplex, algebra_name: &str, coefficient_name: &str) -> HomologyReport {
    let mut timings = Vec::with_capacity(c.boundaries.len());
    let mut ranks = Vec::with_capacity(c.boundaries.len());
    let mut co_ranks = Vec::with_capacity(c.boundaries.len());
    for d in &c.boundaries {
        let start = Instant::now();
        ranks.push(rank(d));
        co_ranks.push(rank(&d.transpose()));
        timings.push(start.elapsed());
    }
    HomologyReport {
        algebra_name: algebra_name.to_string(),
        coefficient_name: coefficient_name.to_string(),
        max_degree: c.max_degree(),
        chain_dims: c.dims.clone(),
        homology_dims: betti(&c.dims, &ranks),
        cohomology_dims: betti(&c.dims, &co_ranks),
        boundary_ranks: ranks,
        truncated_degree: c.max_degree(),
        timings,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{group_algebra, matrix_algebra, zero_algebra, GroupTable};
    use crate::bimodule::regular_bimodule;
    use crate::hochschild::DEFAULT_CHAIN_CAP;

    fn regular_homology(a: FiniteAlgebra, n: usize) -> HomologyReport {
        let a = Arc::new(a);
        let x = regular_bimodule(&a);
        let c = hochschild_complex(&a, &x, n, DEFAULT_CHAIN_CAP).unwrap();
        homology(&c, a.name(), x.name())
    }

    #[test]
    fn indexing_roundtrip() {
        for c in 0..5 * 27 {
            let (x, f) = decode_chain(c, 3, 3);
            assert_eq!(chain_index(x, &f, 3), c);
        }
        assert_eq!(chain_index(1, &[2, 0], 3), 15);
    }

    #[test]
    fn first_boundary_on_matrix_units() {
        let a = Arc::new(matrix_algebra(2));
        let x = regular_bimodule(&a);
        let c = hochschild_complex(&a, &x, 1, DEFAULT_CHAIN_CAP).unwrap();
        // d(E11 ⊗ E12) = E11 E12 - E12 E11 = E12
        let col = chain_index(0, &[1], 4);
        assert_eq!(c.boundary(1).column_vec(col), SparseVec::unit(1));
    }

    #[test]
    fn second_boundary_three_terms() {
        // in Q[C3]: d(x ⊗ a ⊗ b) = xa ⊗ b - x ⊗ ab + bx ⊗ a
        let a = Arc::new(group_algebra(&GroupTable::cyclic(3).unwrap()));
        let x = regular_bimodule(&a);
        let c = hochschild_complex(&a, &x, 2, DEFAULT_CHAIN_CAP).unwrap();
        let (xx, p, q) = (1, 1, 2);
        let col = chain_index(xx, &[p, q], 3);
        let expected = SparseVec::from_terms([
            (chain_index((xx + p) % 3, &[q], 3), Rational::one()),
            (chain_index(xx, &[(p + q) % 3], 3), -Rational::one()),
            (chain_index((q + xx) % 3, &[p], 3), Rational::one()),
        ]);
        assert_eq!(c.boundary(2).column_vec(col), expected);
    }

    #[test]
    fn homology_examples() {
        assert_eq!(regular_homology(matrix_algebra(2), 3).certified_homology(), [1, 0, 0]);
        let c2 = group_algebra(&GroupTable::cyclic(2).unwrap());
        assert_eq!(regular_homology(c2, 3).certified_homology(), [2, 0, 0]);
        let z = regular_homology(zero_algebra(1), 3);
        assert_eq!(z.homology_dims, [1, 1, 1, 1]);
        assert_eq!(z.cohomology_dims, [1, 1, 1, 1]);
    }

    #[test]
    fn cohomology_matches_homology() {
        let r = regular_homology(matrix_algebra(2), 3);
        assert_eq!(r.cohomology_dims, r.homology_dims);
        assert_eq!(r.chain_dims, [4, 16, 64, 256]);
    }

    #[test]
    fn size_guard() {
        let a = Arc::new(matrix_algebra(3));
        let x = regular_bimodule(&a);
        let err = hochschild_complex(&a, &x, 6, DEFAULT_CHAIN_CAP).unwrap_err();
        assert!(matches!(err, HochschildError::SizeGuard { degree: 6, .. }));
    }

    #[test]
    fn rejects_foreign_coefficients() {
        let a = Arc::new(matrix_algebra(2));
        let b = Arc::new(group_algebra(&GroupTable::cyclic(2).unwrap()));
        let err = hochschild_complex(&a, &regular_bimodule(&b), 1, DEFAULT_CHAIN_CAP).unwrap_err();
        assert_eq!(err, HochschildError::AlgebraMismatch);
    }
}
