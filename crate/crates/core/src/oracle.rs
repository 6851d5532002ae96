//! Dense brute-force Hochschild homology with regular coefficients, kept
//! separate from the sparse pipeline so the two can cross-check each other.
//!
//! Boundary columns are generated as full dense vectors from a dense
//! multiplication table and fed into fraction-free integer elimination with
//! overflow-checked `i128` arithmetic. Overflow is reported, never wrapped.

use thiserror::Error;

use crate::algebra::FiniteAlgebra;

/// Largest `dim C_{n-1}` the oracle accepts; the echelon basis is dense and
/// square in this dimension.
pub const ORACLE_MAX_TARGET_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("structure constant of e{i}*e{j} is not an integer")]
    NonIntegral { i: usize, j: usize },
    #[error("integer overflow during elimination in degree {degree}")]
    Overflow { degree: usize },
    #[error("chain space of dimension {dim} in degree {degree} is too large for the dense oracle")]
    TooLarge { degree: usize, dim: usize },
}

struct DenseTable {
    d: usize,
    // prod[(i * d + j) * d + k] = coefficient of e_k in e_i e_j
    prod: Vec<i64>,
}

impl DenseTable {
    fn new(a: &FiniteAlgebra) -> Result<Self, OracleError> {
        let d = a.dim();
        let mut prod = vec![0i64; d * d * d];
        for i in 0..d {
            for j in 0..d {
                for (k, c) in a.basis_product(i, j) {
                    let v = c
                        .as_small()
                        .filter(|&(_, den)| den == 1)
                        .ok_or(OracleError::NonIntegral { i, j })?
                        .0;
                    prod[(i * d + j) * d + k] = v;
                }
            }
        }
        Ok(DenseTable { d, prod })
    }

    fn get(&self, i: usize, j: usize, k: usize) -> i64 {
        self.prod[(i * self.d + j) * self.d + k]
    }
}

/// Digits of `index` in base `d`, most significant first, `len` of them.
fn digits(mut index: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

fn undigits(ds: &[usize], d: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * d + x)
}

/// Column `c` of `d_n` on `A ⊗ A^{⊗n}`, as a dense vector of length
/// `d^n`. The coefficient module is `A` itself, so `x a_1` and `a_n x`
/// use the same table.
fn dense_column(t: &DenseTable, n: usize, c: usize) -> Vec<i128> {
    let d = t.d;
    let f = digits(c, d, n + 1); // f[0] = x, f[1..] = a_1..a_n
    let mut col = vec![0i128; d.pow(n as u32)];
    let mut g = vec![0usize; n];
    // x a_1 ⊗ a_2 ... a_n
    for k in 0..d {
        let v = t.get(f[0], f[1], k);
        if v != 0 {
            g[0] = k;
            g[1..].copy_from_slice(&f[2..]);
            col[undigits(&g, d)] += v as i128;
        }
    }
    // inner faces merge positions p and p + 1 of f, 1 <= p < n
    for p in 1..n {
        let sign: i128 = if p % 2 == 1 { -1 } else { 1 };
        for k in 0..d {
            let v = t.get(f[p], f[p + 1], k);
            if v != 0 {
                g[..p].copy_from_slice(&f[..p]);
                g[p] = k;
                g[p + 1..].copy_from_slice(&f[p + 2..]);
                col[undigits(&g, d)] += sign * v as i128;
            }
        }
    }
    // (-1)^n a_n x ⊗ a_1 ... a_{n-1}
    let sign: i128 = if n % 2 == 1 { -1 } else { 1 };
    for k in 0..d {
        let v = t.get(f[n], f[0], k);
        if v != 0 {
            g[0] = k;
            g[1..].copy_from_slice(&f[1..n]);
            col[undigits(&g, d)] += sign * v as i128;
        }
    }
    col
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Row echelon basis over the integers. `rows[r]` has its first nonzero
/// entry at `pivot_col[r]`; `row_of[c]` inverts this.
struct IntegerEchelon {
    rows: Vec<Vec<i128>>,
    row_of: Vec<Option<usize>>,
}

impl IntegerEchelon {
    fn new(len: usize) -> Self {
        IntegerEchelon { rows: Vec::new(), row_of: vec![None; len] }
    }

    fn insert(&mut self, mut v: Vec<i128>) -> Option<()> {
        for c in 0..v.len() {
            if v[c] == 0 {
                continue;
            }
            let Some(r) = self.row_of[c] else {
                let g = v.iter().fold(0, |acc, &x| gcd(acc, x));
                for x in &mut v {
                    *x /= g;
                }
                self.row_of[c] = Some(self.rows.len());
                self.rows.push(v);
                return Some(());
            };
            let b = &self.rows[r];
            let (p, f) = (b[c], v[c]);
            let g = gcd(p, f);
            let (p, f) = (p / g, f / g);
            // v <- p v - f b, which clears column c
            let mut content = 0;
            for (x, y) in v.iter_mut().zip(b).skip(c) {
                *x = x.checked_mul(p)?.checked_sub(y.checked_mul(f)?)?;
                content = gcd(content, *x);
            }
            if content > 1 {
                for x in v.iter_mut().skip(c) {
                    *x /= content;
                }
            }
        }
        Some(())
    }
}

fn dense_rank(t: &DenseTable, n: usize) -> Result<usize, OracleError> {
    let d = t.d;
    let target = d.pow(n as u32);
    if target > ORACLE_MAX_TARGET_DIM {
        return Err(OracleError::TooLarge { degree: n - 1, dim: target });
    }
    let mut ech = IntegerEchelon::new(target);
    for c in 0..target * d {
        let col = dense_column(t, n, c);
        if col.iter().all(|&x| x == 0) {
            continue;
        }
        ech.insert(col).ok_or(OracleError::Overflow { degree: n })?;
        if ech.rows.len() == target {
            break;
        }
    }
    Ok(ech.rows.len())
}

/// `dim HH_n(A, A)` for `0 ≤ n ≤ max_degree`, with the top degree computed
/// as if `d_{max_degree+1} = 0`, matching the sparse pipeline's convention.
pub fn dense_regular_homology(a: &FiniteAlgebra, max_degree: usize) -> Result<Vec<usize>, OracleError> {
    let t = DenseTable::new(a)?;
    let d = a.dim();
    let ranks = (1..=max_degree).map(|n| dense_rank(&t, n)).collect::<Result<Vec<_>, _>>()?;
    Ok((0..=max_degree)
        .map(|n| {
            let dim = d.pow(n as u32 + 1);
            let inc = if n == 0 { 0 } else { ranks[n - 1] };
            let out = ranks.get(n).copied().unwrap_or(0);
            dim - inc - out
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, matrix_algebra, zero_algebra, FiniteAlgebra, GroupTable};
    use crate::linalg::{Rational, SparseVec};

    #[test]
    fn known_values() {
        assert_eq!(dense_regular_homology(&matrix_algebra(2), 3).unwrap()[..3], [1, 0, 0]);
        let c3 = group_algebra(&GroupTable::cyclic(3).unwrap());
        assert_eq!(dense_regular_homology(&c3, 3).unwrap()[..3], [3, 0, 0]);
        assert_eq!(dense_regular_homology(&zero_algebra(1), 3).unwrap(), [1, 1, 1, 1]);
    }

    #[test]
    fn rejects_fractions() {
        let half = FiniteAlgebra::from_fn(
            "half",
            1,
            vec!["x".into()],
            None,
            Default::default(),
            |_, _| SparseVec::single(0, Rational::new(1, 2)),
        )
        .unwrap();
        assert_eq!(dense_regular_homology(&half, 1), Err(OracleError::NonIntegral { i: 0, j: 0 }));
    }

    #[test]
    fn refuses_large_spaces() {
        assert!(matches!(
            dense_regular_homology(&matrix_algebra(3), 5),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
