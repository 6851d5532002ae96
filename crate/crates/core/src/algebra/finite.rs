use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::GroupTable;
use crate::linalg::{Rational, SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("expected {expected} structure-constant entries, got {got}")]
    BadShape { expected: usize, got: usize },
    #[error("product e{i}*e{j} has a component outside the basis")]
    OutOfRange { i: usize, j: usize },
    #[error("expected {expected} basis names, got {got}")]
    BadNames { expected: usize, got: usize },
    #[error("not associative: (e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("claimed unit fails on basis element e{0}")]
    BadUnit(usize),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
}

/// When to verify associativity on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssociativityCheck {
    Always,
    /// Skip the O(dim^3) check when `dim` exceeds the bound.
    SkipAbove(usize),
}

impl Default for AssociativityCheck {
    fn default() -> Self {
        AssociativityCheck::Always
    }
}

const NO_PRODUCT: u32 = u32::MAX;

/// A finite-dimensional associative algebra over the rationals, given by
/// sparse structure constants on a basis `e_0, ..., e_{dim-1}`.
#[derive(Clone)]
pub struct FiniteAlgebra {
    name: String,
    dim: usize,
    // products in compressed form: pair (i, j) -> entries[ptr[i*dim+j]..ptr[i*dim+j+1]]
    ptr: Vec<usize>,
    idx: Vec<u32>,
    val: Vec<Rational>,
    // When every basis product is zero or a single basis element with
    // coefficient one, the target index per pair (NO_PRODUCT for zero).
    monomial: Option<Vec<u32>>,
    basis_names: Vec<String>,
    unit: Option<SparseVec>,
}

impl FiniteAlgebra {
    /// Builds and validates an algebra. `products[i * dim + j]` is `e_i e_j`.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        products: Vec<SparseVec>,
        basis_names: Vec<String>,
        unit: Option<SparseVec>,
        check: AssociativityCheck,
    ) -> Result<Self, AlgebraError> {
        if products.len() != dim * dim {
            return Err(AlgebraError::BadShape { expected: dim * dim, got: products.len() });
        }
        if basis_names.len() != dim {
            return Err(AlgebraError::BadNames { expected: dim, got: basis_names.len() });
        }
        let mut ptr = Vec::with_capacity(dim * dim + 1);
        let mut idx = Vec::new();
        let mut val = Vec::new();
        let mut monomial = Vec::with_capacity(dim * dim);
        let mut is_monomial = true;
        ptr.push(0);
        for (pair, p) in products.into_iter().enumerate() {
            if p.max_index().is_some_and(|m| m >= dim) {
                return Err(AlgebraError::OutOfRange { i: pair / dim, j: pair % dim });
            }
            match p.entries() {
                [] => monomial.push(NO_PRODUCT),
                [(k, v)] if v.is_one() => monomial.push(*k as u32),
                _ => is_monomial = false,
            }
            for (k, v) in p.into_entries() {
                idx.push(k as u32);
                val.push(v);
            }
            ptr.push(idx.len());
        }
        let alg = FiniteAlgebra {
            name: name.into(),
            dim,
            ptr,
            idx,
            val,
            monomial: is_monomial.then_some(monomial),
            basis_names,
            unit,
        };
        let run_check = match check {
            AssociativityCheck::Always => true,
            AssociativityCheck::SkipAbove(bound) => dim <= bound,
        };
        if run_check {
            alg.check_associative()?;
        }
        if let Some(u) = &alg.unit {
            if u.max_index().is_some_and(|m| m >= dim) {
                return Err(AlgebraError::BadUnit(0));
            }
            for i in 0..dim {
                let e = SparseVec::unit(i);
                if alg.mul_vec(u, &e) != e || alg.mul_vec(&e, u) != e {
                    return Err(AlgebraError::BadUnit(i));
                }
            }
        }
        Ok(alg)
    }

    /// Builds an algebra from a product function on basis indices.
    pub fn from_fn<F>(
        name: impl Into<String>,
        dim: usize,
        basis_names: Vec<String>,
        unit: Option<SparseVec>,
        check: AssociativityCheck,
        product: F,
    ) -> Result<Self, AlgebraError>
    where
        F: Fn(usize, usize) -> SparseVec,
    {
        let products = (0..dim * dim).map(|p| product(p / dim, p % dim)).collect();
        Self::new(name, dim, products, basis_names, unit, check)
    }

    fn check_associative(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product_vec(i, j);
                for k in 0..d {
                    let left = self.mul_vec(&ij, &SparseVec::unit(k));
                    let jk = self.basis_product_vec(j, k);
                    let right = self.mul_vec(&SparseVec::unit(i), &jk);
                    if left != right {
                        return Err(AlgebraError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    /// True when every basis product is zero or a single basis element.
    pub fn is_monomial(&self) -> bool {
        self.monomial.is_some()
    }

    /// For monomial algebras: `Some(Some(k))` when `e_i e_j = e_k`,
    /// `Some(None)` when it vanishes. `None` for general algebras.
    #[inline]
    pub fn monomial_product(&self, i: usize, j: usize) -> Option<Option<usize>> {
        self.monomial.as_ref().map(|m| {
            let k = m[i * self.dim + j];
            (k != NO_PRODUCT).then_some(k as usize)
        })
    }

    /// Structure constants of `e_i e_j`.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        let p = i * self.dim + j;
        let range = self.ptr[p]..self.ptr[p + 1];
        self.idx[range.clone()]
            .iter()
            .zip(&self.val[range])
            .map(|(k, v)| (*k as usize, v))
    }

    pub fn basis_product_vec(&self, i: usize, j: usize) -> SparseVec {
        SparseVec::from_sorted(self.basis_product(i, j).map(|(k, v)| (k, v.clone())).collect())
    }

    /// Bilinear product of coefficient vectors.
    pub fn mul_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        SparseVec::from_terms(x.iter().flat_map(|(i, a)| {
            y.iter().flat_map(move |(j, b)| {
                let ab = a * b;
                self.basis_product(i, j)
                    .map(move |(k, c)| (k, c * &ab))
                    .collect::<Vec<_>>()
            })
        }))
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult_matrix(&self, x: &SparseVec) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.dim,
            (0..self.dim).map(|j| self.mul_vec(x, &SparseVec::unit(j))),
        )
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult_matrix(&self, x: &SparseVec) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.dim,
            (0..self.dim).map(|j| self.mul_vec(&SparseVec::unit(j), x)),
        )
    }

    /// The multiplication map `A (x) A -> A`, with `e_i (x) e_j` at column
    /// `i * dim + j`.
    pub fn multiplication_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.dim,
            (0..self.dim * self.dim).map(|p| self.basis_product_vec(p / self.dim, p % self.dim)),
        )
    }

    /// Equal structure constants on the same basis. Names and the recorded
    /// unit are ignored.
    pub fn same_structure(&self, other: &FiniteAlgebra) -> bool {
        self.dim == other.dim
            && self.ptr == other.ptr
            && self.idx == other.idx
            && self.val == other.val
    }

    pub fn element(self: &Arc<Self>, coords: SparseVec) -> AlgebraElement {
        assert!(coords.max_index().map_or(true, |m| m < self.dim), "coordinates out of range");
        AlgebraElement { algebra: Arc::clone(self), coords }
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> AlgebraElement {
        self.element(SparseVec::unit(i))
    }

    /// Human-readable form of a coefficient vector, e.g. `1/2*(1, a, 2) - (2, e, 1)`.
    pub fn format_vec(&self, v: &SparseVec) -> String {
        if v.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (i, c)) in v.iter().enumerate() {
            let name = &self.basis_names[i];
            let neg = c.signum() < 0;
            let mag = if neg { -c } else { c.clone() };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(name);
        }
        out
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("unital", &self.unit.is_some())
            .field("monomial", &self.monomial.is_some())
            .finish()
    }
}

/// An element of a specific algebra.
#[derive(Clone)]
pub struct AlgebraElement {
    algebra: Arc<FiniteAlgebra>,
    coords: SparseVec,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &SparseVec {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.algebra.mul_vec(&self.coords, &other.coords),
        })
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(AlgebraElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.add(&other.coords),
        })
    }

    pub fn scale(&self, c: &Rational) -> AlgebraElement {
        AlgebraElement {
            algebra: Arc::clone(&self.algebra),
            coords: self.coords.scale(c),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.algebra.mul_vec(&self.coords, &self.coords) == self.coords
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algebra.format_vec(&self.coords))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algebra.format_vec(&self.coords))
    }
}

/// Identity of the underlying algebra: pointer equality, falling back to
/// equal structure constants.
pub fn same_algebra(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a.same_structure(b)
}

/// The group algebra `Q[G]`, basis indexed by group elements.
pub fn group_algebra(g: &GroupTable) -> FiniteAlgebra {
    let n = g.order();
    FiniteAlgebra::from_fn(
        format!("Q[G{n}]"),
        n,
        g.names().to_vec(),
        Some(SparseVec::unit(g.identity())),
        AssociativityCheck::SkipAbove(64),
        |a, b| SparseVec::unit(g.mul(a, b)),
    )
    .expect("group algebras are associative and unital")
}

/// Forced unitization `A#`: a new basis element `1` (index 0) is adjoined as
/// a two-sided unit, even when `a` already has one. Old basis element `i`
/// becomes index `i + 1`.
pub fn unitize(a: &FiniteAlgebra) -> FiniteAlgebra {
    let d = a.dim();
    let mut names = vec!["1".to_string()];
    names.extend(a.basis_names().iter().cloned());
    FiniteAlgebra::from_fn(
        format!("{}#", a.name()),
        d + 1,
        names,
        Some(SparseVec::unit(0)),
        AssociativityCheck::SkipAbove(64),
        |i, j| match (i, j) {
            (0, j) => SparseVec::unit(j),
            (i, 0) => SparseVec::unit(i),
            (i, j) => a.basis_product_vec(i - 1, j - 1).map_indices(|k| k + 1),
        },
    )
    .expect("unitization of an associative algebra is associative")
}

/// Direct sum `a (+) b`: basis of `a` first, cross products zero.
pub fn direct_sum(a: &FiniteAlgebra, b: &FiniteAlgebra) -> FiniteAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let mut names: Vec<String> = a.basis_names().to_vec();
    names.extend(b.basis_names().iter().cloned());
    let unit = match (a.unit(), b.unit()) {
        (Some(ua), Some(ub)) => Some(ua.add(&ub.map_indices(|k| k + da))),
        _ => None,
    };
    FiniteAlgebra::from_fn(
        format!("{} + {}", a.name(), b.name()),
        da + db,
        names,
        unit,
        AssociativityCheck::SkipAbove(64),
        |i, j| {
            if i < da && j < da {
                a.basis_product_vec(i, j)
            } else if i >= da && j >= da {
                b.basis_product_vec(i - da, j - da).map_indices(|k| k + da)
            } else {
                SparseVec::new()
            }
        },
    )
    .expect("direct sum of associative algebras is associative")
}

/// The algebra with basis `z_0..z_{n-1}` and identically zero product.
pub fn zero_algebra(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(
        format!("Z{n}"),
        n,
        (0..n).map(|k| format!("z{}", k + 1)).collect(),
        // the zero ring is unital
        (n == 0).then(SparseVec::new),
        AssociativityCheck::Always,
        |_, _| SparseVec::new(),
    )
    .expect("zero product is associative")
}

/// The full matrix algebra `M_n(Q)` on matrix units `E_ij` (index `i*n + j`).
pub fn matrix_algebra(n: usize) -> FiniteAlgebra {
    let names = (0..n * n)
        .map(|p| format!("E{}{}", p / n + 1, p % n + 1))
        .collect();
    let unit = SparseVec::from_terms((0..n).map(|i| (i * n + i, Rational::one())));
    FiniteAlgebra::from_fn(
        format!("M{n}"),
        n * n,
        names,
        Some(unit),
        AssociativityCheck::SkipAbove(64),
        |p, q| {
            let (i, j, k, l) = (p / n, p % n, q / n, q % n);
            if j == k {
                SparseVec::unit(i * n + l)
            } else {
                SparseVec::new()
            }
        },
    )
    .expect("matrix units multiply associatively")
}
