//! Finite-dimensional bimodules, balanced tensor products and the module
//! constructions used for Morita theory.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{same_algebra, AlgebraElement, FiniteAlgebra};
use crate::linalg::{
    quotient_projection, rank, EchelonBuilder, Rational, SparseMatrix, SparseVec, SubspaceBasis,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimoduleError {
    #[error("{side} action: expected {expected} matrices, got {got}")]
    ActionCount { side: Side, expected: usize, got: usize },
    #[error("{side} action matrix {index} is not {dim}x{dim}")]
    ActionShape { side: Side, index: usize, dim: usize },
    #[error("expected {expected} basis names, got {got}")]
    BadNames { expected: usize, got: usize },
    #[error("left action is not multiplicative on basis pair ({i}, {j})")]
    NotLeftAction { i: usize, j: usize },
    #[error("right action is not multiplicative on basis pair ({i}, {j})")]
    NotRightAction { i: usize, j: usize },
    #[error("left action of {i} and right action of {j} do not commute")]
    ActionsDoNotCommute { i: usize, j: usize },
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("acting algebras do not match")]
    AlgebraMismatch,
    #[error("action of basis element {index} does not descend to the quotient")]
    IllDefinedAction { index: usize },
    #[error("map matrix is {got:?}, expected {expected:?}")]
    MapShape { expected: (usize, usize), got: (usize, usize) },
    #[error("map does not intertwine the {side} action of basis element {index}")]
    NotIntertwining { side: Side, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// An `A`-`B` bimodule on `Q^dim`. The action of basis element `k` is a
/// matrix acting on column vectors: `e_k · x = L_k x` and `x · e_k = R_k x`.
#[derive(Clone)]
pub struct Bimodule {
    name: String,
    left: Arc<FiniteAlgebra>,
    right: Arc<FiniteAlgebra>,
    dim: usize,
    left_action: Vec<SparseMatrix>,
    right_action: Vec<SparseMatrix>,
    basis_names: Vec<String>,
}

/// `Σ c_k M_k` for `v = Σ c_k e_k`.
fn combine(mats: &[SparseMatrix], v: &SparseVec, dim: usize) -> SparseMatrix {
    let mut out = SparseMatrix::zeros(dim, dim);
    for (k, c) in v.iter() {
        out = out.add_scaled(c, &mats[k]);
    }
    out
}

impl Bimodule {
    /// Validates shapes and the three action axioms exactly.
    pub fn new(
        name: impl Into<String>,
        left: Arc<FiniteAlgebra>,
        right: Arc<FiniteAlgebra>,
        dim: usize,
        left_action: Vec<SparseMatrix>,
        right_action: Vec<SparseMatrix>,
        basis_names: Vec<String>,
    ) -> Result<Self, BimoduleError> {
        for (side, alg, mats) in [(Side::Left, &left, &left_action), (Side::Right, &right, &right_action)] {
            if mats.len() != alg.dim() {
                return Err(BimoduleError::ActionCount { side, expected: alg.dim(), got: mats.len() });
            }
            if let Some(index) = mats.iter().position(|m| m.shape() != (dim, dim)) {
                return Err(BimoduleError::ActionShape { side, index, dim });
            }
        }
        if basis_names.len() != dim {
            return Err(BimoduleError::BadNames { expected: dim, got: basis_names.len() });
        }
        let m = Bimodule { name: name.into(), left, right, dim, left_action, right_action, basis_names };
        m.verify_axioms()?;
        Ok(m)
    }

    fn verify_axioms(&self) -> Result<(), BimoduleError> {
        let (l, r) = (&self.left, &self.right);
        for i in 0..l.dim() {
            for j in 0..l.dim() {
                let lhs = combine(&self.left_action, &l.basis_product_vec(i, j), self.dim);
                if lhs != self.left_action[i].mul(&self.left_action[j]) {
                    return Err(BimoduleError::NotLeftAction { i, j });
                }
            }
        }
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                // x(ab) = (xa)b
                let lhs = combine(&self.right_action, &r.basis_product_vec(i, j), self.dim);
                if lhs != self.right_action[j].mul(&self.right_action[i]) {
                    return Err(BimoduleError::NotRightAction { i, j });
                }
            }
        }
        for i in 0..l.dim() {
            for j in 0..r.dim() {
                let (li, rj) = (&self.left_action[i], &self.right_action[j]);
                if li.mul(rj) != rj.mul(li) {
                    return Err(BimoduleError::ActionsDoNotCommute { i, j });
                }
            }
        }
        Ok(())
    }

    /// The zero-dimensional bimodule.
    pub fn zero(left: Arc<FiniteAlgebra>, right: Arc<FiniteAlgebra>) -> Self {
        Self::trivial(left, right, 0)
    }

    /// `Q^dim` with both actions identically zero.
    pub fn trivial(left: Arc<FiniteAlgebra>, right: Arc<FiniteAlgebra>, dim: usize) -> Self {
        let left_action = vec![SparseMatrix::zeros(dim, dim); left.dim()];
        let right_action = vec![SparseMatrix::zeros(dim, dim); right.dim()];
        Bimodule {
            name: format!("trivial{dim}"),
            left,
            right,
            dim,
            left_action,
            right_action,
            basis_names: (0..dim).map(|k| format!("x{}", k + 1)).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn left_algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self, k: usize) -> &SparseMatrix {
        &self.left_action[k]
    }

    pub fn right_action(&self, k: usize) -> &SparseMatrix {
        &self.right_action[k]
    }

    pub fn left_actions(&self) -> &[SparseMatrix] {
        &self.left_action
    }

    pub fn right_actions(&self) -> &[SparseMatrix] {
        &self.right_action
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// `a · x` for coefficient vectors.
    pub fn act_left(&self, a: &SparseVec, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, c) in a.iter() {
            out = out.add_scaled(c, &self.left_action[k].mul_vec(x));
        }
        out
    }

    /// `x · a` for coefficient vectors.
    pub fn act_right(&self, x: &SparseVec, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, c) in a.iter() {
            out = out.add_scaled(c, &self.right_action[k].mul_vec(x));
        }
        out
    }

    /// The matrix of `x ↦ a · x`.
    pub fn left_matrix(&self, a: &SparseVec) -> SparseMatrix {
        combine(&self.left_action, a, self.dim)
    }

    /// The matrix of `x ↦ x · a`.
    pub fn right_matrix(&self, a: &SparseVec) -> SparseMatrix {
        combine(&self.right_action, a, self.dim)
    }

    /// Restriction of scalars along algebra maps `new_left → left` and
    /// `new_right → right`, each given by the images of the new basis.
    pub fn pull_back(
        &self,
        new_left: Arc<FiniteAlgebra>,
        left_images: &[SparseVec],
        new_right: Arc<FiniteAlgebra>,
        right_images: &[SparseVec],
    ) -> Result<Bimodule, BimoduleError> {
        Bimodule::new(
            self.name.clone(),
            new_left,
            new_right,
            self.dim,
            left_images.iter().map(|a| self.left_matrix(a)).collect(),
            right_images.iter().map(|a| self.right_matrix(a)).collect(),
            self.basis_names.clone(),
        )
    }
}

impl std::fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bimodule")
            .field("name", &self.name)
            .field("left", &self.left.name())
            .field("right", &self.right.name())
            .field("dim", &self.dim)
            .finish()
    }
}

/// A linear map between bimodules over the same algebras that commutes with
/// both actions.
#[derive(Clone, Debug)]
pub struct BimoduleMap {
    source: Arc<Bimodule>,
    target: Arc<Bimodule>,
    matrix: SparseMatrix,
}

impl BimoduleMap {
    pub fn new(
        source: Arc<Bimodule>,
        target: Arc<Bimodule>,
        matrix: SparseMatrix,
    ) -> Result<Self, BimoduleError> {
        if !same_algebra(source.left_algebra(), target.left_algebra())
            || !same_algebra(source.right_algebra(), target.right_algebra())
        {
            return Err(BimoduleError::AlgebraMismatch);
        }
        let expected = (target.dim(), source.dim());
        if matrix.shape() != expected {
            return Err(BimoduleError::MapShape { expected, got: matrix.shape() });
        }
        for k in 0..source.left_algebra().dim() {
            if matrix.mul(source.left_action(k)) != target.left_action(k).mul(&matrix) {
                return Err(BimoduleError::NotIntertwining { side: Side::Left, index: k });
            }
        }
        for k in 0..source.right_algebra().dim() {
            if matrix.mul(source.right_action(k)) != target.right_action(k).mul(&matrix) {
                return Err(BimoduleError::NotIntertwining { side: Side::Right, index: k });
            }
        }
        Ok(BimoduleMap { source, target, matrix })
    }

    pub fn source(&self) -> &Arc<Bimodule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Bimodule> {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim() && self.rank() == self.source.dim()
    }
}

/// `A` as a bimodule over itself.
pub fn regular_bimodule(a: &Arc<FiniteAlgebra>) -> Bimodule {
    let d = a.dim();
    let left = (0..d).map(|k| a.left_mult_matrix(&SparseVec::unit(k))).collect();
    let right = (0..d).map(|k| a.right_mult_matrix(&SparseVec::unit(k))).collect();
    Bimodule {
        name: a.name().to_string(),
        left: Arc::clone(a),
        right: Arc::clone(a),
        dim: d,
        left_action: left,
        right_action: right,
        basis_names: a.basis_names().to_vec(),
    }
}

/// The corner data of an idempotent `e`: `P = eA`, `Q = Ae`, `B = eAe`,
/// together with the embeddings of their bases into `A`.
#[derive(Clone, Debug)]
pub struct Corner {
    pub p: Bimodule,
    pub q: Bimodule,
    pub b: Arc<FiniteAlgebra>,
    pub p_basis: SubspaceBasis,
    pub q_basis: SubspaceBasis,
    pub b_basis: SubspaceBasis,
}

fn coords(basis: &SubspaceBasis, v: &SparseVec) -> SparseVec {
    basis.coordinates(v).expect("product stays in the subspace")
}

/// Builds `P = eA` (a `B`-`A` bimodule), `Q = Ae` (an `A`-`B` bimodule) and
/// `B = eAe` with unit `e`.
pub fn corner_modules(a: &Arc<FiniteAlgebra>, e: &AlgebraElement) -> Result<Corner, BimoduleError> {
    if !same_algebra(e.algebra(), a) {
        return Err(BimoduleError::AlgebraMismatch);
    }
    if !e.is_idempotent() {
        return Err(BimoduleError::NotIdempotent);
    }
    let e = e.coords();
    let d = a.dim();
    let span = |f: &dyn Fn(&SparseVec) -> SparseVec| {
        SubspaceBasis::span(d, (0..d).map(|k| f(&SparseVec::unit(k))))
    };
    let p_basis = span(&|x| a.mul_vec(e, x));
    let q_basis = span(&|x| a.mul_vec(x, e));
    let b_basis = span(&|x| a.mul_vec(&a.mul_vec(e, x), e));

    let bv = b_basis.vectors();
    let b_names = bv.iter().map(|v| a.format_vec(v)).collect();
    let b = Arc::new(
        FiniteAlgebra::from_fn(
            format!("e{}e", a.name()),
            bv.len(),
            b_names,
            Some(coords(&b_basis, e)),
            crate::algebra::AssociativityCheck::SkipAbove(32),
            |i, j| coords(&b_basis, &a.mul_vec(&bv[i], &bv[j])),
        )
        .expect("corner of an associative algebra is a unital algebra"),
    );

    let action = |basis: &SubspaceBasis, acting: &[SparseVec], on_left: bool| -> Vec<SparseMatrix> {
        acting
            .iter()
            .map(|s| {
                SparseMatrix::from_columns(
                    basis.dim(),
                    basis.vectors().iter().map(|v| {
                        let prod = if on_left { a.mul_vec(s, v) } else { a.mul_vec(v, s) };
                        coords(basis, &prod)
                    }),
                )
            })
            .collect()
    };
    let a_units: Vec<SparseVec> = (0..d).map(SparseVec::unit).collect();
    let names = |basis: &SubspaceBasis| basis.vectors().iter().map(|v| a.format_vec(v)).collect();

    let p = Bimodule::new(
        format!("e{}", a.name()),
        Arc::clone(&b),
        Arc::clone(a),
        p_basis.dim(),
        action(&p_basis, bv, true),
        action(&p_basis, &a_units, false),
        names(&p_basis),
    )?;
    let q = Bimodule::new(
        format!("{}e", a.name()),
        Arc::clone(a),
        Arc::clone(&b),
        q_basis.dim(),
        action(&q_basis, &a_units, true),
        action(&q_basis, bv, false),
        names(&q_basis),
    )?;
    Ok(Corner { p, q, b, p_basis, q_basis, b_basis })
}

/// `X ⊗_B Y` realized as a quotient of `X ⊗ Y`. The index of `x_i ⊗ y_j`
/// in the full tensor product is `i * dim Y + j`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub module: Bimodule,
    /// `X ⊗ Y → X ⊗_B Y`
    pub projection: SparseMatrix,
    /// A linear right inverse of `projection`.
    pub section: SparseMatrix,
    pub left_factor_dim: usize,
    pub right_factor_dim: usize,
    /// Rank of the balancing relations.
    pub relation_rank: usize,
}

impl TensorProduct {
    /// A representative in `X ⊗ Y` of a vector of the quotient, as
    /// `((i, j), c)` terms.
    pub fn lift(&self, v: &SparseVec) -> Vec<((usize, usize), Rational)> {
        let dy = self.right_factor_dim;
        self.section
            .mul_vec(v)
            .into_entries()
            .into_iter()
            .map(|(p, c)| ((p / dy, p % dy), c))
            .collect()
    }
}

/// The balanced tensor product `X ⊗_B Y` with its outer actions.
pub fn balanced_tensor(x: &Bimodule, y: &Bimodule) -> Result<TensorProduct, BimoduleError> {
    if !same_algebra(x.right_algebra(), y.left_algebra()) {
        return Err(BimoduleError::AlgebraMismatch);
    }
    let (dx, dy) = (x.dim(), y.dim());
    let n = dx * dy;
    let mut relations = EchelonBuilder::new(n);
    for k in 0..x.right_algebra().dim() {
        let (rx, ly) = (x.right_action(k), y.left_action(k));
        for i in 0..dx {
            for j in 0..dy {
                // (x_i b_k) ⊗ y_j - x_i ⊗ (b_k y_j)
                let terms = rx
                    .column(i)
                    .map(|(i2, c)| (i2 * dy + j, c.clone()))
                    .chain(ly.column(j).map(|(j2, c)| (i * dy + j2, -c)));
                let rel = SparseVec::from_terms(terms);
                if !rel.is_empty() {
                    relations.insert(rel);
                }
            }
        }
    }
    let relation_rank = relations.rank();
    let relations = relations.into_basis();
    let (projection, section) = quotient_projection(&relations, n);
    let q = projection.rows();

    let induced = |apply: &dyn Fn(usize, usize, &Rational, &mut Vec<(usize, Rational)>)| {
        SparseMatrix::from_columns(
            q,
            (0..q).map(|t| {
                let mut image = Vec::new();
                for (p, c) in section.column(t) {
                    apply(p / dy, p % dy, c, &mut image);
                }
                projection.mul_vec(&SparseVec::from_terms(image))
            }),
        )
    };
    let left_action = (0..x.left_algebra().dim())
        .map(|k| {
            let lx = x.left_action(k);
            induced(&|i, j, c, out| {
                out.extend(lx.column(i).map(|(i2, v)| (i2 * dy + j, v * c)));
            })
        })
        .collect();
    let right_action = (0..y.right_algebra().dim())
        .map(|k| {
            let ry = y.right_action(k);
            induced(&|i, j, c, out| {
                out.extend(ry.column(j).map(|(j2, v)| (i * dy + j2, v * c)));
            })
        })
        .collect();
    let names = (0..q)
        .map(|t| {
            let terms: Vec<String> = section
                .column(t)
                .map(|(p, c)| {
                    let base = format!("{}⊗{}", x.basis_names()[p / dy], y.basis_names()[p % dy]);
                    if c.is_one() { base } else { format!("{c}*{base}") }
                })
                .collect();
            terms.join(" + ")
        })
        .collect();
    let module = Bimodule::new(
        format!("{}⊗{}", x.name(), y.name()),
        Arc::clone(x.left_algebra()),
        Arc::clone(y.right_algebra()),
        q,
        left_action,
        right_action,
        names,
    )?;
    Ok(TensorProduct { module, projection, section, left_factor_dim: dx, right_factor_dim: dy, relation_rank })
}

/// `(X ⊗_B Y) ⊗_C Z` with a lift back to triples.
#[derive(Clone, Debug)]
pub struct TripleTensor {
    pub inner: TensorProduct,
    pub outer: TensorProduct,
}

impl TripleTensor {
    pub fn module(&self) -> &Bimodule {
        &self.outer.module
    }

    /// A representative of `v` in `X ⊗ Y ⊗ Z` as `((i, j, k), c)` terms.
    pub fn lift(&self, v: &SparseVec) -> Vec<((usize, usize, usize), Rational)> {
        let mut out = Vec::new();
        for ((t, k), c) in self.outer.lift(v) {
            for ((i, j), c2) in self.inner.lift(&SparseVec::unit(t)) {
                out.push(((i, j, k), &c * &c2));
            }
        }
        out
    }
}

pub fn triple_tensor(x: &Bimodule, y: &Bimodule, z: &Bimodule) -> Result<TripleTensor, BimoduleError> {
    let inner = balanced_tensor(x, y)?;
    let outer = balanced_tensor(&inner.module, z)?;
    Ok(TripleTensor { inner, outer })
}

/// Outcome of an inducedness test: the multiplication map
/// `A ⊗_A X ⊗_B B → X` and its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inducedness {
    pub tensor_dim: usize,
    pub module_dim: usize,
    pub rank: usize,
    pub induced: bool,
}

/// Whether multiplication `A ⊗_A X ⊗_B B → X` is a linear isomorphism.
pub fn inducedness_check(x: &Bimodule) -> Inducedness {
    let ra = regular_bimodule(x.left_algebra());
    let rb = regular_bimodule(x.right_algebra());
    let t = triple_tensor(&ra, x, &rb).expect("regular modules match by construction");
    let q = t.module().dim();
    let map = SparseMatrix::from_columns(
        x.dim(),
        (0..q).map(|c| {
            let mut acc = SparseVec::new();
            for ((a, i, b), coef) in t.lift(&SparseVec::unit(c)) {
                let v = x.right_action(b).mul_vec(&x.left_action(a).column_vec(i));
                acc = acc.add_scaled(&coef, &v);
            }
            acc
        }),
    );
    let r = rank(&map);
    Inducedness { tensor_dim: q, module_dim: x.dim(), rank: r, induced: q == x.dim() && r == q }
}

/// The reduced module `X / (∅X + X∅)` together with its quotient map.
#[derive(Clone, Debug)]
pub struct ReducedModule {
    pub module: Bimodule,
    pub projection: SparseMatrix,
}

/// Reduces a bimodule over `ℓ¹(S)` to one over `A(S) = ℓ¹(S)/Q∅`.
///
/// `zero_index` is the basis index of `∅` in the acting algebra; basis
/// element `k` of `reduced` corresponds to `k` (below `zero_index`) or
/// `k + 1` (above).
pub fn reduce_module(
    x: &Bimodule,
    zero_index: usize,
    reduced: &Arc<FiniteAlgebra>,
) -> Result<ReducedModule, BimoduleError> {
    let full = x.left_algebra();
    if !same_algebra(full, x.right_algebra())
        || zero_index >= full.dim()
        || reduced.dim() + 1 != full.dim()
    {
        return Err(BimoduleError::AlgebraMismatch);
    }
    let d = x.dim();
    let l0 = x.left_action(zero_index);
    let r0 = x.right_action(zero_index);
    let sub = SubspaceBasis::span(d, l0.columns().chain(r0.columns()));
    let (projection, section) = quotient_projection(&sub, d);
    let lift_index = |k: usize| if k < zero_index { k } else { k + 1 };
    let descend = |m: &SparseMatrix, k: usize| -> Result<SparseMatrix, BimoduleError> {
        if sub.vectors().iter().any(|w| !sub.contains(&m.mul_vec(w))) {
            return Err(BimoduleError::IllDefinedAction { index: k });
        }
        Ok(projection.mul(m).mul(&section))
    };
    let mut left = Vec::with_capacity(reduced.dim());
    let mut right = Vec::with_capacity(reduced.dim());
    for k in 0..reduced.dim() {
        let kk = lift_index(k);
        left.push(descend(x.left_action(kk), kk)?);
        right.push(descend(x.right_action(kk), kk)?);
    }
    let q = projection.rows();
    let names = (0..q)
        .map(|t| {
            let (p, _) = section.column(t).next().expect("section columns are nonzero");
            format!("[{}]", x.basis_names()[p])
        })
        .collect();
    let module = Bimodule::new(
        format!("reduced {}", x.name()),
        Arc::clone(reduced),
        Arc::clone(reduced),
        q,
        left,
        right,
        names,
    )?;
    Ok(ReducedModule { module, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{group_algebra, matrix_algebra, zero_algebra, GroupTable};
    use crate::rees::{ReesElement, ReesSemigroup, SandwichEntry::Element as E};

    fn arc(a: FiniteAlgebra) -> Arc<FiniteAlgebra> {
        Arc::new(a)
    }

    fn rectangular_band() -> ReesSemigroup {
        let g = GroupTable::cyclic(1).unwrap();
        ReesSemigroup::new(g, 2, 2, vec![vec![E(0), E(0)], vec![E(0), E(0)]]).unwrap()
    }

    #[test]
    fn regular_examples() {
        let c2 = arc(group_algebra(&GroupTable::cyclic(2).unwrap()));
        let r = regular_bimodule(&c2);
        assert_eq!(r.dim(), 2);
        assert_eq!(r.left_action(1), r.right_action(1));
        let m2 = arc(matrix_algebra(2));
        let r = regular_bimodule(&m2);
        // E11 keeps E11, E12 and kills E21, E22
        let l = r.left_action(0);
        assert_eq!(l.get(0, 0), Rational::one());
        assert_eq!(l.get(1, 1), Rational::one());
        assert!(l.column(2).next().is_none() && l.column(3).next().is_none());
        let z = arc(zero_algebra(2));
        assert!(regular_bimodule(&z).left_actions().iter().all(SparseMatrix::is_zero));
    }

    #[test]
    fn axioms_are_enforced() {
        let c2 = arc(group_algebra(&GroupTable::cyclic(2).unwrap()));
        // left action sending a to the zero matrix is not multiplicative
        // (a·a = e must act as the identity)
        let bad = Bimodule::new(
            "bad",
            Arc::clone(&c2),
            Arc::clone(&c2),
            1,
            vec![SparseMatrix::identity(1), SparseMatrix::zeros(1, 1)],
            vec![SparseMatrix::identity(1), SparseMatrix::identity(1)],
            vec!["x".into()],
        );
        assert_eq!(bad.unwrap_err(), BimoduleError::NotLeftAction { i: 1, j: 1 });
    }

    #[test]
    fn corner_examples() {
        let m2 = arc(matrix_algebra(2));
        let c = corner_modules(&m2, &m2.basis_element(0)).unwrap();
        assert_eq!((c.p.dim(), c.q.dim(), c.b.dim()), (2, 2, 1));
        let zero = m2.element(SparseVec::new());
        let c = corner_modules(&m2, &zero).unwrap();
        assert_eq!((c.p.dim(), c.q.dim(), c.b.dim()), (0, 0, 0));
        let not_idem = m2.element(SparseVec::single(0, Rational::from_int(2)));
        assert_eq!(corner_modules(&m2, &not_idem).unwrap_err(), BimoduleError::NotIdempotent);
    }

    #[test]
    fn rees_corner_dimensions() {
        let g = GroupTable::cyclic(2).unwrap();
        let s = ReesSemigroup::new(g, 3, 2, vec![vec![E(0), E(1), E(0)], vec![E(1), E(0), E(0)]]).unwrap();
        let a = arc(s.reduced_algebra());
        let e = s.corner_idempotent(0, 0).unwrap();
        let c = corner_modules(&a, &a.basis_element(s.index(e))).unwrap();
        assert_eq!(c.p.dim(), 2 * 2);
        assert_eq!(c.q.dim(), 2 * 3);
        assert_eq!(c.b.dim(), 2);
    }

    #[test]
    fn unital_tensor_collapses() {
        let m2 = arc(matrix_algebra(2));
        let r = regular_bimodule(&m2);
        assert_eq!(balanced_tensor(&r, &r).unwrap().module.dim(), 4);
        let c3 = arc(group_algebra(&GroupTable::cyclic(3).unwrap()));
        let r = regular_bimodule(&c3);
        assert_eq!(balanced_tensor(&r, &r).unwrap().module.dim(), 3);
    }

    #[test]
    fn rectangular_band_tensors() {
        let s = rectangular_band();
        let a = arc(s.reduced_algebra());
        let e = a.basis_element(s.index(s.triple(0, 0, 0)));
        let c = corner_modules(&a, &e).unwrap();
        assert_eq!(balanced_tensor(&c.q, &c.p).unwrap().module.dim(), 4);
        assert_eq!(balanced_tensor(&c.p, &c.q).unwrap().module.dim(), 1);
    }

    #[test]
    fn tensor_requires_matching_algebras() {
        let m2 = arc(matrix_algebra(2));
        let c2 = arc(group_algebra(&GroupTable::cyclic(2).unwrap()));
        let err = balanced_tensor(&regular_bimodule(&m2), &regular_bimodule(&c2)).unwrap_err();
        assert_eq!(err, BimoduleError::AlgebraMismatch);
    }

    #[test]
    fn projection_intertwines() {
        let s = rectangular_band();
        let a = arc(s.reduced_algebra());
        let r = regular_bimodule(&a);
        let t = balanced_tensor(&r, &r).unwrap();
        let d = a.dim();
        for k in 0..d {
            let full_left = r.left_action(k).kron(&SparseMatrix::identity(d));
            assert_eq!(t.projection.mul(&full_left), t.module.left_action(k).mul(&t.projection));
            let full_right = SparseMatrix::identity(d).kron(r.right_action(k));
            assert_eq!(t.projection.mul(&full_right), t.module.right_action(k).mul(&t.projection));
        }
    }

    #[test]
    fn inducedness_examples() {
        let m2 = arc(matrix_algebra(2));
        assert!(inducedness_check(&regular_bimodule(&m2)).induced);
        let s = rectangular_band();
        let a = arc(s.reduced_algebra());
        assert!(inducedness_check(&regular_bimodule(&a)).induced);
        let triv = Bimodule::trivial(Arc::clone(&m2), Arc::clone(&m2), 1);
        let w = inducedness_check(&triv);
        assert!(!w.induced);
        assert_eq!(w.tensor_dim, 0);
    }

    #[test]
    fn reduce_regular_module() {
        let s = rectangular_band();
        let full = arc(s.full_algebra());
        let reduced = arc(s.reduced_algebra());
        let z = s.index(ReesElement::Zero);
        let r = reduce_module(&regular_bimodule(&full), z, &reduced).unwrap();
        assert_eq!(r.module.dim(), full.dim() - 1);
        // trivial action of ∅ leaves the module unchanged
        let triv = Bimodule::trivial(Arc::clone(&full), Arc::clone(&full), 3);
        assert_eq!(reduce_module(&triv, z, &reduced).unwrap().module.dim(), 3);
    }

    #[test]
    fn reduce_line_spanned_by_zero_image() {
        // the ideal Q∅ of ℓ¹(S) as a bimodule: ∅ acts as the identity
        let s = rectangular_band();
        let full = arc(s.full_algebra());
        let reduced = arc(s.reduced_algebra());
        let z = s.index(ReesElement::Zero);
        let ones = vec![SparseMatrix::identity(1); full.dim()];
        let line = Bimodule::new("Q∅", Arc::clone(&full), Arc::clone(&full), 1, ones.clone(), ones, vec!["∅".into()])
            .unwrap();
        assert_eq!(reduce_module(&line, z, &reduced).unwrap().module.dim(), 0);
    }

    #[test]
    fn pull_back_along_identity() {
        let c2 = arc(group_algebra(&GroupTable::cyclic(2).unwrap()));
        let r = regular_bimodule(&c2);
        let id: Vec<SparseVec> = (0..2).map(SparseVec::unit).collect();
        let p = r.pull_back(Arc::clone(&c2), &id, Arc::clone(&c2), &id).unwrap();
        assert_eq!(p.left_actions(), r.left_actions());
    }
}
