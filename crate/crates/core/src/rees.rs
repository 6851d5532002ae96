//! Rees matrix semigroups `M0(G; I, Λ; P)` and their convolution algebras.
//!
//! Elements are triples `(i, g, λ)` plus an absorbing zero `∅`, multiplied by
//! `(i, g, λ)(j, h, μ) = (i, g p_{λj} h, μ)` when the sandwich entry `p_{λj}`
//! is a group element and `∅` otherwise. Indices are zero-based internally and
//! printed one-based.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AssociativityCheck, FiniteAlgebra, GroupTable};
use crate::linalg::SparseVec;

/// Largest `|I|·|G|·|Λ|` accepted without the force flag.
pub const MAX_NONZERO_ELEMENTS: usize = 4096;
/// Semigroups up to this many elements get an exhaustive associativity check.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 2000;
const SAMPLED_TRIPLES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReesError {
    #[error("sandwich matrix must be {lambda} x {i} (|Λ| x |I|), got {got}")]
    BadShape { lambda: usize, i: usize, got: String },
    #[error("index sets must be nonempty")]
    EmptyIndexSet,
    #[error("sandwich entry at row {row}, column {col} names group element {value}, but the group has order {order}")]
    BadEntry { row: usize, col: usize, value: usize, order: usize },
    #[error("sandwich row {} (λ = {}) has no group entry", .0 + 1, .0 + 1)]
    EmptyRow(usize),
    #[error("sandwich column {} (i = {}) has no group entry", .0 + 1, .0 + 1)]
    EmptyColumn(usize),
    #[error("|I|·|G|·|Λ| = {size} exceeds the limit {limit}; pass the force flag to override")]
    TooLarge { size: usize, limit: usize },
    #[error("product rule is not associative on ({x}, {y}, {z})")]
    NotAssociative { x: String, y: String, z: String },
    #[error("α(I) and β(Λ) differ as subsets of X")]
    RangeMismatch,
    #[error("index map value {value} out of range for |X| = {size}")]
    BadIndexMap { value: usize, size: usize },
    #[error("sandwich entry p_{{{},{}}} is o", .lambda + 1, .i + 1)]
    ZeroSandwichEntry { i: usize, lambda: usize },
}

/// An entry of the sandwich matrix: a group element or the marker `o`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SandwichEntry {
    Element(usize),
    Null,
}

impl SandwichEntry {
    pub fn element(self) -> Option<usize> {
        match self {
            SandwichEntry::Element(g) => Some(g),
            SandwichEntry::Null => None,
        }
    }
}

/// An element of a Rees semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReesElement {
    Triple { i: usize, g: usize, lambda: usize },
    Zero,
}

#[derive(Clone, PartialEq, Eq)]
pub struct ReesSemigroup {
    name: String,
    group: GroupTable,
    i_size: usize,
    lambda_size: usize,
    // row-major over Λ: entry p_{λ i} at lambda * i_size + i
    sandwich: Vec<SandwichEntry>,
}

impl ReesSemigroup {
    /// Validates `(G, I, Λ, P)`. `sandwich[λ][i]` is `p_{λi}`.
    pub fn new(
        group: GroupTable,
        i_size: usize,
        lambda_size: usize,
        sandwich: Vec<Vec<SandwichEntry>>,
    ) -> Result<Self, ReesError> {
        Self::with_options(group, i_size, lambda_size, sandwich, false)
    }

    /// As [`ReesSemigroup::new`]; `force` lifts the size guard.
    pub fn with_options(
        group: GroupTable,
        i_size: usize,
        lambda_size: usize,
        sandwich: Vec<Vec<SandwichEntry>>,
        force: bool,
    ) -> Result<Self, ReesError> {
        if i_size == 0 || lambda_size == 0 {
            return Err(ReesError::EmptyIndexSet);
        }
        if sandwich.len() != lambda_size || sandwich.iter().any(|r| r.len() != i_size) {
            let got = format!(
                "{} rows of lengths {:?}",
                sandwich.len(),
                sandwich.iter().map(Vec::len).collect::<Vec<_>>()
            );
            return Err(ReesError::BadShape { lambda: lambda_size, i: i_size, got });
        }
        for (row, r) in sandwich.iter().enumerate() {
            for (col, e) in r.iter().enumerate() {
                if let SandwichEntry::Element(g) = e {
                    if *g >= group.order() {
                        return Err(ReesError::BadEntry { row, col, value: *g, order: group.order() });
                    }
                }
            }
        }
        for (lambda, r) in sandwich.iter().enumerate() {
            if r.iter().all(|e| *e == SandwichEntry::Null) {
                return Err(ReesError::EmptyRow(lambda));
            }
        }
        for i in 0..i_size {
            if sandwich.iter().all(|r| r[i] == SandwichEntry::Null) {
                return Err(ReesError::EmptyColumn(i));
            }
        }
        let size = i_size * group.order() * lambda_size;
        if size > MAX_NONZERO_ELEMENTS && !force {
            return Err(ReesError::TooLarge { size, limit: MAX_NONZERO_ELEMENTS });
        }
        let s = ReesSemigroup {
            name: String::from("S"),
            group,
            i_size,
            lambda_size,
            sandwich: sandwich.into_iter().flatten().collect(),
        };
        s.check_associative()?;
        Ok(s)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn i_size(&self) -> usize {
        self.i_size
    }

    pub fn lambda_size(&self) -> usize {
        self.lambda_size
    }

    /// `p_{λi}`
    pub fn sandwich(&self, lambda: usize, i: usize) -> SandwichEntry {
        self.sandwich[lambda * self.i_size + i]
    }

    pub fn sandwich_rows(&self) -> Vec<Vec<SandwichEntry>> {
        self.sandwich.chunks(self.i_size).map(|r| r.to_vec()).collect()
    }

    /// `|I|·|G|·|Λ|`, the number of nonzero elements.
    pub fn nonzero_count(&self) -> usize {
        self.i_size * self.group.order() * self.lambda_size
    }

    /// All elements including `∅`.
    pub fn len(&self) -> usize {
        self.nonzero_count() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Basis index of an element: triples in lexicographic `(i, g, λ)` order,
    /// then `∅` last.
    pub fn index(&self, x: ReesElement) -> usize {
        match x {
            ReesElement::Triple { i, g, lambda } => {
                (i * self.group.order() + g) * self.lambda_size + lambda
            }
            ReesElement::Zero => self.nonzero_count(),
        }
    }

    pub fn element(&self, index: usize) -> ReesElement {
        assert!(index < self.len(), "element index out of range");
        if index == self.nonzero_count() {
            return ReesElement::Zero;
        }
        let lambda = index % self.lambda_size;
        let rest = index / self.lambda_size;
        ReesElement::Triple {
            i: rest / self.group.order(),
            g: rest % self.group.order(),
            lambda,
        }
    }

    pub fn triple(&self, i: usize, g: usize, lambda: usize) -> ReesElement {
        assert!(i < self.i_size && g < self.group.order() && lambda < self.lambda_size);
        ReesElement::Triple { i, g, lambda }
    }

    pub fn mul(&self, x: ReesElement, y: ReesElement) -> ReesElement {
        match (x, y) {
            (
                ReesElement::Triple { i, g, lambda },
                ReesElement::Triple { i: j, g: h, lambda: mu },
            ) => match self.sandwich(lambda, j) {
                SandwichEntry::Element(p) => ReesElement::Triple {
                    i,
                    g: self.group.mul(self.group.mul(g, p), h),
                    lambda: mu,
                },
                SandwichEntry::Null => ReesElement::Zero,
            },
            _ => ReesElement::Zero,
        }
    }

    pub fn element_name(&self, x: ReesElement) -> String {
        match x {
            ReesElement::Triple { i, g, lambda } => {
                format!("({}, {}, {})", i + 1, self.group.name(g), lambda + 1)
            }
            ReesElement::Zero => "∅".to_string(),
        }
    }

    fn check_associative(&self) -> Result<(), ReesError> {
        let n = self.len();
        let check = |a: usize, b: usize, c: usize| -> Result<(), ReesError> {
            let (x, y, z) = (self.element(a), self.element(b), self.element(c));
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                return Err(ReesError::NotAssociative {
                    x: self.element_name(x),
                    y: self.element_name(y),
                    z: self.element_name(z),
                });
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    fn basis_names(&self, with_zero: bool) -> Vec<String> {
        let n = if with_zero { self.len() } else { self.nonzero_count() };
        (0..n).map(|k| self.element_name(self.element(k))).collect()
    }

    /// The convolution algebra `ℓ¹(S)` on all of `S`, with `∅` as the last
    /// basis element.
    pub fn full_algebra(&self) -> FiniteAlgebra {
        FiniteAlgebra::from_fn(
            format!("l1({})", self.name),
            self.len(),
            self.basis_names(true),
            None,
            AssociativityCheck::SkipAbove(64),
            |a, b| SparseVec::unit(self.index(self.mul(self.element(a), self.element(b)))),
        )
        .expect("Rees products are associative")
    }

    /// The reduced algebra `A(S) = ℓ¹(S) / Q∅`: products landing on `∅`
    /// become zero.
    pub fn reduced_algebra(&self) -> FiniteAlgebra {
        FiniteAlgebra::from_fn(
            format!("A({})", self.name),
            self.nonzero_count(),
            self.basis_names(false),
            None,
            AssociativityCheck::SkipAbove(64),
            |a, b| match self.mul(self.element(a), self.element(b)) {
                ReesElement::Zero => SparseVec::new(),
                t => SparseVec::unit(self.index(t)),
            },
        )
        .expect("quotients of associative algebras are associative")
    }

    /// `e_i = (i, p_{μi}⁻¹, μ)` for the smallest `μ` with `p_{μi} ≠ o`; a left
    /// unit on the right ideal spanned by `(i, *, *)`.
    pub fn idempotent_e(&self, i: usize) -> ReesElement {
        assert!(i < self.i_size, "i out of range");
        let (mu, p) = (0..self.lambda_size)
            .find_map(|mu| self.sandwich(mu, i).element().map(|p| (mu, p)))
            .expect("sandwich columns are nonempty");
        ReesElement::Triple { i, g: self.group.inv(p), lambda: mu }
    }

    /// `f_λ = (j, p_{λj}⁻¹, λ)` for the smallest `j` with `p_{λj} ≠ o`; a
    /// right unit on the left ideal spanned by `(*, *, λ)`.
    pub fn idempotent_f(&self, lambda: usize) -> ReesElement {
        assert!(lambda < self.lambda_size, "λ out of range");
        let (j, p) = (0..self.i_size)
            .find_map(|j| self.sandwich(lambda, j).element().map(|p| (j, p)))
            .expect("sandwich rows are nonempty");
        ReesElement::Triple { i: j, g: self.group.inv(p), lambda }
    }

    /// The idempotent `(i, p_{λi}⁻¹, λ)` at a position with `p_{λi} ≠ o`.
    pub fn corner_idempotent(&self, i: usize, lambda: usize) -> Result<ReesElement, ReesError> {
        match self.sandwich(lambda, i) {
            SandwichEntry::Element(p) => Ok(ReesElement::Triple { i, g: self.group.inv(p), lambda }),
            SandwichEntry::Null => Err(ReesError::ZeroSandwichEntry { i, lambda }),
        }
    }

    /// All `(i, λ)` with `p_{λi} ≠ o`, ordered by `i` then `λ`.
    pub fn valid_positions(&self) -> Vec<(usize, usize)> {
        (0..self.i_size)
            .flat_map(|i| (0..self.lambda_size).map(move |l| (i, l)))
            .filter(|&(i, l)| self.sandwich(l, i) != SandwichEntry::Null)
            .collect()
    }

    /// Basis indices of the reduced algebra grouped into the blocks
    /// `ℓ¹(ᵢS_λ)` spanned by `(i, *, λ)`.
    pub fn block_decomposition(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut blocks = BTreeMap::new();
        for i in 0..self.i_size {
            for lambda in 0..self.lambda_size {
                let members = (0..self.group.order())
                    .map(|g| self.index(ReesElement::Triple { i, g, lambda }))
                    .collect();
                blocks.insert((i, lambda), members);
            }
        }
        blocks
    }

    /// For `p_{λi} ≠ o`, the basis index of `(i, g p_{λi}⁻¹, λ)` for each
    /// group element `g`: an isomorphism `Q[G] → ℓ¹(ᵢS_λ)`.
    pub fn block_isomorphism(&self, i: usize, lambda: usize) -> Result<Vec<usize>, ReesError> {
        let p = self
            .sandwich(lambda, i)
            .element()
            .ok_or(ReesError::ZeroSandwichEntry { i, lambda })?;
        let pinv = self.group.inv(p);
        Ok((0..self.group.order())
            .map(|g| self.index(ReesElement::Triple { i, g: self.group.mul(g, pinv), lambda }))
            .collect())
    }

    /// The nonzero element of `S` whose first index is `i` (for triples).
    pub fn row_index(&self, x: ReesElement) -> Option<usize> {
        match x {
            ReesElement::Triple { i, .. } => Some(i),
            ReesElement::Zero => None,
        }
    }

    pub fn column_index(&self, x: ReesElement) -> Option<usize> {
        match x {
            ReesElement::Triple { lambda, .. } => Some(lambda),
            ReesElement::Zero => None,
        }
    }
}

impl fmt::Debug for ReesSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReesSemigroup")
            .field("name", &self.name)
            .field("group_order", &self.group.order())
            .field("i_size", &self.i_size)
            .field("lambda_size", &self.lambda_size)
            .finish()
    }
}

/// Sandwich matrix induced by a groupoid-style choice of base points:
/// `p_{λi} = (s_{α(i)} t_{β(λ)})⁻¹` when `α(i) = β(λ)`, `o` otherwise.
///
/// `alpha` maps `I` into `X = 0..x_size`, `beta` maps `Λ` into `X`; the
/// images must coincide, which guarantees every row and column gets an entry.
pub fn groupoid_sandwich(
    x_size: usize,
    alpha: &[usize],
    beta: &[usize],
    group: &GroupTable,
    s_choices: &[usize],
    t_choices: &[usize],
) -> Result<Vec<Vec<SandwichEntry>>, ReesError> {
    for &v in alpha.iter().chain(beta) {
        if v >= x_size {
            return Err(ReesError::BadIndexMap { value: v, size: x_size });
        }
    }
    if s_choices.len() != x_size || t_choices.len() != x_size {
        return Err(ReesError::BadShape {
            lambda: x_size,
            i: x_size,
            got: format!("{} s-choices and {} t-choices", s_choices.len(), t_choices.len()),
        });
    }
    let mut image_a: Vec<usize> = alpha.to_vec();
    let mut image_b: Vec<usize> = beta.to_vec();
    image_a.sort_unstable();
    image_a.dedup();
    image_b.sort_unstable();
    image_b.dedup();
    if image_a != image_b {
        return Err(ReesError::RangeMismatch);
    }
    Ok(beta
        .iter()
        .map(|&b| {
            alpha
                .iter()
                .map(|&a| {
                    if a == b {
                        let st = group.mul(s_choices[a], t_choices[b]);
                        SandwichEntry::Element(group.inv(st))
                    } else {
                        SandwichEntry::Null
                    }
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use SandwichEntry::{Element as E, Null as O};

    fn c2_sparse() -> ReesSemigroup {
        // P = [[e, o], [a, e]]
        let g = GroupTable::cyclic(2).unwrap();
        ReesSemigroup::new(g, 2, 2, vec![vec![E(0), O], vec![E(1), E(0)]]).unwrap()
    }

    fn matrix_units(n: usize) -> ReesSemigroup {
        let g = GroupTable::cyclic(1).unwrap();
        let p = (0..n)
            .map(|l| (0..n).map(|i| if i == l { E(0) } else { O }).collect())
            .collect();
        ReesSemigroup::new(g, n, n, p).unwrap()
    }

    #[test]
    fn construction_examples() {
        let g0 = ReesSemigroup::new(GroupTable::cyclic(1).unwrap(), 1, 1, vec![vec![E(0)]]).unwrap();
        assert_eq!(g0.len(), 2);
        let mu = matrix_units(2);
        assert_eq!(mu.len(), 5);
        let err = ReesSemigroup::new(
            GroupTable::cyclic(1).unwrap(),
            2,
            2,
            vec![vec![E(0), E(0)], vec![O, O]],
        )
        .unwrap_err();
        assert_eq!(err, ReesError::EmptyRow(1));
        let err = ReesSemigroup::new(
            GroupTable::cyclic(1).unwrap(),
            2,
            2,
            vec![vec![E(0), O], vec![E(0), O]],
        )
        .unwrap_err();
        assert_eq!(err, ReesError::EmptyColumn(1));
        let err = ReesSemigroup::new(GroupTable::cyclic(1).unwrap(), 2, 1, vec![vec![E(0)]]);
        assert!(matches!(err, Err(ReesError::BadShape { .. })));
    }

    #[test]
    fn size_guard() {
        let g = GroupTable::cyclic(5).unwrap();
        let p = vec![vec![E(0); 30]; 30];
        assert!(matches!(
            ReesSemigroup::new(g.clone(), 30, 30, p.clone()),
            Err(ReesError::TooLarge { size: 4500, .. })
        ));
        assert!(ReesSemigroup::with_options(g, 30, 30, p, true).is_ok());
    }

    #[test]
    fn product_rule_examples() {
        let s = c2_sparse();
        let t = |i, g, l| s.triple(i, g, l);
        assert_eq!(s.mul(t(0, 0, 0), t(0, 0, 0)), t(0, 0, 0));
        assert_eq!(s.mul(t(0, 0, 0), t(1, 0, 1)), ReesElement::Zero);
        assert_eq!(s.mul(t(0, 1, 1), t(0, 0, 1)), t(0, 0, 1));
        assert_eq!(s.mul(ReesElement::Zero, t(0, 0, 0)), ReesElement::Zero);
    }

    #[test]
    fn algebra_dimensions() {
        assert_eq!(matrix_units(2).full_algebra().dim(), 5);
        let g0 = ReesSemigroup::new(GroupTable::cyclic(2).unwrap(), 1, 1, vec![vec![E(0)]]).unwrap();
        assert_eq!(g0.full_algebra().dim(), 3);
        assert_eq!(g0.reduced_algebra().dim(), 2);
    }

    #[test]
    fn zero_spans_an_ideal() {
        let s = c2_sparse();
        let a = s.full_algebra();
        let z = s.index(ReesElement::Zero);
        for x in 0..a.dim() {
            assert_eq!(a.basis_product_vec(x, z), SparseVec::unit(z));
            assert_eq!(a.basis_product_vec(z, x), SparseVec::unit(z));
        }
    }

    #[test]
    fn reduced_matrix_units_are_matrix_algebra() {
        let a = matrix_units(2).reduced_algebra();
        // E_ij is (i, e, j) -> index i*2 + j, the same as matrix_algebra
        assert!(a.same_structure(&crate::algebra::matrix_algebra(2)));
    }

    #[test]
    fn rectangular_band_products() {
        let g = GroupTable::cyclic(1).unwrap();
        let s = ReesSemigroup::new(g, 2, 2, vec![vec![E(0), E(0)], vec![E(0), E(0)]]).unwrap();
        let a = s.reduced_algebra();
        for i in 0..2 {
            for l in 0..2 {
                for j in 0..2 {
                    for m in 0..2 {
                        let x = s.index(s.triple(i, 0, l));
                        let y = s.index(s.triple(j, 0, m));
                        let z = s.index(s.triple(i, 0, m));
                        assert_eq!(a.basis_product_vec(x, y), SparseVec::unit(z));
                    }
                }
            }
        }
    }

    #[test]
    fn idempotent_examples() {
        let mu = matrix_units(2);
        assert_eq!(mu.idempotent_e(0), mu.triple(0, 0, 0));
        assert_eq!(mu.idempotent_f(1), mu.triple(1, 0, 1));
        let s = c2_sparse();
        assert_eq!(s.idempotent_e(0), s.triple(0, 0, 0));
        assert_eq!(s.idempotent_e(1), s.triple(1, 0, 1));
        assert_eq!(s.idempotent_f(1), s.triple(0, 1, 1));
        for i in 0..2 {
            let e = s.idempotent_e(i);
            assert_eq!(s.mul(e, e), e);
            let f = s.idempotent_f(i);
            assert_eq!(s.mul(f, f), f);
        }
    }

    #[test]
    fn idempotents_are_one_sided_units() {
        let s = c2_sparse();
        for k in 0..s.nonzero_count() {
            let x = s.element(k);
            let ReesElement::Triple { i, lambda, .. } = x else { unreachable!() };
            assert_eq!(s.mul(s.idempotent_e(i), x), x);
            assert_eq!(s.mul(x, s.idempotent_f(lambda)), x);
        }
    }

    #[test]
    fn blocks_partition_basis() {
        let s = c2_sparse();
        let blocks = s.block_decomposition();
        assert_eq!(blocks.len(), 4);
        let mut all: Vec<usize> = blocks.values().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..s.nonzero_count()).collect::<Vec<_>>());
        assert!(blocks.values().all(|b| b.len() == 2));
        assert_eq!(matrix_units(2).block_decomposition().len(), 4);
    }

    #[test]
    fn block_isomorphism_is_multiplicative() {
        let s = c2_sparse();
        let a = s.reduced_algebra();
        for (i, l) in s.valid_positions() {
            let iso = s.block_isomorphism(i, l).unwrap();
            for g in 0..2 {
                for h in 0..2 {
                    let gh = s.group().mul(g, h);
                    assert_eq!(a.basis_product_vec(iso[g], iso[h]), SparseVec::unit(iso[gh]));
                }
            }
        }
        assert!(s.block_isomorphism(1, 0).is_err());
    }

    #[test]
    fn groupoid_examples() {
        let g = GroupTable::cyclic(2).unwrap();
        let p = groupoid_sandwich(1, &[0, 0], &[0, 0], &g, &[0], &[0]).unwrap();
        assert_eq!(p, vec![vec![E(0), E(0)], vec![E(0), E(0)]]);
        let p = groupoid_sandwich(2, &[0, 1], &[1, 0], &g, &[1, 0], &[1, 1]).unwrap();
        assert_eq!(p[0][0], O);
        assert_eq!(p[1][1], O);
        assert!(p[0][1] != O && p[1][0] != O);
        assert_eq!(
            groupoid_sandwich(2, &[0, 1], &[0, 0], &g, &[0, 0], &[0, 0]),
            Err(ReesError::RangeMismatch)
        );
    }
}
