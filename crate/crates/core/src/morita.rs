//! The Morita context between `A(S)` and `Q[G]` given by a corner idempotent
//! `e = (i, p_{λi}⁻¹, λ)`: `P = eA(S)` and `Q = A(S)e` with `eA(S)e ≅ Q[G]`.
//! The functors `Φ = P ⊗ - ⊗ Q` and `Γ = Q ⊗ - ⊗ P` move bimodules between
//! the two sides, and the invariance harness compares Hochschild data.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{group_algebra, unitize, FiniteAlgebra};
use crate::bimodule::{
    balanced_tensor, corner_modules, inducedness_check, regular_bimodule, triple_tensor, Bimodule,
    BimoduleError, BimoduleMap, Corner, TripleTensor,
};
use crate::hochschild::{hochschild_complex, homology, HochschildError, HomologyReport};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::rees::{ReesError, ReesSemigroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoritaError {
    #[error(transparent)]
    Rees(#[from] ReesError),
    #[error(transparent)]
    Bimodule(#[from] BimoduleError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error("corner eAe is not isomorphic to Q[G] through the block map")]
    CornerMismatch,
    #[error("{0} is not induced, so the functors need not be inverse on it")]
    NotInduced(String),
}

/// A verified Morita context for one choice of `(i, λ)`.
#[derive(Clone, Debug)]
pub struct MoritaWitness {
    pub position: (usize, usize),
    pub algebra: Arc<FiniteAlgebra>,
    pub group_algebra: Arc<FiniteAlgebra>,
    pub corner: Corner,
    /// `g ↦ (i, g p_{λi}⁻¹, λ)` as basis indices of `A(S)`.
    pub block: Vec<usize>,
    /// `P = eA(S)` as a `Q[G]`-`A(S)` bimodule.
    pub p: Arc<Bimodule>,
    /// `Q = A(S)e` as an `A(S)`-`Q[G]` bimodule.
    pub q: Arc<Bimodule>,
    /// Multiplication `P ⊗_{A(S)} Q → Q[G]`.
    pub pq: BimoduleMap,
    /// Multiplication `Q ⊗_{Q[G]} P → A(S)`.
    pub qp: BimoduleMap,
}

/// Shape data of a witness, equal for every valid choice of `(i, λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSummary {
    pub algebra_dim: usize,
    pub corner_dim: usize,
    pub p_dim: usize,
    pub q_dim: usize,
    pub pq_tensor_dim: usize,
    pub pq_rank: usize,
    pub qp_tensor_dim: usize,
    pub qp_rank: usize,
}

impl MoritaWitness {
    pub fn summary(&self) -> WitnessSummary {
        WitnessSummary {
            algebra_dim: self.algebra.dim(),
            corner_dim: self.corner.b.dim(),
            p_dim: self.p.dim(),
            q_dim: self.q.dim(),
            pq_tensor_dim: self.pq.source().dim(),
            pq_rank: self.pq.rank(),
            qp_tensor_dim: self.qp.source().dim(),
            qp_rank: self.qp.rank(),
        }
    }

    /// Both multiplication maps are bimodule isomorphisms.
    pub fn is_equivalence(&self) -> bool {
        self.pq.is_isomorphism() && self.qp.is_isomorphism()
    }

    fn qp_table(&self) -> Vec<Vec<SparseVec>> {
        qp_products(&self.algebra, &self.corner)
    }

    fn pq_table(&self) -> Vec<Vec<SparseVec>> {
        pq_products(&self.algebra, &self.corner, &self.block)
    }
}

/// `q_a p_b` in `A(S)`, indexed `[a][b]`.
fn qp_products(a: &FiniteAlgebra, c: &Corner) -> Vec<Vec<SparseVec>> {
    let (p, q) = (c.p_basis.vectors(), c.q_basis.vectors());
    q.iter().map(|u| p.iter().map(|v| a.mul_vec(u, v)).collect()).collect()
}

/// `p_a q_b` in `Q[G]`, indexed `[a][b]`, read off the block `eA(S)e`.
fn pq_products(a: &FiniteAlgebra, c: &Corner, block: &[usize]) -> Vec<Vec<SparseVec>> {
    let inverse: HashMap<usize, usize> = block.iter().enumerate().map(|(g, &k)| (k, g)).collect();
    let to_group = |v: SparseVec| {
        SparseVec::from_terms(
            v.into_entries().into_iter().map(|(k, x)| (*inverse.get(&k).expect("product lies in the corner"), x)),
        )
    };
    let (p, q) = (c.p_basis.vectors(), c.q_basis.vectors());
    p.iter().map(|u| q.iter().map(|v| to_group(a.mul_vec(u, v))).collect()).collect()
}

/// Builds and verifies the Morita context at `(i, λ)`.
pub fn build_witness(s: &ReesSemigroup, i: usize, lambda: usize) -> Result<MoritaWitness, MoritaError> {
    let e = s.corner_idempotent(i, lambda)?;
    let block = s.block_isomorphism(i, lambda)?;
    let algebra = Arc::new(s.reduced_algebra().with_name("A(S)"));
    let group = Arc::new(group_algebra(s.group()).with_name("Q[G]"));
    let corner = corner_modules(&algebra, &algebra.basis_element(s.index(e)))?;

    let images: Vec<SparseVec> = block
        .iter()
        .map(|&k| corner.b_basis.coordinates(&SparseVec::unit(k)).ok_or(MoritaError::CornerMismatch))
        .collect::<Result<_, _>>()?;
    if corner.b.dim() != group.dim() {
        return Err(MoritaError::CornerMismatch);
    }
    let g = s.group();
    for x in 0..g.order() {
        for y in 0..g.order() {
            if corner.b.mul_vec(&images[x], &images[y]) != images[g.mul(x, y)] {
                return Err(MoritaError::CornerMismatch);
            }
        }
    }

    let a_units: Vec<SparseVec> = (0..algebra.dim()).map(SparseVec::unit).collect();
    let p = Arc::new(
        corner.p.pull_back(Arc::clone(&group), &images, Arc::clone(&algebra), &a_units)?.with_name("P"),
    );
    let q = Arc::new(
        corner.q.pull_back(Arc::clone(&algebra), &a_units, Arc::clone(&group), &images)?.with_name("Q"),
    );

    let pq_table = pq_products(&algebra, &corner, &block);
    let t = balanced_tensor(&p, &q)?;
    let pq_matrix = multiplication_matrix(&t.module, group.dim(), |c| {
        t.lift(&SparseVec::unit(c)).into_iter().map(|((a, b), coef)| pq_table[a][b].scale(&coef)).collect()
    });
    let pq = BimoduleMap::new(Arc::new(t.module), Arc::new(regular_bimodule(&group)), pq_matrix)?;

    let qp_table = qp_products(&algebra, &corner);
    let t = balanced_tensor(&q, &p)?;
    let qp_matrix = multiplication_matrix(&t.module, algebra.dim(), |c| {
        t.lift(&SparseVec::unit(c)).into_iter().map(|((a, b), coef)| qp_table[a][b].scale(&coef)).collect()
    });
    let qp = BimoduleMap::new(Arc::new(t.module), Arc::new(regular_bimodule(&algebra)), qp_matrix)?;

    Ok(MoritaWitness { position: (i, lambda), algebra, group_algebra: group, corner, block, p, q, pq, qp })
}

fn multiplication_matrix<F>(source: &Bimodule, target_dim: usize, column_terms: F) -> SparseMatrix
where
    F: Fn(usize) -> Vec<SparseVec>,
{
    SparseMatrix::from_columns(
        target_dim,
        (0..source.dim()).map(|c| column_terms(c).iter().fold(SparseVec::new(), |acc, v| acc.add(v))),
    )
}

/// `Φ(X) = P ⊗_{A(S)} X ⊗_{A(S)} Q` with its tensor data.
pub fn phi_tensor(w: &MoritaWitness, x: &Bimodule) -> Result<TripleTensor, MoritaError> {
    Ok(triple_tensor(&w.p, x, &w.q)?)
}

/// `Γ(Y) = Q ⊗_{Q[G]} Y ⊗_{Q[G]} P` with its tensor data.
pub fn gamma_tensor(w: &MoritaWitness, y: &Bimodule) -> Result<TripleTensor, MoritaError> {
    Ok(triple_tensor(&w.q, y, &w.p)?)
}

/// `Φ(X)`, an `Q[G]`-bimodule.
pub fn phi(w: &MoritaWitness, x: &Bimodule) -> Result<Bimodule, MoritaError> {
    let name = format!("Phi({})", x.name());
    Ok(phi_tensor(w, x)?.outer.module.with_name(name))
}

/// `Γ(Y)`, an `A(S)`-bimodule.
pub fn gamma(w: &MoritaWitness, y: &Bimodule) -> Result<Bimodule, MoritaError> {
    let name = format!("Gamma({})", y.name());
    Ok(gamma_tensor(w, y)?.outer.module.with_name(name))
}

/// The evaluation `u ⊗ (a ⊗ x ⊗ b) ⊗ v ↦ (u a)·x·(b v)` from a nested
/// triple tensor back to the module `x`.
fn evaluation_matrix(
    outer: &TripleTensor,
    inner: &TripleTensor,
    left: &[Vec<SparseVec>],
    right: &[Vec<SparseVec>],
    x: &Bimodule,
) -> SparseMatrix {
    let inner_lifts: Vec<_> =
        (0..inner.module().dim()).map(|t| inner.lift(&SparseVec::unit(t))).collect();
    SparseMatrix::from_columns(
        x.dim(),
        (0..outer.module().dim()).map(|c| {
            let mut acc = SparseVec::new();
            for ((u, t, v), c1) in outer.lift(&SparseVec::unit(c)) {
                for ((a, xi, b), c2) in &inner_lifts[t] {
                    let y = x.act_right(&x.act_left(&left[u][*a], &SparseVec::unit(*xi)), &right[*b][v]);
                    acc = acc.add_scaled(&(&c1 * c2), &y);
                }
            }
            acc
        }),
    )
}

/// Result of a round trip through both functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roundtrip {
    pub module_dim: usize,
    pub image_dim: usize,
    pub roundtrip_dim: usize,
    pub evaluation_rank: usize,
    pub isomorphic: bool,
}

/// For an induced `A(S)`-bimodule `X`, checks that evaluation
/// `Γ(Φ(X)) → X` is a bimodule isomorphism.
pub fn roundtrip_check(w: &MoritaWitness, x: &Bimodule) -> Result<Roundtrip, MoritaError> {
    if !inducedness_check(x).induced {
        return Err(MoritaError::NotInduced(x.name().to_string()));
    }
    let inner = phi_tensor(w, x)?;
    let outer = gamma_tensor(w, inner.module())?;
    let table = w.qp_table();
    let m = evaluation_matrix(&outer, &inner, &table, &table, x);
    finish_roundtrip(x, inner.module().dim(), outer, m)
}

/// For an induced `Q[G]`-bimodule `Y`, checks that evaluation
/// `Φ(Γ(Y)) → Y` is a bimodule isomorphism.
pub fn reverse_roundtrip_check(w: &MoritaWitness, y: &Bimodule) -> Result<Roundtrip, MoritaError> {
    if !inducedness_check(y).induced {
        return Err(MoritaError::NotInduced(y.name().to_string()));
    }
    let inner = gamma_tensor(w, y)?;
    let outer = phi_tensor(w, inner.module())?;
    let table = w.pq_table();
    let m = evaluation_matrix(&outer, &inner, &table, &table, y);
    finish_roundtrip(y, inner.module().dim(), outer, m)
}

fn finish_roundtrip(
    x: &Bimodule,
    image_dim: usize,
    outer: TripleTensor,
    m: SparseMatrix,
) -> Result<Roundtrip, MoritaError> {
    let roundtrip_dim = outer.module().dim();
    let map = BimoduleMap::new(Arc::new(outer.outer.module), Arc::new(x.clone()), m)?;
    Ok(Roundtrip {
        module_dim: x.dim(),
        image_dim,
        roundtrip_dim,
        evaluation_rank: map.rank(),
        isomorphic: map.is_isomorphism(),
    })
}

/// One column of the invariance table.
#[derive(Clone, Debug)]
pub struct InvarianceColumn {
    pub label: String,
    pub report: HomologyReport,
}

/// An equality asserted across columns over a range of degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceAssertion {
    pub description: String,
    pub columns: Vec<String>,
    pub degrees: Vec<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct InvarianceTable {
    pub instance_name: String,
    pub max_degree: usize,
    pub columns: Vec<InvarianceColumn>,
    pub assertions: Vec<InvarianceAssertion>,
}

impl InvarianceTable {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.holds)
    }

    pub fn column(&self, label: &str) -> Option<&HomologyReport> {
        self.columns.iter().find(|c| c.label == label).map(|c| &c.report)
    }
}

fn regular_report(a: &Arc<FiniteAlgebra>, max_degree: usize, cap: usize) -> Result<HomologyReport, MoritaError> {
    let x = regular_bimodule(a);
    let c = hochschild_complex(a, &x, max_degree, cap)?;
    Ok(homology(&c, a.name(), x.name()))
}

fn compare(table: &[InvarianceColumn], labels: &[&str], degrees: std::ops::Range<usize>, description: &str) -> InvarianceAssertion {
    let reports: Vec<&HomologyReport> =
        labels.iter().map(|l| &table.iter().find(|c| c.label == *l).expect("known column").report).collect();
    let degrees: Vec<usize> = degrees.collect();
    let holds = degrees.iter().all(|&n| {
        reports.windows(2).all(|w| {
            w[0].homology_dims[n] == w[1].homology_dims[n] && w[0].cohomology_dims[n] == w[1].cohomology_dims[n]
        })
    });
    InvarianceAssertion {
        description: description.to_string(),
        columns: labels.iter().map(|l| l.to_string()).collect(),
        degrees,
        holds,
    }
}

/// Hochschild homology and cohomology with regular coefficients for
/// `A(S)`, `Q[G]`, `ℓ¹(S)`, `A(S)#`, `ℓ¹(S)#`, plus `Q[G]` with
/// coefficients `Φ(A(S))`, up to `max_degree`.
///
/// Comparisons are made only in degrees below `max_degree`, whose values do
/// not depend on the truncation.
pub fn invariance_harness(
    s: &ReesSemigroup,
    w: &MoritaWitness,
    max_degree: usize,
    cap: usize,
) -> Result<InvarianceTable, MoritaError> {
    let reduced = Arc::clone(&w.algebra);
    let full = Arc::new(s.full_algebra().with_name("l1(S)"));
    let algebras = [
        ("A(S)", Arc::clone(&reduced)),
        ("Q[G]", Arc::clone(&w.group_algebra)),
        ("l1(S)", Arc::clone(&full)),
        ("A(S)#", Arc::new(unitize(&reduced).with_name("A(S)#"))),
        ("l1(S)#", Arc::new(unitize(&full).with_name("l1(S)#"))),
    ];
    let mut columns = Vec::new();
    for (label, a) in algebras {
        columns.push(InvarianceColumn { label: label.to_string(), report: regular_report(&a, max_degree, cap)? });
    }
    let transported = phi(w, &regular_bimodule(&reduced))?;
    let c = hochschild_complex(&w.group_algebra, &transported, max_degree, cap)?;
    columns.push(InvarianceColumn {
        label: "Q[G];Phi(A(S))".to_string(),
        report: homology(&c, w.group_algebra.name(), transported.name()),
    });

    let certified = 0..max_degree;
    let positive = 1.min(max_degree)..max_degree;
    let assertions = vec![
        compare(&columns, &["A(S)", "Q[G]"], certified.clone(), "A(S) and Q[G] agree"),
        compare(&columns, &["A(S)", "Q[G];Phi(A(S))"], certified, "coefficients transported by Phi agree"),
        compare(
            &columns,
            &["A(S)", "Q[G]", "l1(S)", "A(S)#", "l1(S)#"],
            positive,
            "all algebras agree in positive degrees",
        ),
    ];
    Ok(InvarianceTable { instance_name: s.name().to_string(), max_degree, columns, assertions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroupTable;
    use crate::hochschild::DEFAULT_CHAIN_CAP;
    use crate::rees::SandwichEntry::{Element as E, Null as O};

    fn c2_sparse() -> ReesSemigroup {
        ReesSemigroup::new(GroupTable::cyclic(2).unwrap(), 2, 2, vec![vec![E(0), O], vec![E(1), E(0)]]).unwrap()
    }

    fn matrix_units(n: usize) -> ReesSemigroup {
        let p = (0..n).map(|l| (0..n).map(|i| if i == l { E(0) } else { O }).collect()).collect();
        ReesSemigroup::new(GroupTable::cyclic(1).unwrap(), n, n, p).unwrap()
    }

    #[test]
    fn witness_is_an_equivalence() {
        let s = c2_sparse();
        let w = build_witness(&s, 0, 0).unwrap();
        assert!(w.is_equivalence());
        let sum = w.summary();
        assert_eq!((sum.algebra_dim, sum.corner_dim, sum.p_dim, sum.q_dim), (8, 2, 4, 4));
        assert_eq!((sum.pq_tensor_dim, sum.qp_tensor_dim), (2, 8));
    }

    #[test]
    fn zero_entry_is_rejected() {
        let err = build_witness(&c2_sparse(), 1, 0).unwrap_err();
        assert_eq!(err, MoritaError::Rees(ReesError::ZeroSandwichEntry { i: 1, lambda: 0 }));
    }

    #[test]
    fn choice_does_not_matter() {
        let s = c2_sparse();
        let summaries: Vec<_> =
            s.valid_positions().into_iter().map(|(i, l)| build_witness(&s, i, l).unwrap().summary()).collect();
        assert_eq!(summaries.len(), 3);
        assert!(summaries.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn functors_on_regular_modules() {
        let s = c2_sparse();
        let w = build_witness(&s, 0, 0).unwrap();
        let a = regular_bimodule(&w.algebra);
        assert_eq!(phi(&w, &a).unwrap().dim(), 2);
        let g = regular_bimodule(&w.group_algebra);
        assert_eq!(gamma(&w, &g).unwrap().dim(), 8);
        let r = roundtrip_check(&w, &a).unwrap();
        assert!(r.isomorphic, "{r:?}");
        let r = reverse_roundtrip_check(&w, &g).unwrap();
        assert!(r.isomorphic, "{r:?}");
    }

    #[test]
    fn non_induced_module_is_refused() {
        let w = build_witness(&matrix_units(2), 0, 0).unwrap();
        let trivial = Bimodule::trivial(Arc::clone(&w.algebra), Arc::clone(&w.algebra), 1);
        assert!(matches!(roundtrip_check(&w, &trivial), Err(MoritaError::NotInduced(_))));
        assert_eq!(phi(&w, &trivial).unwrap().dim(), 0);
    }

    #[test]
    fn harness_on_small_instances() {
        for s in [matrix_units(2), c2_sparse()] {
            let w = build_witness(&s, 0, 0).unwrap();
            let t = invariance_harness(&s, &w, 3, DEFAULT_CHAIN_CAP).unwrap();
            assert!(t.passed(), "{:?}", t.assertions);
            let order = s.group().order();
            assert_eq!(t.column("A(S)").unwrap().certified_homology(), [order, 0, 0]);
            assert_eq!(t.column("l1(S)").unwrap().homology_dims[0], order + 1);
        }
    }
}
