//! Structural certificates for Rees semigroup algebras: one-sided
//! splittings of multiplication, the averaged biprojectivity diagonal,
//! self-inducedness and weak amenability.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{unitize, FiniteAlgebra};
use crate::bimodule::{inducedness_check, regular_bimodule};
use crate::hochschild::{
    direct_cochain_complex, hochschild_complex, homology, HochschildError,
};
use crate::linalg::{Rational, SparseVec};
use crate::rees::{ReesElement, ReesError, ReesSemigroup};

/// Outcome of one certificate. `passed` holds iff every sub-assertion held.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub instance_name: String,
    pub passed: bool,
    pub details: BTreeMap<String, Value>,
}

impl CheckReport {
    fn new(check_name: &str, instance_name: &str) -> Self {
        CheckReport {
            check_name: check_name.to_string(),
            instance_name: instance_name.to_string(),
            passed: true,
            details: BTreeMap::new(),
        }
    }

    fn record(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }

    /// Records a sub-assertion and folds it into `passed`.
    fn assert(&mut self, key: &str, result: Result<(), String>) {
        match result {
            Ok(()) => self.record(key, json!("ok")),
            Err(why) => {
                self.passed = false;
                self.record(key, json!(format!("failed: {why}")));
            }
        }
    }
}

/// Which semigroup algebra a splitting lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    /// `ℓ¹(S)`, with `∅` as the last basis element.
    Full,
    /// `A(S) = ℓ¹(S)/Q∅`.
    Reduced,
}

fn tensor(d: usize, terms: impl IntoIterator<Item = ((usize, usize), Rational)>) -> SparseVec {
    SparseVec::from_terms(terms.into_iter().map(|((u, v), c)| (u * d + v, c)))
}

/// `(u - ∅) ⊗ (v - ∅) + ∅ ⊗ ∅` for basis indices of `ℓ¹(S)`.
fn shifted_tensor(d: usize, u: usize, v: usize, z: usize) -> SparseVec {
    let one = Rational::one;
    tensor(
        d,
        [
            ((u, v), one()),
            ((u, z), -one()),
            ((z, v), -one()),
            ((z, z), one() + one()),
        ],
    )
}

/// A right-module splitting `ρ: A → A ⊗ A` of multiplication, indexed
/// `u * dim + v` in the tensor square.
///
/// On `A(S)` it is `ρ(x) = e_i ⊗ x` for `x = (i, g, λ)`. On `ℓ¹(S)` the
/// central idempotent `∅` splits off a copy of `Q`, and the splitting is
/// `ρ(x) = (e_i − ∅) ⊗ (x − ∅) + ∅ ⊗ ∅`, `ρ(∅) = ∅ ⊗ ∅`.
pub fn right_splitting(s: &ReesSemigroup, which: AlgebraKind) -> Vec<SparseVec> {
    let n = s.nonzero_count();
    match which {
        AlgebraKind::Reduced => (0..n)
            .map(|k| {
                let i = s.row_index(s.element(k)).expect("triples only");
                let e = s.index(s.idempotent_e(i));
                SparseVec::unit(e * n + k)
            })
            .collect(),
        AlgebraKind::Full => {
            let (d, z) = (n + 1, n);
            (0..d)
                .map(|k| match s.element(k) {
                    ReesElement::Zero => SparseVec::unit(z * d + z),
                    ReesElement::Triple { i, .. } => shifted_tensor(d, s.index(s.idempotent_e(i)), k, z),
                })
                .collect()
        }
    }
}

/// The left-module mirror of [`right_splitting`], built from `f_λ`.
pub fn left_splitting(s: &ReesSemigroup, which: AlgebraKind) -> Vec<SparseVec> {
    let n = s.nonzero_count();
    match which {
        AlgebraKind::Reduced => (0..n)
            .map(|k| {
                let l = s.column_index(s.element(k)).expect("triples only");
                let f = s.index(s.idempotent_f(l));
                SparseVec::unit(k * n + f)
            })
            .collect(),
        AlgebraKind::Full => {
            let (d, z) = (n + 1, n);
            (0..d)
                .map(|k| match s.element(k) {
                    ReesElement::Zero => SparseVec::unit(z * d + z),
                    ReesElement::Triple { lambda, .. } => {
                        shifted_tensor(d, k, s.index(s.idempotent_f(lambda)), z)
                    }
                })
                .collect()
        }
    }
}

/// The extension `ρ(∅) = e_1 ⊗ ∅` of the reduced splitting to `ℓ¹(S)`. It
/// splits multiplication but fails to be a right-module map as soon as some
/// product from a row other than the first lands on `∅`.
pub fn naive_full_splitting(s: &ReesSemigroup) -> Vec<SparseVec> {
    let n = s.nonzero_count();
    let (d, z) = (n + 1, n);
    (0..d)
        .map(|k| match s.element(k) {
            ReesElement::Zero => SparseVec::unit(s.index(s.idempotent_e(0)) * d + z),
            ReesElement::Triple { i, .. } => SparseVec::unit(s.index(s.idempotent_e(i)) * d + k),
        })
        .collect()
}

/// Applies multiplication `A ⊗ A → A`.
fn multiply(a: &FiniteAlgebra, t: &SparseVec) -> SparseVec {
    let d = a.dim();
    SparseVec::from_terms(t.iter().flat_map(|(p, c)| {
        a.basis_product(p / d, p % d).map(move |(k, w)| (k, w * c)).collect::<Vec<_>>()
    }))
}

/// `t · e_j` acting on the right tensor factor.
fn right_act(a: &FiniteAlgebra, t: &SparseVec, j: usize) -> SparseVec {
    let d = a.dim();
    SparseVec::from_terms(t.iter().flat_map(|(p, c)| {
        a.basis_product(p % d, j).map(move |(k, w)| ((p / d) * d + k, w * c)).collect::<Vec<_>>()
    }))
}

/// `e_j · t` acting on the left tensor factor.
fn left_act(a: &FiniteAlgebra, j: usize, t: &SparseVec) -> SparseVec {
    let d = a.dim();
    SparseVec::from_terms(t.iter().flat_map(|(p, c)| {
        a.basis_product(j, p / d).map(move |(k, w)| (k * d + p % d, w * c)).collect::<Vec<_>>()
    }))
}

fn linear_extend(rho: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (k, c) in v.iter() {
        out = out.add_scaled(c, &rho[k]);
    }
    out
}

fn check_sections(a: &FiniteAlgebra, rho: &[SparseVec]) -> Result<(), String> {
    let d = a.dim();
    if rho.len() != d {
        return Err(format!("expected {d} images, got {}", rho.len()));
    }
    for (k, img) in rho.iter().enumerate() {
        if multiply(a, img) != SparseVec::unit(k) {
            return Err(format!("Π∘ρ differs from the identity on {}", a.basis_name(k)));
        }
    }
    Ok(())
}

/// `Π∘ρ = id` and `ρ(xy) = ρ(x)·y` on all basis pairs.
pub fn verify_right_splitting(a: &FiniteAlgebra, rho: &[SparseVec]) -> Result<(), String> {
    check_sections(a, rho)?;
    for x in 0..a.dim() {
        for y in 0..a.dim() {
            if linear_extend(rho, &a.basis_product_vec(x, y)) != right_act(a, &rho[x], y) {
                return Err(format!(
                    "ρ(xy) ≠ ρ(x)y for x = {}, y = {}",
                    a.basis_name(x),
                    a.basis_name(y)
                ));
            }
        }
    }
    Ok(())
}

/// `Π∘λ = id` and `λ(xy) = x·λ(y)` on all basis pairs.
pub fn verify_left_splitting(a: &FiniteAlgebra, rho: &[SparseVec]) -> Result<(), String> {
    check_sections(a, rho)?;
    for x in 0..a.dim() {
        for y in 0..a.dim() {
            if linear_extend(rho, &a.basis_product_vec(x, y)) != left_act(a, x, &rho[y]) {
                return Err(format!(
                    "λ(xy) ≠ xλ(y) for x = {}, y = {}",
                    a.basis_name(x),
                    a.basis_name(y)
                ));
            }
        }
    }
    Ok(())
}

/// `Π∘ρ = id` and `x·ρ(y) = ρ(xy) = ρ(x)·y` on all basis pairs.
pub fn verify_bimodule_splitting(a: &FiniteAlgebra, rho: &[SparseVec]) -> Result<(), String> {
    verify_right_splitting(a, rho)?;
    verify_left_splitting(a, rho)
}

/// Left and right splittings of multiplication on `A(S)` and `ℓ¹(S)`, each
/// a module map: the constructive content of strict projectivity.
pub fn projectivity_check(s: &ReesSemigroup) -> CheckReport {
    let mut r = CheckReport::new("projectivity", s.name());
    r.record("certificate", json!("constructive witness (explicit module splittings)"));
    let reduced = s.reduced_algebra();
    let full = s.full_algebra();
    r.assert("reduced.right", verify_right_splitting(&reduced, &right_splitting(s, AlgebraKind::Reduced)));
    r.assert("reduced.left", verify_left_splitting(&reduced, &left_splitting(s, AlgebraKind::Reduced)));
    r.assert("full.right", verify_right_splitting(&full, &right_splitting(s, AlgebraKind::Full)));
    r.assert("full.left", verify_left_splitting(&full, &left_splitting(s, AlgebraKind::Full)));
    let naive = verify_right_splitting(&full, &naive_full_splitting(s));
    r.record(
        "full.right.naive_extension",
        json!(match naive {
            Ok(()) => "module map on this instance".to_string(),
            Err(why) => format!("not a module map: {why}"),
        }),
    );
    r
}

/// Multiplication `A ⊗_A A ⊗_A A → A` is an isomorphism.
pub fn self_induced_check(a: &Arc<FiniteAlgebra>) -> CheckReport {
    let mut r = CheckReport::new("self_induced", a.name());
    let w = inducedness_check(&regular_bimodule(a));
    r.record("tensor_dim", json!(w.tensor_dim));
    r.record("algebra_dim", json!(w.module_dim));
    r.record("multiplication_rank", json!(w.rank));
    r.passed = w.induced;
    r
}

/// Whether the diagonal carries the `1/|G|` prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Averaged,
    /// Drops `1/|G|`; only useful as a negative control.
    Unnormalized,
}

/// `ρ(j, g, μ) = (1/|G|) Σ_h (j, g h p_{λi}⁻¹, λ) ⊗ (i, h⁻¹, μ)` on `A(S)`.
pub fn biprojective_diagonal(
    s: &ReesSemigroup,
    i: usize,
    lambda: usize,
    normalization: Normalization,
) -> Result<Vec<SparseVec>, ReesError> {
    let g = s.group();
    let p = s
        .sandwich(lambda, i)
        .element()
        .ok_or(ReesError::ZeroSandwichEntry { i, lambda })?;
    let pinv = g.inv(p);
    let n = s.nonzero_count();
    let scale = match normalization {
        Normalization::Averaged => Rational::new(1, g.order() as i64),
        Normalization::Unnormalized => Rational::one(),
    };
    Ok((0..n)
        .map(|k| {
            let ReesElement::Triple { i: j, g: x, lambda: mu } = s.element(k) else {
                unreachable!("reduced basis holds triples only")
            };
            tensor(
                n,
                (0..g.order()).map(|h| {
                    let left = s.index(s.triple(j, g.mul(g.mul(x, h), pinv), lambda));
                    let right = s.index(s.triple(i, g.inv(h), mu));
                    ((left, right), scale.clone())
                }),
            )
        })
        .collect())
}

/// Π∘ρ = id and the two-sided module identity for the averaged diagonal,
/// plus the negative control without `1/|G|`.
pub fn biprojectivity_check(s: &ReesSemigroup, position: Option<(usize, usize)>) -> CheckReport {
    let mut r = CheckReport::new("biprojectivity", s.name());
    r.record("scope", json!("finite G only; the converse for infinite G is not testable here"));
    let (i, lambda) = position.unwrap_or_else(|| s.valid_positions()[0]);
    r.record("position", json!([i + 1, lambda + 1]));
    let a = s.reduced_algebra();
    let rho = match biprojective_diagonal(s, i, lambda, Normalization::Averaged) {
        Ok(rho) => rho,
        Err(e) => {
            r.assert("diagonal", Err(e.to_string()));
            return r;
        }
    };
    r.assert("bimodule_splitting", verify_bimodule_splitting(&a, &rho));
    let order = s.group().order() as i64;
    let coefficients_ok = rho.iter().flat_map(|v| v.iter()).all(|(_, c)| (c * &Rational::from_int(order)).is_integer());
    r.assert(
        "coefficients_in_1/|G|·Z",
        if coefficients_ok { Ok(()) } else { Err("coefficient outside (1/|G|)Z".into()) },
    );
    if order > 1 {
        let bad = biprojective_diagonal(s, i, lambda, Normalization::Unnormalized).expect("position checked above");
        let control = check_sections(&a, &bad);
        r.assert(
            "negative_control_rejected",
            match control {
                Err(_) => Ok(()),
                Ok(()) => Err("diagonal without 1/|G| still splits multiplication".into()),
            },
        );
    } else {
        r.record("negative_control_rejected", json!("not applicable (|G| = 1)"));
    }
    r
}

/// The four algebras attached to a Rees semigroup, in reporting order.
pub fn associated_algebras(s: &ReesSemigroup) -> Vec<(&'static str, Arc<FiniteAlgebra>)> {
    let reduced = s.reduced_algebra();
    let full = s.full_algebra();
    vec![
        ("A(S)", Arc::new(reduced.clone().with_name("A(S)"))),
        ("l1(S)", Arc::new(full.clone().with_name("l1(S)"))),
        ("A(S)#", Arc::new(unitize(&reduced).with_name("A(S)#"))),
        ("l1(S)#", Arc::new(unitize(&full).with_name("l1(S)#"))),
    ]
}

/// `dim H¹(A, A*) = 0` for `A(S)`, `ℓ¹(S)` and both unitizations, computed
/// from the transposed Hochschild complex. With `direct`, the cochain
/// complex is also assembled from the coboundary formula and compared.
pub fn weak_amenability_check(
    s: &ReesSemigroup,
    cap: usize,
    direct: bool,
) -> Result<CheckReport, HochschildError> {
    let mut r = CheckReport::new("weak_amenability", s.name());
    r.record("certificate", json!("dim H^1(A, A*) via transpose duality"));
    for (label, a) in associated_algebras(s) {
        let x = regular_bimodule(&a);
        let c = hochschild_complex(&a, &x, 2, cap)?;
        let h = homology(&c, a.name(), x.name());
        let h1 = h.cohomology_dims[1];
        r.record(&format!("{label}.H^1"), json!(h1));
        r.assert(&format!("{label}.vanishes"), if h1 == 0 { Ok(()) } else { Err(format!("H^1 has dimension {h1}")) });
        r.assert(
            &format!("{label}.matches_H_1"),
            if h.homology_dims[1] == h1 { Ok(()) } else { Err(format!("H_1 = {}", h.homology_dims[1])) },
        );
        if direct {
            let direct_h1 = direct_cochain_complex(&a, &x, 2, cap)?.cohomology_dims()[1];
            r.record(&format!("{label}.H^1_direct"), json!(direct_h1));
            r.assert(
                &format!("{label}.direct_agrees"),
                if direct_h1 == h1 { Ok(()) } else { Err(format!("direct cochains give {direct_h1}")) },
            );
        }
    }
    Ok(r)
}

/// Randomized identities on integer combinations of basis elements of
/// `A(S)` and `ℓ¹(S)`: associativity and the module property of both
/// splittings, seeded so that a run is reproducible.
pub fn random_spot_check(s: &ReesSemigroup, seed: u64, samples: usize) -> CheckReport {
    let mut r = CheckReport::new("random_spot_check", s.name());
    r.record("seed", json!(seed));
    r.record("samples", json!(samples));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (label, kind) in [("reduced", AlgebraKind::Reduced), ("full", AlgebraKind::Full)] {
        let a = match kind {
            AlgebraKind::Reduced => s.reduced_algebra(),
            AlgebraKind::Full => s.full_algebra(),
        };
        let rho = right_splitting(s, kind);
        let d = a.dim();
        let mut random = || {
            SparseVec::from_terms(
                (0..3).map(|_| (rng.gen_range(0..d), Rational::from_int(rng.gen_range(-3..=3)))),
            )
        };
        let mut failure = None;
        for _ in 0..samples {
            let (x, y, z) = (random(), random(), random());
            if a.mul_vec(&a.mul_vec(&x, &y), &z) != a.mul_vec(&x, &a.mul_vec(&y, &z)) {
                failure = Some("associativity".to_string());
                break;
            }
            let rho_x = linear_extend(&rho, &x);
            let right = y.iter().fold(SparseVec::new(), |acc, (j, c)| acc.add_scaled(c, &right_act(&a, &rho_x, j)));
            if linear_extend(&rho, &a.mul_vec(&x, &y)) != right {
                failure = Some("right splitting".to_string());
                break;
            }
        }
        r.assert(label, failure.map_or(Ok(()), Err));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{zero_algebra, GroupTable};
    use crate::hochschild::DEFAULT_CHAIN_CAP;
    use crate::rees::SandwichEntry::{Element as E, Null as O};

    fn matrix_units(n: usize) -> ReesSemigroup {
        let p = (0..n).map(|l| (0..n).map(|i| if i == l { E(0) } else { O }).collect()).collect();
        ReesSemigroup::new(GroupTable::cyclic(1).unwrap(), n, n, p).unwrap()
    }

    fn c2_sparse() -> ReesSemigroup {
        ReesSemigroup::new(GroupTable::cyclic(2).unwrap(), 2, 2, vec![vec![E(0), O], vec![E(1), E(0)]]).unwrap()
    }

    fn rectangular_band() -> ReesSemigroup {
        ReesSemigroup::new(GroupTable::cyclic(1).unwrap(), 2, 2, vec![vec![E(0), E(0)], vec![E(0), E(0)]]).unwrap()
    }

    #[test]
    fn right_splitting_examples() {
        let s = matrix_units(2);
        let rho = right_splitting(&s, AlgebraKind::Reduced);
        // ρ(E12) = E11 ⊗ E12
        let (e11, e12) = (s.index(s.triple(0, 0, 0)), s.index(s.triple(0, 0, 1)));
        assert_eq!(rho[e12], SparseVec::unit(e11 * 4 + e12));
        let b = rectangular_band();
        let rho = right_splitting(&b, AlgebraKind::Reduced);
        let a = b.reduced_algebra();
        let (a11, a12, a21) = (b.index(b.triple(0, 0, 0)), b.index(b.triple(0, 0, 1)), b.index(b.triple(1, 0, 0)));
        assert_eq!(rho[a12], SparseVec::unit(a11 * 4 + a12));
        assert_eq!(right_act(&a, &rho[a12], a21), SparseVec::unit(a11 * 4 + a11));
    }

    #[test]
    fn splittings_verify() {
        for s in [matrix_units(2), matrix_units(3), c2_sparse(), rectangular_band()] {
            let r = projectivity_check(&s);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn naive_extension_breaks_on_matrix_units() {
        let s = matrix_units(2);
        let full = s.full_algebra();
        assert!(check_sections(&full, &naive_full_splitting(&s)).is_ok());
        assert!(verify_right_splitting(&full, &naive_full_splitting(&s)).is_err());
        assert!(verify_right_splitting(&full, &right_splitting(&s, AlgebraKind::Full)).is_ok());
    }

    #[test]
    fn corrupted_splitting_fails() {
        // use f-idempotents on the wrong side
        let s = c2_sparse();
        let a = s.reduced_algebra();
        let wrong = left_splitting(&s, AlgebraKind::Reduced);
        assert!(verify_right_splitting(&a, &wrong).is_err());
    }

    #[test]
    fn diagonal_examples() {
        let s = matrix_units(2);
        let rho = biprojective_diagonal(&s, 0, 0, Normalization::Averaged).unwrap();
        for j in 0..2 {
            for mu in 0..2 {
                let k = s.index(s.triple(j, 0, mu));
                let (l, r) = (s.index(s.triple(j, 0, 0)), s.index(s.triple(0, 0, mu)));
                assert_eq!(rho[k], SparseVec::unit(l * 4 + r));
            }
        }
        let s = c2_sparse();
        let rho = biprojective_diagonal(&s, 0, 0, Normalization::Averaged).unwrap();
        for v in &rho {
            assert_eq!(v.nnz(), 2);
            assert!(v.iter().all(|(_, c)| *c == Rational::new(1, 2)));
        }
        assert_eq!(
            biprojective_diagonal(&s, 1, 0, Normalization::Averaged),
            Err(ReesError::ZeroSandwichEntry { i: 1, lambda: 0 })
        );
    }

    #[test]
    fn biprojectivity_reports() {
        for s in [matrix_units(2), matrix_units(3), c2_sparse()] {
            assert!(biprojectivity_check(&s, None).passed);
        }
        let s = c2_sparse();
        let a = s.reduced_algebra();
        let bad = biprojective_diagonal(&s, 0, 0, Normalization::Unnormalized).unwrap();
        // Π∘ρ = 2·id
        assert_eq!(multiply(&a, &bad[0]), SparseVec::single(0, Rational::from_int(2)));
    }

    #[test]
    fn self_induced_examples() {
        let s = matrix_units(2);
        assert!(self_induced_check(&Arc::new(s.reduced_algebra())).passed);
        assert!(self_induced_check(&Arc::new(s.full_algebra())).passed);
        assert!(!self_induced_check(&Arc::new(zero_algebra(2))).passed);
    }

    #[test]
    fn spot_checks_are_seeded() {
        let s = c2_sparse();
        let a = random_spot_check(&s, 7, 50);
        assert!(a.passed, "{a:?}");
        assert_eq!(a, random_spot_check(&s, 7, 50));
    }

    #[test]
    fn weak_amenability_examples() {
        let r = weak_amenability_check(&matrix_units(2), DEFAULT_CHAIN_CAP, true).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(weak_amenability_check(&rectangular_band(), DEFAULT_CHAIN_CAP, false).unwrap().passed);
    }
}
