//! Chain-level contracting homotopies, verified by streaming over basis
//! chains without assembling any matrix.
//!
//! Bar complex over the unitization `A#`, with `B_0 = X` and
//! `B_n = A# ⊗ A^{⊗(n-1)} ⊗ X`:
//!
//! `b(a_1 ⊗ ... ⊗ a_n ⊗ x) = Σ_{k=1}^{n-1} (-1)^{k-1} a_1 ⊗ ... ⊗ a_k a_{k+1} ⊗ ... ⊗ x
//!  + (-1)^{n-1} a_1 ⊗ ... ⊗ a_{n-1} ⊗ a_n x`
//!
//! with contraction `s(x) = 1 ⊗ x` and `s(a_1 ⊗ rest) = 1 ⊗ π(a_1) ⊗ rest`,
//! where `π: A# → A` drops the coefficient of the adjoined unit.

use rayon::prelude::*;

use super::HochschildError;
use crate::algebra::{same_algebra, FiniteAlgebra};
use crate::bimodule::Bimodule;
use crate::linalg::{Rational, SparseVec};

/// Streamed checks refuse to enumerate more basis chains than this in one
/// degree.
pub const DEFAULT_STREAM_CAP: usize = 50_000_000;

/// A basis chain where `h ∘ b + b ∘ h` differs from the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: usize,
    /// Basis indices of the tensor factors, left to right.
    pub chain: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyCertificate {
    pub max_degree: usize,
    pub chains_checked: Vec<usize>,
    pub first_violation: Option<Violation>,
}

impl HomotopyCertificate {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Most tensor factors a streamed chain can carry.
const MAX_FACTORS: usize = 12;
/// Highest degree the streamed checks accept.
pub const MAX_STREAM_DEGREE: usize = MAX_FACTORS - 2;

/// A basis tensor chain stored inline; unused slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Chain {
    len: u8,
    f: [u32; MAX_FACTORS],
}

impl Chain {
    fn from_slice(s: &[u32]) -> Self {
        let mut f = [0; MAX_FACTORS];
        f[..s.len()].copy_from_slice(s);
        Chain { len: s.len() as u8, f }
    }

    fn as_slice(&self) -> &[u32] {
        &self.f[..self.len as usize]
    }

    /// Replaces factors `k` and `k + 1` by `b`.
    fn merged(&self, k: usize, b: u32) -> Self {
        let n = self.len as usize;
        let mut f = [0; MAX_FACTORS];
        f[..k].copy_from_slice(&self.f[..k]);
        f[k] = b;
        f[k + 1..n - 1].copy_from_slice(&self.f[k + 2..n]);
        Chain { len: self.len - 1, f }
    }

    /// Replaces factor 0 by `u, v`.
    fn split_first(&self, u: u32, v: u32) -> Self {
        let n = self.len as usize;
        let mut f = [0; MAX_FACTORS];
        f[0] = u;
        f[1] = v;
        f[2..n + 1].copy_from_slice(&self.f[1..n]);
        Chain { len: self.len + 1, f }
    }
}

/// Tensor chain with coefficient.
type Term = (Chain, Rational);

fn checked_count(radices: &[usize], degree: usize, cap: usize) -> Result<usize, HochschildError> {
    let dim = radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    if dim > cap as u128 {
        return Err(HochschildError::SizeGuard { degree, dim, cap });
    }
    Ok(dim as usize)
}

fn decode(mut index: usize, radices: &[usize]) -> Chain {
    let mut f = [0u32; MAX_FACTORS];
    for (slot, &r) in f[..radices.len()].iter_mut().zip(radices).rev() {
        *slot = (index % r) as u32;
        index /= r;
    }
    Chain { len: radices.len() as u8, f }
}

/// Whether `terms` sums to exactly `1·chain`. Sorts `terms` in place.
fn is_identity(chain: &Chain, terms: &mut [Term]) -> bool {
    terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut found = false;
    let mut k = 0;
    while k < terms.len() {
        let mut sum = terms[k].1.clone();
        let mut end = k + 1;
        while end < terms.len() && terms[end].0 == terms[k].0 {
            sum = &sum + &terms[end].1;
            end += 1;
        }
        if terms[k].0 == *chain {
            if !sum.is_one() {
                return false;
            }
            found = true;
        } else if !sum.is_zero() {
            return false;
        }
        k = end;
    }
    found
}

type Step<'a> = dyn Fn(&Chain, &Rational, &mut Vec<Term>) + Sync + 'a;

/// Smallest basis index where `b h + h b` is not the identity.
fn first_failure<H, B>(count: usize, radices: &[usize], h: H, b: B) -> Option<usize>
where
    H: Fn(&Chain, &Rational, &mut Vec<Term>) + Sync,
    B: Fn(&Chain, &Rational, &mut Vec<Term>) + Sync,
{
    let (h, b): (&Step, &Step) = (&h, &b);
    let one = Rational::one();
    (0..count)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(terms, tmp): &mut (Vec<Term>, Vec<Term>), idx| {
                let chain = decode(idx, radices);
                terms.clear();
                tmp.clear();
                h(&chain, &one, tmp);
                for (c, v) in tmp.iter() {
                    b(c, v, terms);
                }
                tmp.clear();
                b(&chain, &one, tmp);
                for (c, v) in tmp.iter() {
                    h(c, v, terms);
                }
                (idx, is_identity(&chain, terms))
            },
        )
        .find_first(|(_, ok)| !ok)
        .map(|(idx, _)| idx)
}

struct Bar<'a> {
    a: &'a FiniteAlgebra,
    x: &'a Bimodule,
}

impl Bar<'_> {
    // Factor 0 of a chain of positive degree lives in A# (0 is the unit,
    // k + 1 is basis element k of A); the last factor lives in X.

    fn boundary(&self, chain: &Chain, coef: &Rational, out: &mut Vec<Term>) {
        let n = chain.len as usize - 1;
        if n == 0 {
            return;
        }
        let x = chain.f[n] as usize;
        for k in 0..n - 1 {
            let sign_neg = k % 2 == 1;
            let (p, q) = (chain.f[k] as usize, chain.f[k + 1] as usize);
            let push = |b: u32, v: &Rational, out: &mut Vec<Term>| {
                let v = v * coef;
                out.push((chain.merged(k, b), if sign_neg { -v } else { v }));
            };
            if k == 0 {
                if p == 0 {
                    push(q as u32 + 1, &Rational::one(), out);
                } else {
                    for (b, v) in self.a.basis_product(p - 1, q) {
                        push(b as u32 + 1, v, out);
                    }
                }
            } else {
                for (b, v) in self.a.basis_product(p, q) {
                    push(b as u32, v, out);
                }
            }
        }
        let sign_neg = (n - 1) % 2 == 1;
        let last = chain.f[n - 1] as usize;
        let mut push = |y: usize, v: &Rational| {
            let mut c = *chain;
            c.f[n - 1] = y as u32;
            c.f[n] = 0;
            c.len -= 1;
            let v = v * coef;
            out.push((c, if sign_neg { -v } else { v }));
        };
        if n == 1 && last == 0 {
            push(x, &Rational::one());
        } else {
            let act = if n == 1 { last - 1 } else { last };
            for (y, v) in self.x.left_action(act).column(x) {
                push(y, v);
            }
        }
    }

    fn contract(&self, chain: &Chain, coef: &Rational, out: &mut Vec<Term>) {
        if chain.len == 1 {
            out.push((Chain::from_slice(&[0, chain.f[0]]), coef.clone()));
        } else if chain.f[0] != 0 {
            out.push((chain.split_first(0, chain.f[0] - 1), coef.clone()));
        }
    }
}

/// Verifies `b s + s b = id` on every basis chain of `B_n`, `0 ≤ n ≤ max_degree`.
pub fn bar_homotopy_check(
    a: &FiniteAlgebra,
    x: &Bimodule,
    max_degree: usize,
    cap: usize,
) -> Result<HomotopyCertificate, HochschildError> {
    if !a.same_structure(x.left_algebra()) || !same_algebra(x.left_algebra(), x.right_algebra()) {
        return Err(HochschildError::AlgebraMismatch);
    }
    if max_degree > MAX_STREAM_DEGREE {
        return Err(HochschildError::DegreeTooHigh { requested: max_degree, max: MAX_STREAM_DEGREE });
    }
    let bar = Bar { a, x };
    let d = a.dim();
    let mut chains_checked = Vec::new();
    for n in 0..=max_degree {
        let mut radices = Vec::with_capacity(n + 1);
        if n > 0 {
            radices.push(d + 1);
            radices.extend(std::iter::repeat(d).take(n - 1));
        }
        radices.push(x.dim());
        let count = checked_count(&radices, n, cap)?;
        let bad = first_failure(count, &radices, |c, v, out| bar.contract(c, v, out), |c, v, out| bar.boundary(c, v, out));
        chains_checked.push(count);
        if let Some(idx) = bad {
            let chain = decode(idx, &radices).as_slice().iter().map(|&v| v as usize).collect();
            return Ok(HomotopyCertificate {
                max_degree,
                chains_checked,
                first_violation: Some(Violation { degree: n, chain }),
            });
        }
    }
    Ok(HomotopyCertificate { max_degree, chains_checked, first_violation: None })
}

/// The simplicial boundary `b'(a_1 ⊗ ... ⊗ a_n) = Σ_{k=1}^{n-1} (-1)^{k-1} ... ⊗ a_k a_{k+1} ⊗ ...`.
fn simplicial_boundary(a: &FiniteAlgebra, chain: &Chain, coef: &Rational, out: &mut Vec<Term>) {
    let n = chain.len as usize;
    for k in 0..n.saturating_sub(1) {
        for (b, v) in a.basis_product(chain.f[k] as usize, chain.f[k + 1] as usize) {
            let v = v * coef;
            out.push((chain.merged(k, b as u32), if k % 2 == 1 { -v } else { v }));
        }
    }
}

/// Checks that `rho: A → A ⊗ A` (images indexed `u * dim + v`) satisfies
/// `Π ∘ rho = id` and `rho(s t) = rho(s) t` on basis elements.
pub(crate) fn check_right_splitting(a: &FiniteAlgebra, rho: &[SparseVec]) -> Result<(), String> {
    let d = a.dim();
    if rho.len() != d {
        return Err(format!("expected {d} images, got {}", rho.len()));
    }
    let mult = |v: &SparseVec| {
        SparseVec::from_terms(v.iter().flat_map(|(p, c)| {
            a.basis_product(p / d, p % d).map(move |(k, w)| (k, w * c)).collect::<Vec<_>>()
        }))
    };
    let right = |v: &SparseVec, t: usize| {
        SparseVec::from_terms(v.iter().flat_map(|(p, c)| {
            a.basis_product(p % d, t).map(move |(k, w)| ((p / d) * d + k, w * c)).collect::<Vec<_>>()
        }))
    };
    for (s, image) in rho.iter().enumerate() {
        if image.max_index().is_some_and(|m| m >= d * d) {
            return Err(format!("image of basis element {s} is out of range"));
        }
        if mult(image) != SparseVec::unit(s) {
            return Err(format!("multiplication does not undo the splitting on basis element {s}"));
        }
    }
    for s in 0..d {
        for t in 0..d {
            let mut lhs = SparseVec::new();
            for (k, c) in a.basis_product(s, t) {
                lhs = lhs.add_scaled(c, &rho[k]);
            }
            if lhs != right(&rho[s], t) {
                return Err(format!("not a right module map on basis pair ({s}, {t})"));
            }
        }
    }
    Ok(())
}

/// Verifies `b' h + h b' = id` on `A^{⊗n}` for `1 ≤ n ≤ max_degree`, where
/// `h = rho ⊗ 1`. For `n = 1` this is `Π ∘ rho = id`.
pub fn hunital_homotopy_check(
    a: &FiniteAlgebra,
    rho: &[SparseVec],
    max_degree: usize,
    cap: usize,
) -> Result<HomotopyCertificate, HochschildError> {
    check_right_splitting(a, rho).map_err(HochschildError::BadSplitting)?;
    if max_degree > MAX_STREAM_DEGREE {
        return Err(HochschildError::DegreeTooHigh { requested: max_degree, max: MAX_STREAM_DEGREE });
    }
    stream_hunital(a, rho, max_degree, cap)
}

fn stream_hunital(
    a: &FiniteAlgebra,
    rho: &[SparseVec],
    max_degree: usize,
    cap: usize,
) -> Result<HomotopyCertificate, HochschildError> {
    let d = a.dim();
    let images: Vec<Vec<(u32, u32, Rational)>> = rho
        .iter()
        .map(|v| v.iter().map(|(p, c)| ((p / d) as u32, (p % d) as u32, c.clone())).collect())
        .collect();
    let h = |chain: &Chain, coef: &Rational, out: &mut Vec<Term>| {
        for (u, v, c) in &images[chain.f[0] as usize] {
            out.push((chain.split_first(*u, *v), c * coef));
        }
    };
    let mut chains_checked = Vec::new();
    for n in 1..=max_degree {
        let radices = vec![d; n];
        let count = checked_count(&radices, n, cap)?;
        let bad = first_failure(count, &radices, h, |c, v, out| simplicial_boundary(a, c, v, out));
        chains_checked.push(count);
        if let Some(idx) = bad {
            let chain = decode(idx, &radices).as_slice().iter().map(|&v| v as usize).collect();
            return Ok(HomotopyCertificate {
                max_degree,
                chains_checked,
                first_violation: Some(Violation { degree: n, chain }),
            });
        }
    }
    Ok(HomotopyCertificate { max_degree, chains_checked, first_violation: None })
}
