use super::{Rational, SparseMatrix, SparseVec};

/// A subspace of `Q^ambient_dim` held as a reduced row-echelon basis.
///
/// Every vector has leading coefficient 1 at its pivot, pivots are strictly
/// increasing, and each vector vanishes at the pivots of all the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<SparseVec>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors: (0..ambient_dim).map(SparseVec::unit).collect(),
        }
    }

    /// The span of `vectors`.
    pub fn span<I: IntoIterator<Item = SparseVec>>(ambient_dim: usize, vectors: I) -> Self {
        let mut builder = EchelonBuilder::new(ambient_dim);
        for v in vectors {
            builder.insert(v);
        }
        builder.into_basis()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v.leading().unwrap()).collect()
    }

    /// Residue of `v` after subtracting its components along the basis.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for b in &self.vectors {
            let p = b.leading().unwrap();
            let c = v.get(p);
            if !c.is_zero() {
                out = out.add_scaled(&-&c, b);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_terms(
            self.vectors
                .iter()
                .enumerate()
                .map(|(k, b)| (k, v.get(b.leading().unwrap()))),
        ))
    }

    /// The basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn to_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.ambient_dim, self.vectors.iter().cloned())
    }
}

/// Incremental reduced row-echelon form.
pub struct EchelonBuilder {
    ambient_dim: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBuilder {
    pub fn new(ambient_dim: usize) -> Self {
        EchelonBuilder {
            ambient_dim,
            rows: Vec::new(),
            pivot_row: vec![None; ambient_dim],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        // Rows vanish at each other's pivots, so one pass over the pivots
        // present in `v` suffices.
        let mut out = v.clone();
        for (c, x) in v.iter() {
            if let Some(r) = self.pivot_row[c] {
                out = out.add_scaled(&-x, &self.rows[r]);
            }
        }
        out
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        if let Some(m) = v.max_index() {
            assert!(m < self.ambient_dim, "vector exceeds ambient dimension");
        }
        let r = self.reduce(&v);
        let Some(p) = r.leading() else {
            return false;
        };
        let r = r.scale(&r.get(p).recip());
        for row in &mut self.rows {
            let c = row.get(p);
            if !c.is_zero() {
                *row = row.add_scaled(&-&c, &r);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn into_basis(self) -> SubspaceBasis {
        let mut vectors = self.rows;
        vectors.sort_by_key(|v| v.leading().unwrap());
        SubspaceBasis {
            ambient_dim: self.ambient_dim,
            vectors,
        }
    }
}

/// Basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> SubspaceBasis {
    let n = m.cols();
    let row_space = SubspaceBasis::span(n, m.transpose().columns());
    let mut is_pivot = vec![false; n];
    for p in row_space.pivots() {
        is_pivot[p] = true;
    }
    let generators = (0..n).filter(|&f| !is_pivot[f]).map(|f| {
        let mut terms = vec![(f, Rational::one())];
        for b in row_space.vectors() {
            let c = b.get(f);
            if !c.is_zero() {
                terms.push((b.leading().unwrap(), -c));
            }
        }
        SparseVec::from_terms(terms)
    });
    SubspaceBasis::span(n, generators)
}

/// Basis of the column space of `m`.
pub fn image_basis(m: &SparseMatrix) -> SubspaceBasis {
    SubspaceBasis::span(m.rows(), m.columns())
}

/// Dimension of `Q^space_dim / sub`.
pub fn quotient_dim(sub: &SubspaceBasis, space_dim: usize) -> usize {
    assert_eq!(sub.ambient_dim(), space_dim, "subspace lives in a different space");
    space_dim - sub.dim()
}

/// Projection onto the quotient `Q^space_dim / sub` and a section back.
///
/// The quotient is identified with the coordinates at the non-pivot
/// positions of `sub` (the echelon complement). Returns `(projection,
/// section)` with shapes `q x n` and `n x q`, where `projection * section`
/// is the identity.
pub fn quotient_projection(sub: &SubspaceBasis, space_dim: usize) -> (SparseMatrix, SparseMatrix) {
    assert_eq!(sub.ambient_dim(), space_dim, "subspace lives in a different space");
    let mut slot = vec![usize::MAX; space_dim];
    let mut pivot_vec: Vec<Option<&SparseVec>> = vec![None; space_dim];
    for b in sub.vectors() {
        pivot_vec[b.leading().unwrap()] = Some(b);
    }
    let mut free = Vec::new();
    for j in 0..space_dim {
        if pivot_vec[j].is_none() {
            slot[j] = free.len();
            free.push(j);
        }
    }
    let q = free.len();
    let projection = SparseMatrix::from_columns(
        q,
        (0..space_dim).map(|j| match pivot_vec[j] {
            None => SparseVec::unit(slot[j]),
            // e_j is congruent to e_j - b, which lives on the free coordinates
            Some(b) => SparseVec::from_terms(
                b.iter()
                    .filter(|(i, _)| *i != j)
                    .map(|(i, v)| (slot[i], -v)),
            ),
        }),
    );
    let section = SparseMatrix::from_columns(space_dim, free.iter().map(|&j| SparseVec::unit(j)));
    (projection, section)
}
