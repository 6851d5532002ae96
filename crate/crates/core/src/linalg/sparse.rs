use std::fmt;

use super::Rational;

/// A sparse vector: `(index, value)` pairs sorted by index, with no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, Rational::one())],
        }
    }

    pub fn single(i: usize, value: Rational) -> Self {
        if value.is_zero() {
            SparseVec::new()
        } else {
            SparseVec {
                entries: vec![(i, value)],
            }
        }
    }

    /// Sums the given terms, merging repeated indices and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (usize, Rational)>>(terms: I) -> Self {
        let mut entries: Vec<(usize, Rational)> = terms.into_iter().collect();
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = &*acc + &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    /// Wraps entries that are already sorted, distinct and nonzero.
    pub fn from_sorted(entries: Vec<(usize, Rational)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, v)| !v.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Rational)> {
        self.entries
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_empty() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() || q < b.len() {
            if q == b.len() || (p < a.len() && a[p].0 < b[q].0) {
                out.push(a[p].clone());
                p += 1;
            } else if p == a.len() || b[q].0 < a[p].0 {
                out.push((b[q].0, c * &b[q].1));
                q += 1;
            } else {
                let v = &a[p].1 + &(c * &b[q].1);
                if !v.is_zero() {
                    out.push((a[p].0, v));
                }
                p += 1;
                q += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&Rational::from_int(-1), other)
    }

    pub fn neg(&self) -> SparseVec {
        self.scale(&Rational::from_int(-1))
    }

    pub fn map_indices<F: Fn(usize) -> usize>(&self, f: F) -> SparseVec {
        SparseVec::from_terms(self.entries.iter().map(|(i, v)| (f(*i), v.clone())))
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(i, v)| (i, v)))
            .finish()
    }
}

impl FromIterator<(usize, Rational)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Rational)>>(iter: T) -> Self {
        SparseVec::from_terms(iter)
    }
}

/// A sparse matrix over the rationals in compressed-column form.
///
/// Column `j` occupies `row_idx[col_ptr[j]..col_ptr[j + 1]]`, rows ascending,
/// and no stored value is zero. The representation is canonical, so derived
/// equality is matrix equality.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<Rational>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= u32::MAX as usize, "row count exceeds u32 indexing");
        SparseMatrix {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(n, (0..n).map(SparseVec::unit))
    }

    /// Builds a matrix column by column. Panics on an out-of-range row index.
    pub fn from_columns<I: IntoIterator<Item = SparseVec>>(rows: usize, columns: I) -> Self {
        assert!(rows <= u32::MAX as usize, "row count exceeds u32 indexing");
        let mut m = SparseMatrix {
            rows,
            cols: 0,
            col_ptr: vec![0],
            row_idx: Vec::new(),
            vals: Vec::new(),
        };
        for c in columns {
            m.push_column(c);
        }
        m
    }

    pub fn push_column(&mut self, column: SparseVec) {
        for (i, v) in column.into_entries() {
            assert!(i < self.rows, "row index {i} out of range ({})", self.rows);
            self.row_idx.push(i as u32);
            self.vals.push(v);
        }
        self.col_ptr.push(self.row_idx.len());
        self.cols += 1;
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, Rational)>>(
        rows: usize,
        cols: usize,
        entries: I,
    ) -> Self {
        let mut per_col: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r}, {c}) out of range");
            per_col[c].push((r, v));
        }
        Self::from_columns(rows, per_col.into_iter().map(SparseVec::from_terms))
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(j, v)| (i, j, v.clone()))
            }),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for j in 0..self.cols {
            for (i, v) in self.column(j) {
                out[i][j] = v.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .zip(&self.vals[range])
            .map(|(i, v)| (*i as usize, v))
    }

    pub fn column_vec(&self, j: usize) -> SparseVec {
        SparseVec::from_sorted(self.column(j).map(|(i, v)| (i, v.clone())).collect())
    }

    pub fn column_nnz(&self, j: usize) -> usize {
        self.col_ptr[j + 1] - self.col_ptr[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        match self.row_idx[range.clone()].binary_search(&(i as u32)) {
            Ok(k) => self.vals[range.start + k].clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        (0..self.cols).flat_map(move |j| self.column(j).map(move |(i, v)| (i, j, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.rows + 1];
        for &i in &self.row_idx {
            counts[i as usize + 1] += 1;
        }
        for k in 0..self.rows {
            counts[k + 1] += counts[k];
        }
        let col_ptr = counts.clone();
        let mut next = counts;
        let mut row_idx = vec![0u32; self.nnz()];
        let mut vals = vec![Rational::zero(); self.nnz()];
        for j in 0..self.cols {
            for (i, v) in self.column(j) {
                let slot = next[i];
                row_idx[slot] = j as u32;
                vals[slot] = v.clone();
                next[i] += 1;
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            col_ptr,
            row_idx,
            vals,
        }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        assert!(v.max_index().map_or(true, |m| m < self.cols), "vector length mismatch");
        SparseVec::from_terms(
            v.iter()
                .flat_map(|(j, x)| self.column(j).map(move |(i, a)| (i, a * x))),
        )
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        SparseMatrix::from_columns(
            self.rows,
            (0..rhs.cols).map(|j| self.mul_vec(&rhs.column_vec(j))),
        )
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&Rational::one(), rhs)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&Rational::from_int(-1), rhs)
    }

    /// `self + c * rhs`
    pub fn add_scaled(&self, c: &Rational, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        SparseMatrix::from_columns(
            self.rows,
            (0..self.cols).map(|j| self.column_vec(j).add_scaled(c, &rhs.column_vec(j))),
        )
    }

    pub fn scale(&self, c: &Rational) -> SparseMatrix {
        SparseMatrix::from_columns(self.rows, (0..self.cols).map(|j| self.column_vec(j).scale(c)))
    }

    /// Kronecker product; the index of `(i, k)` is `i * other.rows + k`.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let rows = self.rows * other.rows;
        SparseMatrix::from_columns(
            rows,
            (0..self.cols).flat_map(|j| {
                (0..other.cols).map(move |l| {
                    SparseVec::from_terms(self.column(j).flat_map(|(i, a)| {
                        other
                            .column(l)
                            .map(move |(k, b)| (i * other.rows + k, a * b))
                    }))
                })
            }),
        )
    }

    /// Columns `range` of the matrix.
    pub fn select_columns(&self, cols: &[usize]) -> SparseMatrix {
        SparseMatrix::from_columns(self.rows, cols.iter().map(|&j| self.column_vec(j)))
    }

    /// Matrix with the same columns restricted to (and renumbered by) `rows`.
    pub fn select_rows(&self, rows: &[usize]) -> SparseMatrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        SparseMatrix::from_columns(
            rows.len(),
            (0..self.cols).map(|j| {
                SparseVec::from_sorted(
                    self.column(j)
                        .filter(|(i, _)| pos[*i] != usize::MAX)
                        .map(|(i, v)| (pos[i], v.clone()))
                        .collect::<Vec<_>>(),
                )
            }),
        )
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, below.cols, "column counts differ");
        SparseMatrix::from_columns(
            self.rows + below.rows,
            (0..self.cols).map(|j| {
                let mut e: Vec<(usize, Rational)> =
                    self.column(j).map(|(i, v)| (i, v.clone())).collect();
                e.extend(below.column(j).map(|(i, v)| (i + self.rows, v.clone())));
                SparseVec::from_sorted(e)
            }),
        )
    }

    /// Places `right` to the right of `self`.
    pub fn hstack(&self, right: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, right.rows, "row counts differ");
        SparseMatrix::from_columns(
            self.rows,
            (0..self.cols)
                .map(|j| self.column_vec(j))
                .chain((0..right.cols).map(|j| right.column_vec(j))),
        )
    }

    /// Iterates over all columns as sparse vectors.
    pub fn columns(&self) -> impl Iterator<Item = SparseVec> + '_ {
        (0..self.cols).map(|j| self.column_vec(j))
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} ({} nnz)", self.rows, self.cols, self.nnz())?;
        if self.rows <= 16 && self.cols <= 16 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn from_terms_merges_and_drops_zeros() {
        let v = SparseVec::from_terms(vec![(3, q(1)), (1, q(2)), (3, q(-1)), (1, q(1))]);
        assert_eq!(v.entries(), &[(1, q(3))]);
    }

    #[test]
    fn transpose_and_product() {
        let m = SparseMatrix::from_dense(&[vec![q(1), q(2), q(0)], vec![q(0), q(3), q(4)]]);
        let t = m.transpose();
        assert_eq!(t.shape(), (3, 2));
        assert_eq!(t.get(1, 1), q(3));
        assert_eq!(t.transpose(), m);
        let p = m.mul(&t);
        assert_eq!(p.to_dense(), vec![vec![q(5), q(6)], vec![q(6), q(25)]]);
    }

    #[test]
    fn kron_indexing() {
        let a = SparseMatrix::from_dense(&[vec![q(0), q(1)], vec![q(1), q(0)]]);
        let i = SparseMatrix::identity(2);
        let k = a.kron(&i);
        assert_eq!(k.get(2, 0), q(1));
        assert_eq!(k.get(3, 1), q(1));
        assert_eq!(k.nnz(), 4);
    }

    #[test]
    fn stacking() {
        let i = SparseMatrix::identity(2);
        assert_eq!(i.vstack(&i).shape(), (4, 2));
        assert_eq!(i.hstack(&i).get(1, 3), q(1));
        assert_eq!(i.select_rows(&[1]).to_dense(), vec![vec![q(0), q(1)]]);
    }
}
