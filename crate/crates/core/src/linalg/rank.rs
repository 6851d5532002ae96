//! Rank computation by sparse Gaussian elimination.
//!
//! The matrix is first split into the connected components of its
//! row/column incidence graph; each block is eliminated independently with
//! approximate Markowitz pivoting (shortest active row, then the sparsest
//! column inside it). Small blocks go through a dense kernel instead.

use rayon::prelude::*;

use super::field::{Field, Fp};
use super::{Rational, SparseMatrix};

/// Blocks with both sides below this go through dense elimination.
pub const DENSE_THRESHOLD: usize = 64;

type Row<F> = Vec<(u32, F)>;

/// Exact rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    let rows = oriented_rows(m, |v| Some(v.clone())).expect("rational entries always map");
    let (vectors, ncols) = rows;
    rank_of_rows(vectors, ncols)
}

/// Rank modulo the prime 2^61 - 1, or `None` if some entry has a
/// denominator divisible by it. Never exceeds the exact rank.
pub fn rank_mod_p(m: &SparseMatrix) -> Option<usize> {
    let (vectors, ncols) = oriented_rows(m, Fp::from_rational)?;
    Some(rank_of_rows(vectors, ncols))
}

/// Turns the matrix into a list of sparse vectors, picking the orientation
/// with fewer (longer) vectors. On Hochschild boundaries this is several
/// times faster than eliminating the many short columns, most of which
/// reduce to zero.
fn oriented_rows<F, G>(m: &SparseMatrix, convert: G) -> Option<(Vec<Row<F>>, usize)>
where
    F: Field,
    G: Fn(&Rational) -> Option<F>,
{
    let as_columns = m.cols() <= m.rows();
    let source = if as_columns { None } else { Some(m.transpose()) };
    let src = source.as_ref().unwrap_or(m);
    let mut rows = Vec::with_capacity(src.cols());
    for j in 0..src.cols() {
        let mut row = Vec::with_capacity(src.column_nnz(j));
        for (i, v) in src.column(j) {
            let x = convert(v)?;
            if !x.is_zero() {
                row.push((i as u32, x));
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    Some((rows, src.rows()))
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

/// Rank of the span of `rows`, each a sorted sparse vector over `0..ncols`.
pub(crate) fn rank_of_rows<F: Field>(rows: Vec<Row<F>>, ncols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut parent: Vec<u32> = (0..ncols as u32).collect();
    for row in &rows {
        let a = find(&mut parent, row[0].0);
        for (c, _) in &row[1..] {
            let b = find(&mut parent, *c);
            if a != b {
                parent[b as usize] = a;
            }
        }
    }
    // Group rows by component; relabel columns locally.
    let mut block_of_root = vec![u32::MAX; ncols];
    let mut local_col = vec![u32::MAX; ncols];
    let mut comp_cols: Vec<u32> = Vec::new();
    let mut blocks: Vec<Vec<Row<F>>> = Vec::new();
    for row in rows {
        let root = find(&mut parent, row[0].0) as usize;
        if block_of_root[root] == u32::MAX {
            block_of_root[root] = blocks.len() as u32;
            blocks.push(Vec::new());
            comp_cols.push(0);
        }
        let b = block_of_root[root] as usize;
        let relabeled = row
            .into_iter()
            .map(|(c, v)| {
                let c = c as usize;
                if local_col[c] == u32::MAX {
                    local_col[c] = comp_cols[b];
                    comp_cols[b] += 1;
                }
                (local_col[c], v)
            })
            .collect::<Vec<_>>();
        blocks[b].push(relabeled);
    }
    blocks
        .into_par_iter()
        .zip(comp_cols.into_par_iter())
        .map(|(rows, ncols)| {
            let mut rows = rows;
            for r in &mut rows {
                r.sort_unstable_by_key(|(c, _)| *c);
            }
            if rows.len() < DENSE_THRESHOLD && (ncols as usize) < DENSE_THRESHOLD {
                dense_rank(rows, ncols as usize)
            } else {
                markowitz_rank(rows, ncols as usize)
            }
        })
        .sum()
}

fn dense_rank<F: Field>(rows: Vec<Row<F>>, ncols: usize) -> usize {
    let mut a: Vec<Vec<F>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![F::zero(); ncols];
            for (c, v) in r {
                d[c as usize] = v;
            }
            d
        })
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][col].inv();
        let pivot = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].mul(&inv);
            for (x, y) in row.iter_mut().zip(&pivot).skip(col) {
                if !y.is_zero() {
                    *x = x.sub_mul(&f, y);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `target - factor * pivot`, with the pivot column cancelled exactly.
/// Reports columns that appear (fill) or vanish in `target`.
fn eliminate<F: Field>(
    target: &Row<F>,
    factor: &F,
    pivot: &Row<F>,
    pivot_col: u32,
    filled: &mut Vec<u32>,
    cancelled: &mut Vec<u32>,
) -> Row<F> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut p, mut q) = (0, 0);
    while p < target.len() || q < pivot.len() {
        if q == pivot.len() || (p < target.len() && target[p].0 < pivot[q].0) {
            out.push(target[p].clone());
            p += 1;
        } else if p == target.len() || pivot[q].0 < target[p].0 {
            let c = pivot[q].0;
            out.push((c, F::zero().sub_mul(factor, &pivot[q].1)));
            filled.push(c);
            q += 1;
        } else {
            let c = target[p].0;
            if c != pivot_col {
                let v = target[p].1.sub_mul(factor, &pivot[q].1);
                if v.is_zero() {
                    cancelled.push(c);
                } else {
                    out.push((c, v));
                }
            }
            p += 1;
            q += 1;
        }
    }
    out
}

/// Rows bucketed by length, with lazy deletion: an entry is live when the
/// row is still active and its current length matches the bucket.
struct LengthQueue {
    buckets: Vec<Vec<u32>>,
    min: usize,
}

impl LengthQueue {
    fn new(max_len: usize) -> Self {
        LengthQueue { buckets: vec![Vec::new(); max_len + 1], min: max_len + 1 }
    }

    fn push(&mut self, len: usize, row: u32) {
        if len >= self.buckets.len() {
            self.buckets.resize(len + 1, Vec::new());
        }
        self.buckets[len].push(row);
        self.min = self.min.min(len);
    }

    fn pop<F: Fn(u32, usize) -> bool>(&mut self, live: F) -> Option<u32> {
        while self.min < self.buckets.len() {
            while let Some(r) = self.buckets[self.min].pop() {
                if live(r, self.min) {
                    return Some(r);
                }
            }
            self.min += 1;
        }
        None
    }
}

fn markowitz_rank<F: Field>(mut rows: Vec<Row<F>>, ncols: usize) -> usize {
    let n = rows.len();
    let mut col_count = vec![0u32; ncols];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut queue = LengthQueue::new(rows.iter().map(Vec::len).max().unwrap_or(0));
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_count[*c as usize] += 1;
            col_rows[*c as usize].push(r as u32);
        }
        queue.push(row.len(), r as u32);
    }
    let mut active = vec![true; n];
    let mut rank = 0;
    let (mut filled, mut cancelled) = (Vec::new(), Vec::new());
    // once every column is a pivot the remaining rows cannot add rank
    while rank < ncols {
        let Some(r) = queue.pop(|r, len| active[r as usize] && rows[r as usize].len() == len) else {
            break;
        };
        let r = r as usize;
        let pivot = std::mem::take(&mut rows[r]);
        active[r] = false;
        let &(pc, ref pv) = pivot
            .iter()
            .min_by_key(|(c, _)| (col_count[*c as usize], *c))
            .expect("queued rows are nonempty");
        rank += 1;
        for (c, _) in &pivot {
            col_count[*c as usize] -= 1;
        }
        let inv = pv.inv();
        for t in std::mem::take(&mut col_rows[pc as usize]) {
            let t = t as usize;
            if !active[t] {
                continue;
            }
            let Ok(k) = rows[t].binary_search_by_key(&pc, |(c, _)| *c) else {
                continue;
            };
            let factor = rows[t][k].1.mul(&inv);
            filled.clear();
            cancelled.clear();
            let next = eliminate(&rows[t], &factor, &pivot, pc, &mut filled, &mut cancelled);
            col_count[pc as usize] -= 1;
            for &c in &filled {
                col_count[c as usize] += 1;
                col_rows[c as usize].push(t as u32);
            }
            for &c in &cancelled {
                col_count[c as usize] -= 1;
            }
            if next.is_empty() {
                active[t] = false;
            } else {
                queue.push(next.len(), t as u32);
            }
            rows[t] = next;
        }
    }
    rank
}
