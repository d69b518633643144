//! Row-major sparse matrices over exact rationals.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Sparse matrix; each row holds strictly increasing column indices with nonzero values.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, Scalar)>>,
}

/// First entry at which two equally shaped matrices differ.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EntryMismatch {
    pub row: usize,
    pub col: usize,
    pub left: Scalar,
    pub right: Scalar,
}

fn normalize_row(mut row: Vec<(usize, Scalar)>) -> Vec<(usize, Scalar)> {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += &v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar_identity(n, &Scalar::one())
    }

    pub fn scalar_identity(n: usize, s: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        if !s.is_zero() {
            for i in 0..n {
                m.rows[i].push((i, s.clone()));
            }
        }
        m
    }

    /// Builds from triplets; duplicates are summed and zeros dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut rows = vec![Vec::new(); nrows];
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) outside {nrows}x{ncols}");
            rows[r].push((c, v));
        }
        let rows = rows.into_iter().map(normalize_row).collect();
        SparseMatrix { nrows, ncols, rows }
    }

    pub fn from_rows(ncols: usize, rows: Vec<Vec<(usize, Scalar)>>) -> Self {
        let nrows = rows.len();
        let rows: Vec<_> = rows.into_iter().map(normalize_row).collect();
        assert!(rows.iter().all(|r| r.last().is_none_or(|e| e.0 < ncols)));
        SparseMatrix { nrows, ncols, rows }
    }

    pub fn from_dense(nrows: usize, ncols: usize, data: &[Vec<Scalar>]) -> Self {
        assert_eq!(data.len(), nrows);
        let rows = data
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols);
                r.iter().enumerate().filter(|e| !e.1.is_zero()).map(|(c, v)| (c, v.clone())).collect()
            })
            .collect();
        SparseMatrix { nrows, ncols, rows }
    }

    /// Builds from dense columns.
    pub fn from_columns(nrows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    rows[i].push((j, v.clone()));
                }
            }
        }
        SparseMatrix { nrows, ncols: cols.len(), rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<(usize, Scalar)>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.nrows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, j, v) in self.triplets() {
            rows[j].push((i, v.clone()));
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zeros(self.nrows, self.ncols);
        }
        let rows = self.rows.iter().map(|r| r.iter().map(|(c, v)| (*c, v * s)).collect()).collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn neg(&self) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(|(c, v)| (*c, -v)).collect()).collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    fn combine(&self, other: &Self, s: &Scalar) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let ca = a.get(i).map_or(usize::MAX, |e| e.0);
                    let cb = b.get(j).map_or(usize::MAX, |e| e.0);
                    if ca < cb {
                        out.push(a[i].clone());
                        i += 1;
                    } else if cb < ca {
                        out.push((cb, &b[j].1 * s));
                        j += 1;
                    } else {
                        let v = &a[i].1 + &(&b[j].1 * s);
                        if !v.is_zero() {
                            out.push((ca, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, &Scalar::from_int(-1))
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: &Scalar) -> Self {
        self.combine(other, s)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "shape mismatch in product");
        let mut acc = vec![Scalar::zero(); other.ncols];
        let mut mark = vec![false; other.ncols];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                for (k, a) in r {
                    for (j, b) in &other.rows[*k] {
                        if !mark[*j] {
                            mark[*j] = true;
                            touched.push(*j);
                        }
                        acc[*j] += &(a * b);
                    }
                }
                touched.sort_unstable();
                let mut out = Vec::with_capacity(touched.len());
                for &j in &touched {
                    let v = std::mem::take(&mut acc[j]);
                    mark[j] = false;
                    if !v.is_zero() {
                        out.push((j, v));
                    }
                }
                touched.clear();
                out
            })
            .collect();
        SparseMatrix { nrows: self.nrows, ncols: other.ncols, rows }
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| {
                let mut s = Scalar::zero();
                for (j, v) in r {
                    if !x[*j].is_zero() {
                        s += &(v * &x[*j]);
                    }
                }
                s
            })
            .collect()
    }

    /// `x^T * self`.
    pub fn vec_mul(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.nrows);
        let mut out = vec![Scalar::zero(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            for (j, v) in r {
                out[*j] += &(v * &x[i]);
            }
        }
        out
    }

    /// Submatrix picking the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut colmap = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            colmap[c] = k;
        }
        let out = rows
            .iter()
            .map(|&i| {
                let mut r: Vec<(usize, Scalar)> = self.rows[i]
                    .iter()
                    .filter(|e| colmap[e.0] != usize::MAX)
                    .map(|(c, v)| (colmap[*c], v.clone()))
                    .collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        SparseMatrix { nrows: rows.len(), ncols: cols.len(), rows: out }
    }

    /// Places `blocks[(bi, bj)]` at the block offsets given by the size lists.
    pub fn assemble(row_sizes: &[usize], col_sizes: &[usize], blocks: &[(usize, usize, &SparseMatrix)]) -> Self {
        let roff: Vec<usize> = row_sizes.iter().scan(0, |s, &n| { let o = *s; *s += n; Some(o) }).collect();
        let coff: Vec<usize> = col_sizes.iter().scan(0, |s, &n| { let o = *s; *s += n; Some(o) }).collect();
        let nrows = row_sizes.iter().sum();
        let ncols = col_sizes.iter().sum();
        let mut entries = Vec::new();
        for &(bi, bj, m) in blocks {
            assert_eq!(m.shape(), (row_sizes[bi], col_sizes[bj]), "block ({bi},{bj}) has wrong shape");
            for (i, j, v) in m.triplets() {
                entries.push((roff[bi] + i, coff[bj] + j, v.clone()));
            }
        }
        Self::from_triplets(nrows, ncols, entries)
    }

    pub fn first_mismatch(&self, other: &Self) -> Option<EntryMismatch> {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in comparison");
        for i in 0..self.nrows {
            if self.rows[i] != other.rows[i] {
                let a = &self.rows[i];
                let b = &other.rows[i];
                let mut cols: Vec<usize> = a.iter().chain(b.iter()).map(|e| e.0).collect();
                cols.sort_unstable();
                for c in cols {
                    let (l, r) = (self.get(i, c), other.get(i, c));
                    if l != r {
                        return Some(EntryMismatch { row: i, col: c, left: l, right: r });
                    }
                }
            }
        }
        None
    }

    /// Largest absolute row-minus-column index offset among nonzero entries.
    pub fn bandwidth(&self) -> usize {
        self.triplets().map(|(i, j, _)| i.abs_diff(j)).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn dense_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let n = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect())
            .collect()
    }

    fn small_matrix(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -3i64..4], c), r)
    }

    fn to_scalars(m: &[Vec<i64>]) -> Vec<Vec<Scalar>> {
        m.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect()
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 1, s(2)), (0, 1, s(-2)), (1, 0, s(3)), (1, 0, s(1))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), s(4));
    }

    #[test]
    fn assemble_blocks() {
        let i2 = SparseMatrix::identity(2);
        let m = SparseMatrix::assemble(&[2, 1], &[1, 2], &[(0, 1, &i2)]);
        assert_eq!(m.get(0, 1), s(1));
        assert_eq!(m.get(1, 2), s(1));
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn mismatch_reports_first_entry() {
        let a = SparseMatrix::identity(3);
        let mut d = a.to_dense();
        d[2][0] = s(5);
        let b = SparseMatrix::from_dense(3, 3, &d);
        let e = a.first_mismatch(&b).unwrap();
        assert_eq!((e.row, e.col, e.left, e.right), (2, 0, s(0), s(5)));
        assert!(a.first_mismatch(&a).is_none());
    }

    proptest! {
        #[test]
        fn product_matches_dense(a in small_matrix(4, 5), b in small_matrix(5, 3)) {
            let (da, db) = (to_scalars(&a), to_scalars(&b));
            let sa = SparseMatrix::from_dense(4, 5, &da);
            let sb = SparseMatrix::from_dense(5, 3, &db);
            prop_assert_eq!(sa.mul(&sb).to_dense(), dense_mul(&da, &db));
        }

        #[test]
        fn transpose_reverses_products(a in small_matrix(3, 4), b in small_matrix(4, 2)) {
            let sa = SparseMatrix::from_dense(3, 4, &to_scalars(&a));
            let sb = SparseMatrix::from_dense(4, 2, &to_scalars(&b));
            prop_assert_eq!(sa.mul(&sb).transpose(), sb.transpose().mul(&sa.transpose()));
        }

        #[test]
        fn vector_products(a in small_matrix(3, 4), x in prop::collection::vec(-5i64..5, 4), y in prop::collection::vec(-5i64..5, 3)) {
            let sa = SparseMatrix::from_dense(3, 4, &to_scalars(&a));
            let xs: Vec<Scalar> = x.iter().map(|&v| s(v)).collect();
            let ys: Vec<Scalar> = y.iter().map(|&v| s(v)).collect();
            let l: Scalar = sa.mul_vec(&xs).iter().zip(&ys).map(|(u, v)| u * v).sum();
            let r: Scalar = sa.vec_mul(&ys).iter().zip(&xs).map(|(u, v)| u * v).sum();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn sub_then_add_roundtrips(a in small_matrix(3, 3), b in small_matrix(3, 3)) {
            let sa = SparseMatrix::from_dense(3, 3, &to_scalars(&a));
            let sb = SparseMatrix::from_dense(3, 3, &to_scalars(&b));
            prop_assert_eq!(sa.sub(&sb).add(&sb), sa);
        }
    }
}
