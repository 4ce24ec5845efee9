use std::io::Write;

use faer::sparse::{SparseColMat, Triplet};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Compressed sparse row matrix with complex entries and sorted column
/// indices in each row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<C64>,
}

impl CsrMatrix {
    /// Zero matrix with the given sparsity pattern; rows are sorted and
    /// deduplicated.
    pub fn from_pattern(nrows: usize, ncols: usize, mut rows: Vec<Vec<usize>>) -> Self {
        assert_eq!(rows.len(), nrows);
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values: vec![C64::new(0.0, 0.0); nnz],
        }
    }

    /// Sums duplicate entries.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, C64)]) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for &(i, j, _) in triplets {
            rows[i].push(j);
        }
        let mut m = Self::from_pattern(nrows, ncols, rows);
        for &(i, j, v) in triplets {
            m.add(i, j, v);
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, &(0..n).map(|i| (i, i, C64::new(1.0, 0.0))).collect::<Vec<_>>())
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[a..b].binary_search(&j).ok().map(|p| a + p)
    }

    /// Adds `v` to entry `(i, j)`, which must be in the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        let p = self.position(i, j).unwrap_or_else(|| panic!("entry ({i}, {j}) not in pattern"));
        self.values[p] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.position(i, j).map_or(C64::new(0.0, 0.0), |p| self.values[p])
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `x^H A y`.
    pub fn form(&self, x: &[C64], y: &[C64]) -> C64 {
        let ay = self.matvec(y);
        x.iter().zip(&ay).map(|(a, b)| a.conj() * b).sum()
    }

    /// `alpha A + beta B` on the union of both patterns.
    pub fn axpby(alpha: C64, a: &CsrMatrix, beta: C64, b: &CsrMatrix) -> CsrMatrix {
        assert_eq!((a.nrows, a.ncols), (b.nrows, b.ncols));
        let rows = (0..a.nrows)
            .map(|i| a.row(i).map(|(j, _)| j).chain(b.row(i).map(|(j, _)| j)).collect())
            .collect();
        let mut out = CsrMatrix::from_pattern(a.nrows, a.ncols, rows);
        for i in 0..a.nrows {
            for (j, v) in a.row(i) {
                out.add(i, j, alpha * v);
            }
            for (j, v) in b.row(i) {
                out.add(i, j, beta * v);
            }
        }
        out
    }

    pub fn adjoint(&self) -> CsrMatrix {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                t.push((j, i, v.conj()));
            }
        }
        CsrMatrix::from_triplets(self.ncols, self.nrows, &t)
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                d = d.max((v - self.get(j, i).conj()).norm());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// Submatrix on the given sorted row and column index ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> CsrMatrix {
        let mut t = Vec::new();
        for i in rows.clone() {
            for (j, v) in self.row(i) {
                if cols.contains(&j) {
                    t.push((i - rows.start, j - cols.start, v));
                }
            }
        }
        CsrMatrix::from_triplets(rows.len(), cols.len(), &t)
    }

    pub fn to_faer(&self) -> Result<SparseColMat<usize, C64>> {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                t.push(Triplet::new(i, j, v));
            }
        }
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &t)
            .map_err(|e| Error::Factorization(format!("building sparse matrix: {e:?}")))
    }

    /// Coordinate listing, one `i j re im` line per stored entry, 0-based.
    pub fn write_coo(&self, mut out: impl Write) -> Result<()> {
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                writeln!(out, "{i} {j} {:.17e} {:.17e}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn triplets_sum_duplicates_and_sort() {
        let m = CsrMatrix::from_triplets(2, 3, &[(0, 2, c(1.0, 0.0)), (0, 0, c(2.0, 0.0)), (0, 2, c(0.5, 1.0))]);
        assert_eq!(m.col_idx, vec![0, 2]);
        assert_eq!(m.get(0, 2), c(1.5, 1.0));
        assert_eq!(m.get(1, 1), c(0.0, 0.0));
        assert_eq!(m.matvec(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]), vec![c(1.0, 1.5), c(0.0, 0.0)]);
    }

    #[test]
    fn axpby_unions_patterns() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 1, c(1.0, 0.0))]);
        let b = CsrMatrix::identity(2);
        let s = CsrMatrix::axpby(c(2.0, 0.0), &a, c(0.0, 1.0), &b);
        assert_eq!(s.nnz(), 3);
        assert_eq!(s.get(0, 1), c(2.0, 0.0));
        assert_eq!(s.get(1, 1), c(0.0, 1.0));
    }

    #[test]
    fn hermitian_defect_and_adjoint() {
        let m = CsrMatrix::from_triplets(2, 2, &[(0, 1, c(1.0, 2.0)), (1, 0, c(1.0, -2.0)), (0, 0, c(3.0, 0.0))]);
        assert_eq!(m.hermitian_defect(), 0.0);
        assert_eq!(m.adjoint(), m);
        let n = CsrMatrix::from_triplets(2, 2, &[(0, 1, c(1.0, 2.0))]);
        assert!((n.hermitian_defect() - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn coo_dump_format() {
        let m = CsrMatrix::from_triplets(2, 2, &[(1, 0, c(0.5, -1.0))]);
        let mut buf = Vec::new();
        m.write_coo(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let toks: Vec<&str> = text.split_whitespace().collect();
        assert_eq!(toks[0], "1");
        assert_eq!(toks[1], "0");
        assert_eq!(toks[2].parse::<f64>().unwrap(), 0.5);
        assert_eq!(toks[3].parse::<f64>().unwrap(), -1.0);
    }
}
