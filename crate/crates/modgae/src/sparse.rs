//! Compressed sparse row matrices.
//!
//! Everything downstream (graphs, message passing operators, membership
//! matrices) shares this one representation. Matrices are immutable after
//! construction; column indices are sorted within each row.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a CSR matrix from (row, col, value) triplets.
    /// Duplicate coordinates are summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut trip: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        trip.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut col_idx: Vec<usize> = Vec::with_capacity(trip.len());
        let mut values: Vec<f64> = Vec::with_capacity(trip.len());
        let mut rows: Vec<usize> = Vec::with_capacity(trip.len());
        for (r, c, v) in trip {
            debug_assert!(r < n_rows && c < n_cols);
            if rows.last() == Some(&r) && col_idx.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        let mut row_ptr = vec![0usize; n_rows + 1];
        for &r in &rows {
            row_ptr[r + 1] += 1;
        }
        for r in 0..n_rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CsrMatrix {
            n_rows,
            n_cols,
            row_ptr: vec![0; n_rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Row sums.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows)
            .map(|r| self.row(r).1.iter().sum())
            .collect()
    }

    pub fn values_sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.n_rows != self.n_cols {
            return false;
        }
        self.iter()
            .all(|(r, c, v)| (self.get(c, r) - v).abs() <= tol)
    }

    pub fn check_symmetric(&self, tol: f64) -> Result<()> {
        if self.is_symmetric(tol) {
            Ok(())
        } else {
            Err(Error::Contract("matrix is not symmetric".into()))
        }
    }

    /// `self + alpha * other`, entrywise over the union of supports.
    pub fn add_scaled(&self, other: &CsrMatrix, alpha: f64) -> CsrMatrix {
        assert_eq!(self.n_rows, other.n_rows);
        assert_eq!(self.n_cols, other.n_cols);
        let mut trip = Vec::with_capacity(self.nnz() + other.nnz());
        trip.extend(self.iter());
        trip.extend(other.iter().map(|(r, c, v)| (r, c, alpha * v)));
        CsrMatrix::from_triplets(self.n_rows, self.n_cols, trip)
    }

    /// Sparse-dense product `self · m`.
    pub fn mul_dense(&self, m: &Array2<f64>) -> Array2<f64> {
        assert_eq!(self.n_cols, m.nrows(), "spmm shape mismatch");
        let k = m.ncols();
        let mut out = Array2::<f64>::zeros((self.n_rows, k));
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            let mut acc = out.row_mut(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let src = m.row(c);
                for (a, s) in acc.iter_mut().zip(src.iter()) {
                    *a += v * s;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &Array1<f64>) -> Array1<f64> {
        assert_eq!(self.n_cols, x.len());
        Array1::from_iter((0..self.n_rows).map(|r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
        }))
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::<f64>::zeros((self.n_rows, self.n_cols));
        for (r, c, v) in self.iter() {
            out[(r, c)] += v;
        }
        out
    }

    /// Submatrix induced by `nodes` (square matrices only). `nodes` must be
    /// strictly increasing.
    pub fn induced(&self, nodes: &[usize]) -> CsrMatrix {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut pos = vec![usize::MAX; self.n_cols];
        for (new, &old) in nodes.iter().enumerate() {
            pos[old] = new;
        }
        let mut trip = Vec::new();
        for (new_r, &old_r) in nodes.iter().enumerate() {
            let (cols, vals) = self.row(old_r);
            for (&c, &v) in cols.iter().zip(vals) {
                if pos[c] != usize::MAX {
                    trip.push((new_r, pos[c], v));
                }
            }
        }
        CsrMatrix::from_triplets(nodes.len(), nodes.len(), trip)
    }
}
