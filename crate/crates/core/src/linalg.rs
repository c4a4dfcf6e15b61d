//! Dense exact linear algebra over F_p: row reduction, rank, kernels and
//! solving linear systems.

use crate::field::Fp;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }

    /// Matrix whose columns are the given vectors of length `len`.
    pub fn from_columns(cols: &[Vec<u32>], len: usize) -> Self {
        let mut m = Matrix::zeros(len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), len);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, fld: Fp, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc: u64 = 0;
                for (a, b) in self.row(i).iter().zip(x) {
                    acc = (acc + *a as u64 * *b as u64) % fld.p() as u64;
                }
                acc as u32
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, fld: Fp) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = fld.inv(self.get(r, c));
            for v in self.row_mut(r) {
                *v = fld.mul(*v, inv);
            }
            let pivot_row: Vec<u32> = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                let nf = fld.neg(f);
                let row = self.row_mut(i);
                for j in c..row.len() {
                    if pivot_row[j] != 0 {
                        row[j] = fld.add(row[j], fld.mul(nf, pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, fld: Fp) -> usize {
        self.clone().rref(fld).len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self, fld: Fp) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(fld);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u32; self.cols];
            x[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = fld.neg(m.get(r, free));
            }
            basis.push(x);
        }
        basis
    }

    /// Some `x` with `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, fld: Fp, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (i, &bi) in b.iter().enumerate() {
            aug.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            aug.set(i, self.cols, bi);
        }
        let pivots = aug.rref(fld);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// Incrementally maintained echelon basis of a subspace of F_p^n.
#[derive(Clone, Debug)]
pub struct Echelon {
    fld: Fp,
    n: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(fld: Fp, n: usize) -> Self {
        Echelon { fld, n, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.n);
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            let f = v[*pc];
            if f != 0 {
                let nf = self.fld.neg(f);
                for j in 0..self.n {
                    if row[j] != 0 {
                        v[j] = self.fld.add(v[j], self.fld.mul(nf, row[j]));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Add `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.fld.inv(r[pc]);
        for x in r.iter_mut() {
            *x = self.fld.mul(*x, inv);
        }
        self.rows.push((pc, r));
        true
    }
}
