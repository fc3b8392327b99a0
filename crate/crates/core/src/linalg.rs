//! Exact dense linear algebra over Gaussian rationals, plus determinants
//! of small matrices of series.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::coeff::GaussianRational;
use crate::error::{Error, Result};
use crate::series::{Context, TruncatedSeries};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<GaussianRational>) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols, "row length");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += &p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(self.cols, v.len(), "shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += &(a * b);
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let delta = &f * &m[(r, j)];
                    m[(i, j)] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<GaussianRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![GaussianRational::zero(); self.cols];
                x[f] = GaussianRational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = -&r[(row, f)];
                }
                x
            })
            .collect()
    }

    /// Some solution of `A x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(b.len(), self.rows, "shape");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> GaussianRational {
        assert_eq!(self.rows, self.cols, "square");
        let mut m = self.clone();
        let mut det = GaussianRational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return GaussianRational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    let delta = &f * &m[(c, j)];
                    m[(i, j)] -= &delta;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "square");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = GaussianRational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[i * self.cols + j]
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Determinant of a square matrix of series, by cofactor expansion along
/// the first row. Intended for the small sizes that occur here.
pub fn series_determinant(ctx: &Context, order: u32, m: &[Vec<TruncatedSeries>]) -> Result<TruncatedSeries> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(alloc::format!("{}x? matrix is not square", n)));
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    det_rec(ctx, order, m, &rows, &cols)
}

fn det_rec(
    ctx: &Context,
    order: u32,
    m: &[Vec<TruncatedSeries>],
    rows: &[usize],
    cols: &[usize],
) -> Result<TruncatedSeries> {
    match rows.len() {
        0 => Ok(TruncatedSeries::one(ctx, order)),
        1 => Ok(m[rows[0]][cols[0]].truncated(order)),
        2 => {
            let a = m[rows[0]][cols[0]].mul(&m[rows[1]][cols[1]])?;
            let b = m[rows[0]][cols[1]].mul(&m[rows[1]][cols[0]])?;
            Ok(a.sub(&b)?.truncated(order))
        }
        _ => {
            let mut acc = TruncatedSeries::zero(ctx, order);
            let r0 = rows[0];
            for (k, &c) in cols.iter().enumerate() {
                let entry = &m[r0][c];
                if entry.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = det_rec(ctx, order, m, &rows[1..], &sub_cols)?;
                if minor.is_zero() {
                    continue;
                }
                let term = entry.mul(&minor)?;
                acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            Ok(acc)
        }
    }
}

/// Inverse of a square series matrix whose determinant is a unit.
pub fn series_inverse(ctx: &Context, order: u32, m: &[Vec<TruncatedSeries>]) -> Result<Vec<Vec<TruncatedSeries>>> {
    let n = m.len();
    let det = series_determinant(ctx, order, m)?;
    if det.constant_term().is_zero() {
        return Err(Error::NotAUnit);
    }
    let mut inv = vec![vec![TruncatedSeries::zero(ctx, order); n]; n];
    let all: Vec<usize> = (0..n).collect();
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            // inverse[i][j] = (-1)^{i+j} minor(j, i) / det
            let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
            let minor = det_rec(ctx, order, m, &rows, &cols)?;
            let cof = if (i + j) % 2 == 0 { minor } else { minor.neg() };
            *slot = TruncatedSeries::divide_by_unit(&cof, &det)?;
        }
    }
    Ok(inv)
}
