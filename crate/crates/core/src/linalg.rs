//! Dense linear algebra over exact rationals, plus an SVD rank for floats.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::rational::Q;

/// Row-major dense matrix; every row must have the same length.
pub type Matrix = Vec<Vec<Q>>;

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Q::zero(); self.cols];
                v[free] = Q::from_integer(1.into());
                for (row, &p) in self.pivots.iter().enumerate() {
                    v[p] = -self.reduced[row][free].clone();
                }
                v
            })
            .collect()
    }
}

/// Gauss-Jordan elimination. `cols` is needed when `rows` is empty.
pub fn rref(rows: &[Vec<Q>], cols: usize) -> Echelon {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Echelon { reduced: m, pivots, cols }
}

pub fn rank(rows: &[Vec<Q>], cols: usize) -> usize {
    rref(rows, cols).rank()
}

pub fn kernel(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    rref(rows, cols).kernel()
}

pub fn mat_vec(rows: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    rows.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).fold(Q::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Q>]) -> Matrix {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect())
        .collect()
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(a: &[Vec<Q>]) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let e = rref(&aug, 2 * n);
    if e.rank() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.reduced.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant by elimination.
pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::from_integer(1.into());
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if pr != c {
            m.swap(pr, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    d
}

/// Numerical rank: singular values below `rel_tol * sigma_max` count as zero.
pub fn float_rank(rows: &[Vec<f64>], cols: usize, rel_tol: f64) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}
