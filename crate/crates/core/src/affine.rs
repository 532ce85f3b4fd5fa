//! Affine maps `x -> A x + b` with rational entries.
//!
//! The same representation doubles as an infinitesimal generator: a pair
//! `(A, b)` in the Lie algebra of the affine group, acting on a point as the
//! velocity `A x + b`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{format_q, parse_q, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub a: Matrix,
    pub b: Vec<Q>,
}

impl AffineMap {
    pub fn new(a: Matrix, b: Vec<Q>) -> Result<Self> {
        let d = b.len();
        if a.len() != d || a.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: a.len() });
        }
        Ok(Self { a, b })
    }

    pub fn identity(d: usize) -> Self {
        Self { a: linalg::identity(d), b: vec![Q::zero(); d] }
    }

    pub fn linear(a: Matrix) -> Self {
        let d = a.len();
        Self { a, b: vec![Q::zero(); d] }
    }

    pub fn translation(b: Vec<Q>) -> Self {
        let d = b.len();
        Self { a: linalg::identity(d), b }
    }

    /// Generator with zero linear part: a pure translation velocity.
    pub fn translation_generator(b: Vec<Q>) -> Self {
        let d = b.len();
        Self { a: vec![vec![Q::zero(); d]; d], b }
    }

    pub fn from_i64(a: &[&[i64]], b: &[i64]) -> Self {
        Self {
            a: a.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect(),
            b: b.iter().map(|&x| Q::from_integer(x.into())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn is_linear(&self) -> bool {
        self.b.iter().all(Zero::is_zero)
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.a, x).into_iter().zip(&self.b).map(|(ax, b)| ax + b).collect()
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, b)| row.iter().zip(x).map(|(a, x)| to_f64(a) * x).sum::<f64>() + to_f64(b))
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: linalg::mat_mul(&self.a, &other.a),
            b: self.apply(&other.b),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let a = linalg::inverse(&self.a)?;
        let b = linalg::mat_vec(&a, &self.b).into_iter().map(|x| -x).collect();
        Some(Self { a, b })
    }

    pub fn det(&self) -> Q {
        linalg::det(&self.a)
    }

    /// The unique affine map sending `from[i]` to `to[i]`, given `d + 1`
    /// affinely independent source points.
    pub fn from_frame(from: &[&[Q]], to: &[&[Q]]) -> Option<Self> {
        let d = from.first()?.len();
        if from.len() != d + 1 || to.len() != d + 1 {
            return None;
        }
        // Columns [x_i; 1]; solve M * H = [y_i] for M = [A | b].
        let h: Matrix = (0..=d)
            .map(|r| {
                from.iter()
                    .map(|x| if r < d { x[r].clone() } else { Q::one() })
                    .collect()
            })
            .collect();
        let h_inv = linalg::inverse(&h)?;
        let y: Matrix = (0..d).map(|r| to.iter().map(|x| x[r].clone()).collect()).collect();
        let m = linalg::mat_mul(&y, &h_inv);
        Some(Self {
            a: m.iter().map(|row| row[..d].to_vec()).collect(),
            b: m.iter().map(|row| row[d].clone()).collect(),
        })
    }

    pub fn to_json(&self) -> AffineJson {
        AffineJson {
            a: self.a.iter().map(|r| r.iter().map(format_q).collect()).collect(),
            b: self.b.iter().map(format_q).collect(),
        }
    }
}

/// Serialized form: rationals as strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineJson {
    pub a: Vec<Vec<String>>,
    pub b: Vec<String>,
}

impl TryFrom<AffineJson> for AffineMap {
    type Error = Error;

    fn try_from(j: AffineJson) -> Result<Self> {
        let a = j
            .a
            .iter()
            .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Matrix>>()?;
        let b = j.b.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
        AffineMap::new(a, b)
    }
}

/// All `d x d` permutation matrices, optionally with every sign pattern.
pub fn permutation_matrices(d: usize, signed: bool) -> Vec<Matrix> {
    let mut perms = Vec::new();
    permute(&mut (0..d).collect::<Vec<_>>(), 0, &mut perms);
    let signs: Vec<Vec<i64>> = if signed {
        (0u32..1 << d).map(|m| (0..d).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
    } else {
        vec![vec![1; d]]
    };
    let mut out = Vec::new();
    for p in &perms {
        for s in &signs {
            let mut m = vec![vec![Q::zero(); d]; d];
            for (row, &col) in p.iter().enumerate() {
                m[row][col] = Q::from_integer(s[row].into());
            }
            out.push(m);
        }
    }
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}
