//! The catalogue of polynomial measurement functions `g` and their isometry groups.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::affine::{permutation_matrices, AffineMap};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{q, qf, Q};
use crate::scalar::{from_usize, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// `|x - y|^2`.
    EuclidSq,
    /// `(x1 - y1)^2 - (x2 - y2)^2`, plane only.
    Pseudo,
    /// `sum (x_i - y_i)^p` for even `p`.
    Lp { p: u32 },
    /// `x . y`.
    Dot,
    /// `x1 y2 - x2 y1`, plane only.
    Skew,
    /// `sum_j x_j(1) ... x_j(k)`.
    SymTensor { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Metric {
    kind: MetricKind,
    d: usize,
}

/// Generators of the identity component plus, for finite groups, every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsometryDescriptor {
    pub lie_generators: Vec<AffineMap>,
    pub finite_elements: Option<Vec<AffineMap>>,
}

impl Metric {
    pub fn new(kind: MetricKind, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        match kind {
            MetricKind::Pseudo | MetricKind::Skew if d != 2 => {
                return Err(Error::UnsupportedMetric(format!("{} is defined only for d = 2", Self { kind, d })));
            }
            MetricKind::Lp { p } if p != 2 && (p < 4 || p % 2 == 1) => {
                return Err(Error::UnsupportedMetric(format!("lp:{p} is not polynomial; use p = 2 or an even p >= 4")));
            }
            MetricKind::SymTensor { k } if k < 3 => {
                return Err(Error::UnsupportedMetric(format!("sym_tensor:{k} needs k >= 3")));
            }
            _ => {}
        }
        Ok(Self { kind, d })
    }

    pub fn euclid_sq(d: usize) -> Self {
        Self::new(MetricKind::EuclidSq, d).expect("valid")
    }

    pub fn pseudo() -> Self {
        Self { kind: MetricKind::Pseudo, d: 2 }
    }

    pub fn lp(p: u32, d: usize) -> Result<Self> {
        Self::new(MetricKind::Lp { p }, d)
    }

    pub fn dot(d: usize) -> Self {
        Self::new(MetricKind::Dot, d).expect("valid")
    }

    pub fn skew() -> Self {
        Self { kind: MetricKind::Skew, d: 2 }
    }

    pub fn sym_tensor(k: usize, d: usize) -> Result<Self> {
        Self::new(MetricKind::SymTensor { k }, d)
    }

    /// Parses a command-line id such as `euclid_sq`, `lp:4` or `sym_tensor:3`.
    pub fn parse(id: &str, d: usize) -> Result<Self> {
        let (name, param) = match id.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (id, None),
        };
        let int_param = |what: &str| -> Result<u64> {
            param
                .ok_or_else(|| Error::UnknownMetric(format!("{id}: missing {what}")))?
                .parse::<u64>()
                .map_err(|_| Error::UnknownMetric(format!("{id}: {what} must be a positive integer")))
        };
        let kind = match (name, param) {
            ("euclid_sq", None) => MetricKind::EuclidSq,
            ("pseudo11", None) => MetricKind::Pseudo,
            ("dot", None) => MetricKind::Dot,
            ("skew", None) => MetricKind::Skew,
            ("lp", _) => MetricKind::Lp { p: int_param("p")? as u32 },
            ("sym_tensor", _) => MetricKind::SymTensor { k: int_param("k")? as usize },
            _ => return Err(Error::UnknownMetric(id.to_string())),
        };
        Self::new(kind, d)
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        match self.kind {
            MetricKind::SymTensor { k } => k,
            _ => 2,
        }
    }

    pub fn degree(&self) -> usize {
        match self.kind {
            MetricKind::Lp { p } => p as usize,
            MetricKind::SymTensor { k } => k,
            _ => 2,
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        match self.kind {
            MetricKind::Skew => Symmetry::Antisymmetric,
            _ => Symmetry::Symmetric,
        }
    }

    /// Whether `g` is a function of the difference of its two arguments.
    pub fn is_translation_invariant(&self) -> bool {
        matches!(self.kind, MetricKind::EuclidSq | MetricKind::Pseudo | MetricKind::Lp { .. })
    }

    fn check_args<T>(&self, xs: &[&[T]]) -> Result<()> {
        if xs.len() != self.k() {
            return Err(Error::ArityMismatch { expected: self.k(), got: xs.len() });
        }
        if let Some(x) = xs.iter().find(|x| x.len() != self.d) {
            return Err(Error::DimensionMismatch { expected: self.d, got: x.len() });
        }
        Ok(())
    }

    /// `g(x_1, ..., x_k)`, arguments taken in the given order.
    pub fn eval<T: Scalar>(&self, xs: &[&[T]]) -> Result<T> {
        self.check_args(xs)?;
        Ok(self.eval_unchecked(xs))
    }

    pub(crate) fn eval_unchecked<T: Scalar>(&self, xs: &[&[T]]) -> T {
        match self.kind {
            MetricKind::EuclidSq => diff_power_sum(xs[0], xs[1], 2),
            MetricKind::Lp { p } => diff_power_sum(xs[0], xs[1], p as usize),
            MetricKind::Pseudo => {
                let a = xs[0][0].clone() - xs[1][0].clone();
                let b = xs[0][1].clone() - xs[1][1].clone();
                a.clone() * a - b.clone() * b
            }
            MetricKind::Dot => xs[0].iter().zip(xs[1]).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()),
            MetricKind::Skew => xs[0][0].clone() * xs[1][1].clone() - xs[0][1].clone() * xs[1][0].clone(),
            MetricKind::SymTensor { .. } => (0..self.d).fold(T::zero(), |acc, j| {
                acc + xs.iter().fold(T::one(), |prod, x| prod * x[j].clone())
            }),
        }
    }

    /// Gradient of `g` with respect to argument `slot` (zero-based).
    pub fn grad<T: Scalar>(&self, xs: &[&[T]], slot: usize) -> Result<Vec<T>> {
        self.check_args(xs)?;
        if slot >= self.k() {
            return Err(Error::InvalidArgument(format!("slot {slot} out of range for arity {}", self.k())));
        }
        Ok(self.grad_unchecked(xs, slot))
    }

    pub(crate) fn grad_unchecked<T: Scalar>(&self, xs: &[&[T]], slot: usize) -> Vec<T> {
        let sign = |v: T| if slot == 0 { v } else { -v };
        match self.kind {
            MetricKind::EuclidSq => diff_power_grad(xs[0], xs[1], 2).into_iter().map(sign).collect(),
            MetricKind::Lp { p } => diff_power_grad(xs[0], xs[1], p as usize).into_iter().map(sign).collect(),
            MetricKind::Pseudo => {
                let two = from_usize::<T>(2);
                let a = two.clone() * (xs[0][0].clone() - xs[1][0].clone());
                let b = two * (xs[0][1].clone() - xs[1][1].clone());
                vec![sign(a), sign(-b)]
            }
            MetricKind::Dot => xs[1 - slot].to_vec(),
            MetricKind::Skew => {
                let other = xs[1 - slot];
                if slot == 0 {
                    vec![other[1].clone(), -other[0].clone()]
                } else {
                    vec![-other[1].clone(), other[0].clone()]
                }
            }
            MetricKind::SymTensor { .. } => (0..self.d)
                .map(|j| {
                    xs.iter()
                        .enumerate()
                        .filter(|&(l, _)| l != slot)
                        .fold(T::one(), |prod, (_, x)| prod * x[j].clone())
                })
                .collect(),
        }
    }

    pub fn isometries(&self) -> IsometryDescriptor {
        IsometryDescriptor {
            lie_generators: self.lie_generators(),
            finite_elements: self.finite_elements(),
        }
    }

    /// A spanning set of the Lie algebra of the isometry group.
    pub fn lie_generators(&self) -> Vec<AffineMap> {
        let d = self.d;
        let translations = || (0..d).map(|i| AffineMap::translation_generator(unit(d, i))).collect::<Vec<_>>();
        match self.kind {
            MetricKind::EuclidSq | MetricKind::Lp { p: 2 } => {
                let mut g = translations();
                g.extend(rotation_generators(d));
                g
            }
            MetricKind::Pseudo => {
                let mut g = translations();
                g.push(AffineMap::linear(vec![vec![q(0), q(1)], vec![q(1), q(0)]]));
                g
            }
            MetricKind::Lp { .. } => translations(),
            MetricKind::Dot => rotation_generators(d),
            MetricKind::Skew => vec![
                AffineMap::linear(vec![vec![q(1), q(0)], vec![q(0), q(-1)]]),
                AffineMap::linear(vec![vec![q(0), q(1)], vec![q(0), q(0)]]),
                AffineMap::linear(vec![vec![q(0), q(0)], vec![q(1), q(0)]]),
            ],
            MetricKind::SymTensor { .. } => Vec::new(),
        }
    }

    /// Every isometry, when the group is finite.
    pub fn finite_elements(&self) -> Option<Vec<AffineMap>> {
        match self.kind {
            MetricKind::SymTensor { k } => {
                Some(permutation_matrices(self.d, k % 2 == 0).into_iter().map(AffineMap::linear).collect())
            }
            _ => None,
        }
    }

    /// Exact membership of `theta` in the isometry group.
    pub fn is_isometry(&self, theta: &AffineMap) -> Result<bool> {
        if theta.dim() != self.d || theta.a.len() != self.d || theta.a.iter().any(|r| r.len() != self.d) {
            return Err(Error::DimensionMismatch { expected: self.d, got: theta.dim() });
        }
        let a = &theta.a;
        Ok(match self.kind {
            MetricKind::EuclidSq | MetricKind::Lp { p: 2 } => is_orthogonal(a),
            MetricKind::Pseudo => preserves_form(a, &[q(1), q(-1)]),
            MetricKind::Lp { .. } => is_permutation(a, true),
            MetricKind::Dot => is_orthogonal(a) && theta.is_linear(),
            MetricKind::Skew => linalg::det(a).is_one() && theta.is_linear(),
            MetricKind::SymTensor { k } => is_permutation(a, k % 2 == 0) && theta.is_linear(),
        })
    }

    /// A handful of explicit rational isometries, used to probe invariance.
    pub fn sample_isometries(&self) -> Vec<AffineMap> {
        let d = self.d;
        let shift: Vec<Q> = (0..d).map(|i| qf(2 * i as i64 + 1, 3)).collect();
        let with_shift = |m: Matrix| AffineMap::new(m, shift.clone()).expect("square");
        let mut out = vec![AffineMap::identity(d)];
        match self.kind {
            MetricKind::EuclidSq | MetricKind::Lp { p: 2 } => {
                out.push(AffineMap::translation(shift.clone()));
                out.extend(sampled_signed_permutations(d).into_iter().map(with_shift));
                if d >= 2 {
                    out.push(with_shift(plane_rotation(d, qf(3, 5), qf(4, 5))));
                }
            }
            MetricKind::Pseudo => {
                out.push(AffineMap::translation(shift.clone()));
                let boost = vec![vec![qf(5, 4), qf(3, 4)], vec![qf(3, 4), qf(5, 4)]];
                out.push(with_shift(boost));
                out.push(with_shift(vec![vec![q(1), q(0)], vec![q(0), q(-1)]]));
                out.push(with_shift(vec![vec![q(-1), q(0)], vec![q(0), q(1)]]));
                out.push(with_shift(vec![vec![q(-1), q(0)], vec![q(0), q(-1)]]));
            }
            MetricKind::Lp { .. } => {
                out.push(AffineMap::translation(shift.clone()));
                out.extend(sampled_signed_permutations(d).into_iter().map(with_shift));
            }
            MetricKind::Dot => {
                out.extend(sampled_signed_permutations(d).into_iter().map(AffineMap::linear));
                if d >= 2 {
                    out.push(AffineMap::linear(plane_rotation(d, qf(3, 5), qf(4, 5))));
                }
            }
            MetricKind::Skew => {
                for m in [[[2, 1], [1, 1]], [[1, 3], [0, 1]], [[0, -1], [1, 0]], [[-1, 0], [0, -1]]] {
                    out.push(AffineMap::linear(m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()));
                }
                out.push(AffineMap::linear(vec![vec![q(2), q(0)], vec![q(0), qf(1, 2)]]));
            }
            MetricKind::SymTensor { .. } => return self.finite_elements().unwrap_or_default(),
        }
        out.retain(|t| self.is_isometry(t).unwrap_or(false));
        out
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MetricKind::EuclidSq => write!(f, "euclid_sq"),
            MetricKind::Pseudo => write!(f, "pseudo11"),
            MetricKind::Lp { p } => write!(f, "lp:{p}"),
            MetricKind::Dot => write!(f, "dot"),
            MetricKind::Skew => write!(f, "skew"),
            MetricKind::SymTensor { k } => write!(f, "sym_tensor:{k}"),
        }
    }
}

fn diff_power_sum<T: Scalar>(x: &[T], y: &[T], p: usize) -> T {
    x.iter()
        .zip(y)
        .fold(T::zero(), |acc, (a, b)| acc + num_traits::pow(a.clone() - b.clone(), p))
}

/// Gradient of `sum (x_i - y_i)^p` with respect to `x`.
fn diff_power_grad<T: Scalar>(x: &[T], y: &[T], p: usize) -> Vec<T> {
    let c = from_usize::<T>(p);
    x.iter()
        .zip(y)
        .map(|(a, b)| c.clone() * num_traits::pow(a.clone() - b.clone(), p - 1))
        .collect()
}

fn unit(d: usize, i: usize) -> Vec<Q> {
    (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

/// `E_ij - E_ji` for `i < j`.
fn rotation_generators(d: usize) -> Vec<AffineMap> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut a = vec![vec![Q::zero(); d]; d];
            a[i][j] = q(1);
            a[j][i] = q(-1);
            out.push(AffineMap::linear(a));
        }
    }
    out
}

fn plane_rotation(d: usize, c: Q, s: Q) -> Matrix {
    let mut a = linalg::identity(d);
    a[0][0] = c.clone();
    a[0][1] = -s.clone();
    a[1][0] = s;
    a[1][1] = c;
    a
}

fn sampled_signed_permutations(d: usize) -> Vec<Matrix> {
    let all = permutation_matrices(d, true);
    let step = (all.len() / 6).max(1);
    all.into_iter().step_by(step).collect()
}

fn is_orthogonal(a: &Matrix) -> bool {
    linalg::mat_mul(&linalg::transpose(a), a) == linalg::identity(a.len())
}

/// `A^T diag(eta) A == diag(eta)`.
fn preserves_form(a: &Matrix, eta: &[Q]) -> bool {
    let n = a.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let v = (0..n).fold(Q::zero(), |acc, r| acc + &a[r][i] * &eta[r] * &a[r][j]);
            v == if i == j { eta[i].clone() } else { Q::zero() }
        })
    })
}

fn is_permutation(a: &Matrix, signed: bool) -> bool {
    let n = a.len();
    let ok_entry = |x: &Q| x.is_zero() || x.is_one() || (signed && (-x).is_one());
    let rows_ok = a.iter().all(|r| r.iter().all(ok_entry) && r.iter().filter(|x| !x.is_zero()).count() == 1);
    let cols_ok = (0..n).all(|j| a.iter().filter(|r| !r[j].is_zero()).count() == 1);
    rows_ok && cols_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::permutation_matrices;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn catalogue() -> Vec<Metric> {
        let mut out = Vec::new();
        for d in 1..=3 {
            out.push(Metric::euclid_sq(d));
            out.push(Metric::dot(d));
            out.push(Metric::lp(4, d).unwrap());
            out.push(Metric::lp(2, d).unwrap());
            out.push(Metric::sym_tensor(3, d).unwrap());
            out.push(Metric::sym_tensor(4, d).unwrap());
        }
        out.push(Metric::lp(6, 2).unwrap());
        out.push(Metric::pseudo());
        out.push(Metric::skew());
        out
    }

    fn random_q(rng: &mut ChaCha8Rng) -> Q {
        qf(rng.gen_range(-20..=20), rng.gen_range(1..=7))
    }

    fn random_args(m: &Metric, rng: &mut ChaCha8Rng) -> Vec<Vec<Q>> {
        (0..m.k()).map(|_| (0..m.d()).map(|_| random_q(rng)).collect()).collect()
    }

    fn refs(xs: &[Vec<Q>]) -> Vec<&[Q]> {
        xs.iter().map(Vec::as_slice).collect()
    }

    #[test]
    fn eval_examples() {
        let e = Metric::euclid_sq(2);
        assert_eq!(e.eval(&[&[q(0), q(0)], &[q(3), q(4)]]).unwrap(), q(25));
        assert_eq!(Metric::pseudo().eval(&[&[q(0), q(0)], &[q(3), q(4)]]).unwrap(), q(-7));
        let s = Metric::skew();
        assert_eq!(s.eval(&[&[q(1), q(0)], &[q(0), q(1)]]).unwrap(), q(1));
        assert_eq!(s.eval(&[&[q(0), q(1)], &[q(1), q(0)]]).unwrap(), q(-1));
        let t = Metric::sym_tensor(3, 1).unwrap();
        assert_eq!(t.eval(&[&[q(2)], &[q(3)], &[q(5)]]).unwrap(), q(30));
        assert_eq!(e.eval(&[&[0.0, 0.0], &[3.0, 4.0]]).unwrap(), 25.0);
    }

    #[test]
    fn eval_rejects_bad_shapes() {
        let e = Metric::euclid_sq(2);
        assert_eq!(
            e.eval(&[&[q(0), q(0)]]).unwrap_err(),
            Error::ArityMismatch { expected: 2, got: 1 }
        );
        assert_eq!(
            e.eval(&[&[q(0)], &[q(1), q(2)]]).unwrap_err(),
            Error::DimensionMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn grad_examples() {
        let e = Metric::euclid_sq(2);
        assert_eq!(e.grad(&[&[q(0), q(0)], &[q(3), q(4)]], 0).unwrap(), vec![q(-6), q(-8)]);
        let dot = Metric::dot(2);
        assert_eq!(dot.grad(&[&[q(1), q(2)], &[q(3), q(4)]], 0).unwrap(), vec![q(3), q(4)]);
        assert!(e.grad(&[&[q(0), q(0)], &[q(3), q(4)]], 2).is_err());
    }

    #[test]
    fn parse_ids() {
        for id in ["euclid_sq", "dot", "lp:4", "lp:2", "sym_tensor:3"] {
            assert_eq!(Metric::parse(id, 2).unwrap().to_string(), id);
        }
        assert_eq!(Metric::parse("pseudo11", 2).unwrap(), Metric::pseudo());
        assert!(Metric::parse("pseudo11", 3).is_err());
        assert!(Metric::parse("lp:3", 2).is_err());
        assert!(Metric::parse("lp", 2).is_err());
        assert!(Metric::parse("sym_tensor:2", 2).is_err());
        assert!(matches!(Metric::parse("hamming", 2), Err(Error::UnknownMetric(_))));
    }

    #[test]
    fn generator_counts() {
        assert_eq!(Metric::euclid_sq(2).lie_generators().len(), 3);
        assert_eq!(Metric::euclid_sq(3).lie_generators().len(), 6);
        assert_eq!(Metric::pseudo().lie_generators().len(), 3);
        assert_eq!(Metric::lp(4, 2).unwrap().lie_generators().len(), 2);
        assert_eq!(Metric::dot(3).lie_generators().len(), 3);
        assert_eq!(Metric::skew().lie_generators().len(), 3);
        assert!(Metric::sym_tensor(3, 2).unwrap().lie_generators().is_empty());
        assert_eq!(Metric::sym_tensor(3, 2).unwrap().finite_elements().unwrap().len(), 2);
        assert_eq!(Metric::sym_tensor(4, 2).unwrap().finite_elements().unwrap().len(), 8);
    }

    #[test]
    fn membership_examples() {
        let rot = AffineMap::from_i64(&[&[0, -1], &[1, 0]], &[1, 2]);
        assert!(Metric::euclid_sq(2).is_isometry(&rot).unwrap());
        let boost = AffineMap::linear(vec![vec![qf(5, 4), qf(3, 4)], vec![qf(3, 4), qf(5, 4)]]);
        assert!(Metric::pseudo().is_isometry(&boost).unwrap());
        assert!(!Metric::euclid_sq(2).is_isometry(&boost).unwrap());
        let rot_shift = AffineMap::from_i64(&[&[0, -1], &[1, 0]], &[1, 0]);
        assert!(!Metric::dot(2).is_isometry(&rot_shift).unwrap());
        let flip = AffineMap::from_i64(&[&[1, 0], &[0, -1]], &[0, 0]);
        assert!(!Metric::skew().is_isometry(&flip).unwrap());
        let shear = AffineMap::from_i64(&[&[1, 5], &[0, 1]], &[0, 0]);
        assert!(Metric::skew().is_isometry(&shear).unwrap());
        let neg = AffineMap::from_i64(&[&[-1]], &[0]);
        assert!(!Metric::sym_tensor(3, 1).unwrap().is_isometry(&neg).unwrap());
        assert!(Metric::sym_tensor(4, 1).unwrap().is_isometry(&neg).unwrap());
        assert!(Metric::euclid_sq(3).is_isometry(&rot).is_err());
    }

    #[test]
    fn membership_contains_identity_and_is_closed_on_samples() {
        for m in catalogue() {
            assert!(m.is_isometry(&AffineMap::identity(m.d())).unwrap(), "{m}");
            let samples = m.sample_isometries();
            assert!(samples.len() >= 2 || m.d() == 1, "{m}");
            for a in &samples {
                assert!(m.is_isometry(&a.inverse().unwrap()).unwrap(), "{m}");
                for b in &samples {
                    assert!(m.is_isometry(&a.compose(b)).unwrap(), "{m}");
                }
            }
        }
    }

    #[test]
    fn linearized_invariance_holds_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in catalogue() {
            for gen in m.lie_generators() {
                for _ in 0..100 {
                    let xs = random_args(&m, &mut rng);
                    let r = refs(&xs);
                    let total = (0..m.k()).fold(Q::zero(), |acc, s| {
                        let grad = m.grad(&r, s).unwrap();
                        let vel = gen.apply(&xs[s]);
                        acc + grad.iter().zip(&vel).fold(Q::zero(), |a, (g, v)| a + g * v)
                    });
                    assert!(total.is_zero(), "{m} {gen:?}");
                }
            }
        }
    }

    #[test]
    fn values_invariant_under_sampled_isometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for m in catalogue() {
            for theta in m.sample_isometries() {
                for _ in 0..100 {
                    let xs = random_args(&m, &mut rng);
                    let ys: Vec<Vec<Q>> = xs.iter().map(|x| theta.apply(x)).collect();
                    assert_eq!(m.eval(&refs(&xs)).unwrap(), m.eval(&refs(&ys)).unwrap(), "{m}");
                }
            }
        }
    }

    #[test]
    fn symmetry_flag_matches_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for m in catalogue() {
            let perms = permutation_matrices(m.k(), false);
            for _ in 0..20 {
                let xs = random_args(&m, &mut rng);
                let base = m.eval(&refs(&xs)).unwrap();
                for p in &perms {
                    let order: Vec<usize> = p.iter().map(|r| r.iter().position(|x| x.is_one()).unwrap()).collect();
                    let parity = linalg::det(p);
                    let ys: Vec<Vec<Q>> = order.iter().map(|&i| xs[i].clone()).collect();
                    let v = m.eval(&refs(&ys)).unwrap();
                    let expected = match m.symmetry() {
                        Symmetry::Symmetric => base.clone(),
                        Symmetry::Antisymmetric => base.clone() * parity,
                    };
                    assert_eq!(v, expected, "{m}");
                }
            }
        }
    }

    #[test]
    fn degree_matches_scaling() {
        // g is homogeneous of degree deg g in the joint argument.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for m in catalogue() {
            let xs = random_args(&m, &mut rng);
            let scaled: Vec<Vec<Q>> = xs.iter().map(|x| x.iter().map(|c| c * q(2)).collect()).collect();
            let factor = num_traits::pow(q(2), m.degree());
            assert_eq!(m.eval(&refs(&scaled)).unwrap(), m.eval(&refs(&xs)).unwrap() * factor, "{m}");
        }
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for m in catalogue() {
                let xs: Vec<Vec<f64>> = (0..m.k()).map(|_| (0..m.d()).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
                for slot in 0..m.k() {
                    let r: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
                    let grad = m.grad(&r, slot).unwrap();
                    for i in 0..m.d() {
                        let h = 1e-5;
                        let mut plus = xs.clone();
                        let mut minus = xs.clone();
                        plus[slot][i] += h;
                        minus[slot][i] -= h;
                        let fp = m.eval(&plus.iter().map(Vec::as_slice).collect::<Vec<_>>()).unwrap();
                        let fm = m.eval(&minus.iter().map(Vec::as_slice).collect::<Vec<_>>()).unwrap();
                        let fd = (fp - fm) / (2.0 * h);
                        prop_assert!((fd - grad[i]).abs() < 1e-6 * (1.0 + grad[i].abs()), "{} slot {} fd {} grad {}", m, slot, fd, grad[i]);
                    }
                }
            }
        }
    }
}
