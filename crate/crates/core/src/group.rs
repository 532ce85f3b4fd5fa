//! Isometry groups used for energy and rich-transformation counting.

use std::fmt;

use num_traits::{One, Zero};

use crate::affine::{permutation_matrices, AffineJson, AffineMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::metric::{Metric, MetricKind};
use crate::rational::{q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    /// Translations and orthogonal maps.
    Euclidean { d: usize },
    /// Translations and rotations of the plane.
    SpecialEuclidean2,
    /// Translations and `O(1,1)`.
    PseudoEuclidean,
    /// Translations and signed permutation matrices.
    SignedPermTranslations { d: usize },
    /// Linear orthogonal maps.
    Orthogonal { d: usize },
    /// Linear maps of determinant one in the plane.
    SpecialLinear2,
    /// An explicit list of affine maps.
    Finite { d: usize, elements: Vec<AffineMap> },
}

impl Group {
    /// The full isometry group of a catalogued metric.
    pub fn of_metric(m: &Metric) -> Self {
        let d = m.d();
        match m.kind() {
            MetricKind::EuclidSq | MetricKind::Lp { p: 2 } => Group::Euclidean { d },
            MetricKind::Pseudo => Group::PseudoEuclidean,
            MetricKind::Lp { .. } => Group::SignedPermTranslations { d },
            MetricKind::Dot => Group::Orthogonal { d },
            MetricKind::Skew => Group::SpecialLinear2,
            MetricKind::SymTensor { .. } => Group::Finite {
                d,
                elements: m.finite_elements().unwrap_or_default(),
            },
        }
    }

    /// Parses `E`, `SE2`, `pseudo`, `signed_perm`, `O` or `SL2`.
    pub fn parse(id: &str, d: usize) -> Result<Self> {
        let need_plane = |g: Group| {
            if d == 2 {
                Ok(g)
            } else {
                Err(Error::UnsupportedGroup(format!("{id} needs d = 2")))
            }
        };
        match id {
            "E" | "euclidean" => Ok(Group::Euclidean { d }),
            "SE2" | "se2" => need_plane(Group::SpecialEuclidean2),
            "pseudo" | "pseudo11" => need_plane(Group::PseudoEuclidean),
            "signed_perm" => Ok(Group::SignedPermTranslations { d }),
            "O" | "orthogonal" => Ok(Group::Orthogonal { d }),
            "SL2" | "sl2" => need_plane(Group::SpecialLinear2),
            _ => Err(Error::UnsupportedGroup(id.to_string())),
        }
    }

    /// A finite group from serialized affine maps.
    pub fn finite_from_json(d: usize, elements: Vec<AffineJson>) -> Result<Self> {
        let elements = elements.into_iter().map(AffineMap::try_from).collect::<Result<Vec<_>>>()?;
        if let Some(e) = elements.iter().find(|e| e.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: e.dim() });
        }
        Ok(Group::Finite { d, elements })
    }

    pub fn d(&self) -> usize {
        match self {
            Group::Euclidean { d } | Group::SignedPermTranslations { d } | Group::Orthogonal { d } => *d,
            Group::Finite { d, .. } => *d,
            Group::SpecialEuclidean2 | Group::PseudoEuclidean | Group::SpecialLinear2 => 2,
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Group::Finite { elements, .. } => Some(elements.len()),
            _ => None,
        }
    }

    /// Exact membership test.
    pub fn contains(&self, theta: &AffineMap) -> bool {
        if theta.dim() != self.d() {
            return false;
        }
        let a = &theta.a;
        match self {
            Group::Euclidean { .. } => linalg::mat_mul(&linalg::transpose(a), a) == linalg::identity(self.d()),
            Group::SpecialEuclidean2 => {
                linalg::mat_mul(&linalg::transpose(a), a) == linalg::identity(2) && linalg::det(a).is_one()
            }
            Group::PseudoEuclidean => {
                let eta = [q(1), q(-1)];
                (0..2).all(|i| {
                    (0..2).all(|j| {
                        let v = (0..2).fold(Q::zero(), |acc, r| acc + &a[r][i] * &eta[r] * &a[r][j]);
                        v == if i == j { eta[i].clone() } else { Q::zero() }
                    })
                })
            }
            Group::SignedPermTranslations { d } => permutation_matrices(*d, true).contains(a),
            Group::Orthogonal { d } => {
                theta.is_linear() && linalg::mat_mul(&linalg::transpose(a), a) == linalg::identity(*d)
            }
            Group::SpecialLinear2 => theta.is_linear() && linalg::det(a).is_one(),
            Group::Finite { elements, .. } => elements.contains(theta),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Euclidean { d } => write!(f, "E({d})"),
            Group::SpecialEuclidean2 => write!(f, "SE(2)"),
            Group::PseudoEuclidean => write!(f, "R^2 x O(1,1)"),
            Group::SignedPermTranslations { d } => write!(f, "R^{d} x signed permutations"),
            Group::Orthogonal { d } => write!(f, "O({d})"),
            Group::SpecialLinear2 => write!(f, "SL(2)"),
            Group::Finite { elements, .. } => write!(f, "finite group of order {}", elements.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn metric_groups_agree_with_membership() {
        for m in [Metric::euclid_sq(2), Metric::pseudo(), Metric::lp(4, 2).unwrap(), Metric::dot(2), Metric::skew()] {
            let g = Group::of_metric(&m);
            for theta in m.sample_isometries() {
                assert!(g.contains(&theta), "{m} {g}");
            }
        }
    }

    #[test]
    fn se2_excludes_reflections() {
        let flip = AffineMap::from_i64(&[&[1, 0], &[0, -1]], &[3, 0]);
        assert!(Group::Euclidean { d: 2 }.contains(&flip));
        assert!(!Group::SpecialEuclidean2.contains(&flip));
        let rot = AffineMap::new(vec![vec![qf(3, 5), qf(-4, 5)], vec![qf(4, 5), qf(3, 5)]], vec![q(1), q(1)]).unwrap();
        assert!(Group::SpecialEuclidean2.contains(&rot));
    }

    #[test]
    fn parse_ids() {
        assert_eq!(Group::parse("SE2", 2).unwrap(), Group::SpecialEuclidean2);
        assert!(Group::parse("SE2", 3).is_err());
        assert!(Group::parse("affine", 2).is_err());
        assert_eq!(Group::of_metric(&Metric::sym_tensor(4, 1).unwrap()).order(), Some(2));
    }
}
