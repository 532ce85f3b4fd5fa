//! `t`-rich transformations of a planar point set.
//!
//! Every group element sending at least two points of `P` into `P` maps some
//! ordered pair `(a, b)` onto an ordered pair `(c, d)`, and the group equations
//! have at most two solutions per assignment. Solving all assignments therefore
//! finds every class with richness at least two.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::pointset::PointSet;
use crate::rational::Q;

/// How transformations are identified before counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RichEquivalence {
    /// Same restriction to the points of `P` that land in `P`.
    #[default]
    PartialMap,
    /// Same sets `P ∩ θP` and `P ∩ θ^{-1}P`.
    IntersectionSets,
}

impl FromStr for RichEquivalence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "partial_map" | "partial-map" => Ok(RichEquivalence::PartialMap),
            "intersection_sets" | "intersection-sets" => Ok(RichEquivalence::IntersectionSets),
            _ => Err(Error::InvalidArgument(format!("unknown equivalence `{s}`"))),
        }
    }
}

impl fmt::Display for RichEquivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RichEquivalence::PartialMap => "partial_map",
            RichEquivalence::IntersectionSets => "intersection_sets",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RichReport {
    pub group: String,
    pub points: usize,
    pub t: usize,
    pub equivalence: RichEquivalence,
    /// Classes with richness at least `t`.
    pub count: u64,
    /// `(t', classes with richness >= t')` for `t' = 2..=|P|`.
    pub counts_by_t: Vec<(usize, u64)>,
    /// Distinct group elements solved from pair assignments.
    pub candidates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ClassKey {
    Pairs(Vec<(usize, usize)>),
    Sets(Vec<usize>, Vec<usize>),
}

/// Counts classes of group elements `θ` with `|P ∩ θP| >= t`.
pub fn rich_transformations(group: &Group, points: &PointSet, t: usize, equivalence: RichEquivalence) -> Result<RichReport> {
    if t < 2 {
        return Err(Error::InvalidArgument("richness threshold must be at least 2".into()));
    }
    let pts = points
        .exact()
        .ok_or_else(|| Error::InvalidArgument("rich transformations need exact coordinates".into()))?;
    if points.d() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: points.d() });
    }
    points.check_distinct()?;
    let candidates = candidate_transforms(group, pts)?;
    let index: HashMap<&[Q], usize> = pts.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();

    let mut classes: HashMap<ClassKey, usize> = HashMap::new();
    for th in &candidates {
        let pairs: Vec<(usize, usize)> = pts
            .iter()
            .enumerate()
            .filter_map(|(i, x)| index.get(th.apply(x).as_slice()).map(|&j| (i, j)))
            .collect();
        let richness = pairs.len();
        let key = match equivalence {
            RichEquivalence::PartialMap => ClassKey::Pairs(pairs),
            RichEquivalence::IntersectionSets => {
                let domain: Vec<usize> = pairs.iter().map(|p| p.0).collect();
                let mut image: Vec<usize> = pairs.iter().map(|p| p.1).collect();
                image.sort_unstable();
                ClassKey::Sets(image, domain)
            }
        };
        classes.insert(key, richness);
    }
    let n = pts.len();
    let counts_by_t: Vec<(usize, u64)> =
        (2..=n).map(|s| (s, classes.values().filter(|&&r| r >= s).count() as u64)).collect();
    let count = classes.values().filter(|&&r| r >= t).count() as u64;
    let warning = (matches!(group, Group::PseudoEuclidean) && on_diagonal_line(pts)).then(|| {
        "all points lie on one line parallel to a diagonal; rich-transformation bounds for O(1,1) do not apply".to_string()
    });
    Ok(RichReport {
        group: group.to_string(),
        points: n,
        t,
        equivalence,
        count,
        counts_by_t,
        candidates: candidates.len(),
        warning,
    })
}

/// `x - y` or `x + y` constant on all of `P`.
fn on_diagonal_line(pts: &[Vec<Q>]) -> bool {
    if pts.len() < 2 {
        return false;
    }
    let diff = |p: &Vec<Q>| &p[0] - &p[1];
    let sum = |p: &Vec<Q>| &p[0] + &p[1];
    pts.iter().all(|p| diff(p) == diff(&pts[0])) || pts.iter().all(|p| sum(p) == sum(&pts[0]))
}

fn matrix(a: Q, b: Q, c: Q, d: Q) -> Vec<Vec<Q>> {
    vec![vec![a, b], vec![c, d]]
}

/// The linear parts sending `u` to `w` in the group.
fn linear_solutions(group: &Group, u: &[Q], w: &[Q]) -> Vec<Vec<Vec<Q>>> {
    let (u1, u2, w1, w2) = (&u[0], &u[1], &w[0], &w[1]);
    let mut out = Vec::new();
    match group {
        Group::SpecialEuclidean2 | Group::Euclidean { .. } => {
            let n = u1 * u1 + u2 * u2;
            let c = (u1 * w1 + u2 * w2) / &n;
            let s = (u1 * w2 - u2 * w1) / &n;
            if (&c * &c + &s * &s).is_one() {
                out.push(matrix(c.clone(), -s.clone(), s, c));
            }
            if matches!(group, Group::Euclidean { .. }) {
                let c = (u1 * w1 - u2 * w2) / &n;
                let s = (u2 * w1 + u1 * w2) / &n;
                if (&c * &c + &s * &s).is_one() {
                    out.push(matrix(c.clone(), s.clone(), s, -c));
                }
            }
        }
        Group::PseudoEuclidean => {
            let qn = u1 * u1 - u2 * u2;
            if !qn.is_zero() {
                let c = (u1 * w1 - u2 * w2) / &qn;
                let s = (u1 * w2 - u2 * w1) / &qn;
                if (&c * &c - &s * &s).is_one() {
                    out.push(matrix(c.clone(), s.clone(), s, c));
                }
                let c = (u1 * w1 + u2 * w2) / &qn;
                let s = -(u1 * w2 + u2 * w1) / &qn;
                if (&c * &c - &s * &s).is_one() {
                    out.push(matrix(c.clone(), s.clone(), -s, -c));
                }
            } else {
                // u = (a, εa): [[c, s], [s, c]] scales it by c + εs = r.
                let a = u1;
                let eps = u2 / a;
                let half = Q::new(1.into(), 2.into());
                if *w2 == &eps * w1 && !w1.is_zero() {
                    let r = w1 / a;
                    let c = (&r + r.recip()) * &half;
                    let s = &eps * (&r - r.recip()) * &half;
                    out.push(matrix(c.clone(), s.clone(), s, c));
                }
                // [[c, s], [-s, -c]] sends it to (r a, -ε r a) with r = c + εs.
                if *w2 == -(&eps * w1) && !w1.is_zero() {
                    let r = w1 / a;
                    let c = (&r + r.recip()) * &half;
                    let s = &eps * (&r - r.recip()) * &half;
                    out.push(matrix(c.clone(), s.clone(), -s, -c));
                }
            }
        }
        _ => {}
    }
    out
}

/// Group elements sending an ordered pair of distinct points of `P` onto another.
pub(crate) fn candidate_transforms(group: &Group, pts: &[Vec<Q>]) -> Result<Vec<AffineMap>> {
    match group {
        Group::SpecialEuclidean2 | Group::PseudoEuclidean => {}
        Group::Euclidean { d: 2 } => {}
        _ => return Err(Error::UnsupportedGroup(format!("rich transformations are not available for {group}"))),
    }
    let mut seen: HashSet<AffineMap> = HashSet::new();
    let mut out = vec![AffineMap::identity(2)];
    seen.insert(out[0].clone());
    for a in pts {
        for b in pts {
            if a == b {
                continue;
            }
            let u = [&b[0] - &a[0], &b[1] - &a[1]];
            for c in pts {
                for d in pts {
                    if c == d {
                        continue;
                    }
                    let w = [&d[0] - &c[0], &d[1] - &c[1]];
                    for lin in linear_solutions(group, &u, &w) {
                        let la = crate::linalg::mat_vec(&lin, a);
                        let shift = vec![&c[0] - &la[0], &c[1] - &la[1]];
                        let th = AffineMap::new(lin, shift).expect("2x2 map");
                        debug_assert!(group.contains(&th));
                        if seen.insert(th.clone()) {
                            out.push(th);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
