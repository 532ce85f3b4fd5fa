//! Isometry energy: ordered pairs `(p, q)` in `P^V x P^V` with `θp = q` for some `θ` in the group.
//!
//! Finite groups are counted by applying every element. For the continuous
//! groups every realisation gets a class key and the energy is the sum of
//! squared class sizes. Keys are complete invariants for `E(d)`, `SE(2)`,
//! `O(d)` and the signed permutation group; for `O(1,1)` and `SL(2)` they only
//! bucket, and buckets are split with an exact relatedness test.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{check_budget, linear_index, par_enumerate, Filter, RealisationFilter};
use crate::affine::{permutation_matrices, AffineMap};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::linalg::{self, Matrix};
use crate::pointset::PointSet;
use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyMethod {
    FiniteGroup,
    AffineSolve,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub group: String,
    pub vertices: usize,
    pub points: usize,
    pub filter: Filter,
    pub method: EnergyMethod,
    pub energy: u128,
    /// Realisations passing the filter.
    pub realisations: u128,
    /// Equivalence classes; absent for finite element lists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<u64>,
    /// Realisations whose points do not affinely span the plane or space.
    pub non_spanning: u128,
    /// `|Γ| |P|^|V|` for finite groups.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_bound: Option<u128>,
    /// `|P|^|V| <= energy <= |P|^{2|V|}` over the filtered realisations.
    pub trivial_bounds_hold: bool,
}

/// Energy over all of `P^V`.
pub fn energy(group: &Group, vertices: usize, points: &PointSet, budget: u128) -> Result<EnergyReport> {
    let filter = RealisationFilter::new(Filter::All, points, None)?;
    energy_filtered(group, vertices, points, &filter, budget)
}

/// Energy with both `p` and `q` restricted to realisations the filter accepts.
pub fn energy_filtered(
    group: &Group,
    vertices: usize,
    points: &PointSet,
    filter: &RealisationFilter<'_>,
    budget: u128,
) -> Result<EnergyReport> {
    if group.d() != points.d() {
        return Err(Error::DimensionMismatch { expected: group.d(), got: points.d() });
    }
    let pts = points
        .exact()
        .ok_or_else(|| Error::InvalidArgument("energy needs exact coordinates".into()))?;
    points.check_distinct()?;
    if vertices == 0 {
        return Err(Error::InvalidArgument("energy needs at least one vertex".into()));
    }
    check_budget(pts.len(), vertices, budget)?;
    let n = pts.len();
    let d = points.d();

    let non_spanning: u128 = par_enumerate(n, vertices, || 0u128, |acc, idx| {
        if filter.accepts(idx) && !spans(pts, idx, d) {
            *acc += 1;
        }
    })
    .into_iter()
    .sum();

    let (energy, realisations, classes, method) = match group {
        Group::Finite { elements, .. } => {
            let (e, r) = finite_energy(elements, pts, vertices, filter);
            (e, r, None, EnergyMethod::FiniteGroup)
        }
        _ => {
            let sizes = class_sizes(group, pts, vertices, filter);
            let e = sizes.iter().map(|&s| (s as u128) * (s as u128)).sum();
            let r = sizes.iter().map(|&s| s as u128).sum();
            (e, r, Some(sizes.len() as u64), EnergyMethod::AffineSolve)
        }
    };
    let finite_bound = group.order().map(|o| o as u128 * (n as u128).pow(vertices as u32));
    Ok(EnergyReport {
        group: group.to_string(),
        vertices,
        points: n,
        filter: filter.filter(),
        method,
        energy,
        realisations,
        classes,
        non_spanning,
        finite_bound,
        trivial_bounds_hold: realisations <= energy && energy <= realisations * realisations,
    })
}

fn spans(pts: &[Vec<Q>], idx: &[usize], d: usize) -> bool {
    let rows: Vec<Vec<Q>> = (0..=d)
        .map(|r| idx.iter().map(|&i| if r < d { pts[i][r].clone() } else { Q::one() }).collect())
        .collect();
    linalg::rank(&rows, idx.len()) == d + 1
}

fn finite_energy(
    elements: &[AffineMap],
    pts: &[Vec<Q>],
    vertices: usize,
    filter: &RealisationFilter<'_>,
) -> (u128, u128) {
    let index: HashMap<&[Q], usize> = pts.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    // Image of each point under each element, if it lies in P.
    let images: Vec<Vec<Option<usize>>> = elements
        .iter()
        .map(|th| pts.iter().map(|p| index.get(th.apply(p).as_slice()).copied()).collect())
        .collect();
    let n = pts.len();
    let parts = par_enumerate(n, vertices, || (0u128, 0u128), |acc, idx| {
        if !filter.accepts(idx) {
            return;
        }
        acc.1 += 1;
        let mut seen: Vec<usize> = Vec::with_capacity(images.len());
        for img in &images {
            let q: Option<Vec<usize>> = idx.iter().map(|&i| img[i]).collect();
            if let Some(q) = q {
                if filter.accepts(&q) {
                    seen.push(linear_index(&q, n));
                }
            }
        }
        seen.sort_unstable();
        seen.dedup();
        acc.0 += seen.len() as u128;
    });
    parts.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ClassKey {
    Values(Vec<Q>),
    Points(Vec<Vec<Q>>),
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

fn det2(a: &[Q], b: &[Q]) -> Q {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn lorentz(a: &[Q]) -> Q {
    &a[0] * &a[0] - &a[1] * &a[1]
}

/// Complete invariant for `E(d)`, `SE(2)`, `O(d)` and signed permutations; a bucket otherwise.
fn class_key(group: &Group, p: &[&[Q]], perms: &[Matrix]) -> ClassKey {
    let v = p.len();
    let pairs = || (0..v).flat_map(move |i| (i + 1..v).map(move |j| (i, j)));
    match group {
        Group::Euclidean { .. } => ClassKey::Values(pairs().map(|(i, j)| {
            let u = sub(p[i], p[j]);
            dot(&u, &u)
        }).collect()),
        Group::SpecialEuclidean2 => {
            let mut vals: Vec<Q> = pairs().map(|(i, j)| {
                let u = sub(p[i], p[j]);
                dot(&u, &u)
            }).collect();
            for a in 0..v {
                for b in a + 1..v {
                    for c in b + 1..v {
                        vals.push(det2(&sub(p[b], p[a]), &sub(p[c], p[a])));
                    }
                }
            }
            ClassKey::Values(vals)
        }
        Group::Orthogonal { .. } => {
            ClassKey::Values((0..v).flat_map(|i| (i..v).map(move |j| (i, j))).map(|(i, j)| dot(p[i], p[j])).collect())
        }
        Group::SignedPermTranslations { .. } => {
            let rel: Vec<Vec<Q>> = p.iter().map(|x| sub(x, p[0])).collect();
            let best = perms
                .iter()
                .map(|a| rel.iter().map(|x| linalg::mat_vec(a, x)).collect::<Vec<_>>())
                .min()
                .unwrap_or(rel);
            ClassKey::Points(best)
        }
        Group::PseudoEuclidean => ClassKey::Values(pairs().map(|(i, j)| lorentz(&sub(p[i], p[j]))).collect()),
        Group::SpecialLinear2 => ClassKey::Values(pairs().map(|(i, j)| det2(p[i], p[j])).collect()),
        Group::Finite { .. } => unreachable!("finite groups are counted directly"),
    }
}

fn needs_split(group: &Group) -> bool {
    matches!(group, Group::PseudoEuclidean | Group::SpecialLinear2)
}

/// Sizes of the equivalence classes of accepted realisations.
fn class_sizes(group: &Group, pts: &[Vec<Q>], vertices: usize, filter: &RealisationFilter<'_>) -> Vec<u64> {
    classes(group, pts, vertices, filter).iter().map(|c| c.len() as u64).collect()
}

/// Equivalence classes of accepted realisations under a continuous group.
pub(crate) fn classes(
    group: &Group,
    pts: &[Vec<Q>],
    vertices: usize,
    filter: &RealisationFilter<'_>,
) -> Vec<Vec<Vec<usize>>> {
    let n = pts.len();
    let perms = match group {
        Group::SignedPermTranslations { d } => permutation_matrices(*d, true),
        _ => Vec::new(),
    };
    let parts = par_enumerate(n, vertices, HashMap::<ClassKey, Vec<Vec<usize>>>::new, |acc, idx| {
        if filter.accepts(idx) {
            let p: Vec<&[Q]> = idx.iter().map(|&i| pts[i].as_slice()).collect();
            acc.entry(class_key(group, &p, &perms)).or_default().push(idx.to_vec());
        }
    });
    let mut buckets: HashMap<ClassKey, Vec<Vec<usize>>> = HashMap::new();
    for part in parts {
        for (k, mut v) in part {
            buckets.entry(k).or_default().append(&mut v);
        }
    }
    if !needs_split(group) {
        return buckets.into_values().collect();
    }
    buckets
        .into_par_iter()
        .flat_map_iter(|(_, members)| {
            let mut reps: Vec<(Vec<&[Q]>, Vec<Vec<usize>>)> = Vec::new();
            for idx in members {
                let p: Vec<&[Q]> = idx.iter().map(|&i| pts[i].as_slice()).collect();
                match reps.iter_mut().find(|(r, _)| related(group, r, &p)) {
                    Some((_, c)) => c.push(idx),
                    None => reps.push((p, vec![idx])),
                }
            }
            reps.into_iter().map(|(_, c)| c).collect::<Vec<_>>()
        })
        .collect()
}

/// Checks that `key` agrees on every related pair `(p, q)`; returns `(pairs, mismatches)`.
pub(crate) fn pairs_agree_on<K, F>(
    group: &Group,
    pts: &[Vec<Q>],
    vertices: usize,
    filter: &RealisationFilter<'_>,
    key: F,
) -> (u128, u128)
where
    K: Eq + std::hash::Hash,
    F: Fn(&[usize]) -> K + Sync,
{
    match group {
        Group::Finite { elements, .. } => {
            let index: HashMap<&[Q], usize> = pts.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
            let images: Vec<Vec<Option<usize>>> = elements
                .iter()
                .map(|th| pts.iter().map(|p| index.get(th.apply(p).as_slice()).copied()).collect())
                .collect();
            let n = pts.len();
            let parts = par_enumerate(n, vertices, || (0u128, 0u128), |acc, idx| {
                if !filter.accepts(idx) {
                    return;
                }
                let mut qs: Vec<Vec<usize>> = images
                    .iter()
                    .filter_map(|img| idx.iter().map(|&i| img[i]).collect::<Option<Vec<_>>>())
                    .filter(|q| filter.accepts(q))
                    .collect();
                qs.sort_unstable();
                qs.dedup();
                let kp = key(idx);
                acc.0 += qs.len() as u128;
                acc.1 += qs.iter().filter(|q| key(q) != kp).count() as u128;
            });
            parts.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        }
        _ => classes(group, pts, vertices, filter)
            .par_iter()
            .map(|members| {
                let size = members.len() as u128;
                let mut counts: HashMap<K, u128> = HashMap::new();
                for m in members {
                    *counts.entry(key(m)).or_insert(0) += 1;
                }
                let agreeing: u128 = counts.values().map(|c| c * c).sum();
                (size * size, size * size - agreeing)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1)),
    }
}

/// Whether some `θ` in the group maps `p` onto `q` pointwise.
pub(crate) fn related(group: &Group, p: &[&[Q]], q: &[&[Q]]) -> bool {
    match group {
        Group::PseudoEuclidean => related_pseudo(group, p, q),
        Group::SpecialLinear2 => related_sl2(p, q),
        Group::Finite { elements, .. } => elements.iter().any(|th| p.iter().zip(q).all(|(x, y)| th.apply(x) == *y)),
        _ => {
            let perms = match group {
                Group::SignedPermTranslations { d } => permutation_matrices(*d, true),
                _ => Vec::new(),
            };
            class_key(group, p, &perms) == class_key(group, q, &perms)
        }
    }
}

/// `p(v) - p(0) = λ_v u` for all `v` and `q(v) - q(0) = λ_v w`.
fn same_ratios(p: &[&[Q]], q: &[&[Q]], origin_p: &[Q], origin_q: &[Q], u: &[Q], w: &[Q]) -> bool {
    let axis = if u[0].is_zero() { 1 } else { 0 };
    p.iter().zip(q).all(|(x, y)| {
        let du = sub(x, origin_p);
        let lambda = &du[axis] / &u[axis];
        let dw = sub(y, origin_q);
        dw.iter().zip(w).all(|(a, b)| *a == &lambda * b)
    })
}

fn related_pseudo(group: &Group, p: &[&[Q]], q: &[&[Q]]) -> bool {
    let v = p.len();
    if let Some(frame) = affine_frame(p) {
        let from: Vec<&[Q]> = frame.iter().map(|&i| p[i]).collect();
        let to: Vec<&[Q]> = frame.iter().map(|&i| q[i]).collect();
        return match AffineMap::from_frame(&from, &to) {
            Some(th) => group.contains(&th) && (0..v).all(|i| th.apply(p[i]) == q[i]),
            None => false,
        };
    }
    match (1..v).find(|&i| p[i] != p[0]) {
        None => q.iter().all(|y| *y == q[0]),
        Some(i) => {
            let u = sub(p[i], p[0]);
            let w = sub(q[i], q[0]);
            !w.iter().all(Zero::is_zero) && lorentz(&u) == lorentz(&w) && same_ratios(p, q, p[0], q[0], &u, &w)
        }
    }
}

fn related_sl2(p: &[&[Q]], q: &[&[Q]]) -> bool {
    let v = p.len();
    let zero = [Q::zero(), Q::zero()];
    for i in 0..v {
        for j in i + 1..v {
            let dp = det2(p[i], p[j]);
            if !dp.is_zero() {
                // A = [q_i q_j][p_i p_j]^{-1}
                let pm = vec![vec![p[i][0].clone(), p[j][0].clone()], vec![p[i][1].clone(), p[j][1].clone()]];
                let qm = vec![vec![q[i][0].clone(), q[j][0].clone()], vec![q[i][1].clone(), q[j][1].clone()]];
                let a = linalg::mat_mul(&qm, &linalg::inverse(&pm).expect("non-zero determinant"));
                return linalg::det(&a).is_one() && (0..v).all(|k| linalg::mat_vec(&a, p[k]) == q[k]);
            }
        }
    }
    match (0..v).find(|&i| p[i].iter().any(|x| !x.is_zero())) {
        None => q.iter().all(|y| y.iter().all(Zero::is_zero)),
        Some(i) => {
            let u = p[i].to_vec();
            let w = q[i].to_vec();
            !w.iter().all(Zero::is_zero) && same_ratios(p, q, &zero, &zero, &u, &w)
        }
    }
}

/// Indices of `d + 1` affinely independent points, if any.
fn affine_frame(p: &[&[Q]]) -> Option<Vec<usize>> {
    let d = p.first()?.len();
    let mut chosen = vec![0usize];
    let mut dirs: Vec<Vec<Q>> = Vec::new();
    for i in 1..p.len() {
        let mut trial = dirs.clone();
        trial.push(sub(p[i], p[0]));
        if linalg::rank(&trial, d) == trial.len() {
            dirs = trial;
            chosen.push(i);
            if chosen.len() == d + 1 {
                return Some(chosen);
            }
        }
    }
    None
}

impl EnergyReport {
    /// `|P|^{2|V|} / (distinct · energy)` for a census over the same realisations.
    pub fn ratio_with(&self, distinct: u64) -> f64 {
        let total = (self.realisations as f64).powi(2);
        total / (distinct as f64 * self.energy as f64)
    }
}
