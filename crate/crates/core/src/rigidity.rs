//! Jacobians of measurement maps, trivial motions and rigidity verdicts.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::linalg;
use crate::metric::Metric;
use crate::rational::{format_q, q, to_f64, Q};
use crate::scalar::Scalar;

pub const DEFAULT_TRIALS: usize = 5;
pub const GENERIC_BOUND: i64 = 1_000_000;
/// Singular values below this fraction of the largest count as zero.
pub const FLOAT_RANK_TOL: f64 = 1e-9;

/// An assignment of a point in `d`-space to every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Realisation<T> {
    d: usize,
    points: Vec<Vec<T>>,
}

impl<T: Scalar> Realisation<T> {
    pub fn new(d: usize, points: Vec<Vec<T>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.len() });
        }
        Ok(Self { d, points })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, v: usize) -> &[T] {
        &self.points[v]
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }
}

impl Realisation<Q> {
    pub fn from_ints(d: usize, points: &[&[i64]]) -> Result<Self> {
        Self::new(d, points.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn to_f64(&self) -> Realisation<f64> {
        Realisation {
            d: self.d,
            points: self.points.iter().map(|p| p.iter().map(to_f64).collect()).collect(),
        }
    }

    /// Uniform integer coordinates in `[-bound, bound]`.
    pub fn random_integer(n: usize, d: usize, bound: i64, rng: &mut impl Rng) -> Self {
        let points = (0..n).map(|_| (0..d).map(|_| q(rng.gen_range(-bound..=bound))).collect()).collect();
        Self { d, points }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.points.iter().map(|p| p.iter().map(format_q).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityVerdict {
    pub rank: usize,
    pub kernel_dim: usize,
    pub trivial_dim: usize,
    pub trivial_in_kernel: bool,
    pub infinitesimally_rigid: bool,
    pub affinely_spanning: bool,
    /// Set when ranks were decided numerically.
    pub approximate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericRigidity {
    pub rigid: bool,
    pub trials: usize,
    pub seed: u64,
    /// Verdict of the first rigid sample, else of the sample with the largest rank.
    pub verdict: RigidityVerdict,
    /// Coordinates of the sample behind `verdict`.
    pub witness: Vec<Vec<String>>,
}

fn check_compat<T>(m: &Metric, g: &Hypergraph, p: &Realisation<T>) -> Result<()> {
    if g.k() != m.k() {
        return Err(Error::UnsupportedMetric(format!(
            "{m} has arity {} but the hypergraph is {}-uniform",
            m.k(),
            g.k()
        )));
    }
    if p.d != m.d() {
        return Err(Error::DimensionMismatch { expected: m.d(), got: p.d });
    }
    if p.points.len() != g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "realisation has {} points for {} vertices",
            p.points.len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

/// One row per hyperedge; column block `v` collects the gradients of every
/// slot occupied by `v`.
pub fn jacobian<T: Scalar>(m: &Metric, g: &Hypergraph, p: &Realisation<T>) -> Result<Vec<Vec<T>>> {
    check_compat(m, g, p)?;
    let d = m.d();
    let cols = d * g.vertex_count();
    Ok(g.edges()
        .iter()
        .map(|e| {
            let args: Vec<&[T]> = e.iter().map(|&v| p.point(v)).collect();
            let mut row = vec![T::zero(); cols];
            for (slot, &v) in e.iter().enumerate() {
                let grad = m.grad_unchecked(&args, slot);
                for (i, gi) in grad.into_iter().enumerate() {
                    row[v * d + i] = row[v * d + i].clone() + gi;
                }
            }
            row
        })
        .collect())
}

/// The vectors `(A p(v) + b)_v`, one per Lie generator (not reduced).
pub fn trivial_motion_span(m: &Metric, p: &Realisation<Q>) -> Vec<Vec<Q>> {
    m.lie_generators()
        .iter()
        .map(|gen| p.points.iter().flat_map(|x| gen.apply(x)).collect())
        .collect()
}

/// A basis of the trivial motions at `p`.
pub fn trivial_motions(m: &Metric, p: &Realisation<Q>) -> Vec<Vec<Q>> {
    let span = trivial_motion_span(m, p);
    linalg::rref(&span, m.d() * p.len()).reduced
}

/// Whether every trivial motion lies in the kernel of the Jacobian.
pub fn trivial_in_kernel(m: &Metric, g: &Hypergraph, p: &Realisation<Q>) -> Result<bool> {
    let j = jacobian(m, g, p)?;
    Ok(trivial_motion_span(m, p)
        .iter()
        .all(|t| linalg::mat_vec(&j, t).iter().all(Zero::is_zero)))
}

pub fn is_infinitesimally_rigid(m: &Metric, g: &Hypergraph, p: &Realisation<Q>) -> Result<RigidityVerdict> {
    let j = jacobian(m, g, p)?;
    let cols = m.d() * g.vertex_count();
    let rank = linalg::rank(&j, cols);
    let span = trivial_motion_span(m, p);
    let trivial_dim = linalg::rank(&span, cols);
    let trivial_in_kernel = span.iter().all(|t| linalg::mat_vec(&j, t).iter().all(Zero::is_zero));
    let kernel_dim = cols - rank;
    Ok(RigidityVerdict {
        rank,
        kernel_dim,
        trivial_dim,
        trivial_in_kernel,
        infinitesimally_rigid: trivial_in_kernel && kernel_dim == trivial_dim,
        affinely_spanning: affinely_spanning(p),
        approximate: false,
    })
}

/// Float variant; ranks come from singular values with [`FLOAT_RANK_TOL`].
pub fn is_infinitesimally_rigid_approx(
    m: &Metric,
    g: &Hypergraph,
    p: &Realisation<f64>,
) -> Result<RigidityVerdict> {
    let j = jacobian(m, g, p)?;
    let cols = m.d() * g.vertex_count();
    let rank = linalg::float_rank(&j, cols, FLOAT_RANK_TOL);
    let span: Vec<Vec<f64>> = m
        .lie_generators()
        .iter()
        .map(|gen| p.points.iter().flat_map(|x| gen.apply_f64(x)).collect())
        .collect();
    let trivial_dim = linalg::float_rank(&span, cols, FLOAT_RANK_TOL);
    let scale = j.iter().flatten().fold(0.0_f64, |a, x| a.max(x.abs())).max(1.0);
    let trivial_in_kernel = span.iter().all(|t| {
        let tn = t.iter().fold(0.0_f64, |a, x| a.max(x.abs())).max(1.0);
        j.iter()
            .all(|row| row.iter().zip(t).map(|(a, b)| a * b).sum::<f64>().abs() <= 1e-9 * scale * tn * cols as f64)
    });
    let kernel_dim = cols - rank;
    let homogeneous: Vec<Vec<f64>> = (0..=p.d)
        .map(|r| p.points.iter().map(|x| if r < p.d { x[r] } else { 1.0 }).collect())
        .collect();
    Ok(RigidityVerdict {
        rank,
        kernel_dim,
        trivial_dim,
        trivial_in_kernel,
        infinitesimally_rigid: trivial_in_kernel && kernel_dim == trivial_dim,
        affinely_spanning: linalg::float_rank(&homogeneous, p.len(), FLOAT_RANK_TOL) == p.d + 1,
        approximate: true,
    })
}

/// Rank of the homogeneous matrix `[p(v); 1]` equals `d + 1`.
pub fn affinely_spanning(p: &Realisation<Q>) -> bool {
    if p.len() <= p.d {
        return false;
    }
    let rows: Vec<Vec<Q>> = (0..=p.d)
        .map(|r| p.points.iter().map(|x| if r < p.d { x[r].clone() } else { q(1) }).collect())
        .collect();
    linalg::rank(&rows, p.len()) == p.d + 1
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Samples random integer realisations; rigid as soon as one sample is
/// infinitesimally rigid.
pub fn is_g_rigid(m: &Metric, g: &Hypergraph, trials: usize, seed: u64) -> Result<GenericRigidity> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let samples: Vec<(RigidityVerdict, Realisation<Q>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let p = Realisation::random_integer(g.vertex_count(), m.d(), GENERIC_BOUND, &mut trial_rng(seed, t));
            is_infinitesimally_rigid(m, g, &p).map(|v| (v, p))
        })
        .collect::<Result<_>>()?;
    let pick = samples
        .iter()
        .position(|(v, _)| v.infinitesimally_rigid)
        .unwrap_or_else(|| {
            // First sample among those of maximal rank.
            let best = samples.iter().map(|(v, _)| v.rank).max().unwrap_or(0);
            samples.iter().position(|(v, _)| v.rank == best).unwrap_or(0)
        });
    let (verdict, p) = &samples[pick];
    Ok(GenericRigidity {
        rigid: verdict.infinitesimally_rigid,
        trials,
        seed,
        verdict: verdict.clone(),
        witness: p.to_strings(),
    })
}

/// Maximum Jacobian rank over sampled integer realisations.
pub fn generic_rank(m: &Metric, g: &Hypergraph, trials: usize, seed: u64) -> Result<usize> {
    let ranks: Vec<usize> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let p = Realisation::random_integer(g.vertex_count(), m.d(), GENERIC_BOUND, &mut trial_rng(seed, t));
            jacobian(m, g, &p).map(|j| linalg::rank(&j, m.d() * g.vertex_count()))
        })
        .collect::<Result<_>>()?;
    Ok(ranks.into_iter().max().unwrap_or(0))
}

const REGULARITY_SEED: u64 = 0x5eed;

fn rank_cache() -> &'static RwLock<HashMap<(Metric, Hypergraph), usize>> {
    static CACHE: OnceLock<RwLock<HashMap<(Metric, Hypergraph), usize>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Generic rank for `(m, g)`, sampled once and cached for the process.
pub fn cached_generic_rank(m: &Metric, g: &Hypergraph) -> Result<usize> {
    let key = (m.clone(), g.clone());
    if let Some(&r) = rank_cache().read().expect("rank cache poisoned").get(&key) {
        return Ok(r);
    }
    let r = generic_rank(m, g, DEFAULT_TRIALS, REGULARITY_SEED)?;
    rank_cache().write().expect("rank cache poisoned").insert(key, r);
    Ok(r)
}

/// The Jacobian has maximal (generic) rank at `p`.
pub fn is_g_regular(m: &Metric, g: &Hypergraph, p: &Realisation<Q>) -> Result<bool> {
    let generic = cached_generic_rank(m, g)?;
    let j = jacobian(m, g, p)?;
    Ok(linalg::rank(&j, m.d() * g.vertex_count()) == generic)
}
