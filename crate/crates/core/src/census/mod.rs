//! Brute-force enumeration over all realisations `p` in `P^V`.
//!
//! Realisations are index tuples into the point list, enumerated as an
//! odometer with the last vertex innermost. Work is split on the value of the
//! first vertex and merged by exact key, so every count is independent of the
//! thread count.

mod corollaries;
mod energy;
mod rich;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::linalg;
use crate::metric::Metric;
use crate::pointset::{Coords, PointSet};
use crate::rational::{format_q, q, quantize, Q};
use crate::rigidity::{self, FLOAT_RANK_TOL};

pub use corollaries::{
    curve_bound_check, fibre_energy_consistency, gram_census, tensor_census, zero_extension_growth, ConsistencyReport,
    Curve, CurveBoundReport, ZeroExtensionReport,
};
pub use energy::{energy, energy_filtered, EnergyMethod, EnergyReport};
pub use rich::{rich_transformations, RichEquivalence, RichReport};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const DEFAULT_QUANTUM: f64 = 1e-9;
/// Largest `|P|^k` for which every edge value is precomputed.
const TABLE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    #[default]
    All,
    Injective,
    Spanning,
    Regular,
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "injective" => Ok(Filter::Injective),
            "spanning" => Ok(Filter::Spanning),
            "regular" => Ok(Filter::Regular),
            _ => Err(Error::InvalidArgument(format!("unknown filter `{s}`"))),
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Filter::All => "all",
            Filter::Injective => "injective",
            Filter::Spanning => "spanning",
            Filter::Regular => "regular",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensusOptions {
    pub filter: Filter,
    pub budget: u128,
    /// Grid spacing for float keys.
    pub quantum: f64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self { filter: Filter::All, budget: DEFAULT_BUDGET, quantum: DEFAULT_QUANTUM }
    }
}

impl CensusOptions {
    pub fn with_filter(filter: Filter) -> Self {
        Self { filter, ..Self::default() }
    }
}

/// The values of `g` on every hyperedge, in canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasurementVector {
    pub values: Vec<Q>,
}

impl MeasurementVector {
    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(format_q).collect()
    }
}

/// `f_{g,G}(p)`; anti-symmetric metrics read each hyperedge in ascending vertex order.
pub fn measure(m: &Metric, g: &Hypergraph, p: &rigidity::Realisation<Q>) -> Result<MeasurementVector> {
    check_shapes(m, g, p.d(), p.len())?;
    Ok(MeasurementVector {
        values: g
            .edges()
            .iter()
            .map(|e| m.eval_unchecked(&e.iter().map(|&v| p.point(v)).collect::<Vec<_>>()))
            .collect(),
    })
}

/// Float counterpart of [`measure`].
pub fn measure_f64(m: &Metric, g: &Hypergraph, p: &rigidity::Realisation<f64>) -> Result<Vec<f64>> {
    check_shapes(m, g, p.d(), p.len())?;
    Ok(g.edges()
        .iter()
        .map(|e| m.eval_unchecked(&e.iter().map(|&v| p.point(v)).collect::<Vec<_>>()))
        .collect())
}

fn check_shapes(m: &Metric, g: &Hypergraph, d: usize, n: usize) -> Result<()> {
    if g.k() != m.k() {
        return Err(Error::UnsupportedMetric(format!("{m} has arity {} but the hypergraph is {}-uniform", m.k(), g.k())));
    }
    if d != m.d() {
        return Err(Error::DimensionMismatch { expected: m.d(), got: d });
    }
    if n != g.vertex_count() {
        return Err(Error::InvalidArgument(format!("realisation has {n} points for {} vertices", g.vertex_count())));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub metric: String,
    pub vertices: usize,
    pub edges: usize,
    pub points: usize,
    pub filter: Filter,
    pub exact: bool,
    /// `|P|^|V|`.
    pub total: u128,
    /// Realisations passing the filter.
    pub enumerated: u128,
    /// `|f_{g,G}(P^V)|` over the filtered realisations.
    pub distinct: u64,
    /// Fibre sizes in non-increasing order.
    pub fibres: Vec<u64>,
    /// Sum of squared fibre sizes.
    pub fibre_square_sum: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<f64>,
}

impl CensusReport {
    /// `(fibre size, number of fibres of that size)`, by increasing size.
    pub fn fibre_histogram(&self) -> Vec<(u64, u64)> {
        let mut h: Vec<(u64, u64)> = Vec::new();
        for &s in self.fibres.iter().rev() {
            match h.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => h.push((s, 1)),
            }
        }
        h
    }
}

pub(crate) fn required_steps(points: usize, vertices: usize) -> Option<u128> {
    (points as u128).checked_pow(vertices as u32)
}

pub(crate) fn check_budget(points: usize, vertices: usize, budget: u128) -> Result<u128> {
    match required_steps(points, vertices) {
        Some(r) if r <= budget => Ok(r),
        Some(r) => Err(Error::BudgetExceeded { required: r, budget }),
        None => Err(Error::BudgetExceeded { required: u128::MAX, budget }),
    }
}

/// Runs `step` on every index tuple of length `v` over `0..n`; one accumulator
/// per value of the first vertex, returned in order.
pub(crate) fn par_enumerate<A, I, S>(n: usize, v: usize, init: I, step: S) -> Vec<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, &[usize]) + Sync,
{
    if v == 0 {
        let mut a = init();
        step(&mut a, &[]);
        return vec![a];
    }
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            let mut idx = vec![0usize; v];
            idx[0] = first;
            loop {
                step(&mut acc, &idx);
                let mut i = v - 1;
                loop {
                    if i == 0 {
                        return acc;
                    }
                    idx[i] += 1;
                    if idx[i] < n {
                        break;
                    }
                    idx[i] = 0;
                    i -= 1;
                }
            }
        })
        .collect()
}

/// Position of an index tuple in enumeration order.
pub(crate) fn linear_index(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// Decides which realisations a census or energy count includes.
pub struct RealisationFilter<'a> {
    filter: Filter,
    points: &'a PointSet,
    metric_graph: Option<(&'a Metric, &'a Hypergraph)>,
    generic_rank: usize,
}

impl<'a> RealisationFilter<'a> {
    /// `metric_graph` is required for [`Filter::Regular`].
    pub fn new(filter: Filter, points: &'a PointSet, metric_graph: Option<(&'a Metric, &'a Hypergraph)>) -> Result<Self> {
        if filter == Filter::Injective {
            points.check_distinct()?;
        }
        let generic_rank = match (filter, metric_graph) {
            (Filter::Regular, Some((m, g))) => rigidity::cached_generic_rank(m, g)?,
            (Filter::Regular, None) => {
                return Err(Error::InvalidArgument("the regular filter needs a metric and a graph".into()))
            }
            _ => 0,
        };
        Ok(Self { filter, points, metric_graph, generic_rank })
    }

    pub fn filter(&self) -> Filter {
        self.filter
    }

    pub fn accepts(&self, idx: &[usize]) -> bool {
        match self.filter {
            Filter::All => true,
            Filter::Injective => {
                let mut seen = idx.to_vec();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            }
            Filter::Spanning => {
                let d = self.points.d();
                if idx.len() <= d {
                    return false;
                }
                match self.points.coords() {
                    Coords::Exact(p) => {
                        let rows: Vec<Vec<Q>> = (0..=d)
                            .map(|r| idx.iter().map(|&i| if r < d { p[i][r].clone() } else { q(1) }).collect())
                            .collect();
                        linalg::rank(&rows, idx.len()) == d + 1
                    }
                    Coords::Float(p) => {
                        let rows: Vec<Vec<f64>> = (0..=d)
                            .map(|r| idx.iter().map(|&i| if r < d { p[i][r] } else { 1.0 }).collect())
                            .collect();
                        linalg::float_rank(&rows, idx.len(), FLOAT_RANK_TOL) == d + 1
                    }
                }
            }
            Filter::Regular => {
                let (m, g) = self.metric_graph.expect("checked in new");
                let cols = m.d() * g.vertex_count();
                match self.points.coords() {
                    Coords::Exact(p) => {
                        let r = rigidity::Realisation::new(m.d(), idx.iter().map(|&i| p[i].clone()).collect())
                            .expect("uniform dimension");
                        let j = rigidity::jacobian(m, g, &r).expect("shapes checked");
                        linalg::rank(&j, cols) == self.generic_rank
                    }
                    Coords::Float(p) => {
                        let r = rigidity::Realisation::new(m.d(), idx.iter().map(|&i| p[i].clone()).collect())
                            .expect("uniform dimension");
                        let j = rigidity::jacobian(m, g, &r).expect("shapes checked");
                        linalg::float_rank(&j, cols, FLOAT_RANK_TOL) == self.generic_rank
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum ValueKey {
    Exact(Q),
    Float(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum MeasureKey {
    Ids(Vec<u32>),
    Values(Vec<ValueKey>),
}

/// Evaluates measurement keys, through a precomputed value table when small.
pub(crate) struct Measurer<'a> {
    m: &'a Metric,
    g: &'a Hypergraph,
    points: &'a PointSet,
    quantum: f64,
    table: Option<Vec<u32>>,
}

impl<'a> Measurer<'a> {
    pub(crate) fn new(m: &'a Metric, g: &'a Hypergraph, points: &'a PointSet, quantum: f64) -> Result<Self> {
        if g.k() != m.k() {
            return Err(Error::UnsupportedMetric(format!("{m} has arity {} but the hypergraph is {}-uniform", m.k(), g.k())));
        }
        if points.d() != m.d() {
            return Err(Error::DimensionMismatch { expected: m.d(), got: points.d() });
        }
        let mut me = Self { m, g, points, quantum, table: None };
        let n = points.len();
        if required_steps(n, m.k()).is_some_and(|s| s <= TABLE_LIMIT) {
            let size = n.pow(m.k() as u32);
            let values: Vec<ValueKey> = (0..size)
                .into_par_iter()
                .map(|code| {
                    let mut idx = vec![0; m.k()];
                    let mut c = code;
                    for slot in (0..m.k()).rev() {
                        idx[slot] = c % n;
                        c /= n;
                    }
                    me.value(&idx)
                })
                .collect();
            let mut ids: HashMap<&ValueKey, u32> = HashMap::new();
            let table = values
                .iter()
                .map(|v| {
                    let next = ids.len() as u32;
                    *ids.entry(v).or_insert(next)
                })
                .collect();
            me.table = Some(table);
        }
        Ok(me)
    }

    /// `g` on the given point indices, in argument order.
    fn value(&self, idx: &[usize]) -> ValueKey {
        match self.points.coords() {
            Coords::Exact(p) => ValueKey::Exact(self.m.eval_unchecked(&idx.iter().map(|&i| p[i].as_slice()).collect::<Vec<_>>())),
            Coords::Float(p) => ValueKey::Float(quantize(
                self.m.eval_unchecked(&idx.iter().map(|&i| p[i].as_slice()).collect::<Vec<_>>()),
                self.quantum,
            )),
        }
    }

    pub(crate) fn key(&self, real: &[usize]) -> MeasureKey {
        let n = self.points.len();
        match &self.table {
            Some(t) => MeasureKey::Ids(
                self.g
                    .edges()
                    .iter()
                    .map(|e| t[e.iter().fold(0, |acc, &v| acc * n + real[v])])
                    .collect(),
            ),
            None => MeasureKey::Values(
                self.g
                    .edges()
                    .iter()
                    .map(|e| self.value(&e.iter().map(|&v| real[v]).collect::<Vec<_>>()))
                    .collect(),
            ),
        }
    }
}

/// Counts the distinct measurement vectors over `P^V`.
pub fn census(m: &Metric, g: &Hypergraph, points: &PointSet, opts: &CensusOptions) -> Result<CensusReport> {
    let filter = RealisationFilter::new(opts.filter, points, Some((m, g)))?;
    census_with(m, g, points, &filter, opts)
}

pub(crate) fn census_with(
    m: &Metric,
    g: &Hypergraph,
    points: &PointSet,
    filter: &RealisationFilter<'_>,
    opts: &CensusOptions,
) -> Result<CensusReport> {
    let total = check_budget(points.len(), g.vertex_count(), opts.budget)?;
    let measurer = Measurer::new(m, g, points, opts.quantum)?;
    let fibres = fibre_map(&measurer, points.len(), g.vertex_count(), filter);
    let mut sizes: Vec<u64> = fibres.into_values().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(CensusReport {
        metric: m.to_string(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        points: points.len(),
        filter: filter.filter(),
        exact: points.is_exact(),
        total,
        enumerated: sizes.iter().map(|&s| s as u128).sum(),
        distinct: sizes.len() as u64,
        fibre_square_sum: sizes.iter().map(|&s| (s as u128) * (s as u128)).sum(),
        fibres: sizes,
        quantum: (!points.is_exact()).then_some(opts.quantum),
    })
}

pub(crate) fn fibre_map(
    measurer: &Measurer<'_>,
    n: usize,
    v: usize,
    filter: &RealisationFilter<'_>,
) -> HashMap<MeasureKey, u64> {
    let parts = par_enumerate(
        n,
        v,
        HashMap::<MeasureKey, u64>::new,
        |acc, idx| {
            if filter.accepts(idx) {
                *acc.entry(measurer.key(idx)).or_insert(0) += 1;
            }
        },
    );
    let mut merged: HashMap<MeasureKey, u64> = HashMap::new();
    for part in parts {
        for (k, c) in part {
            *merged.entry(k).or_insert(0) += c;
        }
    }
    merged
}
