//! Censuses with a fixed graph family or a closed-form lower bound attached.

use num_traits::{One, Zero};
use serde::Serialize;

use super::energy::pairs_agree_on;
use super::{census, census_with, CensusOptions, CensusReport, Filter, Measurer, RealisationFilter};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::metric::Metric;
use crate::pointset::PointSet;
use crate::rational::{format_q, q, to_f64, Q};

/// Distinct Gram matrices `X^T X` with columns drawn from `P`.
pub fn gram_census(points: &PointSet, n: usize, budget: u128) -> Result<CensusReport> {
    let opts = CensusOptions { budget, ..CensusOptions::default() };
    census(&Metric::dot(points.d()), &Hypergraph::complete_with_loops(n), points, &opts)
}

/// Distinct symmetric order-`k` tensors `Σ x_i^{⊗k}` built from `n` columns in `P`.
pub fn tensor_census(points: &PointSet, n: usize, k: usize, budget: u128) -> Result<CensusReport> {
    let m = Metric::sym_tensor(k, points.d())?;
    let opts = CensusOptions { budget, ..CensusOptions::default() };
    census(&m, &Hypergraph::complete_with_repetition(n, k), points, &opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub metric: String,
    pub group: String,
    pub filter: Filter,
    /// Related pairs `(p, q)`, i.e. the energy.
    pub energy: u128,
    /// Related pairs whose measurement vectors differ.
    pub mismatched_pairs: u128,
    pub distinct: u64,
    pub fibre_square_sum: u128,
    /// `Σ |ν(t)|^2 >= energy`.
    pub fibres_dominate_energy: bool,
    /// `|P^V|^2 / (distinct · energy)`.
    pub ratio: f64,
}

/// Checks that isometric realisations share measurement vectors and compares fibre and energy sums.
pub fn fibre_energy_consistency(m: &Metric, g: &Hypergraph, points: &PointSet, filter: Filter, budget: u128) -> Result<ConsistencyReport> {
    let pts = points
        .exact()
        .ok_or_else(|| Error::InvalidArgument("consistency checks need exact coordinates".into()))?;
    points.check_distinct()?;
    let opts = CensusOptions { filter, budget, ..CensusOptions::default() };
    let rf = RealisationFilter::new(filter, points, Some((m, g)))?;
    let report = census_with(m, g, points, &rf, &opts)?;
    let group = Group::of_metric(m);
    let measurer = Measurer::new(m, g, points, opts.quantum)?;
    let (energy, mismatched) = pairs_agree_on(&group, pts, g.vertex_count(), &rf, |idx| measurer.key(idx));
    let total = report.enumerated as f64;
    Ok(ConsistencyReport {
        metric: m.to_string(),
        group: group.to_string(),
        filter,
        energy,
        mismatched_pairs: mismatched,
        distinct: report.distinct,
        fibre_square_sum: report.fibre_square_sum,
        fibres_dominate_energy: report.fibre_square_sum >= energy,
        ratio: total * total / (report.distinct as f64 * energy as f64),
    })
}

/// A rationally parametrised planar curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Curve {
    /// `y = 0`, degree 1.
    XAxis,
    /// `x^2 + y^2 = 1`, degree 2.
    UnitCircle,
}

impl Curve {
    pub fn degree(self) -> usize {
        match self {
            Curve::XAxis => 1,
            Curve::UnitCircle => 2,
        }
    }

    pub fn contains(self, p: &[Q]) -> bool {
        match self {
            Curve::XAxis => p[1].is_zero(),
            Curve::UnitCircle => (&p[0] * &p[0] + &p[1] * &p[1]).is_one(),
        }
    }

    fn at(self, t: &Q) -> Vec<Q> {
        match self {
            Curve::XAxis => vec![t.clone(), Q::zero()],
            Curve::UnitCircle => {
                let den = Q::one() + t * t;
                vec![(Q::one() - t * t) / &den, (t + t) / &den]
            }
        }
    }
}

impl std::str::FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x_axis" | "x-axis" | "line" => Ok(Curve::XAxis),
            "unit_circle" | "unit-circle" | "circle" => Ok(Curve::UnitCircle),
            _ => Err(Error::InvalidArgument(format!("unknown curve `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveBoundReport {
    pub metric: String,
    pub curve: Curve,
    pub curve_degree: usize,
    pub metric_degree: usize,
    pub vertices: usize,
    pub points: usize,
    pub distinct: u64,
    /// `((1/(D deg g)) floor((|P| - D deg g)/|V|))^{|V|-1}`, exact.
    pub bound: String,
    pub bound_f64: f64,
    pub holds: bool,
    /// `g` restricted to the curve squared is not constant.
    pub restricted_non_constant: bool,
    /// Points `x` of `P` with `g(x, ·)` constant along the curve.
    pub exceptional_points: usize,
}

/// Compares the census of points on a curve with the curve lower bound.
pub fn curve_bound_check(m: &Metric, g: &Hypergraph, points: &PointSet, curve: Curve, budget: u128) -> Result<CurveBoundReport> {
    if m.k() != 2 || m.d() != 2 {
        return Err(Error::UnsupportedMetric(format!("curve bounds need a planar binary metric, got {m}")));
    }
    if !g.is_connected() {
        return Err(Error::InvalidGraph("curve bounds need a connected graph".into()));
    }
    let pts = points
        .exact()
        .ok_or_else(|| Error::InvalidArgument("curve bounds need exact coordinates".into()))?;
    points.check_distinct()?;
    if let Some(i) = pts.iter().position(|p| !curve.contains(p)) {
        return Err(Error::InvalidArgument(format!("point {i} is not on the curve")));
    }
    let report = census(m, g, points, &CensusOptions { budget, ..CensusOptions::default() })?;

    let dg = curve.degree() * m.degree();
    let v = g.vertex_count();
    let m_floor = (pts.len() as i64 - dg as i64).max(0) / v as i64;
    let base = Q::new(m_floor.into(), (dg as i64).into());
    let bound = num_traits::pow(base, v - 1);

    let samples: Vec<Vec<Q>> = (0..=2 * dg as i64).map(|t| curve.at(&q(t))).collect();
    let eval = |x: &[Q], y: &[Q]| m.eval_unchecked(&[x, y]);
    let first = eval(&samples[0], &samples[0]);
    let restricted_non_constant = samples.iter().any(|x| samples.iter().any(|y| eval(x, y) != first));
    let exceptional_points = pts
        .iter()
        .filter(|x| {
            let v0 = eval(x, &samples[0]);
            samples.iter().all(|y| eval(x, y) == v0)
        })
        .count();

    Ok(CurveBoundReport {
        metric: m.to_string(),
        curve,
        curve_degree: curve.degree(),
        metric_degree: m.degree(),
        vertices: v,
        points: pts.len(),
        distinct: report.distinct,
        holds: Q::from_integer(report.distinct.into()) >= bound,
        bound_f64: to_f64(&bound),
        bound: format_q(&bound),
        restricted_non_constant,
        exceptional_points,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroExtensionReport {
    pub metric: String,
    pub points: usize,
    pub vertices: usize,
    pub base_distinct: u64,
    pub extended_distinct: u64,
    /// `base_distinct · (|P| - |V|) / 2`.
    pub bound: String,
    pub holds: bool,
}

/// Injective censuses of `G` and its 0-extension at `u`, `w`.
pub fn zero_extension_growth(
    m: &Metric,
    g: &Hypergraph,
    u: Vertex,
    w: Vertex,
    points: &PointSet,
    budget: u128,
) -> Result<ZeroExtensionReport> {
    let ext = g.zero_extension(u, w)?;
    let opts = CensusOptions { filter: Filter::Injective, budget, ..CensusOptions::default() };
    let base = census(m, g, points, &opts)?;
    let grown = census(m, &ext, points, &opts)?;
    let spare = points.len() as i64 - g.vertex_count() as i64;
    let bound = Q::new((base.distinct as i64 * spare).into(), 2.into());
    Ok(ZeroExtensionReport {
        metric: m.to_string(),
        points: points.len(),
        vertices: g.vertex_count(),
        base_distinct: base.distinct,
        extended_distinct: grown.distinct,
        holds: Q::from_integer((grown.distinct as i64).into()) >= bound,
        bound: format_q(&bound),
    })
}
