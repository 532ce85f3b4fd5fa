//! Exponent fits and compact generator specs for batch experiments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::pointset::{self, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub sizes: Vec<f64>,
    pub counts: Vec<f64>,
    /// Least-squares slope of `ln count` against `ln size`.
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual in log space.
    pub residual: f64,
}

/// Ordinary least squares on `(ln size, ln count)`.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<ExponentFit> {
    if series.len() < 3 {
        return Err(Error::InvalidArgument(format!("an exponent fit needs at least 3 points, got {}", series.len())));
    }
    if let Some(&(s, c)) = series.iter().find(|&&(s, c)| !(s > 0.0 && c > 0.0 && s.is_finite() && c.is_finite())) {
        return Err(Error::InvalidArgument(format!("sizes and counts must be positive, got ({s}, {c})")));
    }
    let xs: Vec<f64> = series.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all sizes are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(ExponentFit {
        sizes: series.iter().map(|p| p.0).collect(),
        counts: series.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        residual,
    })
}

fn field<T: std::str::FromStr>(spec: &str, parts: &[&str], i: usize) -> Result<T> {
    parts
        .get(i)
        .ok_or_else(|| Error::Parse(format!("`{spec}` is missing parameter {i}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad parameter {i} in `{spec}`")))
}

/// Builds a point set from `grid:m:d`, `scaled-grid:n`, `line:n`, `circle:n`,
/// `circle-rat:n` or `random:d:n:bound:seed`.
pub fn points_from_spec(spec: &str) -> Result<PointSet> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[0] {
        "grid" => pointset::grid(field(spec, &parts, 1)?, field(spec, &parts, 2)?),
        "scaled-grid" => pointset::scaled_grid(field(spec, &parts, 1)?),
        "line" => pointset::line(field(spec, &parts, 1)?),
        "circle" => pointset::circle(field(spec, &parts, 1)?),
        "circle-rat" => pointset::circle_rat(field(spec, &parts, 1)?),
        "random" => pointset::random_generic(
            field(spec, &parts, 1)?,
            field(spec, &parts, 2)?,
            field(spec, &parts, 3)?,
            field(spec, &parts, 4)?,
        ),
        other => Err(Error::Parse(format!("unknown point generator `{other}`"))),
    }
}

/// Builds a graph from `complete:n`, `loops:n`, `rep:n:k`, `path:n`, `cycle:n`,
/// `star:leaves` or `bipartite:a:b`.
pub fn graph_from_spec(spec: &str) -> Result<Hypergraph> {
    let parts: Vec<&str> = spec.split(':').collect();
    let g = match parts[0] {
        "complete" => Hypergraph::complete(field(spec, &parts, 1)?),
        "loops" => Hypergraph::complete_with_loops(field(spec, &parts, 1)?),
        "rep" => Hypergraph::complete_with_repetition(field(spec, &parts, 1)?, field(spec, &parts, 2)?),
        "path" => Hypergraph::path(field(spec, &parts, 1)?),
        "cycle" => Hypergraph::cycle(field(spec, &parts, 1)?),
        "star" => Hypergraph::star(field(spec, &parts, 1)?),
        "bipartite" => Hypergraph::complete_bipartite(field(spec, &parts, 1)?, field(spec, &parts, 2)?),
        other => return Err(Error::Parse(format!("unknown graph family `{other}`"))),
    };
    Ok(g)
}
