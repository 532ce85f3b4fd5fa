//! Witness point sets and the low-degree curve richness audit.

use std::collections::HashSet;

use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg;
use crate::metric::Metric;
use crate::rational::{exact_sqrt, format_q, parse_q, q, qf, to_f64, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Exact(Vec<Vec<Q>>),
    Float(Vec<Vec<f64>>),
}

/// How a point set was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(generator: &str, params: &[(&str, String)]) -> Self {
        Self {
            generator: generator.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    d: usize,
    coords: Coords,
    provenance: Provenance,
}

impl PointSet {
    pub fn new(d: usize, coords: Coords, provenance: Provenance) -> Result<Self> {
        let bad = match &coords {
            Coords::Exact(p) => p.iter().map(Vec::len).find(|&l| l != d),
            Coords::Float(p) => p.iter().map(Vec::len).find(|&l| l != d),
        };
        if let Some(got) = bad {
            return Err(Error::DimensionMismatch { expected: d, got });
        }
        Ok(Self { d, coords, provenance })
    }

    pub fn from_exact(d: usize, points: Vec<Vec<Q>>) -> Result<Self> {
        Self::new(d, Coords::Exact(points), Provenance::new("explicit", &[]))
    }

    pub fn from_ints(points: &[&[i64]]) -> Result<Self> {
        let d = points.first().map_or(0, |p| p.len());
        Self::from_exact(d, points.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn from_floats(d: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(d, Coords::Float(points), Provenance::new("explicit", &[]))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coords::Exact(p) => p.len(),
            Coords::Float(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.coords, Coords::Exact(_))
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn exact(&self) -> Option<&[Vec<Q>]> {
        match &self.coords {
            Coords::Exact(p) => Some(p),
            Coords::Float(_) => None,
        }
    }

    pub fn floats(&self) -> Vec<Vec<f64>> {
        match &self.coords {
            Coords::Exact(p) => p.iter().map(|x| x.iter().map(to_f64).collect()).collect(),
            Coords::Float(p) => p.clone(),
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Errors with the index of the first repeated point.
    pub fn check_distinct(&self) -> Result<()> {
        match &self.coords {
            Coords::Exact(p) => {
                let mut seen = HashSet::new();
                match p.iter().position(|x| !seen.insert(x)) {
                    Some(i) => Err(Error::DuplicatePoint(i)),
                    None => Ok(()),
                }
            }
            Coords::Float(p) => {
                let mut seen = HashSet::new();
                match p.iter().position(|x| !seen.insert(x.iter().map(|c| c.to_bits()).collect::<Vec<_>>())) {
                    Some(i) => Err(Error::DuplicatePoint(i)),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::PointNotInSet { index: i, len: self.len() });
        }
        let coords = match &self.coords {
            Coords::Exact(p) => Coords::Exact(indices.iter().map(|&i| p[i].clone()).collect()),
            Coords::Float(p) => Coords::Float(indices.iter().map(|&i| p[i].clone()).collect()),
        };
        let mut prov = self.provenance.clone();
        prov.params.push(("subset".into(), format!("{indices:?}")));
        Self::new(self.d, coords, prov)
    }

    /// Image under an affine map.
    pub fn map(&self, theta: &AffineMap) -> Result<Self> {
        if theta.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: theta.dim() });
        }
        let coords = match &self.coords {
            Coords::Exact(p) => Coords::Exact(p.iter().map(|x| theta.apply(x)).collect()),
            Coords::Float(p) => Coords::Float(p.iter().map(|x| theta.apply_f64(x)).collect()),
        };
        Self::new(self.d, coords, self.provenance.clone())
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = match &self.coords {
            Coords::Exact(p) => p.iter().map(|x| Value::from(x.iter().map(format_q).collect::<Vec<_>>())).collect(),
            Coords::Float(p) => p.iter().map(|x| Value::from(x.clone())).collect(),
        };
        serde_json::json!({
            "d": self.d,
            "points": points,
            "provenance": self.provenance,
        })
    }

    /// Reads `{"d":2,"points":[["0","0"],["1/3","2/3"]]}`; numeric entries
    /// make the whole set float-valued.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| Error::Parse("point set must be a JSON object".into()))?;
        if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "d" | "points" | "provenance")) {
            return Err(Error::Parse(format!("unknown key `{key}` in point set")));
        }
        let d = obj
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing or invalid key `d`".into()))? as usize;
        let rows = obj
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing or invalid key `points`".into()))?;
        let provenance = match obj.get("provenance") {
            Some(p) => serde_json::from_value(p.clone()).map_err(|e| Error::Parse(format!("`provenance`: {e}")))?,
            None => Provenance::new("file", &[]),
        };
        let cells: Vec<&Vec<Value>> = rows
            .iter()
            .map(|r| r.as_array().ok_or_else(|| Error::Parse("each entry of `points` must be an array".into())))
            .collect::<Result<_>>()?;
        let any_float = cells.iter().flat_map(|r| r.iter()).any(Value::is_number);
        let coords = if any_float {
            Coords::Float(
                cells
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|c| match c {
                                Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
                                Value::String(s) => parse_q(s).map(|x| to_f64(&x)),
                                other => Err(Error::Parse(format!("bad coordinate {other}"))),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?,
            )
        } else {
            Coords::Exact(
                cells
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|c| match c {
                                Value::String(s) => parse_q(s),
                                other => Err(Error::Parse(format!("bad coordinate {other}"))),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?,
            )
        };
        Self::new(d, coords, provenance)
    }
}

/// All points of `{0, ..., m-1}^d` in lexicographic order.
pub fn grid(m: usize, d: usize) -> Result<PointSet> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidArgument("grid needs m >= 1 and d >= 1".into()));
    }
    let mut pts = vec![Vec::new()];
    for _ in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<Q>| {
                (0..m).map(move |i| {
                    let mut p = p.clone();
                    p.push(q(i as i64));
                    p
                })
            })
            .collect();
    }
    PointSet::new(d, Coords::Exact(pts), Provenance::new("grid", &[("m", m.to_string()), ("d", d.to_string())]))
}

/// `{(x/s, y/s) : 0 <= x, y <= s}` with `s = sqrt(n)`.
pub fn scaled_grid(n: u64) -> Result<PointSet> {
    let s = exact_sqrt(&q(n as i64)).filter(|_| n > 0).ok_or(Error::NotPerfectSquare(n))?;
    let s = s.to_integer();
    let s_i64: i64 = s.try_into().map_err(|_| Error::InvalidArgument("grid too large".into()))?;
    let mut pts = Vec::new();
    for x in 0..=s_i64 {
        for y in 0..=s_i64 {
            pts.push(vec![qf(x, s_i64), qf(y, s_i64)]);
        }
    }
    PointSet::new(2, Coords::Exact(pts), Provenance::new("scaled_grid", &[("n", n.to_string())]))
}

/// `(0,0), (1,0), ..., (n-1,0)`.
pub fn line(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("line needs n >= 1".into()));
    }
    let pts = (0..n).map(|i| vec![q(i as i64), q(0)]).collect();
    PointSet::new(2, Coords::Exact(pts), Provenance::new("line", &[("n", n.to_string())]))
}

/// The n-th roots of unity; exact for n in {1, 2, 4}, floats otherwise.
pub fn circle(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("circle needs n >= 1".into()));
    }
    let prov = Provenance::new("circle", &[("n", n.to_string())]);
    let exact: Option<Vec<[i64; 2]>> = match n {
        1 => Some(vec![[1, 0]]),
        2 => Some(vec![[1, 0], [-1, 0]]),
        4 => Some(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]),
        _ => None,
    };
    match exact {
        Some(p) => PointSet::new(2, Coords::Exact(p.iter().map(|[x, y]| vec![q(*x), q(*y)]).collect()), prov),
        None => {
            let pts = (0..n)
                .map(|k| {
                    let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect();
            PointSet::new(2, Coords::Float(pts), prov)
        }
    }
}

/// Exact rational points on the unit circle: the orbit of `(1, 0)` under the
/// rotation with cosine 3/5 and sine 4/5. The angle is not a rational
/// multiple of pi, so the points never repeat.
pub fn circle_rat(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("circle_rat needs n >= 1".into()));
    }
    let (c, s) = (qf(3, 5), qf(4, 5));
    let mut pts = vec![vec![q(1), q(0)]];
    while pts.len() < n {
        let p = pts.last().expect("nonempty");
        pts.push(vec![&c * &p[0] - &s * &p[1], &s * &p[0] + &c * &p[1]]);
    }
    PointSet::new(2, Coords::Exact(pts), Provenance::new("circle_rat", &[("n", n.to_string())]))
}

/// The orbit segment `x, theta(x), ..., theta^{n-1}(x)` of an isometry.
pub fn orbit_tight_set(m: &Metric, theta: &AffineMap, x: &[Q], n: usize) -> Result<PointSet> {
    if !m.is_isometry(theta)? {
        return Err(Error::NotAnIsometry(m.to_string()));
    }
    if x.len() != m.d() {
        return Err(Error::DimensionMismatch { expected: m.d(), got: x.len() });
    }
    let mut pts: Vec<Vec<Q>> = vec![x.to_vec()];
    while pts.len() < n {
        let next = theta.apply(pts.last().expect("nonempty"));
        if let Some(i) = pts.iter().position(|p| *p == next) {
            return Err(Error::OrbitPeriodic { period: pts.len() - i });
        }
        pts.push(next);
    }
    let prov = Provenance::new(
        "orbit",
        &[
            ("metric", m.to_string()),
            ("theta", serde_json::to_string(&theta.to_json()).unwrap_or_default()),
            ("x", format!("{:?}", x.iter().map(format_q).collect::<Vec<_>>())),
            ("n", n.to_string()),
        ],
    );
    PointSet::new(m.d(), Coords::Exact(pts), prov)
}

/// `n` distinct integer points drawn uniformly from `[-bound, bound]^d`.
pub fn random_generic(d: usize, n: usize, bound: i64, seed: u64) -> Result<PointSet> {
    if d == 0 || bound < n as i64 {
        return Err(Error::InvalidArgument(format!("random_generic needs d >= 1 and bound >= n (got bound {bound}, n {n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut pts = Vec::new();
    let max_attempts = 100 * n + 100;
    let mut attempts = 0;
    while pts.len() < n {
        if attempts == max_attempts {
            return Err(Error::SamplingExhausted { wanted: n, attempts });
        }
        attempts += 1;
        let p: Vec<i64> = (0..d).map(|_| rng.gen_range(-bound..=bound)).collect();
        if seen.insert(p.clone()) {
            pts.push(p.into_iter().map(q).collect());
        }
    }
    let mut prov = Provenance::new(
        "random",
        &[("d", d.to_string()), ("n", n.to_string()), ("bound", bound.to_string())],
    );
    prov.seed = Some(seed);
    PointSet::new(d, Coords::Exact(pts), prov)
}

pub const DEFAULT_AUDIT_THRESHOLD: f64 = 0.01;
pub const DEFAULT_AUDIT_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub degree: usize,
    pub basis_size: usize,
    pub points: usize,
    pub subsets_total: u128,
    pub subsets_examined: usize,
    pub exhaustive: bool,
    pub max_incidence: usize,
    /// Indices of a subset spanning a curve that achieves `max_incidence`.
    pub witness_subset: Vec<usize>,
    pub threshold: f64,
    pub exceeds_threshold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn monomials(degree: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for total in 0..=degree as u32 {
        for i in (0..=total).rev() {
            out.push((i, total - i));
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Scans curves of degree at most `degree` through every subset of
/// `basis_size - 1` points and reports the richest one found. This finds
/// every such curve containing at least that many points of `P`, and never
/// reports a curve that does not exist.
pub fn curve_richness_audit(p: &PointSet, degree: usize, threshold: f64, budget: usize, seed: u64) -> Result<AuditReport> {
    if p.d() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: p.d() });
    }
    if degree == 0 {
        return Err(Error::InvalidArgument("curve degree must be at least 1".into()));
    }
    let mons = monomials(degree);
    let b = mons.len();
    let s = b - 1;
    let n = p.len();
    let total = binomial(n, s);
    let mut warning = None;
    let subsets: Vec<Vec<usize>> = if n < s {
        Vec::new()
    } else if total <= budget as u128 {
        combinations(n, s)
    } else {
        warning = Some(format!("{total} subsets exceed the budget of {budget}; examined a seeded random sample"));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..budget)
            .map(|_| {
                let mut v = sample(&mut rng, n, s).into_vec();
                v.sort_unstable();
                v
            })
            .collect()
    };

    let scored: Vec<(usize, usize)> = subsets
        .par_iter()
        .enumerate()
        .map(|(i, sub)| (incidence_for_subset(p, &mons, sub), i))
        .collect();
    let best = scored.iter().fold(None::<(usize, usize)>, |acc, &(inc, i)| match acc {
        Some((bi, _)) if bi >= inc => acc,
        _ => Some((inc, i)),
    });
    let (max_incidence, witness_subset) = match best {
        Some((inc, i)) => (inc, subsets[i].clone()),
        // Fewer points than the basis needs: they all lie on one curve.
        None => (n, (0..n).collect()),
    };
    Ok(AuditReport {
        degree,
        basis_size: b,
        points: n,
        subsets_total: total,
        subsets_examined: subsets.len(),
        exhaustive: warning.is_none(),
        max_incidence,
        witness_subset,
        threshold,
        exceeds_threshold: max_incidence as f64 > threshold * n as f64,
        warning,
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k == 0 {
        return vec![Vec::new()];
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Best incidence count over the pencil of curves through `sub`.
fn incidence_for_subset(p: &PointSet, mons: &[(u32, u32)], sub: &[usize]) -> usize {
    match p.coords() {
        Coords::Exact(pts) => {
            let eval = |x: &[Q]| -> Vec<Q> {
                mons.iter().map(|&(i, j)| num_traits::pow(x[0].clone(), i as usize) * num_traits::pow(x[1].clone(), j as usize)).collect()
            };
            let rows: Vec<Vec<Q>> = sub.iter().map(|&i| eval(&pts[i])).collect();
            let all_rows: Vec<Vec<Q>> = pts.iter().map(|x| eval(x)).collect();
            linalg::kernel(&rows, mons.len())
                .iter()
                .map(|c| {
                    all_rows
                        .iter()
                        .filter(|r| r.iter().zip(c).fold(Q::zero(), |acc, (a, b)| acc + a * b).is_zero())
                        .count()
                })
                .max()
                .unwrap_or(0)
        }
        Coords::Float(pts) => {
            let eval = |x: &[f64]| -> Vec<f64> { mons.iter().map(|&(i, j)| x[0].powi(i as i32) * x[1].powi(j as i32)).collect() };
            let b = mons.len();
            // Pad to a square system so the SVD exposes the full null space.
            let mut m = nalgebra::DMatrix::<f64>::zeros(b, b);
            for (r, &i) in sub.iter().enumerate() {
                for (c, v) in eval(&pts[i]).into_iter().enumerate() {
                    m[(r, c)] = v;
                }
            }
            let svd = m.svd(false, true);
            let v_t = svd.v_t.expect("requested");
            let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
            (0..b)
                .filter(|&k| svd.singular_values[k] <= 1e-9 * smax)
                .map(|k| {
                    let c: Vec<f64> = v_t.row(k).iter().cloned().collect();
                    pts.iter()
                        .filter(|x| {
                            let e = eval(x);
                            let scale: f64 = e.iter().zip(&c).map(|(a, b)| (a * b).abs()).sum::<f64>().max(1.0);
                            e.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>().abs() <= 1e-9 * scale
                        })
                        .count()
                })
                .max()
                .unwrap_or(0)
        }
    }
}
