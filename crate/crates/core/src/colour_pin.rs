//! Distance colourings of complete graphs, pinned distances, the colour-class
//! counting lemma and the rich-pin certificate for trees.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::census::{check_budget, par_enumerate, CensusReport, Filter, DEFAULT_QUANTUM};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeColouring, Hypergraph, Vertex};
use crate::pointset::{Coords, PointSet};
use crate::rational::{format_q, parse_q, quantize, to_f64, Q};

/// Largest vertex set of one colour class searched exhaustively.
pub const COLOUR_SEARCH_LIMIT: usize = 20;

/// A centrally symmetric convex polygon used as a unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<[Q; 2]>,
    /// Facet normals `n` scaled so that `<n, v> = 1` on the facet.
    normals: Vec<[Q; 2]>,
}

impl Polygon {
    /// Vertices in any order; they must come in pairs `v`, `-v` and be in convex position.
    pub fn new(vertices: Vec<[Q; 2]>) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::InvalidArgument("a symmetric polygon needs at least 4 vertices".into()));
        }
        let set: HashSet<&[Q; 2]> = vertices.iter().collect();
        if set.len() != vertices.len() {
            return Err(Error::InvalidArgument("repeated polygon vertex".into()));
        }
        if let Some(v) = vertices.iter().find(|v| !set.contains(&[-v[0].clone(), -v[1].clone()])) {
            return Err(Error::InvalidArgument(format!(
                "polygon is not centrally symmetric: ({}, {}) has no opposite vertex",
                format_q(&v[0]),
                format_q(&v[1])
            )));
        }
        let mut vs = vertices;
        vs.sort_by(|a, b| {
            let ta = to_f64(&a[1]).atan2(to_f64(&a[0]));
            let tb = to_f64(&b[1]).atan2(to_f64(&b[0]));
            ta.partial_cmp(&tb).unwrap_or(Ordering::Equal)
        });
        let m = vs.len();
        let mut normals = Vec::with_capacity(m);
        for i in 0..m {
            let (a, b, c) = (&vs[i], &vs[(i + 1) % m], &vs[(i + 2) % m]);
            let turn = (&b[0] - &a[0]) * (&c[1] - &b[1]) - (&b[1] - &a[1]) * (&c[0] - &b[0]);
            if !turn.is_positive() {
                return Err(Error::InvalidArgument("polygon vertices are not in strictly convex position".into()));
            }
            let n = [&b[1] - &a[1], &a[0] - &b[0]];
            let h = &n[0] * &a[0] + &n[1] * &a[1];
            normals.push([&n[0] / &h, &n[1] / &h]);
        }
        Ok(Self { vertices: vs, normals })
    }

    /// Reads `{"vertices": [["1","0"], ...]}` with rational strings or integers.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| Error::Parse("polygon must be a JSON object".into()))?;
        if let Some(key) = obj.keys().find(|k| k.as_str() != "vertices") {
            return Err(Error::Parse(format!("unknown key `{key}` in polygon")));
        }
        let rows = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing or invalid key `vertices`".into()))?;
        let cell = |c: &Value| match c {
            Value::String(s) => parse_q(s),
            Value::Number(n) => n
                .as_i64()
                .map(|i| Q::from_integer(i.into()))
                .ok_or_else(|| Error::Parse(format!("polygon coordinate {n} must be an integer or a rational string"))),
            other => Err(Error::Parse(format!("bad coordinate {other}"))),
        };
        let vertices = rows
            .iter()
            .map(|r| match r.as_array().map(Vec::as_slice) {
                Some([x, y]) => Ok([cell(x)?, cell(y)?]),
                _ => Err(Error::Parse("each polygon vertex must be a pair".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[[Q; 2]] {
        &self.vertices
    }

    pub fn gauge(&self, x: &[Q]) -> Q {
        self.normals
            .iter()
            .map(|n| &n[0] * &x[0] + &n[1] * &x[1])
            .max()
            .expect("non-empty polygon")
    }

    fn gauge_f64(&self, x: &[f64]) -> f64 {
        self.normals
            .iter()
            .map(|n| to_f64(&n[0]) * x[0] + to_f64(&n[1]) * x[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Norm {
    Euclidean,
    /// `ℓ_p` for real `p >= 1`.
    Lp(f64),
    Linf,
    Polygon(Polygon),
}

/// A value that compares equal exactly when the norms agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormKey {
    Exact(Q),
    Float(i64),
}

impl Norm {
    /// `euclid`, `l2`, `lp:<p>`, `l1`, `linf`; polygons are built with [`Norm::Polygon`].
    pub fn parse(id: &str) -> Result<Self> {
        match id {
            "euclid" | "euclidean" | "l2" => Ok(Norm::Euclidean),
            "linf" | "lp:inf" => Ok(Norm::Linf),
            "l1" => Ok(Norm::Lp(1.0)),
            _ => match id.strip_prefix("lp:") {
                Some(p) => {
                    let p: f64 = p.parse().map_err(|_| Error::InvalidArgument(format!("bad exponent in `{id}`")))?;
                    Norm::lp(p)
                }
                None => Err(Error::InvalidArgument(format!("unknown norm `{id}`"))),
            },
        }
    }

    pub fn lp(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!("ℓ_p needs p >= 1, got {p}")));
        }
        Ok(if p == 2.0 { Norm::Euclidean } else { Norm::Lp(p) })
    }

    fn integer_exponent(&self) -> Option<u32> {
        match self {
            Norm::Lp(p) if p.fract() == 0.0 && *p <= 64.0 => Some(*p as u32),
            _ => None,
        }
    }

    /// Whether keys on exact input are exact.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Norm::Lp(_)) || self.integer_exponent().is_some()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Norm::Lp(p) => x.iter().map(|v| v.abs().powf(*p)).sum::<f64>().powf(1.0 / p),
            Norm::Linf => x.iter().map(|v| v.abs()).fold(0.0, f64::max),
            Norm::Polygon(poly) => poly.gauge_f64(x),
        }
    }

    /// Key of `‖x‖` for exact input: a strictly increasing function of the norm.
    pub fn key(&self, x: &[Q], quantum: f64) -> NormKey {
        match self {
            Norm::Euclidean => NormKey::Exact(x.iter().fold(Q::zero(), |acc, v| acc + v * v)),
            Norm::Linf => NormKey::Exact(x.iter().map(Q::abs).max().unwrap_or_else(Q::zero)),
            Norm::Polygon(poly) => NormKey::Exact(poly.gauge(x)),
            Norm::Lp(_) => match self.integer_exponent() {
                Some(p) => NormKey::Exact(x.iter().fold(Q::zero(), |acc, v| acc + num_traits::pow(v.abs(), p as usize))),
                None => NormKey::Float(quantize(self.eval_f64(&x.iter().map(to_f64).collect::<Vec<_>>()), quantum)),
            },
        }
    }

    pub fn key_f64(&self, x: &[f64], quantum: f64) -> NormKey {
        NormKey::Float(quantize(self.eval_f64(x), quantum))
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        match self {
            Norm::Polygon(_) if d != 2 => Err(Error::DimensionMismatch { expected: 2, got: d }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Euclidean => write!(f, "euclid"),
            Norm::Lp(p) => write!(f, "lp:{p}"),
            Norm::Linf => write!(f, "linf"),
            Norm::Polygon(poly) => write!(f, "poly({} vertices)", poly.vertices.len()),
        }
    }
}

/// Key of `‖P[i] - P[j]‖`.
fn pair_key(norm: &Norm, points: &PointSet, i: usize, j: usize) -> NormKey {
    match points.coords() {
        Coords::Exact(p) => {
            let diff: Vec<Q> = p[i].iter().zip(&p[j]).map(|(a, b)| a - b).collect();
            norm.key(&diff, DEFAULT_QUANTUM)
        }
        Coords::Float(p) => {
            let diff: Vec<f64> = p[i].iter().zip(&p[j]).map(|(a, b)| a - b).collect();
            norm.key_f64(&diff, DEFAULT_QUANTUM)
        }
    }
}

/// Interned distance ids for all ordered pairs.
fn distance_table(norm: &Norm, points: &PointSet) -> Vec<Vec<u32>> {
    let n = points.len();
    let keys: Vec<Vec<NormKey>> =
        (0..n).into_par_iter().map(|i| (0..n).map(|j| pair_key(norm, points, i, j)).collect()).collect();
    let mut ids: HashMap<&NormKey, u32> = HashMap::new();
    keys.iter()
        .map(|row| {
            row.iter()
                .map(|k| {
                    let next = ids.len() as u32;
                    *ids.entry(k).or_insert(next)
                })
                .collect()
        })
        .collect()
}

/// Colours each edge of `K_{|P|}` by the distance between its endpoints.
pub fn distance_colouring(norm: &Norm, points: &PointSet) -> Result<EdgeColouring> {
    norm.check_dim(points.d())?;
    points.check_distinct()?;
    let n = points.len();
    let labels: Vec<NormKey> = Hypergraph::complete(n).edges().iter().map(|e| pair_key(norm, points, e[0], e[1])).collect();
    EdgeColouring::from_labels(n, &labels)
}

/// `|Δ_x(P)|` for `x = P[pin]`, counting the zero distance.
pub fn pinned_distances(norm: &Norm, points: &PointSet, pin: usize) -> Result<usize> {
    norm.check_dim(points.d())?;
    if pin >= points.len() {
        return Err(Error::PointNotInSet { index: pin, len: points.len() });
    }
    Ok(pinned_counts_within(norm, points, &[pin], &(0..points.len()).collect::<Vec<_>>())[0])
}

/// `|Δ_x(S)|` for each pin `x`, with `S` given by indices.
fn pinned_counts_within(norm: &Norm, points: &PointSet, pins: &[usize], within: &[usize]) -> Vec<usize> {
    pins.par_iter()
        .map(|&x| within.iter().map(|&y| pair_key(norm, points, x, y)).collect::<HashSet<_>>().len())
        .collect()
}

/// The two catalogued `(f, g)` pairs for the colour-class lemma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColourBoundFunctions {
    /// `f(m) = (d/2) m ln m`, `g(t) = 2t / (d ln(dt + 1))`.
    UnitDistanceLog { d: u32 },
    /// `f(m) = C m^{1+δ}`, `g = f^{-1}`.
    PowerLaw { c: f64, delta: f64 },
}

impl ColourBoundFunctions {
    pub fn unit_distance_log(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument("d must be at least 2".into()));
        }
        Ok(ColourBoundFunctions::UnitDistanceLog { d })
    }

    pub fn power_law(c: f64, delta: f64) -> Result<Self> {
        if !(c > 0.0 && delta > 0.0 && c.is_finite() && delta.is_finite()) {
            return Err(Error::InvalidArgument("C and δ must be positive".into()));
        }
        Ok(ColourBoundFunctions::PowerLaw { c, delta })
    }

    pub fn f(&self, m: f64) -> f64 {
        match *self {
            ColourBoundFunctions::UnitDistanceLog { d } => d as f64 / 2.0 * m * m.ln(),
            ColourBoundFunctions::PowerLaw { c, delta } => c * m.powf(1.0 + delta),
        }
    }

    /// Inverse of `f` on its increasing branch (`m > 1` for the log form).
    pub fn f_inv(&self, t: f64) -> f64 {
        match *self {
            ColourBoundFunctions::UnitDistanceLog { d } => {
                // Newton on x ln x = s, x > 1.
                let s = 2.0 * t / d as f64;
                let mut x = if s > std::f64::consts::E { s / s.ln() } else { 1.0 + s };
                x = x.max(1.0 + 1e-12);
                for _ in 0..100 {
                    let step = (x * x.ln() - s) / (x.ln() + 1.0);
                    let next = (x - step).max(1.0 + (x - 1.0) / 2.0);
                    if (next - x).abs() <= 1e-15 * x {
                        x = next;
                        break;
                    }
                    x = next;
                }
                x
            }
            ColourBoundFunctions::PowerLaw { c, delta } => (t / c).powf(1.0 / (1.0 + delta)),
        }
    }

    pub fn g(&self, t: f64) -> f64 {
        match *self {
            ColourBoundFunctions::UnitDistanceLog { d } => {
                let d = d as f64;
                2.0 * t / (d * (d * t + 1.0).ln())
            }
            ColourBoundFunctions::PowerLaw { c, delta } => c.powf(-1.0 / (1.0 + delta)) * t.powf(1.0 / (1.0 + delta)),
        }
    }

    /// `(1/n) g(n choose 2)`.
    pub fn bound(&self, n: usize) -> f64 {
        let pairs = (n * n.saturating_sub(1) / 2) as f64;
        if pairs < 1.0 {
            return 0.0;
        }
        self.g(pairs) / n as f64
    }

    /// Samples `t` where `f^{-1}(t) < g(t)` (strictly for the log form, up to rounding for the power law).
    pub fn inverse_violations(&self, ts: impl IntoIterator<Item = f64>) -> Vec<f64> {
        ts.into_iter()
            .filter(|&t| {
                let (fi, g) = (self.f_inv(t), self.g(t));
                match self {
                    ColourBoundFunctions::UnitDistanceLog { .. } => fi <= g,
                    ColourBoundFunctions::PowerLaw { .. } => fi < g * (1.0 - 1e-12),
                }
            })
            .collect()
    }

    /// Pairs `(a, b)` with `g(a) + g(b) < g(a + b)`.
    pub fn subadditivity_violations(&self, pairs: impl IntoIterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
        pairs
            .into_iter()
            .filter(|&(a, b)| self.g(a) + self.g(b) < self.g(a + b) * (1.0 - 1e-12))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ColourLemmaReport {
    pub n: usize,
    pub colours: usize,
    pub bounds: ColourBoundFunctions,
    /// Every monochromatic subgraph on `m` vertices has at most `f(m)` edges.
    pub hypothesis_holds: bool,
    /// A colour class and vertex set breaking the hypothesis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<HypothesisViolation>,
    /// `(1/n) g(n choose 2)`.
    pub bound: f64,
    pub max_colour_degree: usize,
    pub best_vertex: usize,
    /// The conclusion holds, i.e. `max_colour_degree >= bound`.
    pub conclusion_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisViolation {
    pub colour: usize,
    pub vertices: Vec<usize>,
    pub edges: usize,
    pub allowed: f64,
}

/// The densest vertex set of a colour class relative to `f`, searched exhaustively.
fn worst_subset(class: &[(usize, usize)], bounds: &ColourBoundFunctions) -> Result<Option<HypothesisViolation>> {
    let mut touched: Vec<usize> = class.iter().flat_map(|&(a, b)| [a, b]).collect();
    touched.sort_unstable();
    touched.dedup();
    let k = touched.len();
    if k > COLOUR_SEARCH_LIMIT {
        return Err(Error::SearchTooLarge(format!("a colour class touches {k} vertices, the limit is {COLOUR_SEARCH_LIMIT}")));
    }
    let pos: HashMap<usize, usize> = touched.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![0u32; k];
    for &(a, b) in class {
        adj[pos[&a]] |= 1 << pos[&b];
        adj[pos[&b]] |= 1 << pos[&a];
    }
    let found = (1u32..(1u32 << k)).into_par_iter().find_first(|&s| {
        let m = s.count_ones();
        let edges: u32 = (0..k).filter(|&v| s >> v & 1 == 1).map(|v| (adj[v] & s).count_ones()).sum::<u32>() / 2;
        edges as f64 > bounds.f(m as f64)
    });
    Ok(found.map(|s| {
        let vertices: Vec<usize> = (0..k).filter(|&v| s >> v & 1 == 1).map(|v| touched[v]).collect();
        let edges = class.iter().filter(|(a, b)| vertices.contains(a) && vertices.contains(b)).count();
        HypothesisViolation { colour: 0, allowed: bounds.f(vertices.len() as f64), vertices, edges }
    }))
}

/// Verifies the hypothesis and conclusion of the colour-class lemma on one colouring.
pub fn check_colour_lemma(colouring: &EdgeColouring, bounds: &ColourBoundFunctions) -> Result<ColourLemmaReport> {
    let mut violation = None;
    for (c, class) in colouring.classes().iter().enumerate() {
        if let Some(mut v) = worst_subset(class, bounds)? {
            v.colour = c;
            violation = Some(v);
            break;
        }
    }
    let degrees = colouring.colour_degrees();
    let (best_vertex, max_colour_degree) = degrees
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(v, &d)| (v, d))
        .unwrap_or((0, 0));
    let bound = bounds.bound(colouring.n());
    Ok(ColourLemmaReport {
        n: colouring.n(),
        colours: colouring.colour_count(),
        bounds: *bounds,
        hypothesis_holds: violation.is_none(),
        violation,
        bound,
        max_colour_degree,
        best_vertex,
        conclusion_holds: max_colour_degree as f64 >= bound,
    })
}

/// Random colourings of `K_n` with `colours` colours that satisfy the hypothesis, by rejection.
pub fn sample_admissible_colourings(
    n: usize,
    colours: usize,
    bounds: &ColourBoundFunctions,
    count: usize,
    seed: u64,
) -> Result<Vec<EdgeColouring>> {
    if colours == 0 {
        return Err(Error::InvalidArgument("at least one colour is needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = n * n.saturating_sub(1) / 2;
    let max_attempts = count.saturating_mul(1000).max(1000);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        if attempts == max_attempts {
            return Err(Error::SamplingExhausted { wanted: count, attempts });
        }
        attempts += 1;
        let labels: Vec<usize> = (0..edges).map(|_| rng.gen_range(0..colours)).collect();
        let c = EdgeColouring::new(n, &labels)?;
        let mut ok = true;
        for class in c.classes() {
            if worst_subset(&class, bounds)?.is_some() {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct RichPinReport {
    pub norm: String,
    pub points: usize,
    /// Extracted pins in order.
    pub pins: Vec<usize>,
    /// `|Δ_x(P)|` for each extracted pin.
    pub counts: Vec<usize>,
    /// `H(|P|/2)`.
    pub threshold: f64,
    pub hypothesis_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_pin: Option<usize>,
}

/// Greedily extracts `⌈|P|/2⌉` pins with the most distinct pinned distances.
pub fn rich_pin_set(norm: &Norm, points: &PointSet, h: &dyn Fn(f64) -> f64) -> Result<RichPinReport> {
    norm.check_dim(points.d())?;
    points.check_distinct()?;
    let all: Vec<usize> = (0..points.len()).collect();
    let (pins, counts) = richest_half(norm, points, &all);
    let threshold = h(points.len() as f64 / 2.0);
    let failing_pin = pins.iter().zip(&counts).find(|(_, &c)| (c as f64) < threshold).map(|(&p, _)| p);
    Ok(RichPinReport {
        norm: norm.to_string(),
        points: points.len(),
        pins,
        counts,
        threshold,
        hypothesis_holds: failing_pin.is_none(),
        failing_pin,
    })
}

/// The `⌈|S|/2⌉` members `x` of `S` with the largest `|Δ_x(S)|`, ties broken by index.
fn richest_half(norm: &Norm, points: &PointSet, within: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let counts = pinned_counts_within(norm, points, within, within);
    let mut order: Vec<usize> = (0..within.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(within[a].cmp(&within[b])));
    order.truncate(within.len().div_ceil(2));
    (order.iter().map(|&i| within[i]).collect(), order.iter().map(|&i| counts[i]).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateLevel {
    pub depth: usize,
    /// `|P_i|`.
    pub size: usize,
    /// The pin `x_i`, minimising `|Δ_x(P_{i+1})|` over `P_i`.
    pub pin: usize,
    /// `|Δ_{x_i}(P_{i+1})|`.
    pub pinned: usize,
    /// Vertices one level deeper.
    pub children: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeCertificate {
    pub norm: String,
    pub root: Vertex,
    pub depth: usize,
    pub points: usize,
    pub levels: Vec<CertificateLevel>,
    /// `Π_i |Δ_{x_i}(P_{i+1})|^{|V_{i+1}|}`.
    pub certificate: u128,
}

/// A lower bound for `|f_{‖·‖,G}(P^V)|` from nested rich-pin sets along the depth levels of a tree.
pub fn tree_certificate(norm: &Norm, tree: &Hypergraph, root: Vertex, points: &PointSet) -> Result<TreeCertificate> {
    norm.check_dim(points.d())?;
    points.check_distinct()?;
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    let levels = tree.depth_partition(root)?;
    let t = levels.len() - 1;
    let need = 1usize << t;
    if points.len() < need {
        return Err(Error::PointSetTooSmall { have: points.len(), need });
    }
    // sets[i] = P_i, built from P_t = P downwards.
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); t + 1];
    sets[t] = (0..points.len()).collect();
    for i in (0..t).rev() {
        sets[i] = richest_half(norm, points, &sets[i + 1]).0;
    }
    let mut out = Vec::with_capacity(t);
    let mut certificate: u128 = 1;
    for i in 0..t {
        let counts = pinned_counts_within(norm, points, &sets[i], &sets[i + 1]);
        let (k, &pinned) = counts
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1).then(sets[i][a.0].cmp(&sets[i][b.0])))
            .expect("non-empty level");
        let children = levels[i + 1].len();
        certificate = certificate.saturating_mul((pinned as u128).saturating_pow(children as u32));
        out.push(CertificateLevel { depth: i, size: sets[i].len(), pin: sets[i][k], pinned, children });
    }
    Ok(TreeCertificate {
        norm: norm.to_string(),
        root,
        depth: t,
        points: points.len(),
        levels: out,
        certificate,
    })
}

/// `|f_{‖·‖,G}(P^V)|` by enumeration, for a graph.
pub fn norm_census(norm: &Norm, g: &Hypergraph, points: &PointSet, budget: u128) -> Result<CensusReport> {
    if g.k() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: g.k() });
    }
    norm.check_dim(points.d())?;
    let n = points.len();
    let v = g.vertex_count();
    let total = check_budget(n, v, budget)?;
    let table = distance_table(norm, points);
    let parts = par_enumerate(n, v, HashMap::<Vec<u32>, u64>::new, |acc, idx| {
        let key: Vec<u32> = g.edges().iter().map(|e| table[idx[e[0]]][idx[e[1]]]).collect();
        *acc.entry(key).or_insert(0) += 1;
    });
    let mut merged: HashMap<Vec<u32>, u64> = HashMap::new();
    for part in parts {
        for (k, c) in part {
            *merged.entry(k).or_insert(0) += c;
        }
    }
    let mut fibres: Vec<u64> = merged.into_values().collect();
    fibres.sort_unstable_by(|a, b| b.cmp(a));
    Ok(CensusReport {
        metric: norm.to_string(),
        vertices: v,
        edges: g.edge_count(),
        points: n,
        filter: Filter::All,
        exact: points.is_exact() && norm.is_exact(),
        total,
        enumerated: total,
        distinct: fibres.len() as u64,
        fibre_square_sum: fibres.iter().map(|&s| (s as u128) * (s as u128)).sum(),
        fibres,
        quantum: (!(points.is_exact() && norm.is_exact())).then_some(DEFAULT_QUANTUM),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::DEFAULT_BUDGET;
    use crate::pointset::{circle, grid, line, random_generic};
    use crate::rational::q;
    use proptest::prelude::*;

    fn square_polygon() -> Polygon {
        Polygon::new(vec![[q(1), q(1)], [q(-1), q(1)], [q(-1), q(-1)], [q(1), q(-1)]]).unwrap()
    }

    #[test]
    fn colouring_examples() {
        assert_eq!(distance_colouring(&Norm::Euclidean, &line(3).unwrap()).unwrap().colour_count(), 2);
        assert_eq!(distance_colouring(&Norm::Euclidean, &grid(2, 2).unwrap()).unwrap().colour_count(), 2);
        let dup = PointSet::from_ints(&[&[0, 0], &[0, 0]]).unwrap();
        assert!(matches!(distance_colouring(&Norm::Euclidean, &dup), Err(Error::DuplicatePoint(_))));
        // Colours are the distinct non-zero distances.
        let p = grid(3, 2).unwrap();
        let k2 = norm_census(&Norm::Euclidean, &Hypergraph::complete(2), &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(distance_colouring(&Norm::Euclidean, &p).unwrap().colour_count() as u64, k2.distinct - 1);
    }

    #[test]
    fn pinned_examples() {
        assert_eq!(pinned_distances(&Norm::Euclidean, &line(3).unwrap(), 0).unwrap(), 3);
        let mut pts = circle(4).unwrap().exact().unwrap().to_vec();
        pts.push(vec![q(0), q(0)]);
        let p = PointSet::from_exact(2, pts).unwrap();
        assert_eq!(pinned_distances(&Norm::Euclidean, &p, 4).unwrap(), 2);
        let f = PointSet::from_floats(2, {
            let mut v = circle(7).unwrap().floats();
            v.push(vec![0.0, 0.0]);
            v
        })
        .unwrap();
        assert_eq!(pinned_distances(&Norm::Euclidean, &f, 7).unwrap(), 2);
        assert!(matches!(pinned_distances(&Norm::Euclidean, &p, 9), Err(Error::PointNotInSet { .. })));
    }

    #[test]
    fn norms_agree_with_floats() {
        let poly = Norm::Polygon(square_polygon());
        let x = [q(3), q(-5)];
        assert_eq!(poly.key(&x, DEFAULT_QUANTUM), NormKey::Exact(q(5)));
        assert_eq!(Norm::Linf.key(&x, DEFAULT_QUANTUM), NormKey::Exact(q(5)));
        assert!((Norm::Lp(1.0).eval_f64(&[3.0, -5.0]) - 8.0).abs() < 1e-12);
        assert!((Norm::Lp(3.0).eval_f64(&[1.0, 2.0]) - 9f64.cbrt()).abs() < 1e-12);
        assert_eq!(Norm::parse("lp:2").unwrap(), Norm::Euclidean);
        assert!(Norm::parse("lp:0.5").is_err());
    }

    #[test]
    fn polygon_validation() {
        assert!(Polygon::new(vec![[q(1), q(0)], [q(0), q(1)], [q(-1), q(0)]]).is_err());
        assert!(Polygon::new(vec![[q(1), q(0)], [q(0), q(1)], [q(-1), q(0)], [q(0), q(-2)]]).is_err());
        // A collinear middle vertex is rejected.
        assert!(Polygon::new(vec![[q(1), q(1)], [q(0), q(1)], [q(-1), q(1)], [q(-1), q(-1)], [q(0), q(-1)], [q(1), q(-1)]]).is_err());
        let hex = Polygon::from_json_str(r#"{"vertices": [[2,0],[1,2],[-1,2],[-2,0],[-1,-2],[1,-2]]}"#).unwrap();
        for v in hex.vertices() {
            assert_eq!(hex.gauge(v), q(1));
        }
        assert!(Polygon::from_json_str(r#"{"verts": []}"#).unwrap_err().to_string().contains("verts"));
    }

    proptest! {
        #[test]
        fn norm_axioms(a in proptest::collection::vec(-50.0f64..50.0, 2), b in proptest::collection::vec(-50.0f64..50.0, 2), s in 0.0f64..10.0) {
            let hex = Polygon::from_json_str(r#"{"vertices": [[2,0],[1,2],[-1,2],[-2,0],[-1,-2],[1,-2]]}"#).unwrap();
            for norm in [Norm::Euclidean, Norm::Lp(1.5), Norm::Lp(3.0), Norm::Linf, Norm::Polygon(hex)] {
                let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                prop_assert!(norm.eval_f64(&sum) <= norm.eval_f64(&a) + norm.eval_f64(&b) + 1e-9);
                let scaled: Vec<f64> = a.iter().map(|x| s * x).collect();
                prop_assert!((norm.eval_f64(&scaled) - s * norm.eval_f64(&a)).abs() <= 1e-9 * (1.0 + s * norm.eval_f64(&a)));
                let neg: Vec<f64> = a.iter().map(|x| -x).collect();
                prop_assert!((norm.eval_f64(&neg) - norm.eval_f64(&a)).abs() <= 1e-12);
            }
        }

        #[test]
        fn polygon_symmetric_exactly(x in -100i64..100, y in -100i64..100) {
            let hex = Polygon::from_json_str(r#"{"vertices": [[2,0],[1,2],[-1,2],[-2,0],[-1,-2],[1,-2]]}"#).unwrap();
            prop_assert_eq!(hex.gauge(&[q(x), q(y)]), hex.gauge(&[q(-x), q(-y)]));
        }
    }

    #[test]
    fn colour_lemma_examples() {
        let b = ColourBoundFunctions::unit_distance_log(2).unwrap();
        let mono = EdgeColouring::new(3, &[0, 0, 0]).unwrap();
        let r = check_colour_lemma(&mono, &b).unwrap();
        assert!(r.hypothesis_holds);
        assert!((b.f(3.0) - 3.295836866004329).abs() < 1e-12);
        assert!((r.bound - 0.5138).abs() < 1e-3);
        assert_eq!(r.max_colour_degree, 1);
        assert!(r.conclusion_holds);

        let rainbow = EdgeColouring::new(6, &(0..15).collect::<Vec<_>>()).unwrap();
        let r = check_colour_lemma(&rainbow, &b).unwrap();
        assert_eq!(r.max_colour_degree, 5);
        assert!(r.conclusion_holds);

        let p = ColourBoundFunctions::power_law(1.0, 0.5).unwrap();
        let n = 7;
        let expected = (21f64).powf(1.0 / 1.5) / n as f64;
        assert!((p.bound(n) - expected).abs() < 1e-12);

        let k4 = EdgeColouring::new(4, &[0; 6]).unwrap();
        let r = check_colour_lemma(&k4, &b).unwrap();
        assert!(!r.hypothesis_holds);
        assert_eq!(r.violation.unwrap().vertices.len(), 4);
    }

    #[test]
    fn bound_function_claims() {
        for b in [ColourBoundFunctions::unit_distance_log(2).unwrap(), ColourBoundFunctions::unit_distance_log(3).unwrap()] {
            assert!(b.inverse_violations((2..=2000).map(|m| m as f64)).is_empty());
            for t in [1.5, 10.0, 1e4, 1e6] {
                assert!((b.f(b.f_inv(t)) - t).abs() < 1e-9 * t);
            }
            assert!(b.subadditivity_violations((1..60).flat_map(|a| (1..60).map(move |c| (a as f64, c as f64)))).is_empty());
        }
    }

    #[test]
    fn sampled_colourings_satisfy_lemma() {
        let b = ColourBoundFunctions::power_law(1.0, 0.5).unwrap();
        for c in sample_admissible_colourings(8, 6, &b, 20, 7).unwrap() {
            let r = check_colour_lemma(&c, &b).unwrap();
            assert!(r.hypothesis_holds && r.conclusion_holds);
        }
    }

    #[test]
    fn rich_pins_on_line() {
        let r = rich_pin_set(&Norm::Euclidean, &line(8).unwrap(), &|n| n / 4.0).unwrap();
        assert_eq!(r.pins.len(), 4);
        assert!(r.hypothesis_holds);
        assert!(r.counts.windows(2).all(|w| w[0] >= w[1]));
        assert!(r.counts.iter().all(|&c| c >= 4));
        // Pin i sees max(i, 7 - i) + 1 distances.
        for (&pin, &c) in r.pins.iter().zip(&r.counts) {
            assert_eq!(c, pin.max(7 - pin) + 1);
        }
        let r = rich_pin_set(&Norm::Euclidean, &line(8).unwrap(), &|n| n * 10.0).unwrap();
        assert!(!r.hypothesis_holds);
    }

    #[test]
    fn certificates_on_line() {
        let p = line(8).unwrap();
        let c = tree_certificate(&Norm::Euclidean, &Hypergraph::path(2), 0, &p).unwrap();
        assert!(c.certificate >= 4);
        assert_eq!(c.certificate, c.levels[0].pinned as u128);
        assert_eq!(norm_census(&Norm::Euclidean, &Hypergraph::path(2), &p, DEFAULT_BUDGET).unwrap().distinct, 8);
        let star = Hypergraph::star(2);
        let c = tree_certificate(&Norm::Euclidean, &star, 0, &p).unwrap();
        assert_eq!(c.certificate, (c.levels[0].pinned as u128).pow(2));
        assert!(c.certificate <= norm_census(&Norm::Euclidean, &star, &p, DEFAULT_BUDGET).unwrap().distinct as u128);
        assert!(matches!(
            tree_certificate(&Norm::Euclidean, &Hypergraph::path(4), 0, &line(4).unwrap()),
            Err(Error::PointSetTooSmall { have: 4, need: 8 })
        ));
        assert!(matches!(tree_certificate(&Norm::Euclidean, &Hypergraph::cycle(3), 0, &p), Err(Error::NotATree)));
    }

    #[test]
    fn certificates_never_exceed_census() {
        let sets = [line(8).unwrap(), grid(3, 2).unwrap(), random_generic(2, 8, 1000, 3).unwrap()];
        for tree in [Hypergraph::path(3), Hypergraph::star(3), Hypergraph::path(4)] {
            for p in &sets {
                for norm in [Norm::Euclidean, Norm::Linf] {
                    for root in 0..tree.vertex_count() {
                        let c = tree_certificate(&norm, &tree, root, p).unwrap();
                        let exact = norm_census(&norm, &tree, p, DEFAULT_BUDGET).unwrap().distinct;
                        assert!(c.certificate <= exact as u128);
                    }
                }
            }
        }
    }
}
