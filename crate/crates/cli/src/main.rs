mod config;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rigidlab::affine::{AffineJson, AffineMap};
use rigidlab::census::{self, CensusOptions, Curve, Filter, RealisationFilter, RichEquivalence};
use rigidlab::colour_pin::{self, ColourBoundFunctions, Norm, Polygon};
use rigidlab::experiment::{fit_exponent, graph_from_spec, points_from_spec};
use rigidlab::group::Group;
use rigidlab::hypergraph::{find_nac_colouring, EdgeColouring, Hypergraph};
use rigidlab::pointset::{self, PointSet};
use rigidlab::rational::parse_q;
use rigidlab::rigidity::{self, Realisation};
use rigidlab::{Error, Metric};

use report::{command_line, Format, Report};

/// Exit status for a reported hypothesis failure.
const EXIT_HYPOTHESIS: u8 = 4;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "rigidlab", version, about = "Rigidity tests and distinct-value censuses for polynomial measurement maps")]
struct Cli {
    /// Worker threads; never changes any reported number.
    #[arg(long, global = true, env = "RIGIDLAB_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MetricArgs {
    /// Catalogue id: euclid_sq, pseudo11, lp:<p>, dot, skew, sym_tensor:<k>.
    #[arg(long, default_value = "euclid_sq")]
    metric: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

impl MetricArgs {
    fn metric(&self) -> Result<Metric> {
        Ok(Metric::parse(&self.metric, self.dim)?)
    }
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Graph JSON file.
    #[arg(long, conflicts_with = "graph_spec")]
    graph: Option<PathBuf>,
    /// Graph family such as complete:3, path:4, loops:3, rep:2:3.
    #[arg(long)]
    graph_spec: Option<String>,
}

impl GraphArgs {
    fn load(&self) -> Result<Hypergraph> {
        load_graph(self.graph.as_deref(), self.graph_spec.as_deref())
    }
}

#[derive(Args, Clone)]
struct PointArgs {
    /// Point set JSON file.
    #[arg(long, conflicts_with = "points_spec")]
    points: Option<PathBuf>,
    /// Generator such as grid:3:2, line:8, circle-rat:12, random:2:8:1000:7.
    #[arg(long)]
    points_spec: Option<String>,
}

impl PointArgs {
    fn load(&self) -> Result<PointSet> {
        load_points(self.points.as_deref(), self.points_spec.as_deref())
    }
}

#[derive(Args, Clone)]
struct NormArgs {
    /// euclid, l1, lp:<p>, linf or poly:<file.json>.
    #[arg(long, default_value = "euclid")]
    norm: String,
}

impl NormArgs {
    fn norm(&self) -> Result<Norm> {
        parse_norm(&self.norm)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generic or fixed-realisation infinitesimal rigidity.
    Rigid {
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = rigidity::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Test this realisation (point set JSON, one point per vertex) instead of sampling.
        #[arg(long)]
        realisation: Option<PathBuf>,
    },
    /// Distinct measurement vectors over P^V.
    Census {
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value = "all")]
        filter: Filter,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
        /// Grid spacing for float keys.
        #[arg(long, default_value_t = census::DEFAULT_QUANTUM)]
        quantum: f64,
    },
    /// Ordered realisation pairs related by a group element.
    Energy {
        #[command(flatten)]
        metric: MetricArgs,
        /// E, SE2, pseudo, signed_perm, O, SL2; defaults to the metric's isometry group.
        #[arg(long, conflicts_with = "group_file")]
        group: Option<String>,
        /// Finite group: {"d":1,"elements":[{"a":[["-1"]],"b":["0"]},...]}.
        #[arg(long)]
        group_file: Option<PathBuf>,
        #[arg(long)]
        vertices: usize,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value = "all")]
        filter: Filter,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Classes of t-rich transformations.
    Rich {
        /// SE2, E or pseudo.
        #[arg(long, default_value = "SE2")]
        group: String,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, default_value = "partial_map")]
        equivalence: RichEquivalence,
    },
    /// Distinct Gram matrices of n columns from P.
    Gram {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Distinct symmetric order-k tensors of n columns from P.
    Tensor {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Generate a point set.
    Gen {
        #[command(subcommand)]
        generator: Generator,
    },
    /// Richest low-degree curve through the points.
    Audit {
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = pointset::DEFAULT_AUDIT_THRESHOLD)]
        threshold: f64,
        #[arg(long, default_value_t = pointset::DEFAULT_AUDIT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Pinned distance counts and the rich-pin set.
    Pin {
        #[command(flatten)]
        norm: NormArgs,
        #[command(flatten)]
        points: PointArgs,
        /// Report a single pin.
        #[arg(long)]
        pin: Option<usize>,
        /// Richness requirement H: linear:<c> for c n, or nlog2:<c> for c n / ln(n)^2.
        #[arg(long)]
        h: Option<String>,
    },
    /// Check the colour-class lemma on distance or random colourings.
    ColourLemma {
        /// log:<d> for f(m) = (d/2) m ln m, or power:<C>:<δ> for f(m) = C m^(1+δ).
        #[arg(long, default_value = "log:2")]
        bounds: String,
        #[command(flatten)]
        norm: NormArgs,
        #[command(flatten)]
        points: PointArgs,
        /// Colouring file: {"n":4,"colours":[0,1,...]}.
        #[arg(long)]
        colouring: Option<PathBuf>,
        /// Sample this many admissible random colourings of K_n instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        colours: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Lower-bound certificate for a tree from nested rich-pin sets.
    TreeCert {
        #[command(flatten)]
        norm: NormArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[command(flatten)]
        points: PointArgs,
        /// Also count |f(P^V)| by enumeration.
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Fit the exponent of count against |P|.
    Fit {
        /// CSV with columns size,count.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Census sweep: point generator with `{}` for the size parameter, e.g. grid:{}:2.
        #[arg(long, requires = "values")]
        sweep: Option<String>,
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Search for a NAC-colouring.
    Nac {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Injective census growth under a 0-extension.
    ZeroExt {
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        w: usize,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Compare a census on a curve with the curve lower bound.
    Curve {
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        points: PointArgs,
        /// x-axis or unit-circle.
        #[arg(long)]
        curve: Curve,
        #[arg(long, default_value_t = census::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Run an experiment described by a JSON config file.
    Run {
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum Generator {
    Grid {
        m: usize,
        #[arg(default_value_t = 2)]
        d: usize,
    },
    ScaledGrid {
        n: u64,
    },
    Line {
        n: usize,
    },
    Circle {
        n: usize,
    },
    CircleRat {
        n: usize,
    },
    /// Orbit of a point under an isometry of the metric.
    Orbit {
        #[command(flatten)]
        metric: MetricArgs,
        /// Affine map JSON: {"a":[["0","-1"],["1","0"]],"b":["0","0"]}.
        #[arg(long)]
        map: PathBuf,
        /// Comma-separated rational coordinates.
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long)]
        n: usize,
    },
    Random {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        bound: i64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// A hypothesis check failed; the report was still written.
#[derive(Debug)]
struct HypothesisFailure(String);

impl std::fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "hypothesis failure: {}", self.0)
    }
}

impl std::error::Error for HypothesisFailure {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn load_graph(file: Option<&Path>, spec: Option<&str>) -> Result<Hypergraph> {
    match (file, spec) {
        (Some(f), _) => Hypergraph::from_json_str(&read(f)?).with_context(|| format!("graph file {}", f.display())),
        (None, Some(s)) => Ok(graph_from_spec(s)?),
        (None, None) => bail!("a graph is required: pass --graph <file> or --graph-spec <family>"),
    }
}

pub(crate) fn load_points(file: Option<&Path>, spec: Option<&str>) -> Result<PointSet> {
    match (file, spec) {
        (Some(f), _) => PointSet::from_json_str(&read(f)?).with_context(|| format!("point file {}", f.display())),
        (None, Some(s)) => Ok(points_from_spec(s)?),
        (None, None) => bail!("points are required: pass --points <file> or --points-spec <generator>"),
    }
}

pub(crate) fn parse_norm(id: &str) -> Result<Norm> {
    match id.strip_prefix("poly:") {
        Some(file) => Ok(Norm::Polygon(
            Polygon::from_json_str(&read(Path::new(file))?).with_context(|| format!("polygon file {file}"))?,
        )),
        None => Ok(Norm::parse(id)?),
    }
}

fn parse_bounds(spec: &str) -> Result<ColourBoundFunctions> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["log", d] => Ok(ColourBoundFunctions::unit_distance_log(d.parse().context("bad d in --bounds")?)?),
        ["power", c, delta] => Ok(ColourBoundFunctions::power_law(
            c.parse().context("bad C in --bounds")?,
            delta.parse().context("bad δ in --bounds")?,
        )?),
        _ => bail!("--bounds must be log:<d> or power:<C>:<δ>, got `{spec}`"),
    }
}

fn parse_h(spec: &str) -> Result<Box<dyn Fn(f64) -> f64>> {
    let (kind, c) = spec.split_once(':').ok_or_else(|| anyhow!("--h must be linear:<c> or nlog2:<c>"))?;
    let c: f64 = c.parse().context("bad constant in --h")?;
    match kind {
        "linear" => Ok(Box::new(move |n| c * n)),
        "nlog2" => Ok(Box::new(move |n: f64| c * n / n.ln().powi(2))),
        _ => bail!("--h must be linear:<c> or nlog2:<c>, got `{spec}`"),
    }
}

fn parse_group(id: Option<&str>, file: Option<&Path>, m: &Metric) -> Result<Group> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct FiniteJson {
        d: usize,
        elements: Vec<AffineJson>,
    }
    match (id, file) {
        (_, Some(f)) => {
            let g: FiniteJson = serde_json::from_str(&read(f)?).with_context(|| format!("group file {}", f.display()))?;
            Ok(Group::finite_from_json(g.d, g.elements)?)
        }
        (Some(id), None) => Ok(Group::parse(id, m.d())?),
        (None, None) => Ok(Group::of_metric(m)),
    }
}

fn histogram_rows(r: &census::CensusReport) -> Vec<Vec<String>> {
    r.fibre_histogram().into_iter().map(|(s, c)| vec![s.to_string(), c.to_string()]).collect()
}

pub(crate) fn census_report(r: census::CensusReport) -> Result<Report> {
    let rows = histogram_rows(&r);
    Ok(Report::new(&r)?.table(&["fibre_size", "fibres"], rows))
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Rigid { metric, graph, trials, seed, realisation } => {
            let m = metric.metric()?;
            let g = graph.load()?;
            match realisation {
                Some(f) => {
                    let p = PointSet::from_json_str(&read(f)?)?;
                    let pts = p.exact().ok_or_else(|| anyhow!("realisation must have exact coordinates"))?;
                    let r = Realisation::new(p.d(), pts.to_vec())?;
                    let verdict = rigidity::is_infinitesimally_rigid(&m, &g, &r)?;
                    let regular = rigidity::is_g_regular(&m, &g, &r)?;
                    Report::new(json!({ "metric": m.to_string(), "verdict": verdict, "regular": regular }))
                }
                None => {
                    let r = rigidity::is_g_rigid(&m, &g, *trials, *seed)?;
                    Ok(Report::new(json!({ "metric": m.to_string(), "generic": r }))?.seed(*seed))
                }
            }
        }
        Command::Census { metric, graph, points, filter, budget, quantum } => {
            let opts = CensusOptions { filter: *filter, budget: *budget, quantum: *quantum };
            census_report(census::census(&metric.metric()?, &graph.load()?, &points.load()?, &opts)?)
        }
        Command::Energy { metric, group, group_file, vertices, points, filter, budget } => {
            let m = metric.metric()?;
            let grp = parse_group(group.as_deref(), group_file.as_deref(), &m)?;
            let p = points.load()?;
            let r = if *filter == Filter::All {
                census::energy(&grp, *vertices, &p, *budget)?
            } else {
                let g = Hypergraph::complete_with_repetition(*vertices, m.k());
                let rf = RealisationFilter::new(*filter, &p, Some((&m, &g)))?;
                census::energy_filtered(&grp, *vertices, &p, &rf, *budget)?
            };
            Report::new(r)
        }
        Command::Rich { group, points, t, equivalence } => {
            let grp = Group::parse(group, 2)?;
            let r = census::rich_transformations(&grp, &points.load()?, *t, *equivalence)?;
            let rows = r.counts_by_t.iter().map(|(t, c)| vec![t.to_string(), c.to_string()]).collect();
            Ok(Report::new(&r)?.table(&["t", "classes"], rows))
        }
        Command::Gram { points, n, budget } => census_report(census::gram_census(&points.load()?, *n, *budget)?),
        Command::Tensor { points, n, k, budget } => census_report(census::tensor_census(&points.load()?, *n, *k, *budget)?),
        Command::Gen { generator } => {
            let (p, seed) = match generator {
                Generator::Grid { m, d } => (pointset::grid(*m, *d)?, None),
                Generator::ScaledGrid { n } => (pointset::scaled_grid(*n)?, None),
                Generator::Line { n } => (pointset::line(*n)?, None),
                Generator::Circle { n } => (pointset::circle(*n)?, None),
                Generator::CircleRat { n } => (pointset::circle_rat(*n)?, None),
                Generator::Orbit { metric, map, start, n } => {
                    let m = metric.metric()?;
                    let j: AffineJson = serde_json::from_str(&read(map)?).with_context(|| format!("map file {}", map.display()))?;
                    let theta = AffineMap::try_from(j)?;
                    let x = start.split(',').map(parse_q).collect::<rigidlab::Result<Vec<_>>>()?;
                    (pointset::orbit_tight_set(&m, &theta, &x, *n)?, None)
                }
                Generator::Random { d, n, bound, seed } => (pointset::random_generic(*d, *n, *bound, *seed)?, Some(*seed)),
            };
            let rows = p.floats().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            let header: Vec<String> = (0..p.d()).map(|i| format!("x{i}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut report = Report::new(p.to_json())?.table(&header, rows);
            if let Some(s) = seed {
                report = report.seed(s);
            }
            Ok(report)
        }
        Command::Audit { points, degree, threshold, budget, seed } => {
            let r = pointset::curve_richness_audit(&points.load()?, *degree, *threshold, *budget, *seed)?;
            let failed = r.exceeds_threshold;
            let report = Report::new(&r)?.seed(*seed);
            finish(report, failed, "a low-degree curve holds more than the allowed share of the points", cli)
        }
        Command::Pin { norm, points, pin, h } => {
            let nm = norm.norm()?;
            let p = points.load()?;
            if let Some(x) = pin {
                return Report::new(json!({ "norm": nm.to_string(), "pin": x, "pinned": colour_pin::pinned_distances(&nm, &p, *x)? }));
            }
            let counts: Vec<usize> = (0..p.len()).map(|x| colour_pin::pinned_distances(&nm, &p, x)).collect::<rigidlab::Result<_>>()?;
            let rows: Vec<Vec<String>> = counts.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect();
            match h {
                Some(spec) => {
                    let f = parse_h(spec)?;
                    let r = colour_pin::rich_pin_set(&nm, &p, &*f)?;
                    let failed = !r.hypothesis_holds;
                    let report = Report::new(json!({ "pinned": counts, "rich_pins": r }))?.table(&["pin", "pinned"], rows);
                    finish(report, failed, "an extracted pin has fewer distances than H(|P|/2)", cli)
                }
                None => Ok(Report::new(json!({ "norm": nm.to_string(), "pinned": counts, "max": counts.iter().max() }))?
                    .table(&["pin", "pinned"], rows)),
            }
        }
        Command::ColourLemma { bounds, norm, points, colouring, random, n, colours, seed } => {
            let b = parse_bounds(bounds)?;
            let (cols, seeded) = if let Some(count) = random {
                (colour_pin::sample_admissible_colourings(*n, *colours, &b, *count, *seed)?, true)
            } else if let Some(f) = colouring {
                #[derive(serde::Deserialize)]
                #[serde(deny_unknown_fields)]
                struct ColouringJson {
                    n: usize,
                    colours: Vec<usize>,
                }
                let c: ColouringJson = serde_json::from_str(&read(f)?).with_context(|| format!("colouring file {}", f.display()))?;
                (vec![EdgeColouring::new(c.n, &c.colours)?], false)
            } else {
                (vec![colour_pin::distance_colouring(&norm.norm()?, &points.load()?)?], false)
            };
            let reports = cols.iter().map(|c| colour_pin::check_colour_lemma(c, &b)).collect::<rigidlab::Result<Vec<_>>>()?;
            let hypothesis_failures = reports.iter().filter(|r| !r.hypothesis_holds).count();
            let counterexamples = reports.iter().filter(|r| r.hypothesis_holds && !r.conclusion_holds).count();
            let rows = reports
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![i.to_string(), r.hypothesis_holds.to_string(), r.bound.to_string(), r.max_colour_degree.to_string(), r.conclusion_holds.to_string()]
                })
                .collect();
            let mut report = Report::new(json!({
                "colourings": reports.len(),
                "hypothesis_failures": hypothesis_failures,
                "counterexamples": counterexamples,
                "reports": reports,
            }))?
            .table(&["colouring", "hypothesis_holds", "bound", "max_colour_degree", "conclusion_holds"], rows);
            if seeded {
                report = report.seed(*seed);
            }
            finish(report, hypothesis_failures + counterexamples > 0, "a colouring breaks the monochromatic edge bound or the conclusion", cli)
        }
        Command::TreeCert { norm, graph, root, points, compare, budget } => {
            let nm = norm.norm()?;
            let g = graph.load()?;
            let p = points.load()?;
            let cert = colour_pin::tree_certificate(&nm, &g, *root, &p)?;
            if *compare {
                let exact = colour_pin::norm_census(&nm, &g, &p, *budget)?.distinct;
                let valid = cert.certificate <= exact as u128;
                let report = Report::new(json!({ "certificate": cert, "census": exact, "valid": valid }))?;
                finish(report, !valid, "the certificate exceeds the enumerated count", cli)
            } else {
                Report::new(cert)
            }
        }
        Command::Fit { input, sweep, values, metric, graph, budget } => {
            let series: Vec<(f64, f64)> = match (input, sweep) {
                (Some(f), _) => {
                    let mut rdr = csv::Reader::from_path(f).with_context(|| format!("reading {}", f.display()))?;
                    rdr.records()
                        .map(|rec| {
                            let rec = rec?;
                            let size: f64 = rec.get(0).ok_or_else(|| anyhow!("missing size column"))?.trim().parse()?;
                            let count: f64 = rec.get(1).ok_or_else(|| anyhow!("missing count column"))?.trim().parse()?;
                            Ok((size, count))
                        })
                        .collect::<Result<_>>()?
                }
                (None, Some(pattern)) => {
                    let m = metric.metric()?;
                    let g = graph.load()?;
                    let opts = CensusOptions { budget: *budget, ..CensusOptions::default() };
                    values
                        .iter()
                        .map(|v| {
                            let p = points_from_spec(&pattern.replace("{}", v))?;
                            let r = census::census(&m, &g, &p, &opts)?;
                            Ok((p.len() as f64, r.distinct as f64))
                        })
                        .collect::<Result<_>>()?
                }
                (None, None) => bail!("pass --input <csv> or --sweep <generator> --values ..."),
            };
            let fit = fit_exponent(&series)?;
            let rows = series.iter().map(|(s, c)| vec![s.to_string(), c.to_string()]).collect();
            Ok(Report::new(&fit)?.table(&["size", "count"], rows))
        }
        Command::Nac { graph } => {
            let g = graph.load()?;
            let found = find_nac_colouring(&g)?;
            Report::new(json!({ "exists": found.is_some(), "colouring": found }))
        }
        Command::ZeroExt { metric, graph, u, w, points, budget } => {
            let r = census::zero_extension_growth(&metric.metric()?, &graph.load()?, *u, *w, &points.load()?, *budget)?;
            let failed = !r.holds;
            finish(Report::new(&r)?, failed, "the extended census is below the doubling bound", cli)
        }
        Command::Curve { metric, graph, points, curve, budget } => {
            let r = census::curve_bound_check(&metric.metric()?, &graph.load()?, &points.load()?, *curve, *budget)?;
            let failed = !r.holds;
            finish(Report::new(&r)?, failed, "the census is below the curve bound", cli)
        }
        Command::Run { .. } => unreachable!("handled in main"),
    }
}

/// Emits the report now and turns a failed check into a hypothesis failure.
fn finish(report: Report, failed: bool, what: &str, cli: &Cli) -> Result<Report> {
    if failed {
        report.emit(&command_line(), cli.format, cli.output.as_deref())?;
        return Err(HypothesisFailure(what.to_string()).into());
    }
    Ok(report)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<HypothesisFailure>().is_some() {
        return EXIT_HYPOTHESIS;
    }
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::Run { config } => config::run_experiment(config, &command_line(), cli.format, cli.output.as_deref()),
        _ => run(&cli).and_then(|r| r.emit(&command_line(), cli.format, cli.output.as_deref())),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
