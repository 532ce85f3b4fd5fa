use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;

use rigidlab::census::{self, CensusOptions, Filter, RealisationFilter, RichEquivalence};
use rigidlab::colour_pin;
use rigidlab::group::Group;
use rigidlab::{Hypergraph, Metric};

use crate::report::{Format, Report};
use crate::{census_report, load_graph, load_points, parse_norm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    #[default]
    Census,
    Energy,
    Rich,
    Pin,
}

fn default_metric() -> String {
    "euclid_sq".into()
}

fn default_dim() -> usize {
    2
}

fn default_budget() -> u128 {
    census::DEFAULT_BUDGET
}

fn default_t() -> usize {
    2
}

/// One experiment. Paths are relative to the config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub pipeline: Pipeline,
    #[serde(default = "default_metric")]
    pub metric: String,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    #[serde(default)]
    pub graph_spec: Option<String>,
    /// Point generator; `{seed}` is replaced by `seed`.
    pub points: String,
    #[serde(default)]
    pub filter: Filter,
    #[serde(default = "default_budget")]
    pub budget: u128,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
    /// Group id for energy and rich; defaults to the metric's isometry group.
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub vertices: Option<usize>,
    #[serde(default = "default_t")]
    pub t: usize,
    #[serde(default)]
    pub equivalence: RichEquivalence,
    #[serde(default)]
    pub norm: Option<String>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("config {}", path.display()))?;
        if cfg.budget == 0 {
            bail!("config {}: budget must be positive", path.display());
        }
        Ok(cfg)
    }

    fn points_spec(&self) -> Result<String> {
        match (self.points.contains("{seed}"), self.seed) {
            (true, Some(s)) => Ok(self.points.replace("{seed}", &s.to_string())),
            (true, None) => bail!("points `{}` uses {{seed}} but the config has no seed", self.points),
            (false, _) => Ok(self.points.clone()),
        }
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn execute(cfg: &ExperimentConfig, base: &Path) -> Result<Report> {
    let points = load_points(None, Some(&cfg.points_spec()?))?;
    let metric = || -> Result<Metric> { Ok(Metric::parse(&cfg.metric, cfg.dim)?) };
    let graph = || -> Result<Hypergraph> {
        let file = cfg.graph.as_deref().map(|g| resolve(base, g));
        load_graph(file.as_deref(), cfg.graph_spec.as_deref())
    };
    let report = match cfg.pipeline {
        Pipeline::Census => {
            let opts = CensusOptions { filter: cfg.filter, budget: cfg.budget, ..CensusOptions::default() };
            census_report(census::census(&metric()?, &graph()?, &points, &opts)?)?
        }
        Pipeline::Energy => {
            let m = metric()?;
            let group = match &cfg.group {
                Some(id) => Group::parse(id, m.d())?,
                None => Group::of_metric(&m),
            };
            let g = match (&cfg.graph, &cfg.graph_spec) {
                (None, None) => None,
                _ => Some(graph()?),
            };
            let vertices = match (cfg.vertices, &g) {
                (Some(v), _) => v,
                (None, Some(g)) => g.vertex_count(),
                (None, None) => bail!("energy needs `vertices` or a graph"),
            };
            let g = g.unwrap_or_else(|| Hypergraph::complete_with_repetition(vertices, m.k()));
            let rf = RealisationFilter::new(cfg.filter, &points, Some((&m, &g)))?;
            Report::new(census::energy_filtered(&group, vertices, &points, &rf, cfg.budget)?)?
        }
        Pipeline::Rich => {
            let group = Group::parse(cfg.group.as_deref().unwrap_or("SE2"), 2)?;
            Report::new(census::rich_transformations(&group, &points, cfg.t, cfg.equivalence)?)?
        }
        Pipeline::Pin => {
            let norm = parse_norm(&resolve_norm(cfg.norm.as_deref().unwrap_or("euclid"), base))?;
            let counts = (0..points.len())
                .map(|x| colour_pin::pinned_distances(&norm, &points, x))
                .collect::<rigidlab::Result<Vec<_>>>()?;
            Report::new(json!({ "norm": norm.to_string(), "pinned": counts, "max": counts.iter().max() }))?
        }
    };
    let mut result = report.result;
    if let serde_json::Value::Object(fields) = &mut result {
        fields.insert("config".into(), serde_json::to_value(cfg)?);
    }
    let mut out = Report { result, ..report };
    if let Some(s) = cfg.seed {
        out = out.seed(s);
    }
    Ok(out)
}

fn resolve_norm(id: &str, base: &Path) -> String {
    match id.strip_prefix("poly:") {
        Some(f) => format!("poly:{}", resolve(base, Path::new(f)).display()),
        None => id.to_string(),
    }
}

/// Runs the config at `path` and writes its report to the configured output,
/// falling back to `output` and then stdout.
pub fn run_experiment(path: &Path, command: &str, format: Format, output: Option<&Path>) -> Result<()> {
    let cfg = ExperimentConfig::from_path(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let report = execute(&cfg, base)?;
    let target = cfg.output.as_deref().map(|o| resolve(base, o));
    report.emit(command, cfg.format.unwrap_or(format), target.as_deref().or(output))
}
