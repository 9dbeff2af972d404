//! Run configuration (TOML).
//!
//! ```toml
//! [manifold]
//! id = "seven"          # a built-in fixture, or one of the tables below
//! k_h = -4.0            # hyperbolic curvature for `seven` and `h2`
//!
//! # [manifold.custom]
//! # name = "my-chart"
//! # coords = ["x", "y"]                 # alias: coord_names
//! # dim = 2                              # optional, checked against coords
//! # frame = [["1", "0"], ["0", "x"]]     # row a = components of e_a
//! # box = [[0.5, 2.0], [-1.0, 1.0]]
//! # labels = ["e1", "e2"]                # optional
//! # metric = [["1", "0"], ["0", "1/x^2"]] # optional, checked by `verify`
//! # expected_scalar = -2.0               # optional, checked by `verify`
//!
//! # [manifold.lie]
//! # name = "su2"
//! # dim = 3
//! # constants = [[3, 1, 2, -2.0], [2, 1, 3, 2.0], [1, 2, 3, -2.0]]  # c^k_{ij}, 1-based
//!
//! [split]
//! r = 4                 # first r frame vectors span X, the rest are collapsed
//!
//! [sweep]
//! f_min = 0.5
//! f_max = 4.0
//! steps = 35            # intervals; steps + 1 values including both ends
//! # f_values = [0.5, 1.0, 2.0]
//!
//! [samples]
//! count = 100
//! seed = 7
//!
//! [engine]
//! mode = "ad"           # or "fd"
//! fd_step = 1e-5
//! nested_step = 1e-4
//!
//! [output]
//! format = "csv"        # or "json"
//! path = "out.csv"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::collapse::SplitSpec;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{ChartManifold, DerivativeEngine, DerivativeMode, Interval, Point};
use crate::structure::StructureTensor;
use crate::zoo::{self, Geometry, ZooEntry};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub manifold: ManifoldConfig,
    #[serde(default)]
    pub split: Option<SplitConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub samples: SamplesConfig,
    #[serde(default)]
    pub engine: EngineConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(skip)]
    csv_override: Option<PathBuf>,
    #[serde(skip)]
    json_override: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldConfig {
    pub id: Option<String>,
    pub k_h: Option<f64>,
    pub custom: Option<CustomChart>,
    pub lie: Option<CustomLie>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomChart {
    pub name: String,
    pub dim: Option<usize>,
    #[serde(alias = "coord_names")]
    pub coords: Vec<String>,
    pub frame: Vec<Vec<String>>,
    #[serde(rename = "box")]
    pub sample_box: Vec<[f64; 2]>,
    pub labels: Option<Vec<String>>,
    pub metric: Option<Vec<Vec<String>>>,
    pub expected_scalar: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomLie {
    pub name: String,
    pub dim: usize,
    /// `[k, i, j, value]` with 1-based indices.
    pub constants: Vec<(usize, usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub f_values: Option<Vec<f64>>,
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplesConfig {
    pub count: usize,
    pub seed: u64,
}

impl Default for SamplesConfig {
    fn default() -> Self {
        Self { count: 100, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    pub mode: DerivativeMode,
    pub fd_step: f64,
    pub nested_step: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        let d = DerivativeEngine::default();
        Self {
            mode: d.mode,
            fd_step: d.fd_step,
            nested_step: d.nested_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<OutputFormat>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub engine: Option<DerivativeMode>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
    pub steps: Option<usize>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.points {
            self.samples.count = n;
        }
        if let Some(s) = o.seed {
            self.samples.seed = s;
        }
        if let Some(m) = o.engine {
            self.engine.mode = m;
        }
        if o.csv.is_some() {
            self.csv_override = o.csv.clone();
        }
        if o.json.is_some() {
            self.json_override = o.json.clone();
        }
        if o.f_min.is_some() || o.f_max.is_some() || o.steps.is_some() {
            let sweep = self.sweep.get_or_insert_with(SweepConfig::default);
            sweep.f_values = None;
            sweep.f_min = o.f_min.or(sweep.f_min);
            sweep.f_max = o.f_max.or(sweep.f_max);
            sweep.steps = o.steps.or(sweep.steps);
        }
    }

    /// Validates the whole document and builds everything a command needs.
    pub fn resolve(&self) -> Result<Resolved> {
        let (entry, declared_metric, expected_scalar) = self.manifold.resolve()?;
        let n = entry.dim();
        let split = match self.split {
            Some(s) => {
                if s.r == 0 || s.r >= n {
                    return Err(Error::Config(format!(
                        "split.r = {} must satisfy 1 <= r < {n}",
                        s.r
                    )));
                }
                Some(SplitSpec::with_rank(n, s.r)?)
            }
            None => entry.default_split,
        };
        let f_values = self.sweep.as_ref().map(SweepConfig::values).transpose()?;
        if self.samples.count == 0 {
            return Err(Error::Config("samples.count must be at least 1".into()));
        }
        let engine = DerivativeEngine::new(self.engine.mode, self.engine.fd_step, self.engine.nested_step)
            .map_err(|e| Error::Config(e.to_string()))?;
        let (mut csv, mut json) = match (self.output.format, &self.output.path) {
            (None, None) => (None, None),
            (Some(OutputFormat::Csv), Some(p)) => (Some(p.clone()), None),
            (Some(OutputFormat::Json), Some(p)) => (None, Some(p.clone())),
            _ => {
                return Err(Error::Config("output needs both `format` and `path`".into()));
            }
        };
        if self.csv_override.is_some() {
            csv = self.csv_override.clone();
        }
        if self.json_override.is_some() {
            json = self.json_override.clone();
        }
        let samples = entry.sample_points(self.samples.count, self.samples.seed)?;
        Ok(Resolved {
            entry,
            split,
            engine,
            samples,
            seed: self.samples.seed,
            f_values,
            csv,
            json,
            declared_metric,
            expected_scalar,
        })
    }
}

/// Entry, declared metric and declared scalar curvature.
type ResolvedManifold = (ZooEntry, Option<Vec<Vec<Expr>>>, Option<f64>);

impl ManifoldConfig {
    fn resolve(&self) -> Result<ResolvedManifold> {
        let chosen = [self.id.is_some(), self.custom.is_some(), self.lie.is_some()]
            .iter()
            .filter(|b| **b)
            .count();
        if chosen != 1 {
            return Err(Error::Config(
                "manifold needs exactly one of `id`, `[manifold.custom]`, `[manifold.lie]`".into(),
            ));
        }
        if let Some(id) = &self.id {
            let entry = zoo::lookup(id, self.k_h).map_err(|e| Error::Config(e.to_string()))?;
            let expected = entry.expected("S").map(|e| e.value);
            return Ok((entry, None, expected));
        }
        if self.k_h.is_some() {
            return Err(Error::Config("k_h applies only to built-in fixtures".into()));
        }
        if let Some(c) = &self.custom {
            return c.resolve();
        }
        let lie = self.lie.as_ref().expect("one source chosen");
        let mut entries = Vec::with_capacity(lie.constants.len());
        for &(k, i, j, v) in &lie.constants {
            if k == 0 || i == 0 || j == 0 {
                return Err(Error::Config("Lie constant indices are 1-based".into()));
            }
            entries.push((k - 1, i - 1, j - 1, v));
        }
        let c = StructureTensor::from_entries(lie.dim, &entries)
            .map_err(|e| Error::Config(e.to_string()))?;
        let entry = zoo::lie_group(c, &lie.name)?;
        Ok((entry, None, None))
    }
}

impl CustomChart {
    fn resolve(&self) -> Result<ResolvedManifold> {
        let cfg = |e: Error| Error::Config(format!("custom chart `{}`: {e}", self.name));
        if let Some(d) = self.dim {
            if d != self.coords.len() {
                return Err(cfg(Error::Dimension {
                    expected: d,
                    got: self.coords.len(),
                }));
            }
        }
        let coords: Vec<&str> = self.coords.iter().map(String::as_str).collect();
        let bx = self
            .sample_box
            .iter()
            .map(|[lo, hi]| Interval::new(*lo, *hi))
            .collect::<Result<Vec<_>>>()
            .map_err(cfg)?;
        let mut m = ChartManifold::parse(&self.name, &coords, &self.frame, bx).map_err(cfg)?;
        if let Some(labels) = &self.labels {
            m = m.with_labels(labels.clone()).map_err(cfg)?;
        }
        let metric = match &self.metric {
            None => None,
            Some(rows) => {
                if rows.len() != m.dim() || rows.iter().any(|r| r.len() != m.dim()) {
                    return Err(cfg(Error::InvalidArgument(format!(
                        "metric must be {0}x{0}",
                        m.dim()
                    ))));
                }
                Some(
                    rows.iter()
                        .map(|r| r.iter().map(|s| m.parse_expr(s)).collect())
                        .collect::<Result<Vec<Vec<Expr>>>>()
                        .map_err(cfg)?,
                )
            }
        };
        // Fail before any computation if the frame is not usable at the box centre.
        m.frame_matrix(&m.center()).map_err(cfg)?;
        let entry = ZooEntry {
            id: self.name.clone(),
            geometry: Geometry::Chart(m),
            default_split: None,
            expected: Vec::new(),
        };
        Ok((entry, metric, self.expected_scalar))
    }
}

impl SweepConfig {
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match (&self.f_values, self.f_min, self.f_max, self.steps) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(lo), Some(hi), steps) => {
                let steps = steps.unwrap_or(1);
                if steps == 0 {
                    return Err(Error::Config("sweep.steps must be at least 1".into()));
                }
                if lo.is_nan() || hi.is_nan() || hi < lo {
                    return Err(Error::Config(format!("sweep needs f_min <= f_max, got {lo} > {hi}")));
                }
                (0..=steps)
                    .map(|k| lo + (hi - lo) * k as f64 / steps as f64)
                    .collect()
            }
            _ => {
                return Err(Error::Config(
                    "sweep needs either `f_values` or both `f_min` and `f_max`".into(),
                ))
            }
        };
        if values.is_empty() {
            return Err(Error::Config("sweep has no f values".into()));
        }
        if let Some(bad) = values.iter().find(|f| !(**f > 0.0 && f.is_finite())) {
            return Err(Error::Config(format!("f values must be positive, got {bad}")));
        }
        Ok(values)
    }
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub entry: ZooEntry,
    pub split: Option<SplitSpec>,
    pub engine: DerivativeEngine,
    pub samples: Vec<Point>,
    pub seed: u64,
    pub f_values: Option<Vec<f64>>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub declared_metric: Option<Vec<Vec<Expr>>>,
    pub expected_scalar: Option<f64>,
}

impl Resolved {
    pub fn require_split(&self) -> Result<SplitSpec> {
        self.split.ok_or_else(|| {
            Error::Config(format!(
                "`{}` has no default split; add [split] r = ...",
                self.entry.id
            ))
        })
    }

    pub fn require_sweep(&self) -> Result<&[f64]> {
        self.f_values
            .as_deref()
            .ok_or_else(|| Error::Config("collapse needs [sweep] or --f-min/--f-max".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_and_defaults() {
        let c = RunConfig::from_toml("[manifold]\nid = \"s3\"\n").unwrap();
        assert_eq!(c.samples, SamplesConfig::default());
        let r = c.resolve().unwrap();
        assert_eq!(r.split, Some(SplitSpec::with_rank(3, 1).unwrap()));
        assert_eq!(r.samples.len(), 100);
        assert!(r.require_sweep().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = RunConfig::from_toml("[manifold]\nid = \"s3\"\n[split]\nrank = 1\n").unwrap_err();
        assert!(matches!(e, Error::Config(_)));
        assert!(RunConfig::from_toml("[manifold]\nid = \"s3\"\n[extra]\n").is_err());
    }

    #[test]
    fn sweep_grid_and_overrides() {
        let mut c = RunConfig::from_toml(
            "[manifold]\nid = \"s3\"\n[sweep]\nf_min = 0.5\nf_max = 4.0\nsteps = 7\n",
        )
        .unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.f_values.unwrap(), vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
        c.apply(&Overrides {
            f_max: Some(1.0),
            steps: Some(1),
            points: Some(3),
            ..Overrides::default()
        });
        let r = c.resolve().unwrap();
        assert_eq!(r.f_values.unwrap(), vec![0.5, 1.0]);
        assert_eq!(r.samples.len(), 3);
    }

    #[test]
    fn invalid_values() {
        for doc in [
            "[manifold]\nid = \"s3\"\n[split]\nr = 3\n",
            "[manifold]\nid = \"s3\"\n[sweep]\nf_values = [1.0, -2.0]\n",
            "[manifold]\nid = \"s3\"\n[sweep]\nf_min = 1.0\nf_max = 2.0\nsteps = 0\n",
            "[manifold]\nid = \"nope\"\n",
            "[manifold]\n",
            "[manifold]\nid = \"s3\"\n[samples]\ncount = 0\n",
            "[manifold]\nid = \"s3\"\n[engine]\nmode = \"ad\"\nfd_step = 1.0\n",
            "[manifold.custom]\nname = \"c\"\ncoords = [\"x\"]\nframe = [[\"1 +\"]]\nbox = [[0.0, 1.0]]\n",
            "[manifold.lie]\nname = \"l\"\ndim = 3\nconstants = [[0, 1, 2, 1.0]]\n",
            "[manifold]\nid = \"s3\"\n[output]\nformat = \"csv\"\n",
            "[manifold]\nid = \"s3\"\n[output]\nformat = \"xml\"\npath = \"a\"\n",
        ] {
            let r = RunConfig::from_toml(doc).and_then(|c| c.resolve());
            assert!(r.is_err(), "{doc}");
        }
    }

    #[test]
    fn custom_and_lie() {
        let doc = r#"
[manifold.custom]
name = "plane"
coords = ["x", "y"]
frame = [["1", "0"], ["0", "1"]]
box = [[-1.0, 1.0], [-1.0, 1.0]]
metric = [["1", "0"], ["0", "1"]]
expected_scalar = 0.0
[split]
r = 1
"#;
        let r = RunConfig::from_toml(doc).unwrap().resolve().unwrap();
        assert_eq!(r.entry.id, "plane");
        assert!(r.declared_metric.is_some());
        let doc = "[manifold.lie]\nname = \"su2\"\ndim = 3\nconstants = [[3, 1, 2, -2.0], [2, 1, 3, 2.0], [1, 2, 3, -2.0]]\n";
        let r = RunConfig::from_toml(doc).unwrap().resolve().unwrap();
        assert_eq!(r.entry.lie().unwrap().constants, zoo::su2_constants());
        assert_eq!(r.samples.len(), 1);
    }
}
