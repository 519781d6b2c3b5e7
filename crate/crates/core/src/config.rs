//! Experiment configuration: a flat TOML document with optional `[grid]` and
//! `[radii]` sections.
//!
//! ```toml
//! experiment = "sce"
//! n_list = [500, 1000, 2000]
//! d = 3
//! ell = [1, 2]
//! samples = 40
//! seed = 11
//!
//! [grid]
//! re = [2.0]
//! im = [1.0]
//! scale = "n23"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{Statistic, ZRecipe, ZScale};
use crate::graph::{Parameters, DEFAULT_ELL, DEFAULT_ETA_EXPONENT, DEFAULT_RADIUS_EXPONENT};
use crate::sampler::{Model, SamplerConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Empirical spectral distribution against Kesten–McKay.
    Esd,
    /// Self-consistent residual scan.
    Sce,
    /// Loop-equation probe near the spectral edge.
    Loop,
    /// Extreme-eigenvalue statistics.
    Edge,
    /// Exchangeable-pair test of the local resampling.
    Exch,
    /// Edge-averaged minor identities.
    Avg,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Esd => "esd",
            ExperimentKind::Sce => "sce",
            ExperimentKind::Loop => "loop",
            ExperimentKind::Edge => "edge",
            ExperimentKind::Exch => "exch",
            ExperimentKind::Avg => "avg",
        }
    }

    fn uses_grid(self) -> bool {
        matches!(self, ExperimentKind::Sce | ExperimentKind::Loop | ExperimentKind::Avg)
    }

    fn default_grid(self) -> GridConfig {
        match self {
            ExperimentKind::Avg => GridConfig { re: vec![2.0], im: vec![0.05], scale: ZScale::Fixed },
            ExperimentKind::Sce => GridConfig { re: vec![2.0], im: vec![1.0], scale: ZScale::N23 },
            _ => GridConfig { re: vec![2.0], im: vec![1.0], scale: ZScale::Edge },
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "esd" => ExperimentKind::Esd,
            "sce" => ExperimentKind::Sce,
            "loop" => ExperimentKind::Loop,
            "edge" => ExperimentKind::Edge,
            "exch" => ExperimentKind::Exch,
            "avg" => ExperimentKind::Avg,
            _ => return Err(Error::Validation(vec![format!("unknown experiment {s:?}")])),
        })
    }
}

/// A scalar or a list in the document; always a list after parsing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Vec<usize>, D::Error> {
    Ok(match OneOrMany::deserialize(de)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(default = "default_scale")]
    pub scale: ZScale,
}

fn default_scale() -> ZScale {
    ZScale::Fixed
}

impl GridConfig {
    /// Pairs `re[k] + i im[k]`; a length-one list is broadcast.
    pub fn recipes(&self) -> Vec<ZRecipe> {
        let len = self.re.len().max(self.im.len());
        let pick = |v: &[f64], k: usize| if v.len() == 1 { v[0] } else { v[k] };
        (0..len)
            .map(|k| ZRecipe { re: pick(&self.re, k), im: pick(&self.im, k), scale: self.scale })
            .collect()
    }
}

/// Overrides for the derived radii.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiiConfig {
    /// Tree radius `R`.
    pub tree: Option<usize>,
    /// Isolation radius of the switching admissibility test.
    pub isolation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(deserialize_with = "one_or_many")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_ell", deserialize_with = "one_or_many")]
    pub ell: Vec<usize>,
    #[serde(default)]
    pub model: Model,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_radius_exponent")]
    pub radius_exponent: f64,
    #[serde(default = "default_eta_exponent")]
    pub eta_exponent: f64,
    #[serde(default)]
    pub slack_exponent: f64,
    #[serde(default = "default_statistic")]
    pub statistic: Statistic,
    /// Failed checks make the run exit nonzero.
    #[serde(default)]
    pub acceptance: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub radii: RadiiConfig,
}

fn default_d() -> usize {
    3
}
fn default_ell() -> Vec<usize> {
    vec![DEFAULT_ELL]
}
fn default_samples() -> usize {
    10
}
fn default_radius_exponent() -> f64 {
    DEFAULT_RADIUS_EXPONENT
}
fn default_eta_exponent() -> f64 {
    DEFAULT_ETA_EXPONENT
}
fn default_statistic() -> Statistic {
    Statistic::Lambda2
}

impl ExperimentConfig {
    /// A configuration with every optional key at its default.
    pub fn new(experiment: ExperimentKind, n_list: Vec<usize>) -> Self {
        Self {
            experiment,
            n_list,
            d: default_d(),
            ell: default_ell(),
            model: Model::default(),
            seed: 0,
            samples: default_samples(),
            radius_exponent: DEFAULT_RADIUS_EXPONENT,
            eta_exponent: DEFAULT_ETA_EXPONENT,
            slack_exponent: 0.0,
            statistic: Statistic::Lambda2,
            acceptance: false,
            output: None,
            grid: None,
            radii: RadiiConfig::default(),
        }
    }

    /// The z-grid in effect (explicit or the experiment's default).
    pub fn grid_recipes(&self) -> Vec<ZRecipe> {
        self.grid
            .clone()
            .unwrap_or_else(|| self.experiment.default_grid())
            .recipes()
    }

    pub fn sampler(&self, n: usize) -> SamplerConfig {
        SamplerConfig::new(n, self.d, self.model, self.seed)
    }

    /// Scale parameters at size `n` for resampling length `ell`.
    pub fn parameters(&self, n: usize, ell: usize) -> Parameters {
        let mut p = Parameters::with_radius_exponent(n, self.d, self.radius_exponent);
        p.eta_exponent = self.eta_exponent;
        p.slack_exponent = self.slack_exponent;
        if let Some(r) = self.radii.tree {
            p = p.with_radius(r);
        }
        if let Some(r) = self.radii.isolation {
            p = p.with_isolation_radius(r);
        }
        p.with_ell(ell)
    }

    /// Collects every violated invariant.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.n_list.is_empty() {
            errs.push("n_list must not be empty".to_string());
        }
        if self.samples == 0 {
            errs.push("samples must be positive".to_string());
        }
        if self.ell.is_empty() || self.ell.contains(&0) {
            errs.push("ell must be a nonempty list of positive integers".to_string());
        }
        if !(self.radius_exponent > 0.0 && self.radius_exponent < 1.0) {
            errs.push(format!("radius_exponent = {} must lie in (0, 1)", self.radius_exponent));
        }
        if !(self.eta_exponent > 0.0 && self.eta_exponent < 1.0) {
            errs.push(format!("eta_exponent = {} must lie in (0, 1)", self.eta_exponent));
        }
        if !(self.slack_exponent >= 0.0 && self.slack_exponent < self.eta_exponent) {
            errs.push(format!(
                "slack_exponent = {} must lie in [0, eta_exponent)",
                self.slack_exponent
            ));
        }
        let mut grid_ok = true;
        if let Some(g) = &self.grid {
            let (a, b) = (g.re.len(), g.im.len());
            if a == 0 || b == 0 || (a != b && a != 1 && b != 1) {
                errs.push(format!("grid.re ({a} values) and grid.im ({b} values) must pair up"));
                grid_ok = false;
            }
        }
        for &n in &self.n_list {
            if let Err(Error::Validation(e)) = self.sampler(n).validate() {
                errs.extend(e);
            }
            if self.experiment.uses_grid() && grid_ok {
                let floor = (n as f64).powf(-1.0 + self.eta_exponent);
                for r in self.grid_recipes() {
                    match r.eta(n, self.d) {
                        Ok(eta) if eta < floor => errs.push(format!(
                            "z = {} + {}i at N = {n} lies outside the spectral domain D: \
                             Im z must be >= N^(-1+eta_exponent) = {floor:.3e}",
                            r.re, eta
                        )),
                        Ok(_) => {}
                        Err(e) => errs.push(e.to_string()),
                    }
                }
            }
            if self.experiment == ExperimentKind::Exch {
                for &ell in &self.ell {
                    if let Err(Error::Validation(e)) = self.parameters(n, ell).validate() {
                        errs.extend(e.into_iter().map(|m| format!("N = {n}: {m}")));
                    }
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    /// Where the CSV goes: `output` (relative to `base`), else `<stem>.csv`.
    pub fn output_path(&self, base: &Path, stem: &str) -> PathBuf {
        match &self.output {
            Some(p) if p.is_absolute() => p.clone(),
            Some(p) => base.join(p),
            None => base.join(format!("{stem}.csv")),
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        Error::Parse { line, msg: e.message().to_string() }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config_str("experiment = \"esd\"\nn_list = [200]\n").unwrap();
        assert_eq!(c.d, 3);
        assert_eq!(c.ell, vec![2]);
        assert_eq!(c.radius_exponent, 0.5);
        assert_eq!(c.eta_exponent, 0.1);
        assert_eq!(c.model, Model::UniformPairing);
    }

    #[test]
    fn parse_error_reports_line() {
        let err = parse_config_str("experiment = \"esd\"\nn_list = [200]\nd = \"three\"\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn scalar_ell_and_n_list() {
        let c = parse_config_str("experiment = \"sce\"\nn_list = 500\nell = 1\n").unwrap();
        assert_eq!(c.n_list, vec![500]);
        assert_eq!(c.ell, vec![1]);
    }
}
