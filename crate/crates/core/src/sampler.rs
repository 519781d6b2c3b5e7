use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{RegularGraph, SimpleGraph};
use crate::rng;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Configuration model conditioned on simplicity: exactly uniform.
    #[default]
    #[serde(alias = "uniform", alias = "pairing")]
    UniformPairing,
    /// Sum of `d/2` uniform permutations and their transposes (needs even `d`).
    Permutation,
    /// Union of `d` uniform perfect matchings (needs even `n`).
    Matching,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform_pairing" | "pairing" => Ok(Model::UniformPairing),
            "permutation" => Ok(Model::Permutation),
            "matching" => Ok(Model::Matching),
            other => Err(Error::Validation(vec![format!("unknown model {other:?}")])),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::UniformPairing => "uniform_pairing",
            Model::Permutation => "permutation",
            Model::Matching => "matching",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n: usize,
    pub d: usize,
    pub model: Model,
    pub seed: u64,
    pub max_rejections: usize,
}

pub const DEFAULT_MAX_REJECTIONS: usize = 100_000;

impl SamplerConfig {
    pub fn new(n: usize, d: usize, model: Model, seed: u64) -> Self {
        Self {
            n,
            d,
            model,
            seed,
            max_rejections: DEFAULT_MAX_REJECTIONS,
        }
    }

    pub fn uniform(n: usize, d: usize, seed: u64) -> Self {
        Self::new(n, d, Model::UniformPairing, seed)
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.d < 3 {
            errs.push(format!("degree d = {} must be at least 3", self.d));
        }
        if self.d + 1 > self.n {
            errs.push(format!("need d < n, got n = {}, d = {}", self.n, self.d));
        }
        if (self.n * self.d) % 2 != 0 {
            errs.push(format!("n * d = {} must be even", self.n * self.d));
        }
        match self.model {
            Model::Permutation if self.d % 2 != 0 => {
                errs.push(format!("permutation model: d must be even (d = {})", self.d))
            }
            Model::Matching if self.n % 2 != 0 => {
                errs.push(format!("matching model: n must be even (n = {})", self.n))
            }
            _ => {}
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    /// The `index`-th graph of this configuration, drawn from its own stream.
    pub fn sample_indexed(&self, index: u64) -> Result<RegularGraph> {
        sample(self, &mut rng::stream(self.seed, index))
    }
}

/// Draws a simple d-regular graph, retrying until the multigraph is simple.
pub fn sample<R: Rng + ?Sized>(cfg: &SamplerConfig, rng: &mut R) -> Result<RegularGraph> {
    sample_counting(cfg, rng).map(|(g, _)| g)
}

/// Like [`sample`], also returning the number of attempts used.
pub fn sample_counting<R: Rng + ?Sized>(
    cfg: &SamplerConfig,
    rng: &mut R,
) -> Result<(RegularGraph, usize)> {
    cfg.validate()?;
    for attempt in 1..=cfg.max_rejections.max(1) {
        let edges = match cfg.model {
            Model::UniformPairing => pairing(cfg.n, cfg.d, rng),
            Model::Permutation => permutations(cfg.n, cfg.d, rng),
            Model::Matching => matchings(cfg.n, cfg.d, rng),
        };
        if let Ok(g) = SimpleGraph::from_edges(cfg.n, &edges) {
            return Ok((RegularGraph::new(g, cfg.d)?, attempt));
        }
    }
    Err(Error::RejectionLimit {
        n: cfg.n,
        d: cfg.d,
        limit: cfg.max_rejections,
    })
}

fn pairing<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut points: Vec<usize> = (0..n * d).map(|p| p / d).collect();
    points.shuffle(rng);
    points.chunks_exact(2).map(|c| (c[0], c[1])).collect()
}

fn permutations<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * d / 2);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..d / 2 {
        perm.shuffle(rng);
        edges.extend(perm.iter().enumerate().map(|(i, &p)| (i, p)));
    }
    edges
}

fn matchings<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * d / 2);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..d {
        perm.shuffle(rng);
        edges.extend(perm.chunks_exact(2).map(|c| (c[0], c[1])));
    }
    edges
}

/// All `N d` oriented edges `(u, v)`, sorted.
pub fn directed_edges(g: &RegularGraph) -> Vec<(usize, usize)> {
    g.directed_edges()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_forced() {
        let k4 = RegularGraph::complete(4).unwrap();
        for seed in 0..20 {
            let g = SamplerConfig::uniform(4, 3, seed).sample_indexed(0).unwrap();
            assert_eq!(g, k4);
        }
    }

    #[test]
    fn parity_violations_are_rejected() {
        assert!(SamplerConfig::new(10, 3, Model::Permutation, 0).validate().is_err());
        assert!(SamplerConfig::new(9, 4, Model::Matching, 0).validate().is_err());
        assert!(SamplerConfig::uniform(7, 3, 0).validate().is_err());
        assert!(SamplerConfig::uniform(10, 2, 0).validate().is_err());
    }

    #[test]
    fn every_model_yields_regular_graphs() {
        for (model, n, d) in [
            (Model::UniformPairing, 50, 3),
            (Model::Permutation, 41, 4),
            (Model::Matching, 40, 3),
        ] {
            let cfg = SamplerConfig::new(n, d, model, 11);
            for i in 0..5 {
                let g = cfg.sample_indexed(i).unwrap();
                assert!((0..n).all(|v| g.neighbors(v).len() == d));
                assert_eq!(directed_edges(&g).len(), n * d);
            }
        }
    }

    #[test]
    fn rejection_limit_surfaces() {
        let mut cfg = SamplerConfig::uniform(8, 7, 1);
        cfg.max_rejections = 1;
        let mut hits = 0;
        for i in 0..20 {
            if matches!(cfg.sample_indexed(i), Err(Error::RejectionLimit { .. })) {
                hits += 1;
            }
        }
        assert!(hits > 0);
    }
}
