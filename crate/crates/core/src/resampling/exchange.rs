use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Parameters, RegularGraph};
use crate::resampling::{apply, propose};
use crate::rng::{stream, substream, Purpose};
use crate::sampler::SamplerConfig;
use crate::stats::{ks_two_sample, mean, sign_test, variance, TestResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeReport {
    pub samples: usize,
    pub ks: TestResult,
    pub sign: TestResult,
    pub mean_before: f64,
    pub mean_after: f64,
    /// `|mean_after - mean_before|` in units of its standard error.
    pub mean_gap_sigma: f64,
    pub switched_total: usize,
    pub degree_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeSample {
    pub sample: u64,
    pub center: usize,
    pub before: f64,
    pub after: f64,
    pub switched: usize,
    pub regular: bool,
}

/// Draws `m` pairs `(G, T_S(G))`: a fresh graph, a uniform center and one
/// resampling each.
pub fn exchange_pairs<F>(
    cfg: &SamplerConfig,
    params: &Parameters,
    statistic: F,
    m: usize,
) -> Result<Vec<ExchangeSample>>
where
    F: Fn(&RegularGraph) -> f64 + Sync,
{
    (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let g = crate::sampler::sample(cfg, &mut stream(cfg.seed, i))?;
            let mut rng = substream(cfg.seed, i, Purpose::Resample);
            let o = rng.random_range(0..g.n());
            let s = propose(&g, o, params, &mut rng)?;
            let sw = apply(&g, &s)?;
            let regular = (0..g.n()).all(|v| sw.graph.neighbors(v).len() == g.d());
            Ok(ExchangeSample {
                sample: i,
                center: o,
                before: statistic(&g),
                after: statistic(&sw.graph),
                switched: sw.applied.len(),
                regular,
            })
        })
        .collect()
}

pub fn exchange_report(rows: &[ExchangeSample]) -> ExchangeReport {
    let m = rows.len();
    let before: Vec<f64> = rows.iter().map(|r| r.before).collect();
    let after: Vec<f64> = rows.iter().map(|r| r.after).collect();
    let diffs: Vec<f64> = rows.iter().map(|r| r.after - r.before).collect();
    let se = (variance(&diffs) / m.max(1) as f64).sqrt();
    let gap = (mean(&after) - mean(&before)).abs();
    ExchangeReport {
        samples: m,
        ks: ks_two_sample(&before, &after),
        sign: sign_test(&diffs),
        mean_before: mean(&before),
        mean_after: mean(&after),
        mean_gap_sigma: if se > 0.0 { gap / se } else if gap == 0.0 { 0.0 } else { f64::INFINITY },
        switched_total: rows.iter().map(|r| r.switched).sum(),
        degree_violations: rows.iter().filter(|r| !r.regular).count(),
    }
}

/// Compares the laws of `f(G)` and `f(T_S(G))` over `m` exchangeable pairs.
pub fn exchangeability_test<F>(
    cfg: &SamplerConfig,
    params: &Parameters,
    statistic: F,
    m: usize,
) -> Result<ExchangeReport>
where
    F: Fn(&RegularGraph) -> f64 + Sync,
{
    Ok(exchange_report(&exchange_pairs(cfg, params, statistic, m)?))
}
