use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::edge_constant;
use crate::error::Result;
use crate::experiments::output::{Cell, Table};
use crate::resolvent::NormalizedAdjacency;
use crate::sampler::{Model, SamplerConfig};
use crate::stats::{mean, pearson, summarize, variance, Summary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSample {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub sample: u64,
    pub lambda2: f64,
    pub lambda_n: f64,
    /// `(𝒜 N)^{2/3} (λ₂ - 2)`.
    pub scaled: f64,
    /// `max(λ₂, |λ_N|) ≤ 2`.
    pub ramanujan: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub n: usize,
    pub d: usize,
    pub samples: usize,
    pub frac_below_2: f64,
    pub frac_ramanujan: f64,
    /// Sample correlation of `λ₂` and `-λ_N`.
    pub corr_top_bottom: f64,
    pub scaled_mean: f64,
    pub scaled_var: f64,
    pub scaled: Summary,
}

pub fn edge_fluctuations(
    n: usize,
    d: usize,
    model: Model,
    samples: usize,
    seed: u64,
) -> Result<(Vec<EdgeSample>, EdgeReport)> {
    let cfg = SamplerConfig::new(n, d, model, seed);
    let a = edge_constant::<f64>(d)?;
    let factor = (a * n as f64).powf(2.0 / 3.0);
    let rows: Vec<EdgeSample> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let g = cfg.sample_indexed(i)?;
            let ev = NormalizedAdjacency::<f64>::new(g).eigenvalues()?;
            let (l2, ln) = (ev[1], ev[ev.len() - 1]);
            Ok(EdgeSample {
                n,
                d,
                seed,
                sample: i,
                lambda2: l2,
                lambda_n: ln,
                scaled: factor * (l2 - 2.0),
                ramanujan: l2.max(ln.abs()) <= 2.0,
            })
        })
        .collect::<Result<_>>()?;
    let m = rows.len() as f64;
    let top: Vec<f64> = rows.iter().map(|r| r.lambda2).collect();
    let bottom: Vec<f64> = rows.iter().map(|r| -r.lambda_n).collect();
    let scaled: Vec<f64> = rows.iter().map(|r| r.scaled).collect();
    let report = EdgeReport {
        n,
        d,
        samples,
        frac_below_2: rows.iter().filter(|r| r.lambda2 < 2.0).count() as f64 / m,
        frac_ramanujan: rows.iter().filter(|r| r.ramanujan).count() as f64 / m,
        corr_top_bottom: pearson(&top, &bottom),
        scaled_mean: mean(&scaled),
        scaled_var: variance(&scaled),
        scaled: summarize(&scaled, seed),
    };
    Ok((rows, report))
}

pub fn edge_table(rows: &[EdgeSample]) -> Table {
    let mut t = Table::new(&["n", "d", "seed", "sample", "lambda2", "lambda_n", "scaled", "ramanujan"]);
    for r in rows {
        t.push(vec![
            Cell::from(r.n),
            r.d.into(),
            r.seed.into(),
            r.sample.into(),
            r.lambda2.into(),
            r.lambda_n.into(),
            r.scaled.into(),
            r.ramanujan.into(),
        ]);
    }
    t
}
