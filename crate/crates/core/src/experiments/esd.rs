use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::km_cdf;
use crate::error::Result;
use crate::experiments::output::{Cell, Table};
use crate::resolvent::NormalizedAdjacency;
use crate::sampler::{Model, SamplerConfig};
use crate::stats::ks_distance;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub density: f64,
    pub km_density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsdReport {
    pub n: usize,
    pub d: usize,
    pub samples: usize,
    pub eigenvalues: usize,
    pub ks_distance: f64,
    /// Fraction of pooled eigenvalues outside `[-2.2, 2.2]`.
    pub outside_mass: f64,
    pub histogram: Vec<HistogramBin>,
}

pub const ESD_BINS: usize = 60;

/// Pools the nontrivial eigenvalues of `samples` graphs (the top one dropped)
/// and compares them with the Kesten–McKay law.
pub fn esd_experiment(n: usize, d: usize, model: Model, samples: usize, seed: u64) -> Result<EsdReport> {
    let cfg = SamplerConfig::new(n, d, model, seed);
    let spectra: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let g = cfg.sample_indexed(i)?;
            let mut ev = NormalizedAdjacency::<f64>::new(g).eigenvalues()?;
            ev.remove(0);
            Ok(ev)
        })
        .collect::<Result<_>>()?;
    let pooled: Vec<f64> = spectra.into_iter().flatten().collect();
    let ks = ks_distance(&pooled, |x| km_cdf(x, d));
    let outside = pooled.iter().filter(|x| x.abs() > 2.2).count() as f64 / pooled.len() as f64;
    let (lo, hi) = (-2.5, 2.5);
    let width = (hi - lo) / ESD_BINS as f64;
    let mut counts = vec![0usize; ESD_BINS];
    for &x in &pooled {
        let k = ((x - lo) / width).floor();
        if k >= 0.0 && (k as usize) < ESD_BINS {
            counts[k as usize] += 1;
        }
    }
    let total = pooled.len() as f64;
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let a = lo + k as f64 * width;
            HistogramBin {
                lo: a,
                hi: a + width,
                count: c,
                density: c as f64 / (total * width),
                km_density: (km_cdf(a + width, d) - km_cdf(a, d)) / width,
            }
        })
        .collect();
    Ok(EsdReport {
        n,
        d,
        samples,
        eigenvalues: pooled.len(),
        ks_distance: ks,
        outside_mass: outside,
        histogram,
    })
}

pub fn esd_table(reports: &[EsdReport]) -> Table {
    let mut t = Table::new(&["n", "d", "bin_lo", "bin_hi", "count", "density", "km_density", "ks_distance"]);
    for r in reports {
        for b in &r.histogram {
            t.push(vec![
                Cell::from(r.n),
                r.d.into(),
                b.lo.into(),
                b.hi.into(),
                b.count.into(),
                b.density.into(),
                b.km_density.into(),
                r.ks_distance.into(),
            ]);
        }
    }
    t
}
