//! Per-graph diagnostics of the self-consistent equations and the first loop
//! equation, and their Monte-Carlo summaries.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{edge_constant, m_d, m_sc, x_ell, y_ell, SpectralPoint};
use crate::error::Result;
use crate::experiments::output::{Cell, Table};
use crate::experiments::ZRecipe;
use crate::resolvent::{NormalizedAdjacency, ResolventCache, SpectralFactorization};
use crate::sampler::{Model, SamplerConfig};
use crate::stats::{mean, median, pairwise_sum, summarize, variance, Summary};

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticRecord {
    pub n: usize,
    pub d: usize,
    pub ell: usize,
    pub seed: u64,
    pub sample: u64,
    pub z_index: usize,
    pub z: Complex64,
    pub q: Complex64,
    pub m_n: Complex64,
    pub y: Complex64,
    pub x: Complex64,
    pub m_sc: Complex64,
    pub m_d: Complex64,
    pub dz_m_n: Complex64,
    /// `Im m_N/(Nη) + N^{-1+2c}`.
    pub phi: f64,
    pub residual_qy: Complex64,
    pub residual_mx: Complex64,
    /// `𝒜²/(ℓ+1) (Q - Y) + ∂_z m_N / N`.
    pub loop_lhs: Complex64,
    /// `(m_N - m_d)² + 2𝒜 √(z-2) (m_N - m_d) + ∂_z m_N / N`.
    pub edge_loop: Complex64,
}

/// Spectral quantities of one graph at one `z`, shared by all `ell`.
#[derive(Clone, Copy, Debug)]
pub struct PointQuantities {
    pub point: SpectralPoint<f64>,
    pub q: Complex64,
    pub m_n: Complex64,
    pub dz_m_n: Complex64,
}

impl PointQuantities {
    pub fn from_cache(cache: &ResolventCache<f64>) -> Result<Self> {
        Ok(Self {
            point: cache.point(),
            q: cache.q()?,
            m_n: cache.m_n(),
            dz_m_n: cache.dz_m_n(),
        })
    }
}

impl DiagnosticRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        pq: &PointQuantities,
        n: usize,
        d: usize,
        ell: usize,
        radius_exponent: f64,
        seed: u64,
        sample: u64,
        z_index: usize,
    ) -> Result<Self> {
        let p = pq.point;
        let nf = n as f64;
        let y = y_ell(pq.q, p, ell, d)?;
        let x = x_ell(pq.q, p, ell, d)?;
        let msc = m_sc(p);
        let md = m_d(p, d)?;
        let a = edge_constant::<f64>(d)?;
        let dz_over_n = pq.dz_m_n / nf;
        let dm = pq.m_n - md;
        let sqrt_edge = (p.z() - 2.0).sqrt();
        Ok(Self {
            n,
            d,
            ell,
            seed,
            sample,
            z_index,
            z: p.z(),
            q: pq.q,
            m_n: pq.m_n,
            y,
            x,
            m_sc: msc,
            m_d: md,
            dz_m_n: pq.dz_m_n,
            phi: pq.m_n.im / (nf * p.eta()) + nf.powf(-1.0 + 2.0 * radius_exponent),
            residual_qy: pq.q - y,
            residual_mx: pq.m_n - x,
            loop_lhs: (pq.q - y) * (a * a / (ell as f64 + 1.0)) + dz_over_n,
            edge_loop: dm * dm + sqrt_edge * dm * (2.0 * a) + dz_over_n,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    pub n_list: Vec<usize>,
    pub d: usize,
    pub model: Model,
    pub ells: Vec<usize>,
    pub grid: Vec<ZRecipe>,
    pub samples: usize,
    pub seed: u64,
    pub radius_exponent: f64,
}

/// Records ordered by `(n, sample, z, ell)`.
pub fn collect_diagnostics(cfg: &DiagnosticsConfig) -> Result<Vec<DiagnosticRecord>> {
    let mut out = Vec::new();
    for &n in &cfg.n_list {
        let sampler = SamplerConfig::new(n, cfg.d, cfg.model, cfg.seed);
        let points: Vec<SpectralPoint<f64>> =
            cfg.grid.iter().map(|r| r.at(n, cfg.d)).collect::<Result<_>>()?;
        let per_sample: Vec<Vec<DiagnosticRecord>> = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| {
                let g = sampler.sample_indexed(i)?;
                let fact = SpectralFactorization::new(NormalizedAdjacency::new(g))?;
                let mut recs = Vec::new();
                for (zi, &p) in points.iter().enumerate() {
                    let pq = PointQuantities::from_cache(&fact.resolvent(p)?)?;
                    for &ell in &cfg.ells {
                        recs.push(DiagnosticRecord::new(&pq, n, cfg.d, ell, cfg.radius_exponent, cfg.seed, i, zi)?);
                    }
                }
                Ok(recs)
            })
            .collect::<Result<_>>()?;
        out.extend(per_sample.into_iter().flatten());
    }
    Ok(out)
}

pub fn diagnostics_table(records: &[DiagnosticRecord]) -> Table {
    let mut t = Table::new(&[
        "n", "d", "ell", "seed", "sample", "z_index", "z*", "q*", "m_n*", "y*", "x*", "m_sc*", "m_d*",
        "dz_m_n*", "phi", "residual_qy*", "residual_mx*", "loop_lhs*", "edge_loop*",
    ]);
    for r in records {
        t.push(vec![
            Cell::from(r.n),
            r.d.into(),
            r.ell.into(),
            r.seed.into(),
            r.sample.into(),
            r.z_index.into(),
            r.z.into(),
            r.q.into(),
            r.m_n.into(),
            r.y.into(),
            r.x.into(),
            r.m_sc.into(),
            r.m_d.into(),
            r.dz_m_n.into(),
            r.phi.into(),
            r.residual_qy.into(),
            r.residual_mx.into(),
            r.loop_lhs.into(),
            r.edge_loop.into(),
        ]);
    }
    t
}

fn groups(records: &[DiagnosticRecord]) -> Vec<(usize, usize, usize, Vec<&DiagnosticRecord>)> {
    let mut keys: Vec<(usize, usize, usize)> = records.iter().map(|r| (r.n, r.z_index, r.ell)).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(n, zi, ell)| {
            let rs = records
                .iter()
                .filter(|r| r.n == n && r.z_index == zi && r.ell == ell)
                .collect();
            (n, zi, ell, rs)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n: usize,
    pub z_index: usize,
    pub ell: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub median_abs_qy: f64,
    pub median_abs_mx: f64,
    pub median_abs_q_msc: f64,
    pub median_abs_mn_md: f64,
    pub abs_qy: Summary,
}

/// Medians of the self-consistent residuals per `(n, z, ell)`.
pub fn scan_summaries(records: &[DiagnosticRecord]) -> Vec<ScanSummary> {
    groups(records)
        .into_iter()
        .map(|(n, zi, ell, rs)| {
            let col = |f: &dyn Fn(&DiagnosticRecord) -> f64| rs.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let qy = col(&|r| r.residual_qy.norm());
            ScanSummary {
                n,
                z_index: zi,
                ell,
                z_re: rs[0].z.re,
                z_im: rs[0].z.im,
                median_abs_qy: median(&qy),
                median_abs_mx: median(&col(&|r| r.residual_mx.norm())),
                median_abs_q_msc: median(&col(&|r| (r.q - r.m_sc).norm())),
                median_abs_mn_md: median(&col(&|r| (r.m_n - r.m_d).norm())),
                abs_qy: summarize(&qy, rs[0].seed),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSummary {
    pub n: usize,
    pub z_index: usize,
    pub ell: usize,
    pub count: usize,
    pub mean_loop_re: f64,
    pub mean_loop_im: f64,
    pub abs_mean_loop: f64,
    /// Standard error of the complex mean.
    pub loop_se: f64,
    /// `E |∂_z m_N / N|`.
    pub mean_abs_dz: f64,
    /// `E[𝒜²/(ℓ+1) (Q - Y)]`.
    pub mean_qy_term_re: f64,
    pub mean_qy_term_im: f64,
    pub mean_abs_qy_term: f64,
    pub abs_mean_edge_loop: f64,
    /// `|E loop| / E|∂_z m_N / N|`.
    pub ratio: f64,
    pub loop_re: Summary,
}

pub fn loop_summaries(records: &[DiagnosticRecord]) -> Result<Vec<LoopSummary>> {
    groups(records)
        .into_iter()
        .map(|(n, zi, ell, rs)| {
            let a = edge_constant::<f64>(rs[0].d)?;
            let nf = n as f64;
            let lre: Vec<f64> = rs.iter().map(|r| r.loop_lhs.re).collect();
            let lim: Vec<f64> = rs.iter().map(|r| r.loop_lhs.im).collect();
            let dz: Vec<f64> = rs.iter().map(|r| (r.dz_m_n / nf).norm()).collect();
            let term: Vec<Complex64> = rs
                .iter()
                .map(|r| r.residual_qy * (a * a / (ell as f64 + 1.0)))
                .collect();
            let tre: Vec<f64> = term.iter().map(|t| t.re).collect();
            let tim: Vec<f64> = term.iter().map(|t| t.im).collect();
            let tabs: Vec<f64> = term.iter().map(|t| t.norm()).collect();
            let mre: Vec<f64> = rs.iter().map(|r| r.edge_loop.re).collect();
            let mim: Vec<f64> = rs.iter().map(|r| r.edge_loop.im).collect();
            let m = rs.len() as f64;
            let mean_loop = Complex64::new(mean(&lre), mean(&lim));
            let mean_dz = mean(&dz);
            Ok(LoopSummary {
                n,
                z_index: zi,
                ell,
                count: rs.len(),
                mean_loop_re: mean_loop.re,
                mean_loop_im: mean_loop.im,
                abs_mean_loop: mean_loop.norm(),
                loop_se: ((variance(&lre) + variance(&lim)) / m).sqrt(),
                mean_abs_dz: mean_dz,
                mean_qy_term_re: mean(&tre),
                mean_qy_term_im: mean(&tim),
                mean_abs_qy_term: pairwise_sum(&tabs) / m,
                abs_mean_edge_loop: Complex64::new(mean(&mre), mean(&mim)).norm(),
                ratio: mean_loop.norm() / mean_dz,
                loop_re: summarize(&lre, rs[0].seed),
            })
        })
        .collect()
}
