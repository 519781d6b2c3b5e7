//! Edge-averaged identities for resolvent minors.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::SpectralPoint;
use crate::error::Result;
use crate::experiments::output::{Cell, Table};
use crate::resolvent::{NormalizedAdjacency, ResolventCache, SpectralFactorization};
use crate::sampler::{Model, SamplerConfig};
use crate::stats::median;

#[derive(Clone, Debug, PartialEq)]
pub struct AveragingRecord {
    pub sample: u64,
    /// `(1/(Nd)) Σ_{b~c} (G^{(b)}_cc - Q)`; zero by the definition of `Q`.
    pub centered_average: Complex64,
    /// `(1/(Nd)²) Σ G^{(bb')}_{cc'}` over pairs of oriented edges.
    pub pair_lhs: Complex64,
    /// `(1/(Nd)²) Σ G_bb'/(d-1) (G^{(b)}_cc - Q)(G^{(b')}_c'c' - Q)`.
    pub pair_rhs: Complex64,
    pub gap: f64,
    /// `(1/(Nd)²) Σ |G^{(bb')}_{cc'}|²`.
    pub ward_avg: f64,
    /// `Im m_N/(Nη) + N^{-1+2c}`.
    pub phi: f64,
    /// `Im m_N/(Nη)` alone.
    pub phi_main: f64,
}

/// Evaluates both averaging identities on one graph. Pairs with `b = b'`,
/// `c = b'` or `c' = b` (where the double minor is undefined) are excluded
/// from both sides.
pub fn averaging_record(cache: &ResolventCache<f64>, radius_exponent: f64, sample: u64) -> Result<AveragingRecord> {
    let g = cache.adjacency().graph();
    let (n, d) = (g.n(), g.d());
    let full = cache.full();
    let gm = |i: usize, j: usize| full[(i, j)];
    let q = cache.q()?;
    let nd = (n * d) as f64;

    // G^{(b)}_cc - Q for each oriented edge (b, c)
    let dev = |b: usize, c: usize| gm(c, c) - gm(c, b) * gm(b, c) / gm(b, b) - q;
    let mut centered_average = Complex64::new(0.0, 0.0);
    for b in 0..n {
        for &c in g.neighbors(b) {
            centered_average += dev(b, c);
        }
    }
    let devs: Vec<Vec<Complex64>> = (0..n)
        .map(|b| g.neighbors(b).iter().map(|&c| dev(b, c)).collect())
        .collect();

    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut ward = 0.0;
    let inv_d1 = 1.0 / (d as f64 - 1.0);
    for b in 0..n {
        for bp in 0..n {
            if b == bp {
                continue;
            }
            let (m00, m01, m10, m11) = (gm(b, b), gm(b, bp), gm(bp, b), gm(bp, bp));
            let det = m00 * m11 - m01 * m10;
            let (i00, i01, i10, i11) = (m11 / det, -m01 / det, -m10 / det, m00 / det);
            for (ci, &c) in g.neighbors(b).iter().enumerate() {
                if c == bp {
                    continue;
                }
                let (gcb, gcbp) = (gm(c, b), gm(c, bp));
                let (u0, u1) = (gcb * i00 + gcbp * i10, gcb * i01 + gcbp * i11);
                for (cj, &cp) in g.neighbors(bp).iter().enumerate() {
                    if cp == b {
                        continue;
                    }
                    let minor = gm(c, cp) - (u0 * gm(b, cp) + u1 * gm(bp, cp));
                    lhs += minor;
                    ward += minor.norm_sqr();
                    rhs += m01 * inv_d1 * devs[b][ci] * devs[bp][cj];
                }
            }
        }
    }
    let norm = nd * nd;
    let (lhs, rhs) = (lhs / norm, rhs / norm);
    let p = cache.point();
    let phi_main = cache.m_n().im / (n as f64 * p.eta());
    Ok(AveragingRecord {
        sample,
        centered_average: centered_average / nd,
        pair_lhs: lhs,
        pair_rhs: rhs,
        gap: (lhs - rhs).norm(),
        ward_avg: ward / norm,
        phi: phi_main + (n as f64).powf(-1.0 + 2.0 * radius_exponent),
        phi_main,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragingReport {
    pub n: usize,
    pub d: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub samples: usize,
    pub max_abs_centered: f64,
    pub median_gap_over_phi: f64,
    pub median_gap_over_phi_main: f64,
    pub median_ward_over_phi: f64,
    pub median_ward_over_phi_main: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn averaging_identity_probe(
    n: usize,
    d: usize,
    model: Model,
    point: SpectralPoint<f64>,
    samples: usize,
    seed: u64,
    radius_exponent: f64,
) -> Result<(Vec<AveragingRecord>, AveragingReport)> {
    let cfg = SamplerConfig::new(n, d, model, seed);
    let records: Vec<AveragingRecord> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let g = cfg.sample_indexed(i)?;
            let fact = SpectralFactorization::new(NormalizedAdjacency::new(g))?;
            averaging_record(&fact.resolvent(point)?, radius_exponent, i)
        })
        .collect::<Result<_>>()?;
    let ratio = |f: &dyn Fn(&AveragingRecord) -> f64| median(&records.iter().map(f).collect::<Vec<_>>());
    let report = AveragingReport {
        n,
        d,
        z_re: point.re(),
        z_im: point.eta(),
        samples,
        max_abs_centered: records.iter().map(|r| r.centered_average.norm()).fold(0.0, f64::max),
        median_gap_over_phi: ratio(&|r| r.gap / r.phi),
        median_gap_over_phi_main: ratio(&|r| r.gap / r.phi_main),
        median_ward_over_phi: ratio(&|r| r.ward_avg / r.phi),
        median_ward_over_phi_main: ratio(&|r| r.ward_avg / r.phi_main),
    };
    Ok((records, report))
}

pub fn averaging_table(n: usize, d: usize, z: Complex64, records: &[AveragingRecord]) -> Table {
    let mut t = Table::new(&[
        "n", "d", "z*", "sample", "centered_average*", "pair_lhs*", "pair_rhs*", "gap", "ward_avg", "phi", "phi_main",
    ]);
    for r in records {
        t.push(vec![
            Cell::from(n),
            d.into(),
            z.into(),
            r.sample.into(),
            r.centered_average.into(),
            r.pair_lhs.into(),
            r.pair_rhs.into(),
            r.gap.into(),
            r.ward_avg.into(),
            r.phi.into(),
            r.phi_main.into(),
        ]);
    }
    t
}
