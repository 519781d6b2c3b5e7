use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{m_sc, WeightedTreeOperator};
use crate::error::Result;
use crate::graph::{ball, RegularGraph};
use crate::resolvent::ResolventCache;
use crate::scalar::Real;
use crate::stats::median;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalLawReport {
    pub radius: usize,
    pub pairs: usize,
    pub max_err: f64,
    pub median_err: f64,
}

/// Pairs `(i, j)` with `i` uniform and `j` the end of a non-lazy random walk
/// of uniform length in `0..=max_len`.
pub fn sample_pairs<R: Rng + ?Sized>(
    g: &RegularGraph,
    count: usize,
    max_len: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    (0..count)
        .map(|_| {
            let i = rng.random_range(0..g.n());
            let mut j = i;
            for _ in 0..rng.random_range(0..=max_len) {
                let nb = g.neighbors(j);
                j = nb[rng.random_range(0..nb.len())];
            }
            (i, j)
        })
        .collect()
}

/// Compares `G_ij` against the weighted operator on the induced ball
/// `B_r({i, j})` with boundary weight `m_sc(z)`.
pub fn local_law_error<T: Real>(
    cache: &ResolventCache<T>,
    r: usize,
    pairs: &[(usize, usize)],
) -> Result<LocalLawReport> {
    let g = cache.adjacency().graph();
    let p = cache.point();
    let delta = m_sc(p);
    let mut errs = Vec::with_capacity(pairs.len());
    for &(i, j) in pairs {
        let b = ball(g.as_graph(), &[i, j], r);
        let op = WeightedTreeOperator::new(&b.subgraph(), g.d(), p, delta, &[])?;
        let idx = b.local_index();
        let pij = op.matrix()[(idx[&i], idx[&j])];
        errs.push((cache.entry(i, j) - pij).norm().to_f64_lossy());
    }
    Ok(LocalLawReport {
        radius: r,
        pairs: pairs.len(),
        max_err: errs.iter().copied().fold(0.0, f64::max),
        median_err: median(&errs),
    })
}
