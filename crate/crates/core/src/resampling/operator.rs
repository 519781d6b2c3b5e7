use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::analytic::{m_sc, SpectralPoint, WeightedTreeOperator};
use crate::error::{Error, Result};
use crate::graph::{RegularGraph, SimpleGraph};
use crate::linalg::{ComplexLu, Matrix};
use crate::resampling::ResamplingData;
use crate::resolvent::ResolventCache;
use crate::scalar::{cplx, Cplx, Real};

/// The perturbation `H̃ - H = -Σ_α ξ_α` of a set of switchings and the
/// operator `F` that turns the local resolvent change into the global one.
///
/// All matrices are indexed by `support` (the switching vertices, four per
/// applied switching). `U` is the selection of the support columns, `V` the
/// selection times `delta_h`, so `H̃ - H = U Vᵀ`.
#[derive(Clone, Debug)]
pub struct SwitchOperator<T: Real> {
    pub point: SpectralPoint<T>,
    pub quads: Vec<[usize; 4]>,
    pub support: Vec<usize>,
    /// `H̃ - H` on the support.
    pub delta_h: Matrix<T>,
    /// `Σ ξ + Σ ξ L̃ ξ`, with `L̃` the local operator of the switched forest.
    pub f: Matrix<Cplx<T>>,
    /// `-U (I + Vᵀ L U)^{-1} Vᵀ`, with `L` the local operator before switching.
    pub f_woodbury: Matrix<Cplx<T>>,
    /// `L` restricted to the support.
    pub local: Matrix<Cplx<T>>,
    /// `max |F - F_woodbury|`.
    pub identity_residual: T,
    /// `max |(H̃ - H) - (-Σ ξ)|` read off the two graphs.
    pub perturbation_residual: T,
    /// Largest entry of `Σ ξ + Σ ξ L̃ ξ` outside the support, over the local forest.
    pub support_leak: T,
}

impl<T: Real> SwitchOperator<T> {
    pub fn rank_bound(&self) -> usize {
        4 * self.quads.len()
    }

    pub fn is_zero(&self) -> bool {
        self.quads.is_empty()
    }
}

fn czero<T: Real>() -> Cplx<T> {
    cplx(T::zero(), T::zero())
}

fn max_diff<T: Real>(a: &Matrix<Cplx<T>>, b: &Matrix<Cplx<T>>) -> T {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (*x - *y).norm())
        .fold(T::zero(), T::max)
}

/// Local forest on `verts` (the ball first): the induced ball plus the given
/// edge pairs.
fn local_forest(
    g: &RegularGraph,
    ball: &[usize],
    verts: &[usize],
    pairs: &[[(usize, usize); 2]],
) -> Result<SimpleGraph> {
    let mut local = g.as_graph().induced(ball);
    while local.n() < verts.len() {
        local.add_vertex();
    }
    let pos = |v: usize| verts.iter().position(|&w| w == v).expect("listed");
    for p in pairs {
        for &(x, y) in p {
            local
                .add_edge(pos(x), pos(y))
                .map_err(|_| Error::Conflict(format!("local forest edge ({x}, {y}) repeated")))?;
        }
    }
    Ok(local)
}

/// Builds `F` both from its defining sum and from the low-rank Woodbury form,
/// for the switchings actually applied to produce `switched`.
pub fn woodbury_f<T: Real>(
    g: &RegularGraph,
    switched: &RegularGraph,
    s: &ResamplingData,
    applied: &[usize],
    point: SpectralPoint<T>,
) -> Result<SwitchOperator<T>> {
    let quads: Vec<[usize; 4]> = applied.iter().map(|&al| s.quad(al)).collect();
    let support: Vec<usize> = quads
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = support.len();
    let at = |v: usize| support.binary_search(&v).expect("support vertex");
    let scale = T::count(g.d() - 1).sqrt().recip();

    // Σ ξ_α on the support.
    let mut xi = Matrix::<T>::zeros(k, k);
    for &[l, a, b, c] in &quads {
        for (x, y, sign) in [(l, a, 1.0), (b, c, 1.0), (l, c, -1.0), (a, b, -1.0)] {
            let w = T::lit(sign) * scale;
            xi[(at(x), at(y))] += w;
            xi[(at(y), at(x))] += w;
        }
    }
    let delta_h = xi.scale(-T::one());
    let mut perturbation_residual = T::zero();
    for (i, &x) in support.iter().enumerate() {
        for (j, &y) in support.iter().enumerate() {
            let new = if switched.has_edge(x, y) { scale } else { T::zero() };
            let old = if g.has_edge(x, y) { scale } else { T::zero() };
            perturbation_residual = perturbation_residual.max((new - old - delta_h[(i, j)]).abs());
        }
    }

    let delta = m_sc(point);
    let before: Vec<[(usize, usize); 2]> = quads.iter().map(|&[l, a, b, c]| [(l, a), (b, c)]).collect();
    let after: Vec<[(usize, usize); 2]> = quads.iter().map(|&[l, a, b, c]| [(l, c), (a, b)]).collect();
    let mut verts = s.ball.clone();
    for &[_, a, b, c] in &quads {
        for v in [a, b, c] {
            if !verts.contains(&v) {
                verts.push(v);
            }
        }
    }
    let forest = local_forest(g, &s.ball, &verts, &before)?;
    let forest_t = local_forest(g, &s.ball, &verts, &after)?;
    let l_op = WeightedTreeOperator::new(&forest, g.d(), point, delta, &[])?;
    let lt_op = WeightedTreeOperator::new(&forest_t, g.d(), point, delta, &[])?;
    let local_pos: Vec<usize> = support
        .iter()
        .map(|&v| verts.iter().position(|&w| w == v).expect("support in forest"))
        .collect();
    let local = l_op.matrix().select(&local_pos, &local_pos);

    // F = Σξ + Σξ L̃ Σξ, evaluated on the whole local forest.
    let m = verts.len();
    let mut xi_full = Matrix::<Cplx<T>>::zeros(m, m);
    for i in 0..k {
        for j in 0..k {
            xi_full[(local_pos[i], local_pos[j])] = cplx(xi[(i, j)], T::zero());
        }
    }
    let f_full = xi_full.add(&xi_full.matmul(lt_op.matrix()).matmul(&xi_full));
    let mut support_leak = T::zero();
    for i in 0..m {
        for j in 0..m {
            if !local_pos.contains(&i) || !local_pos.contains(&j) {
                support_leak = support_leak.max(f_full[(i, j)].norm());
            }
        }
    }
    let f = f_full.select(&local_pos, &local_pos);

    // -U (I + Vᵀ L U)^{-1} Vᵀ with U = E_support, Vᵀ = delta_h.
    let vt = delta_h.map(|x| cplx(x, T::zero()));
    let f_woodbury = if k == 0 {
        Matrix::zeros(0, 0)
    } else {
        let inner = Matrix::identity(k).add(&vt.matmul(&local));
        let lu = ComplexLu::factor(inner)?;
        let mut out = Matrix::zeros(k, k);
        for j in 0..k {
            let col: Vec<Cplx<T>> = (0..k).map(|i| vt[(i, j)]).collect();
            let sol = lu.solve(&col);
            for i in 0..k {
                out[(i, j)] = -sol[i];
            }
        }
        out
    };
    let identity_residual = max_diff(&f, &f_woodbury);
    Ok(SwitchOperator {
        point,
        quads,
        support,
        delta_h,
        f,
        f_woodbury,
        local,
        identity_residual,
        perturbation_residual,
        support_leak,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    /// `errors[K]`: max over sampled entries of `|S_K - (G̃ - G)|`, where `S_K`
    /// sums the terms `G F (G° F)^k G` for `k ≤ K`.
    pub errors: Vec<f64>,
    /// Largest `|G̃ - G|` over the sampled entries.
    pub scale: f64,
    pub diverging: bool,
}

/// Partial sums of `G̃ - G = Σ_k G F (G° F)^k G`, `G° = G - L` on the support.
pub fn resolvent_update_expansion<T: Real>(
    g: &ResolventCache<T>,
    gt: &ResolventCache<T>,
    op: &SwitchOperator<T>,
    max_k: usize,
    entries: &[(usize, usize)],
) -> ExpansionReport {
    let direct: Vec<Cplx<T>> = entries.iter().map(|&(x, y)| gt.entry(x, y) - g.entry(x, y)).collect();
    let scale = direct.iter().map(|v| v.norm().to_f64_lossy()).fold(0.0, f64::max);
    let k = op.support.len();
    if k == 0 {
        let err = direct.iter().map(|v| v.norm().to_f64_lossy()).fold(0.0, f64::max);
        return ExpansionReport {
            errors: vec![err; max_k + 1],
            scale,
            diverging: false,
        };
    }
    let g_sup = g.block(&op.support, &op.support);
    let g_circ = Matrix::from_fn(k, k, |i, j| g_sup[(i, j)] - op.local[(i, j)]);
    let step = g_circ.matmul(&op.f);
    let left: Vec<Vec<Cplx<T>>> = entries
        .iter()
        .map(|&(x, _)| op.support.iter().map(|&s| g.entry(x, s)).collect())
        .collect();
    let right: Vec<Vec<Cplx<T>>> = entries
        .iter()
        .map(|&(_, y)| op.support.iter().map(|&s| g.entry(s, y)).collect())
        .collect();
    let mut term = op.f.clone();
    let mut sum = Matrix::<Cplx<T>>::zeros(k, k);
    let mut errors = Vec::with_capacity(max_k + 1);
    for kk in 0..=max_k {
        sum = sum.add(&term);
        let err = entries
            .iter()
            .enumerate()
            .map(|(e, _)| {
                let mut v = czero::<T>();
                for i in 0..k {
                    for j in 0..k {
                        v = v + left[e][i] * sum[(i, j)] * right[e][j];
                    }
                }
                (v - direct[e]).norm().to_f64_lossy()
            })
            .fold(0.0, f64::max);
        errors.push(err);
        if kk < max_k {
            term = term.matmul(&step);
        }
    }
    let diverging = errors.len() > 1 && errors[errors.len() - 1] > errors[0];
    ExpansionReport {
        errors,
        scale,
        diverging,
    }
}
