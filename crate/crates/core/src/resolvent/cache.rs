use std::sync::{Arc, OnceLock};

use crate::analytic::SpectralPoint;
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix, ShiftedTridiagonal, Tridiagonalization};
use crate::resolvent::NormalizedAdjacency;
use crate::scalar::{cplx, Cplx, Real};

/// Largest `N` handled by the dense spectral routines.
pub const DENSE_LIMIT: usize = 4096;
/// Smallest accepted `Im z`.
pub const MIN_ETA: f64 = 1e-12;
/// Minimum distance from `z` to the spectrum.
pub const RESONANCE_GAP: f64 = 1e-10;

/// Per-graph, z-independent data: `H = Q T Qᵀ` and the spectrum of `H`.
#[derive(Debug)]
pub struct SpectralFactorization<T: Real> {
    h: NormalizedAdjacency<T>,
    diag: Vec<T>,
    off: Vec<T>,
    q: Matrix<T>,
    eigenvalues: Vec<T>,
}

impl<T: Real> SpectralFactorization<T> {
    pub fn new(h: NormalizedAdjacency<T>) -> Result<Arc<Self>> {
        let n = h.n();
        if n > DENSE_LIMIT {
            return Err(Error::SizeLimit {
                size: n,
                limit: DENSE_LIMIT,
            });
        }
        let tri = Tridiagonalization::new(h.dense(), true);
        let eigenvalues = tri.eigenvalues();
        let q = tri.q().expect("accumulated").clone();
        Ok(Arc::new(Self {
            diag: tri.diag().to_vec(),
            off: tri.offdiag().to_vec(),
            q,
            eigenvalues,
            h,
        }))
    }

    pub fn adjacency(&self) -> &NormalizedAdjacency<T> {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    /// Spectrum of `H`, descending.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `(1/N) Σ_k (λ_k - z)^{-1}`.
    pub fn stieltjes(&self, z: Cplx<T>) -> Cplx<T> {
        self.spectral_mean(z, 1)
    }

    /// `(1/N) Σ_k (λ_k - z)^{-power}`, pairwise summed.
    pub fn spectral_mean(&self, z: Cplx<T>, power: i32) -> Cplx<T> {
        let terms: Vec<Cplx<T>> = self
            .eigenvalues
            .iter()
            .map(|&l| (cplx(l, T::zero()) - z).powi(-power))
            .collect();
        pairwise(&terms) / T::count(self.n())
    }

    pub fn resolvent(self: &Arc<Self>, point: SpectralPoint<T>) -> Result<ResolventCache<T>> {
        ResolventCache::new(Arc::clone(self), point)
    }
}

/// Eigenvalues and eigenvectors (row `k` ↔ eigenvalue `k`), descending.
pub fn eigenpairs<T: Real>(h: &NormalizedAdjacency<T>) -> Result<(Vec<T>, Matrix<T>)> {
    if h.n() > DENSE_LIMIT {
        return Err(Error::SizeLimit {
            size: h.n(),
            limit: DENSE_LIMIT,
        });
    }
    Ok(symmetric_eigen(h.dense()))
}

pub(crate) fn pairwise<T: Real>(xs: &[Cplx<T>]) -> Cplx<T> {
    if xs.len() <= 8 {
        return xs.iter().fold(cplx(T::zero(), T::zero()), |a, &b| a + b);
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise(a) + pairwise(b)
}

/// `G(z)` for one spectral point. Row `j` of `x` holds `(T - z)^{-1} q_j`, so
/// `G_ij = q_i · x_j`.
#[derive(Debug)]
pub struct ResolventCache<T: Real> {
    fact: Arc<SpectralFactorization<T>>,
    point: SpectralPoint<T>,
    x: Matrix<Cplx<T>>,
    diagonal: OnceLock<Vec<Cplx<T>>>,
}

impl<T: Real> ResolventCache<T> {
    pub fn new(fact: Arc<SpectralFactorization<T>>, point: SpectralPoint<T>) -> Result<Self> {
        if point.eta().to_f64_lossy() < MIN_ETA {
            return Err(Error::SpectralDomain(format!(
                "Im z = {} below {MIN_ETA:e}",
                point.eta()
            )));
        }
        let z = point.z();
        let gap = fact
            .eigenvalues
            .iter()
            .map(|&l| (cplx(l, T::zero()) - z).norm())
            .fold(T::infinity(), T::min);
        if gap.to_f64_lossy() < RESONANCE_GAP {
            return Err(Error::Resonance(format!("z within {gap} of the spectrum")));
        }
        let n = fact.n();
        let lu = ShiftedTridiagonal::factor(&fact.diag, &fact.off, z)?;
        let mut x = Matrix::zeros(n, n);
        for j in 0..n {
            lu.solve_real(fact.q.row(j), x.row_mut(j));
        }
        Ok(Self {
            fact,
            point,
            x,
            diagonal: OnceLock::new(),
        })
    }

    pub fn point(&self) -> SpectralPoint<T> {
        self.point
    }

    pub fn n(&self) -> usize {
        self.fact.n()
    }

    pub fn factorization(&self) -> &Arc<SpectralFactorization<T>> {
        &self.fact
    }

    pub fn adjacency(&self) -> &NormalizedAdjacency<T> {
        &self.fact.h
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.fact.eigenvalues
    }

    pub fn entry(&self, i: usize, j: usize) -> Cplx<T> {
        let q = self.fact.q.row(i);
        let x = self.x.row(j);
        let (mut re, mut im) = (T::zero(), T::zero());
        for (a, b) in q.iter().zip(x) {
            re += *a * b.re;
            im += *a * b.im;
        }
        cplx(re, im)
    }

    pub fn row(&self, i: usize) -> Vec<Cplx<T>> {
        (0..self.n()).map(|j| self.entry(i, j)).collect()
    }

    /// `G_ii` for all `i` (computed once).
    pub fn diagonal(&self) -> &[Cplx<T>] {
        self.diagonal
            .get_or_init(|| (0..self.n()).map(|i| self.entry(i, i)).collect())
    }

    /// Submatrix `G[rows, cols]`.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Matrix<Cplx<T>> {
        Matrix::from_fn(rows.len(), cols.len(), |a, b| self.entry(rows[a], cols[b]))
    }

    pub fn full(&self) -> Matrix<Cplx<T>> {
        let n = self.n();
        let all: Vec<usize> = (0..n).collect();
        self.block(&all, &all)
    }

    /// `m_N = (1/N) Σ_k (λ_k - z)^{-1}` from the spectrum.
    pub fn m_n(&self) -> Cplx<T> {
        self.fact.stieltjes(self.point.z())
    }

    /// `m_N = (1/N) Tr G` from the diagonal entries.
    pub fn m_n_trace(&self) -> Cplx<T> {
        pairwise(self.diagonal()) / T::count(self.n())
    }

    /// `∂_z m_N = (1/N) Σ_k (λ_k - z)^{-2}`.
    pub fn dz_m_n(&self) -> Cplx<T> {
        self.fact.spectral_mean(self.point.z(), 2)
    }

    /// Edge-averaged minor diagonal `(1/(Nd)) Σ_{i~j} G^{(i)}_jj`, using
    /// `G^{(i)}_jj = G_jj - G_ji G_ij / G_ii`.
    pub fn q(&self) -> Result<Cplx<T>> {
        let g = self.adjacency().graph();
        let diag = self.diagonal();
        let tol = T::lit(RESONANCE_GAP);
        if let Some(i) = diag.iter().position(|x| x.norm() < tol) {
            return Err(Error::Resonance(format!("|G_{i}{i}| below {tol}")));
        }
        let mut terms = Vec::with_capacity(g.n() * g.d());
        for (i, j) in g.edges() {
            let gij = self.entry(i, j);
            let prod = gij * gij;
            terms.push(diag[j] - prod / diag[i]);
            terms.push(diag[i] - prod / diag[j]);
        }
        Ok(pairwise(&terms) / T::count(g.n() * g.d()))
    }

    /// `|Σ_j |G_ij|² - Im G_ii / η|`.
    pub fn ward_residual(&self, i: usize) -> T {
        let row = self.row(i);
        let mass: T = row.iter().map(|x| x.norm_sqr()).sum();
        (mass - row[i].im / self.point.eta()).abs()
    }

    /// `|Σ_j G_ij - 1/(d/√(d-1) - z)|`.
    pub fn row_sum_residual(&self, i: usize) -> T {
        let row = self.row(i);
        let s = pairwise(&row);
        let lam = self.adjacency().trivial_eigenvalue();
        (s - (cplx(lam, T::zero()) - self.point.z()).inv()).norm()
    }

    /// `max_i |((H - z) G e_j)_i - δ_ij|` for column `j`.
    pub fn column_residual(&self, j: usize) -> T {
        let h = self.adjacency();
        let col: Vec<Cplx<T>> = (0..self.n()).map(|i| self.entry(i, j)).collect();
        let z = self.point.z();
        (0..self.n())
            .map(|i| {
                let hx = h
                    .graph()
                    .neighbors(i)
                    .iter()
                    .fold(cplx(T::zero(), T::zero()), |a, &k| a + col[k])
                    * h.scale();
                let target = if i == j { T::one() } else { T::zero() };
                (hx - col[i] * z - cplx(target, T::zero())).norm()
            })
            .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RegularGraph;
    use crate::linalg::ComplexLu;
    use crate::sampler::SamplerConfig;

    #[test]
    fn small_eta_matches_dense_lu() {
        let g = SamplerConfig::uniform(200, 3, 5).sample_indexed(0).unwrap();
        let h = NormalizedAdjacency::<f64>::new(g);
        let fact = SpectralFactorization::new(h.clone()).unwrap();
        for eta in [1e-3, 1e-1] {
            let p = SpectralPoint::from_parts(2.0, eta).unwrap();
            let cache = fact.resolvent(p).unwrap();
            let a = h.dense().map(|x| cplx(x, 0.0));
            let mut a = a;
            for i in 0..200 {
                a[(i, i)] -= p.z();
            }
            let inv = ComplexLu::factor(a).unwrap().inverse();
            let scale = (0..200).map(|i| inv[(i, i)].norm()).fold(0.0, f64::max);
            for (i, j) in [(0, 0), (3, 17), (199, 45), (10, 11)] {
                assert!((cache.entry(i, j) - inv[(i, j)]).norm() < 1e-9 * scale.max(1.0));
            }
            assert!(cache.column_residual(7) < 1e-8);
        }
    }

    #[test]
    fn rejects_resonant_points() {
        let k4 = RegularGraph::complete(4).unwrap();
        let fact = SpectralFactorization::new(NormalizedAdjacency::<f64>::new(k4)).unwrap();
        let p = SpectralPoint::from_parts(-0.5f64.sqrt(), 1e-11).unwrap();
        assert!(matches!(fact.resolvent(p), Err(Error::Resonance(_))));
        let p = SpectralPoint::from_parts(0.0, 1e-13).unwrap();
        assert!(matches!(fact.resolvent(p), Err(Error::SpectralDomain(_))));
    }
}
