//! Householder tridiagonalization of a real symmetric matrix, implicit-shift QL
//! on the tridiagonal form, and complex shifted tridiagonal solves.
//!
//! `H = Q T Q^T` is computed once per graph; afterwards any resolvent entry
//! `((H - z)^-1)_{ij} = q_i^T (T - z)^-1 q_j` costs one `O(N)` tridiagonal solve per
//! column plus an `O(N)` dot product, for every `z`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{cplx, Cplx, Real};

/// `A = Q T Q^T` with `T` symmetric tridiagonal and `Q` orthogonal.
#[derive(Clone, Debug)]
pub struct Tridiagonalization<T: Real> {
    diag: Vec<T>,
    offdiag: Vec<T>,
    /// Row-major `Q`; row `i` is `q_i`. `None` when not accumulated.
    q: Option<Matrix<T>>,
}

impl<T: Real> Tridiagonalization<T> {
    /// Reduce the symmetric matrix `a` (full storage, only symmetry is assumed).
    pub fn new(mut a: Matrix<T>, accumulate: bool) -> Self {
        assert!(a.is_square(), "tridiagonalization needs a square matrix");
        let n = a.rows();
        let mut diag = vec![T::zero(); n];
        let mut offdiag = vec![T::zero(); n.saturating_sub(1)];
        let mut betas = vec![T::zero(); n.saturating_sub(2)];
        if n == 0 {
            return Self { diag, offdiag, q: accumulate.then(|| Matrix::zeros(0, 0)) };
        }

        // p holds beta * B v for the pending reflector of the current step.
        let mut p = vec![T::zero(); n];
        let mut w = vec![T::zero(); n];
        let mut pending: Option<(T, T)> = None; // (beta, alpha) of row k
        if n > 2 {
            pending = Some(householder_in_place(&mut a.row_mut(0)[1..]));
            let (beta, _) = pending.unwrap();
            let (top, rest) = a.as_mut_slice().split_at_mut(n);
            let v = &top[1..];
            for (i, row) in rest.chunks_exact(n).enumerate() {
                p[i] = beta * dot(&row[1..], v);
            }
        }

        for k in 0..n.saturating_sub(2) {
            let (beta, alpha) = pending.take().expect("reflector prepared");
            diag[k] = a[(k, k)];
            offdiag[k] = alpha;
            betas[k] = beta;
            let m = n - k - 1;
            let (head, tail) = a.as_mut_slice().split_at_mut((k + 1) * n);
            let v = &head[k * n + k + 1..k * n + n];
            if beta != T::zero() {
                let half_k = beta * T::lit(0.5) * dot(&p[..m], v);
                for i in 0..m {
                    w[i] = p[i] - half_k * v[i];
                }
            }
            // First trailing row: update, then build the next reflector from it.
            let next_exists = k + 1 < n - 2;
            let (first, others) = tail.split_at_mut(n);
            let first_row = &mut first[k + 1..];
            if beta != T::zero() {
                rank2_update(first_row, v, &w[..m], v[0], w[0]);
            }
            let mut next_beta = T::zero();
            if next_exists {
                let hh = householder_in_place(&mut first_row[1..]);
                next_beta = hh.0;
                pending = Some(hh);
            }
            let next_v = &first_row[1..];
            for (ii, row) in others.chunks_exact_mut(n).enumerate() {
                let i = ii + 1;
                let row = &mut row[k + 1..];
                if beta != T::zero() {
                    rank2_update(row, v, &w[..m], v[i], w[i]);
                }
                if next_exists {
                    p[ii] = next_beta * dot(&row[1..], next_v);
                }
            }
        }
        if n >= 2 {
            diag[n - 2] = a[(n - 2, n - 2)];
            diag[n - 1] = a[(n - 1, n - 1)];
            offdiag[n - 2] = a[(n - 2, n - 1)];
        } else {
            diag[0] = a[(0, 0)];
        }

        let q = accumulate.then(|| accumulate_q(&a, &betas));
        Self { diag, offdiag, q }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[T] {
        &self.offdiag
    }

    pub fn q(&self) -> Option<&Matrix<T>> {
        self.q.as_ref()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        tridiagonal_eigen(&self.diag, &self.offdiag, false).0
    }
}

#[inline]
fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = [T::zero(); 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
fn rank2_update<T: Real>(row: &mut [T], v: &[T], w: &[T], vi: T, wi: T) {
    for ((x, &vj), &wj) in row.iter_mut().zip(v).zip(w) {
        *x -= vi * wj + wi * vj;
    }
}

/// Overwrites `x` with the Householder vector `v` such that
/// `(I - beta v v^T) x = alpha e_1`; returns `(beta, alpha)`.
fn householder_in_place<T: Real>(x: &mut [T]) -> (T, T) {
    let x0 = x[0];
    let sigma: T = x[1..].iter().map(|&t| t * t).sum();
    if sigma == T::zero() {
        x.iter_mut().for_each(|t| *t = T::zero());
        return (T::zero(), x0);
    }
    let norm = (x0 * x0 + sigma).sqrt();
    let alpha = if x0 > T::zero() { -norm } else { norm };
    let v0 = x0 - alpha;
    x[0] = v0;
    let beta = -T::one() / (alpha * v0);
    (beta, alpha)
}

/// Backward accumulation `Q = H_0 H_1 ... H_{n-3}` from reflectors stored in the
/// strict upper rows of `a`.
fn accumulate_q<T: Real>(a: &Matrix<T>, betas: &[T]) -> Matrix<T> {
    let n = a.rows();
    let mut q = Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() });
    let mut w = vec![T::zero(); n];
    for k in (0..betas.len()).rev() {
        let beta = betas[k];
        if beta == T::zero() {
            continue;
        }
        let v = &a.row(k)[k + 1..];
        let w = &mut w[k + 1..];
        w.iter_mut().for_each(|t| *t = T::zero());
        for (i, &vi) in v.iter().enumerate() {
            if vi == T::zero() {
                continue;
            }
            for (wj, &qj) in w.iter_mut().zip(&q.row(k + 1 + i)[k + 1..]) {
                *wj += vi * qj;
            }
        }
        for (i, &vi) in v.iter().enumerate() {
            let f = beta * vi;
            if f == T::zero() {
                continue;
            }
            for (qj, &wj) in q.row_mut(k + 1 + i)[k + 1..].iter_mut().zip(w.iter()) {
                *qj -= f * wj;
            }
        }
    }
    q
}

/// Implicit-shift QL iteration on the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples `i` and `i + 1`).
///
/// Returns eigenvalues in descending order and, when requested, the matrix whose
/// row `k` is the unit eigenvector of eigenvalue `k` (in the basis of `T`).
pub fn tridiagonal_eigen<T: Real>(
    diag: &[T],
    off: &[T],
    want_vectors: bool,
) -> (Vec<T>, Option<Matrix<T>>) {
    let n = diag.len();
    let init = want_vectors
        .then(|| Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() }));
    tql(diag, off, init)
}

/// QL iteration with an arbitrary initial row basis `z0` (row `i` is rotated
/// along with eigenvalue slot `i`).
fn tql<T: Real>(diag: &[T], off: &[T], mut z: Option<Matrix<T>>) -> (Vec<T>, Option<Matrix<T>>) {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_mut() {
                        let (lo, hi) = z.as_mut_slice().split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = z.map(|z| Matrix::from_fn(n, n, |i, j| z[(order[i], j)]));
    (values, vectors)
}

/// Eigenvalues of a symmetric matrix, descending.
pub fn symmetric_eigenvalues<T: Real>(a: Matrix<T>) -> Vec<T> {
    Tridiagonalization::new(a, false).eigenvalues()
}

/// Full symmetric eigendecomposition: eigenvalues descending and a matrix whose
/// row `k` is the eigenvector for eigenvalue `k`.
pub fn symmetric_eigen<T: Real>(a: Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let tri = Tridiagonalization::new(a, true);
    let qt = tri.q().expect("accumulated").transpose();
    let (values, vectors) = tql(&tri.diag, &tri.offdiag, Some(qt));
    (values, vectors.expect("vectors requested"))
}

/// LU factors of `T - z` for a real symmetric tridiagonal `T` and complex `z`.
///
/// No pivoting: every leading principal block of `T - z` has imaginary part
/// `-Im z < 0`, so it is nonsingular for `z` off the real axis.
#[derive(Clone, Debug)]
pub struct ShiftedTridiagonal<T: Real> {
    off: Vec<T>,
    lower: Vec<Cplx<T>>,
    pivots: Vec<Cplx<T>>,
}

impl<T: Real> ShiftedTridiagonal<T> {
    pub fn factor(diag: &[T], off: &[T], z: Cplx<T>) -> Result<Self> {
        let n = diag.len();
        let mut lower = vec![cplx(T::zero(), T::zero()); n];
        let mut pivots = vec![cplx(T::zero(), T::zero()); n];
        for i in 0..n {
            let mut u = cplx(diag[i], T::zero()) - z;
            if i > 0 {
                let l = cplx(off[i - 1], T::zero()) / pivots[i - 1];
                lower[i] = l;
                u = u - l * off[i - 1];
            }
            if u.norm() == T::zero() || !u.re.is_finite() || !u.im.is_finite() {
                return Err(Error::Resonance(format!("zero pivot at position {i}")));
            }
            pivots[i] = u;
        }
        Ok(Self { off: off.to_vec(), lower, pivots })
    }

    /// Solve `(T - z) x = b` for real right-hand side `b`.
    pub fn solve_real(&self, b: &[T], x: &mut [Cplx<T>]) {
        let n = self.pivots.len();
        for i in 0..n {
            let mut y = cplx(b[i], T::zero());
            if i > 0 {
                y = y - self.lower[i] * x[i - 1];
            }
            x[i] = y;
        }
        for i in (0..n).rev() {
            let mut y = x[i];
            if i + 1 < n {
                y = y - x[i + 1] * self.off[i];
            }
            x[i] = y / self.pivots[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> Matrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.random_range(-1.0..1.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        a
    }

    #[test]
    fn reconstructs_matrix_from_tridiagonal_form() {
        for n in [1, 2, 3, 7, 30] {
            let a = random_symmetric(n, n as u64);
            let tri = Tridiagonalization::new(a.clone(), true);
            let q = tri.q().unwrap();
            let t = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    tri.diag()[i]
                } else if j == i + 1 {
                    tri.offdiag()[i]
                } else if i == j + 1 {
                    tri.offdiag()[j]
                } else {
                    0.0
                }
            });
            let back = q.matmul(&t).matmul(&q.transpose());
            for i in 0..n {
                for j in 0..n {
                    assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-12, "n={n} ({i},{j})");
                }
            }
            let qtq = q.transpose().matmul(q);
            for i in 0..n {
                assert!((qtq[(i, i)] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenpairs_satisfy_residual() {
        let n = 40;
        let a = random_symmetric(n, 11);
        let (vals, vecs) = symmetric_eigen(a.clone());
        for k in 0..n {
            let v = vecs.row(k);
            let av = a.matvec(v);
            let res: f64 = av.iter().zip(v).map(|(x, y)| (x - vals[k] * y).powi(2)).sum();
            assert!(res.sqrt() < 1e-11);
        }
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
        assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-10);
    }

    #[test]
    fn shifted_solve_matches_dense_inverse() {
        let d = [1.0, -0.5, 0.25, 2.0];
        let e = [0.3, -1.0, 0.7];
        let z = cplx(0.4, 0.05);
        let f = ShiftedTridiagonal::factor(&d, &e, z).unwrap();
        let dense = Matrix::from_fn(4, 4, |i, j| {
            let v = if i == j {
                d[i]
            } else if j == i + 1 {
                e[i]
            } else if i == j + 1 {
                e[j]
            } else {
                0.0
            };
            cplx(v, 0.0) - if i == j { z } else { cplx(0.0, 0.0) }
        });
        let b = [1.0, 0.0, -2.0, 0.5];
        let mut x = vec![cplx(0.0, 0.0); 4];
        f.solve_real(&b, &mut x);
        let r = dense.matvec(&x);
        for i in 0..4 {
            assert!((r[i] - cplx(b[i], 0.0)).norm() < 1e-12);
        }
    }
}
