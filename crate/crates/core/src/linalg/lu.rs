use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Cplx, Real};

/// LU factorization with partial pivoting of a square complex matrix.
#[derive(Clone, Debug)]
pub struct ComplexLu<T: Real> {
    lu: Matrix<Cplx<T>>,
    perm: Vec<usize>,
}

impl<T: Real> ComplexLu<T> {
    pub fn factor(mut a: Matrix<Cplx<T>>) -> Result<Self> {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a
            .as_slice()
            .iter()
            .map(|x| x.norm())
            .fold(T::zero(), T::max);
        let tol = scale * T::epsilon() * T::count(n.max(1)) * T::lit(1e-3);
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(best > tol) || best == T::zero() {
                return Err(Error::Singular { cond: f64::INFINITY });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(p, j)];
                    a[(p, j)] = tmp;
                }
            }
            let pivot_inv = a[(k, k)].inv();
            let (top, bottom) = a.as_mut_slice().split_at_mut((k + 1) * n);
            let pivot_row = &top[k * n..(k + 1) * n];
            for row in bottom.chunks_exact_mut(n) {
                let f = row[k] * pivot_inv;
                row[k] = f;
                if f.norm_sqr() == T::zero() {
                    continue;
                }
                for (x, &u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *x = *x - f * u;
                }
            }
        }
        Ok(Self { lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<Cplx<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in 0..i {
                s = s - row[j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut s = x[i];
            for j in i + 1..n {
                s = s - row[j] * x[j];
            }
            x[i] = s / row[i];
        }
        x
    }

    pub fn inverse(&self) -> Matrix<Cplx<T>> {
        let n = self.dim();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![Cplx::new(T::zero(), T::zero()); n];
        for j in 0..n {
            e[j] = Cplx::new(T::one(), T::zero());
            let col = self.solve(&e);
            e[j] = Cplx::new(T::zero(), T::zero());
            for (i, v) in col.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        inv
    }
}

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1<T: Real>(m: &Matrix<Cplx<T>>) -> T {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| m[(i, j)].norm()).sum::<T>())
        .fold(T::zero(), T::max)
}

/// Inverse together with the 1-norm condition number `|A|_1 |A^-1|_1`.
pub fn inverse_with_condition<T: Real>(a: &Matrix<Cplx<T>>) -> Result<(Matrix<Cplx<T>>, T)> {
    let norm_a = norm1(a);
    let inv = ComplexLu::factor(a.clone())?.inverse();
    let cond = norm_a * norm1(&inv);
    Ok((inv, cond))
}
