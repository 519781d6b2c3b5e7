use std::collections::HashMap;

use crate::analytic::SpectralPoint;
use crate::error::{Error, Result};
use crate::linalg::{ComplexLu, Matrix};
use crate::resolvent::{NormalizedAdjacency, ResolventCache};
use crate::scalar::{cplx, Cplx, Real};

/// `G^{(X)}` through the block Schur complement
/// `G^{(X)} = G - G_{·X} (G_{XX})^{-1} G_{X·}` on the full resolvent.
#[derive(Debug)]
pub struct SchurMinor<'a, T: Real> {
    cache: &'a ResolventCache<T>,
    removed: Vec<usize>,
    block_inv: Matrix<Cplx<T>>,
}

pub fn green_minor<'a, T: Real>(
    cache: &'a ResolventCache<T>,
    removed: &[usize],
) -> Result<SchurMinor<'a, T>> {
    let block = cache.block(removed, removed);
    let block_inv = if removed.is_empty() {
        block
    } else {
        ComplexLu::factor(block)
            .map_err(|_| Error::Resonance("G restricted to the removed set is singular".into()))?
            .inverse()
    };
    Ok(SchurMinor {
        cache,
        removed: removed.to_vec(),
        block_inv,
    })
}

impl<T: Real> SchurMinor<'_, T> {
    pub fn removed(&self) -> &[usize] {
        &self.removed
    }

    pub fn entry(&self, x: usize, y: usize) -> Cplx<T> {
        assert!(
            !self.removed.contains(&x) && !self.removed.contains(&y),
            "entry of a removed vertex"
        );
        let k = self.removed.len();
        let gx: Vec<Cplx<T>> = self.removed.iter().map(|&r| self.cache.entry(x, r)).collect();
        let gy: Vec<Cplx<T>> = self.removed.iter().map(|&r| self.cache.entry(r, y)).collect();
        let mut corr = cplx(T::zero(), T::zero());
        for a in 0..k {
            for b in 0..k {
                corr = corr + gx[a] * self.block_inv[(a, b)] * gy[b];
            }
        }
        self.cache.entry(x, y) - corr
    }
}

/// `G^{(X)}` by inverting `H - z` with the rows and columns of `X` deleted.
#[derive(Debug)]
pub struct DirectMinor<T: Real> {
    index: HashMap<usize, usize>,
    inv: Matrix<Cplx<T>>,
}

impl<T: Real> DirectMinor<T> {
    pub fn entry(&self, x: usize, y: usize) -> Cplx<T> {
        self.inv[(self.index[&x], self.index[&y])]
    }
}

pub fn direct_minor<T: Real>(
    h: &NormalizedAdjacency<T>,
    point: SpectralPoint<T>,
    removed: &[usize],
) -> Result<DirectMinor<T>> {
    let kept: Vec<usize> = (0..h.n()).filter(|v| !removed.contains(v)).collect();
    let index: HashMap<usize, usize> = kept.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let m = kept.len();
    let mut a = Matrix::zeros(m, m);
    for (k, &v) in kept.iter().enumerate() {
        a[(k, k)] = -point.z();
        for u in h.graph().neighbors(v) {
            if let Some(&l) = index.get(u) {
                a[(k, l)] = cplx(h.scale(), T::zero());
            }
        }
    }
    let inv = ComplexLu::factor(a)?.inverse();
    Ok(DirectMinor { index, inv })
}
