use crate::error::{Error, Result};
use crate::graph::RegularGraph;
use crate::linalg::{symmetric_eigenvalues, Matrix};
use crate::resolvent::DENSE_LIMIT;
use crate::scalar::Real;

/// `H = A / √(d-1)`.
#[derive(Clone, Debug)]
pub struct NormalizedAdjacency<T: Real> {
    graph: RegularGraph,
    scale: T,
}

impl<T: Real> NormalizedAdjacency<T> {
    pub fn new(graph: RegularGraph) -> Self {
        let scale = T::count(graph.d() - 1).sqrt().recip();
        Self { graph, scale }
    }

    pub fn graph(&self) -> &RegularGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn d(&self) -> usize {
        self.graph.d()
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    /// The eigenvalue `d/√(d-1)` of the constant vector.
    pub fn trivial_eigenvalue(&self) -> T {
        T::count(self.d()) * self.scale
    }

    pub fn dense(&self) -> Matrix<T> {
        let n = self.n();
        let mut h = Matrix::zeros(n, n);
        for u in 0..n {
            for &v in self.graph.neighbors(u) {
                h[(u, v)] = self.scale;
            }
        }
        h
    }

    /// Full spectrum, descending.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        if self.n() > DENSE_LIMIT {
            return Err(Error::SizeLimit {
                size: self.n(),
                limit: DENSE_LIMIT,
            });
        }
        Ok(symmetric_eigenvalues(self.dense()))
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.n())
            .map(|u| self.graph.neighbors(u).iter().map(|&v| x[v]).sum::<T>() * self.scale)
            .collect()
    }
}
