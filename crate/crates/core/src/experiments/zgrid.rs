use serde::{Deserialize, Serialize};

use crate::analytic::{edge_constant, SpectralPoint};
use crate::error::Result;

/// How the imaginary part of a grid point scales with `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZScale {
    /// `im` as given.
    Fixed,
    /// `im · N^{-2/3}`.
    N23,
    /// `im · (𝒜 N)^{-2/3}` with the edge constant `𝒜`.
    Edge,
}

/// Grid point recipe `z(N) = re + i · im · s(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZRecipe {
    pub re: f64,
    pub im: f64,
    pub scale: ZScale,
}

impl ZRecipe {
    pub fn fixed(re: f64, im: f64) -> Self {
        Self { re, im, scale: ZScale::Fixed }
    }

    pub fn n23(re: f64, im: f64) -> Self {
        Self { re, im, scale: ZScale::N23 }
    }

    pub fn edge(re: f64, im: f64) -> Self {
        Self { re, im, scale: ZScale::Edge }
    }

    pub fn eta(&self, n: usize, d: usize) -> Result<f64> {
        let s = match self.scale {
            ZScale::Fixed => 1.0,
            ZScale::N23 => (n as f64).powf(-2.0 / 3.0),
            ZScale::Edge => (edge_constant::<f64>(d)? * n as f64).powf(-2.0 / 3.0),
        };
        Ok(self.im * s)
    }

    pub fn at(&self, n: usize, d: usize) -> Result<SpectralPoint<f64>> {
        SpectralPoint::from_parts(self.re, self.eta(n, d)?)
    }
}
