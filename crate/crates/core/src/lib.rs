//! Spectral statistics of random regular graphs: samplers, resolvents,
//! local resampling by switchings, and Monte-Carlo experiments near the
//! spectral edge.
//!
//! The numerical core is generic over the real scalar ([`Real`], `f32` or
//! `f64`); the aliases at the bottom of this file fix it to `f64`.

pub mod analytic;
pub mod config;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod linalg;
pub mod resampling;
pub mod resolvent;
pub mod run;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{cplx, Cplx, Real};

/// Double-precision complex scalar.
pub type C64 = Cplx<f64>;
/// Double-precision instantiations of the generic core types.
pub type Point = analytic::SpectralPoint<f64>;
pub type Adjacency = resolvent::NormalizedAdjacency<f64>;
pub type Factorization = resolvent::SpectralFactorization<f64>;
pub type Resolvent = resolvent::ResolventCache<f64>;
pub type TreeOperator = analytic::WeightedTreeOperator<f64>;
