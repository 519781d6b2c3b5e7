//! Resolvent `G(z) = (H - z)^{-1}` of the normalized adjacency matrix.
//!
//! The z-independent work (Householder reduction `H = Q T Qᵀ` and the
//! spectrum) is done once per graph in [`SpectralFactorization`]; each
//! [`ResolventCache`] then costs `O(N²)` and serves any entry in `O(N)`.

mod adjacency;
mod cache;
mod locallaw;
mod minor;

pub use adjacency::NormalizedAdjacency;
pub use cache::{eigenpairs, ResolventCache, SpectralFactorization, DENSE_LIMIT, MIN_ETA, RESONANCE_GAP};
pub use locallaw::{local_law_error, sample_pairs, LocalLawReport};
pub use minor::{direct_minor, green_minor, DirectMinor, SchurMinor};
