//! Dense linear algebra used by the resolvent and tree kernels.
//!
//! Everything here is generic over [`Real`](crate::Real); the matrices are small
//! (local trees, minors) or moderately sized (graph spectra up to a few thousand
//! vertices) so plain row-major storage is used throughout.

mod dense;
mod lu;
mod tridiag;

pub use dense::Matrix;
pub use lu::{inverse_with_condition, norm1, ComplexLu};
pub use tridiag::{symmetric_eigen, symmetric_eigenvalues, tridiagonal_eigen, ShiftedTridiagonal, Tridiagonalization};
