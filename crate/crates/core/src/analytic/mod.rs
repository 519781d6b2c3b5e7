//! Closed-form Stieltjes transforms, tree Green's functions and the weighted
//! tree operator `P(T, z, Δ)` with its root maps `X_ℓ`, `Y_ℓ`.

mod expansion;
mod spectral;
mod stieltjes;
mod tree;

pub use expansion::{y_expansion_coeffs, ExpansionCoefficients};
pub use spectral::SpectralPoint;
pub use stieltjes::{
    check_degree, edge_constant, km_cdf, km_density, m_d, m_d_radical, m_sc,
};
pub use tree::{
    ary_tree, forest_column, regular_tree, tree_green_ary, tree_green_regular,
    weighted_tree_operator, x_ell, x_ell_matrix, y_ell, y_ell_matrix, RootedTree,
    WeightedTreeOperator, DENSE_TREE_LIMIT, MAX_CONDITION,
};
