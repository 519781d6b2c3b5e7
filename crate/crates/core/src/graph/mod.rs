//! Graph representation and the combinatorial predicates on neighborhoods:
//! balls, excess, the typical-geometry event, and ball edge boundaries.

mod ball;
mod io;
mod params;
mod regular;

pub use ball::{
    ball, ball_avoiding, boundary_edges, distance, distance_avoiding, excess, is_forest,
    neighborhood_check, Ball, NeighborhoodReport,
};
pub use io::{parse_edge_list, read_edge_list, write_edge_list, format_edge_list};
pub use params::{tree_radius, Parameters, DEFAULT_ELL, DEFAULT_ETA_EXPONENT, DEFAULT_RADIUS_EXPONENT};
pub use regular::{RegularGraph, SimpleGraph};
