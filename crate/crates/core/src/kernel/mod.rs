//! Dimension-generic convex geometry for d ≤ 6: hulls, V↔H conversion,
//! Minkowski sums, intersection, membership, support functions and the
//! Chebyshev ball.
//!
//! Everything is floating point under an explicit [`Tolerance`]. Flat sets
//! are handled by working in their affine hull; the empty set is a value
//! (`VPolytope::is_empty`, `HPolytope::is_empty`), never an error.

mod dd;
mod halfspace;
mod hpolytope;
mod hull;
pub(crate) mod linalg;
mod lp;
mod ops;
mod tolerance;
mod vpolytope;

pub use halfspace::{
    chebyshev_center, h_to_v, h_to_v_incremental, intersect, remove_redundant, stack, Chebyshev,
};
pub use hpolytope::HPolytope;
pub use hull::{conic_hull, convex_hull, double_description, v_to_h};
pub use ops::{
    contains, distance_l1, minkowski_sum, project, support, vertices_contained, Membership,
};
pub use tolerance::Tolerance;
pub use vpolytope::VPolytope;
