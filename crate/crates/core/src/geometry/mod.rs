//! Exact polyhedral kernel: H-polyhedra, double description, polytopes with
//! both representations, and irredundant unions.

mod dd;
mod hpoly;
mod polytope;

pub use dd::{dd_hrep_to_vrep, VPolytope};
pub use hpoly::{Constraint, ConstraintKind, HPolyhedron};
pub use polytope::{
    affine_dim, barycenter, hull_vrep_to_hrep, intersect, irredundant_union, is_subset,
    relative_interior_point, Polytope,
};
