//! Exact 3×3 integer matrices and the small floating-point geometry shared
//! by the other modules.

mod linalg;
mod matrix;
mod vector;

pub use linalg::{
    entrywise_norm_2x2, induced_one_norm_2x2, inf_norm_restricted, plane_cube_vertices,
    row_sum_norm_2x2, Mat2, NormKind, RealMatrix3,
};
pub use matrix::{mat_det, mat_mul, IntMatrix3};
pub use vector::{normalize_to_simplex, pi_projection, SimplexPoint, Vec2, Vec3};
