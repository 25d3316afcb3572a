//! The Reverse map f_R on Δ, its cocycles and cylinders, and the sorted variant.

pub mod branch;
pub mod cylinder;
pub mod dfield;
pub mod sorted;

pub use branch::{
    branch_image, classify, jump_step, orbit, step, Branch, Word, GASKET_GUARD, JUMP_CAP, M1, M2, M3, M4,
};
pub use cylinder::{
    branch_product, cocycle_matrix, cylinder_data, inverse_branch, jacobian, renyi_ratio, row_norm_check,
    shoelace, Cylinder,
};
pub use dfield::{d_field, h_matrix, hpweg_sides, max_log_d_norm, pi_m_h, AffineField2x2};
pub use sorted::{
    dual_branch_image, dual_classify, dual_domain_status, dual_step, natural_extension_step, sorted_classify,
    sorted_cocycle, sorted_cylinder, sorted_d_matrix, sorted_density_kernel, sorted_max_log_d_norm,
    sorted_product, sorted_step, DomainStatus, SortedBranch, SortedCylinder, SortedWord,
};
