//! Upper bounds on the second Lyapunov exponent, the invariant measure, and
//! Monte-Carlo estimates of the Lyapunov spectrum.

pub mod bounds;
pub mod enumerate;
pub mod measure;
pub mod quadrature;
pub mod spectrum;
pub mod witness;

pub use bounds::{
    bound_report, l1_bound, l1_bound_square, l1_log_factor, l2_bound, l2_enumerate, sorted_l1_bound,
    sorted_l_bounds, extended_recheck, uniform_cylinder_mass, BoundReport, L2Result, RecheckReport,
};
pub use enumerate::{Leaf, PrefixSums, Sums, Variant};
pub use measure::{density, density_xy, invariance_check, mass, InvarianceReport, INVARIANCE_BOXES};
pub use quadrature::{integrate_rect, integrate_triangle, QuadResult};
pub use spectrum::{approx_exponent, mc_l2_integral, mc_spectrum, McConfig, SpectrumEstimate};
pub use witness::{convergence_witness, WitnessConfig, WitnessReport};
