//! The Reverse two-dimensional continued fraction algorithm: exact cocycles
//! and cylinders, enumeration bounds on the second Lyapunov exponent, and the
//! S-adic languages of the attached substitutions.
//!
//! Numerical code is generic over [`Scalar`]; the aliases below fix it to
//! binary64.

pub mod error;
pub mod exactlin;
pub mod lyapunov_bounds;
pub mod reverse_cfa;
pub mod sadic;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Vec2F64 = exactlin::Vec2<f64>;
pub type Vec3F64 = exactlin::Vec3<f64>;
pub type SimplexPointF64 = exactlin::SimplexPoint<f64>;
pub type RealMatrix3F64 = exactlin::RealMatrix3<f64>;
pub type Mat2F64 = exactlin::Mat2<f64>;
pub type CylinderF64 = reverse_cfa::Cylinder<f64>;
pub type SortedCylinderF64 = reverse_cfa::SortedCylinder<f64>;
pub type AffineField2x2F64 = reverse_cfa::AffineField2x2<f64>;
pub type L2ResultF64 = lyapunov_bounds::L2Result<f64>;
pub type LeafF64 = lyapunov_bounds::Leaf<f64>;

/// Library version embedded in CLI output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
