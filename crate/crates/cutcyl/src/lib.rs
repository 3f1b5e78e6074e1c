//! Geodesics, the half-period function and exact cut loci of cylinders of
//! revolution `dt^2 + m(t)^2 dtheta^2` with symmetric, curvature-monotone
//! warping functions, plus a brute-force geodesic-fan oracle that verifies
//! the closed-form answers against empirical distances.

pub mod config;
pub mod cutlocus;
pub mod error;
pub mod geodesics;
pub mod numfmt;
pub mod oracle;
pub mod profile;
pub mod quadrature;
pub mod roots;

pub use error::{Error, Result};
pub use profile::{analyze, curvature, xi, MonotoneClass, ProfileAnalysis, WarpingProfile};
