//! Equidistant map projections of the conic family and their distortion.
//!
//! The crate builds the classical equidistant projections — the one- and
//! two-standard-parallel cones, the azimuthal equidistant map as the unit
//! cone, and the equidistant cylindrical map — and measures how far each is
//! from an isometry: per-point scale factors and Tissot indicatrices,
//! region-wide bi-Lipschitz extrema and the metrical distortion
//! v = log(L/l), plus selection of the standard parallels minimizing v over
//! a spherical annulus with an equioscillation certificate.
//!
//! Spherical-geometry primitives (geodesics, midpoints, triangle solving)
//! live in [`sphere`]; the classical angle-sum and midline propositions are
//! exercised as impossibility oracles by the test suite.

pub mod distortion;
pub mod error;
pub mod io;
pub mod optimizer;
pub mod projection;
pub mod render;
pub mod sphere;

pub use error::{Error, Result};
pub use projection::{ConicSpec, PlanePoint};
pub use sphere::GeoPoint;
