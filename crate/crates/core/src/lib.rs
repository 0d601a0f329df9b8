//! Differential invariant signatures of planar curves.
//!
//! The crate computes Euclidean and equi-affine signatures of sampled curves,
//! reconstructs curves from curvature or signature data, bounds how far apart
//! two curves can be given how close their signatures are, and decides
//! congruence of open and closed curves.
//!
//! ```
//! use sigcurve::curve::{resample_by_arclength, shapes};
//! use sigcurve::signature::euclidean_signature;
//!
//! let arc = resample_by_arclength(&shapes::circle(2.0, 512), 512).unwrap();
//! let sig = euclidean_signature(&arc, 1).unwrap();
//! assert!(sig.rows().iter().all(|r| (r[0] - 0.5).abs() < 1e-4));
//! ```

pub mod config;
pub mod congruence;
pub mod curve;
pub mod error;
pub mod io;
pub mod reconstruction;
pub mod robustness;
pub mod signature;
pub mod spline;

pub use config::{AffineExponent, Config, OutputFormat};
pub use error::{Result, SigError};

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Mat2 = nalgebra::Matrix2<f64>;
