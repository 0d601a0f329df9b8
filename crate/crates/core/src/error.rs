use thiserror::Error;

use crate::reconstruction::FrameSolution;

/// Errors raised by the geometric and numerical operations of this crate.
///
/// Each variant corresponds to a distinct failure condition; [`SigError::name`]
/// returns the bare variant name, which the CLI prints on stderr.
#[derive(Debug, Error)]
pub enum SigError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("degenerate curve: total length {length:e} is below the meaningful threshold")]
    DegenerateCurve { length: f64 },
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),
    #[error("empty point set")]
    EmptySet,
    #[error("invalid group element: {0}")]
    InvalidGroup(String),
    #[error("curvature is not positive at arc length {s}; affine arc length undefined")]
    NonConvexArc { s: f64 },
    #[error("portrait is not graph-like: u-column not strictly monotone at sample {index}")]
    NotGraphLike { index: usize },
    #[error("portraits differ in kind or order")]
    KindMismatch,
    #[error("graphs have no common domain")]
    NoCommonDomain,
    #[error("operation requires a closed curve")]
    OpenCurve,
    #[error("graph function nearly vanishes (min |F| = {min_abs:e})")]
    VanishingF { min_abs: f64 },
    #[error("Picard iteration did not converge: last successive difference {last_difference:e}")]
    NoConvergence {
        last_difference: f64,
        partial: Box<FrameSolution>,
    },
    #[error("signature meets the forbidden hyperplane and no partition is available: {0}")]
    VertexObstruction(String),
    #[error("delta {delta} is not admissible (must be below {limit})")]
    DeltaTooLarge { delta: f64, limit: f64 },
    #[error("curvature is not strictly monotone")]
    NotMonotone,
    #[error("curve has a vertex (min |kappa'| = {min_abs:e})")]
    VertexPresent { min_abs: f64 },
    #[error("affine frame is singular")]
    FrameSingular,
    #[error("signature meets (x,0,...,0) at s = {s}")]
    ForbiddenPoint { s: f64 },
    #[error("signature is not simple")]
    SignatureNotSimple,
    #[error("curvature is constant; minimal period undefined")]
    ConstantCurvature,
    #[error("no vertex at s = {s} (|kappa'| = {derivative:e})")]
    NotAVertex { s: f64, derivative: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl SigError {
    pub fn name(&self) -> &'static str {
        match self {
            SigError::InvalidCurve(_) => "InvalidCurve",
            SigError::DegenerateCurve { .. } => "DegenerateCurve",
            SigError::InsufficientResolution(_) => "InsufficientResolution",
            SigError::EmptySet => "EmptySet",
            SigError::InvalidGroup(_) => "InvalidGroup",
            SigError::NonConvexArc { .. } => "NonConvexArc",
            SigError::NotGraphLike { .. } => "NotGraphLike",
            SigError::KindMismatch => "KindMismatch",
            SigError::NoCommonDomain => "NoCommonDomain",
            SigError::OpenCurve => "OpenCurve",
            SigError::VanishingF { .. } => "VanishingF",
            SigError::NoConvergence { .. } => "NoConvergence",
            SigError::VertexObstruction(_) => "VertexObstruction",
            SigError::DeltaTooLarge { .. } => "DeltaTooLarge",
            SigError::NotMonotone => "NotMonotone",
            SigError::VertexPresent { .. } => "VertexPresent",
            SigError::FrameSingular => "FrameSingular",
            SigError::ForbiddenPoint { .. } => "ForbiddenPoint",
            SigError::SignatureNotSimple => "SignatureNotSimple",
            SigError::ConstantCurvature => "ConstantCurvature",
            SigError::NotAVertex { .. } => "NotAVertex",
            SigError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

pub type Result<T> = std::result::Result<T, SigError>;
