use serde::{Deserialize, Serialize};

use crate::error::{Result, SigError};

/// Exponent `p` in the affine arc length `alpha = \int kappa^p ds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum AffineExponent {
    /// `p = 1/2`.
    #[serde(rename = "1/2")]
    Half,
    /// `p = 1/3`, the equi-affine arc length.
    #[serde(rename = "1/3")]
    #[default]
    Third,
}

impl AffineExponent {
    pub fn value(self) -> f64 {
        match self {
            AffineExponent::Half => 0.5,
            AffineExponent::Third => 1.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Numeric configuration threaded through every operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Tolerance for derivative-consistency checks.
    pub differentiation_tol: f64,
    /// Tolerance for quadrature and root inversion.
    pub quadrature_tol: f64,
    /// Generic comparison tolerance.
    pub comparison_tol: f64,
    /// Relative vertex tolerance: `|kappa'| < vertex_tol * max|kappa'|` marks a vertex.
    pub vertex_tol: f64,
    /// Absolute floor for derivative magnitudes, in units of `kappa_scale^(k+1)`.
    pub derivative_floor: f64,
    /// Minimum pairwise distance for a signature to count as injective.
    pub injectivity_tol: f64,
    /// Parameter separation (fraction of the length) below which samples are neighbours.
    pub injectivity_separation: f64,
    /// Fraction of `max|kappa^(k)|` a sample must reach to witness a partition segment.
    pub partition_margin: f64,
    /// Fixed step count for the RK4 integrators.
    pub integrator_steps: usize,
    /// Node count used when resampling curves by arc length.
    pub resample_nodes: usize,
    pub affine_exponent: AffineExponent,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            differentiation_tol: 1e-3,
            quadrature_tol: 1e-9,
            comparison_tol: 1e-6,
            vertex_tol: 1e-4,
            derivative_floor: 1e-6,
            injectivity_tol: 1e-3,
            injectivity_separation: 0.02,
            partition_margin: 0.005,
            integrator_steps: 4096,
            resample_nodes: 2048,
            affine_exponent: AffineExponent::default(),
            seed: 0,
            output_format: OutputFormat::default(),
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let tolerances = [
            ("differentiation_tol", self.differentiation_tol),
            ("quadrature_tol", self.quadrature_tol),
            ("comparison_tol", self.comparison_tol),
            ("vertex_tol", self.vertex_tol),
            ("derivative_floor", self.derivative_floor),
            ("injectivity_tol", self.injectivity_tol),
            ("injectivity_separation", self.injectivity_separation),
            ("partition_margin", self.partition_margin),
        ];
        for (name, value) in tolerances {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SigError::InvalidConfig(format!("{name} must be > 0, got {value}")));
            }
        }
        if self.integrator_steps < 64 {
            return Err(SigError::InvalidConfig(format!(
                "integrator_steps must be >= 64, got {}",
                self.integrator_steps
            )));
        }
        if self.resample_nodes < 16 {
            return Err(SigError::InvalidConfig(format!(
                "resample_nodes must be >= 16, got {}",
                self.resample_nodes
            )));
        }
        Ok(())
    }
}
