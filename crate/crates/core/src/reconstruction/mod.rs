//! Curves from curvature, curvature from signatures, frames from Cartan matrices.

mod affine;
mod inphase;
mod picard;
mod pipeline;

pub use affine::{affine_curve_from_mu, cartan_matrix_from_mu};
pub use inphase::{curvature_from_graph, curvature_from_signature};
pub use picard::{picard_error_bound, picard_frame, rk4_frame, FrameSolution, MatrixFunction};
pub use pipeline::reconstruct_from_signature;

use crate::config::Config;
use crate::curve::{ArcLengthCurve, CurvatureFunction, CurvatureProfile};
use crate::error::{Result, SigError};
use crate::Vec2;

/// RK4 on `(theta, x, y)' = (kappa(s), cos theta, sin theta)` over `[0, L]`.
/// Returns `steps + 1` states.
pub fn integrate_curvature<C: CurvatureFunction + ?Sized>(
    kappa: &C,
    x0: Vec2,
    theta0: f64,
    steps: usize,
) -> Vec<[f64; 3]> {
    let h = kappa.length() / steps as f64;
    let rhs = |s: f64, st: &[f64; 3]| [kappa.value(s), st[0].cos(), st[0].sin()];
    let mut state = [theta0, x0.x, x0.y];
    let mut out = Vec::with_capacity(steps + 1);
    out.push(state);
    for i in 0..steps {
        let s = i as f64 * h;
        let k1 = rhs(s, &state);
        let k2 = rhs(s + h / 2.0, &add(&state, &k1, h / 2.0));
        let k3 = rhs(s + h / 2.0, &add(&state, &k2, h / 2.0));
        let k4 = rhs(s + h, &add(&state, &k3, h));
        for c in 0..3 {
            state[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        out.push(state);
    }
    out
}

fn add(a: &[f64; 3], b: &[f64; 3], h: f64) -> [f64; 3] {
    [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]]
}

/// Unit-speed curve whose curvature is `kappa`, starting at `x0` with tangent angle `theta0`.
///
/// A closed input yields a closed curve (the final node, which should
/// coincide with the first, is dropped).
pub fn curve_from_function<C: CurvatureFunction + ?Sized>(
    kappa: &C,
    x0: Vec2,
    theta0: f64,
    steps: usize,
    closed: bool,
) -> Result<ArcLengthCurve> {
    let l = kappa.length();
    if !(l > 0.0 && l.is_finite()) {
        return Err(SigError::DegenerateCurve { length: l });
    }
    let mut nodes: Vec<Vec2> = integrate_curvature(kappa, x0, theta0, steps)
        .iter()
        .map(|st| Vec2::new(st[1], st[2]))
        .collect();
    if closed {
        nodes.pop();
    }
    ArcLengthCurve::from_unit_speed_nodes(nodes, l, closed)
}

/// Curve from a sampled curvature profile, integrated with `cfg.integrator_steps` RK4 steps.
pub fn curve_from_curvature(
    h: &CurvatureProfile,
    x0: Vec2,
    theta0: f64,
    cfg: &Config,
) -> Result<ArcLengthCurve> {
    let f = h.interpolant()?;
    curve_from_function(&f, x0, theta0, cfg.integrator_steps, h.closed())
}

/// Running integral of uniformly spaced samples (spacing `h`), fourth-order accurate.
pub(crate) fn cumulative_uniform(values: &[f64], h: f64) -> Vec<f64> {
    use crate::spline::{CubicSpline, EndCondition};
    let n = values.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let x: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    CubicSpline::new(&x, values, EndCondition::NotAKnot)
        .expect("uniform knots")
        .cumulative_integral()
}
