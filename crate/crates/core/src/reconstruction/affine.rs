use nalgebra::DMatrix;

use super::MatrixFunction;
use crate::curve::{CurvatureFunction, CurvatureProfile, PlanarCurve};
use crate::error::{Result, SigError};
use crate::{Mat2, Vec2};

/// Cartan matrix `[[0, 1], [mu, 0]]` sampled on the profile grid.
pub fn cartan_matrix_from_mu(mu: &CurvatureProfile) -> Result<MatrixFunction> {
    let values = mu
        .kappa()
        .iter()
        .map(|&m| DMatrix::from_row_slice(2, 2, &[0.0, 1.0, m, 0.0]))
        .collect();
    MatrixFunction::new(mu.s().to_vec(), values)
}

/// Curve with affine curvature `mu(alpha)`: integrates `T' = N`, `N' = mu T`,
/// `x' = T` with RK4, starting from the frame rows of `a0` at `x0`.
///
/// Nodes are equally spaced in affine arc length. A closed profile yields a
/// closed curve.
pub fn affine_curve_from_mu(mu: &CurvatureProfile, a0: &Mat2, x0: Vec2, steps: usize) -> Result<PlanarCurve> {
    if a0.iter().any(|v| !v.is_finite()) || a0.determinant().abs() < 1e-14 * a0.amax().max(1.0).powi(2) {
        return Err(SigError::FrameSingular);
    }
    let f = mu.interpolant()?;
    let l = mu.length();
    if !(l > 0.0) {
        return Err(SigError::DegenerateCurve { length: l });
    }
    let h = l / steps as f64;
    let rhs = |a: f64, st: &[f64; 6]| {
        let m = f.value(a);
        [st[2], st[3], m * st[0], m * st[1], st[0], st[1]]
    };
    let mut st = [a0[(0, 0)], a0[(0, 1)], a0[(1, 0)], a0[(1, 1)], x0.x, x0.y];
    let mut pts = Vec::with_capacity(steps + 1);
    pts.push(x0);
    let shift = |st: &[f64; 6], k: &[f64; 6], h: f64| {
        let mut o = *st;
        for i in 0..6 {
            o[i] += h * k[i];
        }
        o
    };
    for i in 0..steps {
        let a = i as f64 * h;
        let k1 = rhs(a, &st);
        let k2 = rhs(a + h / 2.0, &shift(&st, &k1, h / 2.0));
        let k3 = rhs(a + h / 2.0, &shift(&st, &k2, h / 2.0));
        let k4 = rhs(a + h, &shift(&st, &k3, h));
        for c in 0..6 {
            st[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        pts.push(Vec2::new(st[4], st[5]));
    }
    if mu.closed() {
        pts.pop();
    }
    PlanarCurve::new(pts, mu.closed())
}
