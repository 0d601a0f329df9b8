//! Affine arc length, affine frame and affine curvature.
//!
//! With `w = kappa^(-p)` the affine arc length satisfies `d/dalpha = w d/ds`
//! and the frame rows are `T = w t`, `N = w w_s t + w^2 kappa n` in the
//! Frenet basis `(t, n)`. Differentiating gives `A_s = D F` with `A = C F`,
//! so the Cartan matrix is `K = w D C^{-1}`. The affine curvature `mu` is
//! its (2,1) entry.

use super::{PhasePortrait, SignatureKind};
use crate::curve::fit::LocalFit;
use crate::config::Config;
use crate::curve::{euclidean_curvature, ArcLengthCurve};
use crate::error::{Result, SigError};
use crate::spline::{CubicSpline, EndCondition};
use crate::{Mat2, Vec2};

/// Per-node affine quantities of a curve.
#[derive(Debug, Clone)]
pub struct AffineFrameData {
    /// Arc length at each node.
    pub s: Vec<f64>,
    /// Affine arc length at each node.
    pub alpha: Vec<f64>,
    /// Affine curvature at each node.
    pub mu: Vec<f64>,
    /// `d mu / d alpha` at each node.
    pub mu_alpha: Vec<f64>,
    /// Cartan (2,2) entry; vanishes for the equi-affine exponent.
    pub k22: Vec<f64>,
    /// Total affine length (one full period for closed curves).
    pub total_alpha: f64,
    /// Affine frame `[T; N]` (rows) at node 0.
    pub frame0: Mat2,
}

/// Affine frame data at every node of `curve`.
pub fn affine_frame_data(curve: &ArcLengthCurve, cfg: &Config) -> Result<AffineFrameData> {
    let profile = euclidean_curvature(curve, 2)?;
    let s = profile.s().to_vec();
    let (k, ks, kss) = (profile.column(0), profile.column(1), profile.column(2));
    if let Some(i) = k.iter().position(|&v| !(v > 0.0)) {
        return Err(SigError::NonConvexArc { s: s[i] });
    }
    let p = cfg.affine_exponent.value();
    let n = s.len();
    let mut mu = Vec::with_capacity(n);
    let mut k22 = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    for i in 0..n {
        let (k, k1, k2) = (k[i], ks[i], kss[i]);
        let w = k.powf(-p);
        let w1 = -p * k.powf(-p - 1.0) * k1;
        let w2 = -p * ((-p - 1.0) * k.powf(-p - 2.0) * k1 * k1 + k.powf(-p - 1.0) * k2);
        let c22 = w * w * k;
        let c22_s = (1.0 - 2.0 * p) * k.powf(-2.0 * p) * k1;
        let d21 = w1 * w1 + w * w2 - c22 * k;
        let d22 = w * w1 * k + c22_s;
        mu.push(d21 - d22 * w1 / (w * k));
        k22.push(w * d22 / c22);
        density.push(k.powf(p));
    }
    let closed = curve.closed();
    let period = curve.length();
    let (alpha, total_alpha) = if closed {
        let spline = CubicSpline::periodic(&s, &density, period)?;
        let mut a = spline.cumulative_integral();
        a.truncate(n);
        (a, spline.integral())
    } else {
        let spline = CubicSpline::new(&s, &density, EndCondition::NotAKnot)?;
        let a = spline.cumulative_integral();
        let total = a[n - 1];
        (a, total)
    };
    let mu_s = LocalFit::new(n, 1)?.apply(&mu, curve.spacing(), closed).swap_remove(1);
    let mu_alpha = (0..n).map(|i| mu_s[i] / density[i]).collect();

    let tangent = curve.tangent(0)?;
    let normal = Vec2::new(-tangent.y, tangent.x);
    let (k0, k1) = (k[0], ks[0]);
    let w = k0.powf(-p);
    let w1 = -p * k0.powf(-p - 1.0) * k1;
    let t_row = tangent * w;
    let n_row = tangent * (w * w1) + normal * (w * w * k0);
    let frame0 = Mat2::new(t_row.x, t_row.y, n_row.x, n_row.y);

    Ok(AffineFrameData { s, alpha, mu, mu_alpha, k22, total_alpha, frame0 })
}

/// Affine signature `{(mu, mu_alpha)}` sampled in affine arc length.
pub fn affine_signature(curve: &ArcLengthCurve, cfg: &Config) -> Result<PhasePortrait> {
    let data = affine_frame_data(curve, cfg)?;
    let rows = data.mu.iter().zip(&data.mu_alpha).map(|(&m, &d)| vec![m, d]).collect();
    PhasePortrait::new(SignatureKind::Affine, data.alpha, rows, data.total_alpha, curve.closed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AffineExponent;
    use crate::curve::{resample_by_arclength, shapes, PlanarCurve};

    fn arc(c: &PlanarCurve, n: usize) -> ArcLengthCurve {
        resample_by_arclength(c, n).unwrap()
    }

    #[test]
    fn circle_mu_matches_closed_form() {
        // For a circle of radius r, mu = -r^(-4/3) and the affine length is 2 pi r^(2/3).
        let r: f64 = 2.0;
        let sig = affine_signature(&arc(&shapes::circle(r, 1024), 1024), &Config::default()).unwrap();
        for row in sig.rows() {
            assert!((row[0] + r.powf(-4.0 / 3.0)).abs() < 1e-5);
            assert!(row[1].abs() < 1e-4, "{row:?}");
        }
        let want = 2.0 * std::f64::consts::PI * r.powf(2.0 / 3.0);
        assert!((sig.length() - want).abs() < 1e-6, "{} vs {want}", sig.length());
    }

    #[test]
    fn mu_matches_symbolic_formula_on_egg() {
        // mu = -(kappa^(4/3) - (5/9) kappa^(-8/3) kappa_s^2 + (1/3) kappa^(-5/3) kappa_ss)
        let a = arc(&shapes::egg(2048), 2048);
        let data = affine_frame_data(&a, &Config::default()).unwrap();
        let prof = euclidean_curvature(&a, 2).unwrap();
        for i in (0..a.node_count()).step_by(97) {
            let (k, k1, k2) = (prof.column(0)[i], prof.column(1)[i], prof.column(2)[i]);
            let oracle = -(k.powf(4.0 / 3.0) - 5.0 / 9.0 * k.powf(-8.0 / 3.0) * k1 * k1
                + k.powf(-5.0 / 3.0) * k2 / 3.0);
            assert!((data.mu[i] - oracle).abs() < 1e-10, "{} vs {oracle}", data.mu[i]);
            assert!(data.k22[i].abs() < 1e-12);
        }
    }

    #[test]
    fn equi_affine_frame_is_unimodular() {
        let a = arc(&shapes::ellipse(2.0, 1.0, 1024), 1024);
        let data = affine_frame_data(&a, &Config::default()).unwrap();
        assert!((data.frame0.determinant() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn half_exponent_has_nonzero_k22() {
        let cfg = Config { affine_exponent: AffineExponent::Half, ..Config::default() };
        let a = arc(&shapes::egg(1024), 1024);
        let data = affine_frame_data(&a, &cfg).unwrap();
        assert!(data.k22.iter().any(|v| v.abs() > 1e-3));
    }

    #[test]
    fn non_convex_arc_rejected() {
        let a = arc(&shapes::flower(1024), 1024);
        assert!(matches!(affine_signature(&a, &Config::default()), Err(SigError::NonConvexArc { .. })));
    }
}
