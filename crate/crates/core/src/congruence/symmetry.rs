use serde::Serialize;

use crate::config::Config;
use crate::curve::{euclidean_curvature, ArcLengthCurve};
use crate::error::{Result, SigError};

/// Ratio of a closed curve's length to the minimal period of its curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryIndex {
    pub index: usize,
    /// Minimal period of the curvature.
    pub period: f64,
    /// Unrounded `L / period`.
    pub ratio: f64,
}

/// Autocorrelation peak at or above this value counts as a period.
const PEAK: f64 = 1.0 - 1e-3;

/// Index of symmetry of a closed curve.
///
/// The period is the first lag at which the circular autocorrelation of the
/// centred curvature has a local maximum above `1 - 1e-3`, refined by a
/// parabola through the neighbouring lags.
pub fn index_of_symmetry(arc: &ArcLengthCurve, cfg: &Config) -> Result<SymmetryIndex> {
    if !arc.closed() {
        return Err(SigError::OpenCurve);
    }
    let profile = euclidean_curvature(arc, 0)?;
    let kappa = profile.kappa();
    let n = kappa.len();
    let mean = kappa.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = kappa.iter().map(|k| k - mean).collect();
    let var: f64 = c.iter().map(|v| v * v).sum();
    let scale = kappa.iter().fold(0.0_f64, |m, k| m.max(k.abs()));
    let (lo, hi) = kappa.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &k| (a.min(k), b.max(k)));
    if hi - lo <= cfg.vertex_tol * scale || var == 0.0 {
        return Err(SigError::ConstantCurvature);
    }
    let corr = |lag: usize| c.iter().enumerate().map(|(i, v)| v * c[(i + lag) % n]).sum::<f64>() / var;
    let h = arc.spacing();
    let mut prev = corr(0);
    let mut cur = corr(1);
    let mut period = arc.length();
    for lag in 1..n {
        let next = corr(lag + 1);
        if cur >= PEAK && cur >= prev && cur >= next {
            let denom = prev - 2.0 * cur + next;
            let off = if denom < 0.0 { (0.5 * (prev - next) / denom).clamp(-0.5, 0.5) } else { 0.0 };
            period = (lag as f64 + off) * h;
            break;
        }
        prev = cur;
        cur = next;
    }
    let ratio = arc.length() / period;
    let index = ratio.round();
    if (ratio - index).abs() > 0.05 {
        return Err(SigError::InsufficientResolution(format!(
            "curvature period gives non-integral index {ratio}"
        )));
    }
    Ok(SymmetryIndex { index: index as usize, period, ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{apply_group, resample_by_arclength, shapes, GroupElement};
    use crate::Vec2;

    fn idx(c: &crate::curve::PlanarCurve) -> Result<SymmetryIndex> {
        index_of_symmetry(&resample_by_arclength(c, 1500).unwrap(), &Config::default())
    }

    #[test]
    fn known_indices() {
        assert_eq!(idx(&shapes::ellipse(2.0, 1.0, 800)).unwrap().index, 2);
        assert_eq!(idx(&shapes::flower(800)).unwrap().index, 4);
        assert_eq!(idx(&shapes::egg(800)).unwrap().index, 1);
    }

    #[test]
    fn rigid_motion_keeps_index() {
        let c = shapes::flower(800);
        let g = GroupElement::rotation(0.3, Vec2::new(4.0, -2.0));
        assert_eq!(idx(&apply_group(&g, &c)).unwrap().index, idx(&c).unwrap().index);
    }

    #[test]
    fn circle_has_no_index() {
        assert!(matches!(idx(&shapes::circle(1.0, 400)), Err(SigError::ConstantCurvature)));
    }
}
