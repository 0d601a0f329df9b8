use super::vertex_threshold;
use crate::config::Config;
use crate::curve::{euclidean_curvature, ArcLengthCurve, CurvatureFunction, CurvatureProfile, PlanarCurve};
use crate::error::{Result, SigError};
use crate::reconstruction::curve_from_function;
use crate::spline::{CubicSpline, EndCondition};

fn column_spline(profile: &CurvatureProfile, j: usize) -> Result<CubicSpline> {
    if profile.closed() {
        CubicSpline::periodic(profile.s(), profile.column(j), profile.length())
    } else {
        CubicSpline::new(profile.s(), profile.column(j), EndCondition::NotAKnot)
    }
}

/// Arc-length positions where `kappa'` changes sign, refined by bisection
/// on a spline through the `kappa'` column. Requires order >= 1.
pub fn find_vertices(profile: &CurvatureProfile) -> Result<Vec<f64>> {
    if profile.order() < 1 {
        return Err(SigError::InvalidConfig("vertex search needs the kappa' column".into()));
    }
    let d = profile.column(1);
    let s = profile.s();
    let spline = column_spline(profile, 1)?;
    let n = d.len();
    let pairs = if profile.closed() { n } else { n - 1 };
    let mut out = Vec::new();
    for i in 0..pairs {
        let j = (i + 1) % n;
        if d[i] == 0.0 {
            out.push(s[i]);
            continue;
        }
        if d[i] * d[j] >= 0.0 {
            continue;
        }
        let (mut a, mut b) = (s[i], if j == 0 { profile.length() } else { s[j] });
        let fa = d[i];
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if spline.eval(m) * fa > 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        out.push((0.5 * (a + b)) % profile.length());
    }
    if !profile.closed() && d[n - 1] == 0.0 {
        out.push(s[n - 1]);
    }
    Ok(out)
}

/// Curvature of the original curve with a constant section spliced in at `sv`.
struct Spliced {
    kappa: CubicSpline,
    sv: f64,
    value_at_vertex: f64,
    inserted: f64,
    length: f64,
}

impl Spliced {
    fn source(&self, s: f64) -> Option<f64> {
        if s < self.sv {
            Some(s)
        } else if s <= self.sv + self.inserted {
            None
        } else {
            Some(s - self.inserted)
        }
    }
}

impl CurvatureFunction for Spliced {
    fn length(&self) -> f64 {
        self.length
    }

    fn value(&self, s: f64) -> f64 {
        self.source(s).map_or(self.value_at_vertex, |t| self.kappa.eval(t))
    }

    fn derivative(&self, s: f64) -> f64 {
        self.source(s).map_or(0.0, |t| self.kappa.derivative(t))
    }
}

/// Splices a circular arc of length `arc_length` into `curve` at the vertex
/// `at_vertex_s`. The arc has the curvature of the vertex, so curvature stays
/// C1 and the signature set is unchanged. The result is an open curve
/// starting at the original node 0 with the original initial tangent.
pub fn insert_constant_curvature(
    curve: &ArcLengthCurve,
    at_vertex_s: f64,
    arc_length: f64,
    cfg: &Config,
) -> Result<PlanarCurve> {
    if !(arc_length >= 0.0) || !arc_length.is_finite() {
        return Err(SigError::InvalidConfig(format!("insertion length must be >= 0, got {arc_length}")));
    }
    let l = curve.length();
    if !(0.0..=l).contains(&at_vertex_s) {
        return Err(SigError::InvalidConfig(format!("insertion point {at_vertex_s} outside [0, {l}]")));
    }
    let profile = euclidean_curvature(curve, 1)?;
    let kappa = column_spline(&profile, 0)?;
    let slope = kappa.derivative(at_vertex_s);
    if slope.abs() >= vertex_threshold(profile.column(1), cfg) {
        return Err(SigError::NotAVertex { s: at_vertex_s, derivative: slope });
    }
    if arc_length == 0.0 {
        return Ok(curve.to_planar());
    }
    let spliced = Spliced {
        value_at_vertex: kappa.eval(at_vertex_s),
        kappa,
        sv: at_vertex_s,
        inserted: arc_length,
        length: l + arc_length,
    };
    let t = curve.tangent(0)?;
    let steps = ((cfg.integrator_steps as f64) * spliced.length / l).ceil() as usize;
    let out = curve_from_function(&spliced, curve.nodes()[0], t.y.atan2(t.x), steps, false)?;
    Ok(out.to_planar())
}
