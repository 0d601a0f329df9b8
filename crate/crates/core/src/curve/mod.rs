//! Planar curves: representation, arc-length resampling, curvature estimation,
//! set distances and group actions.

mod group;
mod hausdorff;
pub(crate) mod fit;
pub mod shapes;

pub use group::{apply_group, GroupElement, GroupKind};
pub use hausdorff::{directed_hausdorff, hausdorff_distance, Polyline};
pub(crate) use hausdorff::point_segment_distance_sq;
pub use shapes::AnalyticCurve;

use crate::config::Config;
use crate::error::{Result, SigError};
use crate::spline::{CubicSpline, EndCondition};
use crate::Vec2;

/// Ordered planar samples, optionally closed. A closed curve never stores its
/// first sample again at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarCurve {
    samples: Vec<Vec2>,
    closed: bool,
    analytic: Option<AnalyticCurve>,
}

impl PlanarCurve {
    pub fn new(mut samples: Vec<Vec2>, closed: bool) -> Result<Self> {
        if samples.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(SigError::InvalidCurve("non-finite sample".into()));
        }
        if closed && samples.len() > 1 {
            let first = samples[0];
            if (samples[samples.len() - 1] - first).norm() == 0.0 {
                samples.pop();
            }
        }
        if samples.len() < 4 {
            return Err(SigError::InvalidCurve(format!(
                "need at least 4 samples, got {}",
                samples.len()
            )));
        }
        let n = samples.len();
        let pairs = if closed { n } else { n - 1 };
        if let Some(i) = (0..pairs).find(|&i| samples[i] == samples[(i + 1) % n]) {
            return Err(SigError::InvalidCurve(format!("samples {i} and {} coincide", (i + 1) % n)));
        }
        Ok(PlanarCurve { samples, closed, analytic: None })
    }

    pub(crate) fn from_validated(samples: Vec<Vec2>, closed: bool) -> Self {
        PlanarCurve { samples, closed, analytic: None }
    }

    pub fn with_analytic(mut self, tag: AnalyticCurve) -> Self {
        self.analytic = Some(tag);
        self
    }

    pub fn samples(&self) -> &[Vec2] {
        &self.samples
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn analytic(&self) -> Option<&AnalyticCurve> {
        self.analytic.as_ref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn polyline(&self) -> Polyline {
        Polyline::from_points(&self.samples, self.closed)
    }

    /// Total polygonal length (including the closing chord of a closed curve).
    pub fn chord_length(&self) -> f64 {
        let n = self.samples.len();
        let pairs = if self.closed { n } else { n - 1 };
        (0..pairs).map(|i| (self.samples[(i + 1) % n] - self.samples[i]).norm()).sum()
    }
}

/// A curve resampled at nodes equally spaced in arc length.
#[derive(Debug, Clone)]
pub struct ArcLengthCurve {
    base: PlanarCurve,
    length: f64,
    nodes: Vec<Vec2>,
}

impl ArcLengthCurve {
    /// Wraps nodes that are already unit-speed (e.g. produced by an integrator).
    pub fn from_unit_speed_nodes(nodes: Vec<Vec2>, length: f64, closed: bool) -> Result<Self> {
        let base = PlanarCurve::new(nodes, closed)?;
        let nodes = base.samples.clone();
        Ok(ArcLengthCurve { base, length, nodes })
    }

    pub fn base(&self) -> &PlanarCurve {
        &self.base
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Vec2] {
        &self.nodes
    }

    pub fn closed(&self) -> bool {
        self.base.closed
    }

    /// Arc-length spacing between consecutive nodes.
    pub fn spacing(&self) -> f64 {
        let n = self.nodes.len();
        if self.closed() {
            self.length / n as f64
        } else {
            self.length / (n - 1) as f64
        }
    }

    pub fn arc_lengths(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.nodes.len()).map(|i| i as f64 * h).collect()
    }

    /// The nodes as a planar curve (the resampled trace).
    pub fn to_planar(&self) -> PlanarCurve {
        PlanarCurve::from_validated(self.nodes.clone(), self.closed())
    }

    pub fn polyline(&self) -> Polyline {
        Polyline::from_points(&self.nodes, self.closed())
    }

    /// Coordinate splines `x(s)`, `y(s)` through the nodes.
    pub fn position_splines(&self) -> Result<(CubicSpline, CubicSpline)> {
        let s = self.arc_lengths();
        let xs: Vec<f64> = self.nodes.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = self.nodes.iter().map(|p| p.y).collect();
        if self.closed() {
            Ok((
                CubicSpline::periodic(&s, &xs, self.length)?,
                CubicSpline::periodic(&s, &ys, self.length)?,
            ))
        } else {
            Ok((
                CubicSpline::new(&s, &xs, EndCondition::NotAKnot)?,
                CubicSpline::new(&s, &ys, EndCondition::NotAKnot)?,
            ))
        }
    }

    /// Unit tangent at node `i`.
    pub fn tangent(&self, i: usize) -> Result<Vec2> {
        let (sx, sy) = self.position_splines()?;
        let t = Vec2::new(sx.knot_derivative(i), sy.knot_derivative(i));
        Ok(t / t.norm())
    }

    /// Closed curve re-indexed so that node `index` becomes node 0.
    pub fn rotate_start(&self, index: usize) -> Result<ArcLengthCurve> {
        if !self.closed() {
            return Err(SigError::OpenCurve);
        }
        let n = self.nodes.len();
        let mut nodes = Vec::with_capacity(n);
        nodes.extend_from_slice(&self.nodes[index % n..]);
        nodes.extend_from_slice(&self.nodes[..index % n]);
        let base = PlanarCurve::from_validated(nodes.clone(), true);
        Ok(ArcLengthCurve { base, length: self.length, nodes })
    }

    /// Closed curve resampled so that arc length `s0` becomes the start.
    pub fn rotate_start_at(&self, s0: f64) -> Result<ArcLengthCurve> {
        if !self.closed() {
            return Err(SigError::OpenCurve);
        }
        let (sx, sy) = self.position_splines()?;
        let h = self.spacing();
        let nodes: Vec<Vec2> = (0..self.nodes.len())
            .map(|i| {
                let s = s0 + i as f64 * h;
                Vec2::new(sx.eval(s), sy.eval(s))
            })
            .collect();
        let base = PlanarCurve::from_validated(nodes.clone(), true);
        Ok(ArcLengthCurve { base, length: self.length, nodes })
    }

    /// Closed curve made of the first `length` of this one, resampled with the same node count.
    pub fn truncate_period(&self, length: f64) -> Result<ArcLengthCurve> {
        if !self.closed() {
            return Err(SigError::OpenCurve);
        }
        let (sx, sy) = self.position_splines()?;
        let n = self.nodes.len();
        let nodes: Vec<Vec2> = (0..n)
            .map(|i| {
                let s = length * i as f64 / n as f64;
                Vec2::new(sx.eval(s), sy.eval(s))
            })
            .collect();
        let base = PlanarCurve::new(nodes.clone(), true)?;
        Ok(ArcLengthCurve { base, length, nodes })
    }

    /// Open sub-curve over nodes `start..=end`.
    pub fn sub_curve(&self, start: usize, end: usize) -> Result<ArcLengthCurve> {
        let nodes = self.nodes[start..=end].to_vec();
        let length = (end - start) as f64 * self.spacing();
        ArcLengthCurve::from_unit_speed_nodes(nodes, length, false)
    }
}

/// Curvature and its arc-length derivatives sampled along a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    s: Vec<f64>,
    columns: Vec<Vec<f64>>,
    length: f64,
    closed: bool,
}

impl CurvatureProfile {
    /// `columns[j]` holds the `j`-th derivative of curvature at each `s`.
    pub fn new(s: Vec<f64>, columns: Vec<Vec<f64>>, length: f64, closed: bool) -> Result<Self> {
        if columns.is_empty() || columns.iter().any(|c| c.len() != s.len()) {
            return Err(SigError::InvalidCurve("profile columns must match s".into()));
        }
        if s.len() < 2 {
            return Err(SigError::InsufficientResolution("profile needs >= 2 samples".into()));
        }
        if s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SigError::InvalidCurve("profile s must be strictly increasing".into()));
        }
        if columns.iter().flatten().chain(&s).any(|v| !v.is_finite()) || !length.is_finite() {
            return Err(SigError::InvalidCurve("non-finite profile entry".into()));
        }
        if length < s[s.len() - 1] * (1.0 - 1e-12) {
            return Err(SigError::InvalidCurve("profile extends beyond its length".into()));
        }
        Ok(CurvatureProfile { s, columns, length, closed })
    }

    /// Profile of a curvature function sampled at `n` uniform points of `[0, L]`.
    pub fn sample<C: CurvatureFunction + ?Sized>(kappa: &C, n: usize) -> Result<Self> {
        let l = kappa.length();
        let s: Vec<f64> = (0..n).map(|i| l * i as f64 / (n - 1) as f64).collect();
        let k0 = s.iter().map(|&t| kappa.value(t)).collect();
        let k1 = s.iter().map(|&t| kappa.derivative(t)).collect();
        CurvatureProfile::new(s, vec![k0, k1], l, false)
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    /// Highest derivative order stored.
    pub fn order(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn kappa(&self) -> &[f64] {
        &self.columns[0]
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Row `i` as `(kappa, kappa', ..., kappa^(order))`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    /// Truncate the derivative columns to `order`.
    pub fn with_order(&self, order: usize) -> CurvatureProfile {
        let mut p = self.clone();
        p.columns.truncate(order + 1);
        p
    }

    /// Smooth interpolant usable wherever a [`CurvatureFunction`] is expected.
    pub fn interpolant(&self) -> Result<ProfileInterpolant> {
        let value = if self.closed {
            CubicSpline::periodic(&self.s, &self.columns[0], self.length)?
        } else if self.s.len() >= 4 {
            CubicSpline::new(&self.s, &self.columns[0], EndCondition::NotAKnot)?
        } else {
            CubicSpline::new(&self.s, &self.columns[0], EndCondition::Natural)?
        };
        let derivative = match self.columns.get(1) {
            Some(d) if self.closed => Some(CubicSpline::periodic(&self.s, d, self.length)?),
            Some(d) if self.s.len() >= 4 => Some(CubicSpline::new(&self.s, d, EndCondition::NotAKnot)?),
            _ => None,
        };
        Ok(ProfileInterpolant { value, derivative, length: self.length })
    }
}

/// A curvature function `kappa(s)` on `[0, L]` with its derivative.
pub trait CurvatureFunction: Sync {
    fn length(&self) -> f64;
    fn value(&self, s: f64) -> f64;
    fn derivative(&self, s: f64) -> f64;
}

/// Spline interpolation of a sampled [`CurvatureProfile`].
#[derive(Debug, Clone)]
pub struct ProfileInterpolant {
    value: CubicSpline,
    derivative: Option<CubicSpline>,
    length: f64,
}

impl CurvatureFunction for ProfileInterpolant {
    fn length(&self) -> f64 {
        self.length
    }

    fn value(&self, s: f64) -> f64 {
        self.value.eval(s)
    }

    fn derivative(&self, s: f64) -> f64 {
        match &self.derivative {
            Some(d) => d.eval(s),
            None => self.value.derivative(s),
        }
    }
}

/// Closed-form curvature given by a pair of closures.
pub struct AnalyticCurvature<F, D> {
    value: F,
    derivative: D,
    length: f64,
}

impl<F, D> AnalyticCurvature<F, D>
where
    F: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    pub fn new(value: F, derivative: D, length: f64) -> Self {
        AnalyticCurvature { value, derivative, length }
    }
}

impl<F, D> CurvatureFunction for AnalyticCurvature<F, D>
where
    F: Fn(f64) -> f64 + Sync,
    D: Fn(f64) -> f64 + Sync,
{
    fn length(&self) -> f64 {
        self.length
    }
    fn value(&self, s: f64) -> f64 {
        (self.value)(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        (self.derivative)(s)
    }
}

impl<C: CurvatureFunction + ?Sized> CurvatureFunction for &C {
    fn length(&self) -> f64 {
        (**self).length()
    }
    fn value(&self, s: f64) -> f64 {
        (**self).value(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        (**self).derivative(s)
    }
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

pub(crate) fn gauss_legendre<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GL_X.iter().zip(&GL_W).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

/// Local degree-7 Lagrange interpolation of the samples in chord length.
struct ParamCurve {
    u: Vec<f64>,
    pts: Vec<Vec2>,
    closed: bool,
    period: f64,
}

const WINDOW: usize = 8;

impl ParamCurve {
    /// Interval index containing `t` and its stencil `(u, point)`.
    fn stencil(&self, t: f64) -> Vec<(f64, Vec2)> {
        let m = self.pts.len();
        let last = if self.closed { m - 1 } else { m - 2 };
        let i = self.u.partition_point(|&v| v <= t).saturating_sub(1).min(last);
        if self.closed {
            let w = WINDOW.min(m);
            let first = i as isize - (w as isize / 2 - 1);
            (0..w as isize)
                .map(|k| {
                    let j = first + k;
                    let wraps = j.div_euclid(m as isize);
                    let idx = j.rem_euclid(m as isize) as usize;
                    (self.u[idx] + wraps as f64 * self.period, self.pts[idx])
                })
                .collect()
        } else {
            let w = WINDOW.min(m);
            let first = (i as isize - (w as isize / 2 - 1)).clamp(0, (m - w) as isize) as usize;
            (first..first + w).map(|j| (self.u[j], self.pts[j])).collect()
        }
    }

    /// Value and first derivative of the interpolant at `t`.
    fn eval(&self, t: f64) -> (Vec2, Vec2) {
        let st = self.stencil(t);
        let mut value = Vec2::zeros();
        let mut slope = Vec2::zeros();
        for (j, (uj, pj)) in st.iter().enumerate() {
            let mut denom = 1.0;
            let mut basis = 1.0;
            let mut dbasis = 0.0;
            for (k, (uk, _)) in st.iter().enumerate() {
                if k == j {
                    continue;
                }
                denom *= uj - uk;
                dbasis = dbasis * (t - uk) + basis;
                basis *= t - uk;
            }
            value += pj * (basis / denom);
            slope += pj * (dbasis / denom);
        }
        (value, slope)
    }

    fn speed(&self, t: f64) -> f64 {
        self.eval(t).1.norm()
    }

    fn point(&self, t: f64) -> Vec2 {
        self.eval(t).0
    }
}

/// Resample `curve` at `n` nodes equally spaced in arc length.
///
/// The samples are interpolated piecewise in cumulative chord length by the
/// degree-7 polynomial through the eight nearest samples (wrapping when
/// closed), so curvature and its first two derivatives stay accurate on
/// coarse input. Arc length of the spline is
/// integrated per interval with 8-point Gauss-Legendre and each node is placed
/// by safeguarded Newton iteration on the arc-length function.
pub fn resample_by_arclength(curve: &PlanarCurve, n: usize) -> Result<ArcLengthCurve> {
    if n < 4 {
        return Err(SigError::InsufficientResolution(format!("need n >= 4, got {n}")));
    }
    let pts = curve.samples();
    let m = pts.len();
    let mut u = Vec::with_capacity(m);
    u.push(0.0);
    for i in 1..m {
        u.push(u[i - 1] + (pts[i] - pts[i - 1]).norm());
    }
    let chord = curve.chord_length();
    let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1.0);
    if !(chord > 1e-12 * scale) {
        return Err(SigError::DegenerateCurve { length: chord });
    }
    let param = ParamCurve { u: u.clone(), pts: pts.to_vec(), closed: curve.closed(), period: chord };
    let mut knots = u.clone();
    if curve.closed() {
        knots.push(chord);
    }
    let mut cum = Vec::with_capacity(knots.len());
    cum.push(0.0);
    for w in knots.windows(2) {
        let seg = gauss_legendre(w[0], w[1], |t| param.speed(t));
        cum.push(cum[cum.len() - 1] + seg);
    }
    let total = cum[cum.len() - 1];
    if !(total > 1e-12 * scale) {
        return Err(SigError::DegenerateCurve { length: total });
    }
    let count = if curve.closed() { n } else { n - 1 };
    let step = total / count as f64;
    let mut nodes = Vec::with_capacity(n);
    for k in 0..n {
        let target = k as f64 * step;
        let i = cum.partition_point(|&c| c <= target).saturating_sub(1).min(knots.len() - 2);
        let (a, b) = (knots[i], knots[i + 1]);
        let (mut lo, mut hi) = (a, b);
        let mut t = a + (b - a) * ((target - cum[i]) / (cum[i + 1] - cum[i])).clamp(0.0, 1.0);
        for _ in 0..50 {
            let f = cum[i] + gauss_legendre(a, t, |v| param.speed(v)) - target;
            if f.abs() < 1e-14 * total.max(1.0) {
                break;
            }
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let newton = t - f / param.speed(t);
            t = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        nodes.push(param.point(t));
    }
    let base = curve.clone();
    Ok(ArcLengthCurve { base, length: total, nodes })
}

/// Signed curvature and its first `order` arc-length derivatives at the nodes.
///
/// Curvature is `cross(γ', γ'') / |γ'|^3` (positive for counterclockwise
/// turning). Position derivatives and the derivative columns both come from
/// degree-8 least-squares polynomials over 17 neighbouring nodes, wrapping
/// around for closed curves.
pub fn euclidean_curvature(curve: &ArcLengthCurve, order: usize) -> Result<CurvatureProfile> {
    let n = curve.node_count();
    if n < order + 5 {
        return Err(SigError::InsufficientResolution(format!(
            "{n} nodes are too few for order {order}"
        )));
    }
    let s = curve.arc_lengths();
    let h = curve.spacing();
    let closed = curve.closed();
    let xs: Vec<f64> = curve.nodes().iter().map(|p| p.x).collect();
    let ys: Vec<f64> = curve.nodes().iter().map(|p| p.y).collect();
    let position = fit::LocalFit::new(n, 2)?;
    let (cx, cy) = (position.apply(&xs, h, closed), position.apply(&ys, h, closed));
    let kappa: Vec<f64> = (0..n)
        .map(|i| {
            let (dx, dy, ddx, ddy) = (cx[1][i], cy[1][i], cx[2][i], cy[2][i]);
            let speed = dx.hypot(dy);
            (dx * ddy - dy * ddx) / (speed * speed * speed)
        })
        .collect();
    let kmax = kappa.iter().fold(0.0_f64, |a, k| a.max(k.abs()));
    if h * kmax > 0.25 {
        return Err(SigError::InsufficientResolution(format!(
            "node spacing {h:e} too coarse for curvature {kmax:e}"
        )));
    }
    let columns = if order == 0 { vec![kappa] } else { fit::LocalFit::new(n, order)?.apply(&kappa, h, closed) };
    CurvatureProfile::new(s, columns, curve.length(), curve.closed())
}

/// Hausdorff distance between the sampled traces of two curves.
pub fn curve_distance(a: &PlanarCurve, b: &PlanarCurve) -> Result<f64> {
    hausdorff_distance(&a.polyline(), &b.polyline())
}

/// Node sampling count used when a curve is resampled under a given config.
pub fn default_nodes(cfg: &Config) -> usize {
    cfg.resample_nodes
}
