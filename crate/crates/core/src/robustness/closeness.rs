use serde::Serialize;

use crate::congruence::register;
use crate::config::Config;
use crate::curve::{
    apply_group, hausdorff_distance, CurvatureFunction, GroupElement, GroupKind, Polyline,
};
use crate::error::{Result, SigError};
use crate::reconstruction::{curvature_from_graph, curve_from_function, integrate_curvature};
use crate::signature::{l1_signature_distance, GraphFunction};
use crate::Vec2;

const SUP_GRID: usize = 4097;

/// Restriction of a curvature function to `[0, length]`.
struct Truncated<'a, C: ?Sized> {
    inner: &'a C,
    length: f64,
}

impl<C: CurvatureFunction + ?Sized> CurvatureFunction for Truncated<'_, C> {
    fn length(&self) -> f64 {
        self.length
    }
    fn value(&self, s: f64) -> f64 {
        self.inner.value(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        self.inner.derivative(s)
    }
}

fn sup_difference<A: CurvatureFunction + ?Sized, B: CurvatureFunction + ?Sized>(a: &A, b: &B, l: f64) -> f64 {
    (0..SUP_GRID)
        .map(|i| {
            let s = l * i as f64 / (SUP_GRID - 1) as f64;
            (a.value(s) - b.value(s)).abs()
        })
        .fold(0.0, f64::max)
}

/// `L^2 sup|kappa - kappa*| / 2` over the common length `L = min(L, L*)`,
/// with the supremum taken on a 4097-point grid.
pub fn closeness_bound_curvature<A: CurvatureFunction + ?Sized, B: CurvatureFunction + ?Sized>(
    kappa: &A,
    kappa_star: &B,
) -> f64 {
    let l = kappa.length().min(kappa_star.length());
    l * l * sup_difference(kappa, kappa_star, l) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosenessCheck {
    pub sup_difference: f64,
    pub bound: f64,
    /// Hausdorff distance after registration at the initial point and tangent.
    pub measured: f64,
    /// Largest `|gamma(s) - g gamma*(s)|` over the common nodes.
    pub pointwise: f64,
}

/// Reconstructs both curvatures over the common length (the second at the
/// pose `start_star`), registers the second onto the first and compares the
/// measured distance with [`closeness_bound_curvature`].
pub fn closeness_experiment<A: CurvatureFunction + ?Sized, B: CurvatureFunction + ?Sized>(
    kappa: &A,
    kappa_star: &B,
    start_star: (Vec2, f64),
    cfg: &Config,
) -> Result<ClosenessCheck> {
    let l = kappa.length().min(kappa_star.length());
    let a = curve_from_function(&Truncated { inner: kappa, length: l }, Vec2::zeros(), 0.0, cfg.integrator_steps, false)?;
    let b = curve_from_function(
        &Truncated { inner: kappa_star, length: l },
        start_star.0,
        start_star.1,
        cfg.integrator_steps,
        false,
    )?;
    let g = register(&a, &b, GroupKind::SE2, cfg)?;
    let moved = apply_group(&g, &b.to_planar());
    let measured = hausdorff_distance(&a.polyline(), &moved.polyline())?;
    let pointwise = a.nodes().iter().zip(moved.samples()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    Ok(ClosenessCheck {
        sup_difference: sup_difference(kappa, kappa_star, l),
        bound: closeness_bound_curvature(kappa, kappa_star),
        measured,
        pointwise,
    })
}

/// `(m, M)` over both graphs; fails when either vanishes or they differ in sign.
fn graph_range(f: &GraphFunction, fstar: &GraphFunction) -> Result<(f64, f64)> {
    let sign = |g: &GraphFunction| {
        let v = g.values();
        if v.iter().all(|&x| x > 0.0) {
            1.0
        } else if v.iter().all(|&x| x < 0.0) {
            -1.0
        } else {
            0.0
        }
    };
    let (sa, sb) = (sign(f), sign(fstar));
    let m = f.min_abs().min(fstar.min_abs());
    if sa == 0.0 || sa != sb || !(m > 0.0) {
        return Err(SigError::VanishingF { min_abs: if sa == sb { m } else { 0.0 } });
    }
    Ok((m, f.max_abs().max(fstar.max_abs())))
}

/// `delta M / m^2`, the bound on `|u - u*|` for in-phase solutions of
/// `u' = F(u)` and `u' = F*(u)` whose graphs are `delta` apart in `L^1`.
pub fn l1_curvature_bound(f: &GraphFunction, fstar: &GraphFunction, delta: f64) -> Result<f64> {
    let (m, big_m) = graph_range(f, fstar)?;
    Ok(delta * big_m / (m * m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1CurvatureCheck {
    pub delta: f64,
    pub bound: f64,
    /// `max |u - u*|` over `[0, min(L, L*) - bound]`.
    pub measured: f64,
    pub length: f64,
    pub length_star: f64,
}

fn profile_of(graph: &GraphFunction, u0: f64, cfg: &Config) -> Result<crate::curve::ProfileInterpolant> {
    curvature_from_graph(graph, u0, cfg.integrator_steps + 1, 0.0)?.interpolant()
}

/// Solves `u' = F(u)` and `u' = F*(u)` from the common left end of the
/// domain, measures `max |u - u*|` on `[0, min(L, L*) - delta M / m^2]` and
/// returns it with the bound. Both graphs must be positive.
pub fn l1_curvature_experiment(f: &GraphFunction, fstar: &GraphFunction, cfg: &Config) -> Result<L1CurvatureCheck> {
    let delta = l1_signature_distance(f, fstar)?;
    let bound = l1_curvature_bound(f, fstar, delta)?;
    if f.values()[0] < 0.0 {
        return Err(SigError::InvalidConfig("experiment expects positive graphs".into()));
    }
    let x = f.domain().0.max(fstar.domain().0);
    let u = profile_of(f, x, cfg)?;
    let us = profile_of(fstar, x, cfg)?;
    let end = u.length().min(us.length()) - bound;
    let measured = if end > 0.0 { sup_difference(&u, &us, end) } else { 0.0 };
    Ok(L1CurvatureCheck { delta, bound, measured, length: u.length(), length_star: us.length() })
}

/// `max{|x1 - x2|/m, |y1 - y2|/m + delta M |x - y| / (2 m^3) + M delta / m^2}`
/// with `x = max(x1, x2)`, `y = min(y1, y2)`.
pub fn l1_curve_bound(f: &GraphFunction, fstar: &GraphFunction, delta: f64) -> Result<f64> {
    let (x1, y1) = f.domain();
    let (x2, y2) = fstar.domain();
    let (x, y) = (x1.max(x2), y1.min(y2));
    if !(x < y) {
        return Err(SigError::NoCommonDomain);
    }
    let (m, big_m) = graph_range(f, fstar)?;
    let first = (x1 - x2).abs() / m;
    let second = (y1 - y2).abs() / m + delta * big_m * (x - y).abs() / (2.0 * m.powi(3)) + big_m * delta / (m * m);
    Ok(first.max(second))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1CurveCheck {
    pub delta: f64,
    pub bound: f64,
    pub measured: f64,
}

/// Curve of curvature `u(s)` with `u' = F(u)`, `u(0) = x1`, as dense nodes,
/// plus the position and tangent angle where `u` reaches `at`.
fn curve_and_anchor(graph: &GraphFunction, at: f64, cfg: &Config) -> Result<(Vec<Vec2>, Vec2, f64)> {
    let (x1, _) = graph.domain();
    let kappa = profile_of(graph, x1, cfg)?;
    let steps = cfg.integrator_steps;
    let states = integrate_curvature(&kappa, Vec2::zeros(), 0.0, steps);
    let h = kappa.length() / steps as f64;
    // Arc length where u = at: u is increasing, so bisect on the interpolant.
    let (mut a, mut b) = (0.0, kappa.length());
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if kappa.value(mid) < at {
            a = mid;
        } else {
            b = mid;
        }
    }
    let s = 0.5 * (a + b);
    let i = ((s / h) as usize).min(steps - 1);
    let t = s - i as f64 * h;
    // Cubic Hermite on each state with the known derivatives.
    let hermite = |p0: f64, d0: f64, p1: f64, d1: f64| {
        let u = t / h;
        let (u2, u3) = (u * u, u * u * u);
        (2.0 * u3 - 3.0 * u2 + 1.0) * p0
            + (u3 - 2.0 * u2 + u) * h * d0
            + (-2.0 * u3 + 3.0 * u2) * p1
            + (u3 - u2) * h * d1
    };
    let (s0, s1) = (&states[i], &states[i + 1]);
    let (k0, k1) = (kappa.value(i as f64 * h), kappa.value((i + 1) as f64 * h));
    let theta = hermite(s0[0], k0, s1[0], k1);
    let px = hermite(s0[1], s0[0].cos(), s1[1], s1[0].cos());
    let py = hermite(s0[2], s0[0].sin(), s1[2], s1[0].sin());
    let nodes = states.iter().map(|st| Vec2::new(st[1], st[2])).collect();
    Ok((nodes, Vec2::new(px, py), theta))
}

/// Reconstructs both curves from positive graphs, aligns their points and
/// tangents where the curvature equals `max(x1, x2)`, and compares the
/// Hausdorff distance with [`l1_curve_bound`].
pub fn l1_curve_experiment(f: &GraphFunction, fstar: &GraphFunction, cfg: &Config) -> Result<L1CurveCheck> {
    let delta = l1_signature_distance(f, fstar)?;
    let bound = l1_curve_bound(f, fstar, delta)?;
    if f.values()[0] < 0.0 {
        return Err(SigError::InvalidConfig("experiment expects positive graphs".into()));
    }
    let x = f.domain().0.max(fstar.domain().0);
    let (a, pa, ta) = curve_and_anchor(f, x, cfg)?;
    let (b, pb, tb) = curve_and_anchor(fstar, x, cfg)?;
    let rot = GroupElement::rotation(ta - tb, Vec2::zeros());
    let g = GroupElement::rotation(ta - tb, pa - rot.apply_point(&pb));
    let moved: Vec<Vec2> = b.iter().map(|p| g.apply_point(p)).collect();
    let measured = hausdorff_distance(&Polyline::from_points(&a, false), &Polyline::from_points(&moved, false))?;
    Ok(L1CurveCheck { delta, bound, measured })
}
