//! Closed-form test curves.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{AnalyticCurvature, PlanarCurve};
use crate::error::{Result, SigError};
use crate::reconstruction::integrate_curvature;
use crate::spline::{CubicSpline, EndCondition};
use crate::Vec2;

/// Descriptor of a generated curve, kept alongside its samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum AnalyticCurve {
    Circle {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `y = a x^2` for `x` in `[x_min, x_max]`.
    Parabola {
        a: f64,
        x_min: f64,
        x_max: f64,
    },
    /// Curvature `kappa0 + rate * s` on `[0, length]`, starting at the origin along +x.
    Clothoid {
        length: f64,
        #[serde(default)]
        kappa0: f64,
        #[serde(default = "one")]
        rate: f64,
    },
    /// Curvature samples on a uniform grid over `[0, length]`.
    CustomCurvature {
        length: f64,
        kappa: Vec<f64>,
    },
    /// `r = b + a cos(theta)`.
    Limacon {
        a: f64,
        b: f64,
    },
    /// `r = cos[0] + sum_k cos[k] cos(k theta) + sin[k] sin(k theta)`.
    PolarFourier {
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

impl AnalyticCurve {
    /// Sample the curve with `n` points.
    pub fn sample(&self, n: usize) -> Result<PlanarCurve> {
        if n < 4 {
            return Err(SigError::InvalidCurve(format!("need n >= 4, got {n}")));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SigError::InvalidCurve(format!("{name} must be positive, got {v}")))
            }
        };
        let curve = match self {
            AnalyticCurve::Circle { radius } => {
                positive("radius", *radius)?;
                closed_param(n, |t| Vec2::new(radius * t.cos(), radius * t.sin()))
            }
            AnalyticCurve::Ellipse { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
                closed_param(n, |t| Vec2::new(a * t.cos(), b * t.sin()))
            }
            AnalyticCurve::Parabola { a, x_min, x_max } => {
                if !(x_max > x_min) || *a == 0.0 {
                    return Err(SigError::InvalidCurve("parabola needs x_max > x_min and a != 0".into()));
                }
                let pts = (0..n)
                    .map(|i| {
                        let x = x_min + (x_max - x_min) * i as f64 / (n - 1) as f64;
                        Vec2::new(x, a * x * x)
                    })
                    .collect();
                PlanarCurve::from_validated(pts, false)
            }
            AnalyticCurve::Clothoid { length, kappa0, rate } => {
                positive("length", *length)?;
                let (k0, r) = (*kappa0, *rate);
                let f = AnalyticCurvature::new(move |s| k0 + r * s, move |_| r, *length);
                curvature_trace(&f, n)?
            }
            AnalyticCurve::CustomCurvature { length, kappa } => {
                positive("length", *length)?;
                if kappa.len() < 2 || kappa.iter().any(|k| !k.is_finite()) {
                    return Err(SigError::InvalidCurve("need >= 2 finite curvature samples".into()));
                }
                let s: Vec<f64> = (0..kappa.len())
                    .map(|i| length * i as f64 / (kappa.len() - 1) as f64)
                    .collect();
                let end = if kappa.len() >= 4 { EndCondition::NotAKnot } else { EndCondition::Natural };
                let spline = CubicSpline::new(&s, kappa, end)?;
                let f = AnalyticCurvature::new(|t| spline.eval(t), |t| spline.derivative(t), *length);
                curvature_trace(&f, n)?
            }
            AnalyticCurve::Limacon { a, b } => {
                positive("a", *a)?;
                positive("b", *b)?;
                closed_param(n, |t| {
                    let r = b + a * t.cos();
                    Vec2::new(r * t.cos(), r * t.sin())
                })
            }
            AnalyticCurve::PolarFourier { cos, sin } => {
                if cos.is_empty() {
                    return Err(SigError::InvalidCurve("polar curve needs a constant term".into()));
                }
                let radius = |t: f64| {
                    let mut r = cos[0];
                    for (k, c) in cos.iter().enumerate().skip(1) {
                        r += c * (k as f64 * t).cos();
                    }
                    for (k, s) in sin.iter().enumerate().skip(1) {
                        r += s * (k as f64 * t).sin();
                    }
                    r
                };
                if (0..720).any(|i| radius(2.0 * PI * i as f64 / 720.0) <= 0.0) {
                    return Err(SigError::InvalidCurve("polar radius must stay positive".into()));
                }
                closed_param(n, |t| {
                    let r = radius(t);
                    Vec2::new(r * t.cos(), r * t.sin())
                })
            }
        };
        Ok(curve.with_analytic(self.clone()))
    }
}

fn closed_param<F: Fn(f64) -> Vec2>(n: usize, f: F) -> PlanarCurve {
    let pts = (0..n).map(|i| f(2.0 * PI * i as f64 / n as f64)).collect();
    PlanarCurve::from_validated(pts, true)
}

fn curvature_trace<C: super::CurvatureFunction>(f: &C, n: usize) -> Result<PlanarCurve> {
    let sub = 4096usize.div_ceil(n - 1).max(1);
    let states = integrate_curvature(f, Vec2::zeros(), 0.0, (n - 1) * sub);
    let pts = states.iter().step_by(sub).map(|st| Vec2::new(st[1], st[2])).collect();
    Ok(PlanarCurve::from_validated(pts, false))
}

/// Counterclockwise circle of radius `r` centred at the origin.
pub fn circle(r: f64, n: usize) -> PlanarCurve {
    AnalyticCurve::Circle { radius: r }.sample(n).expect("valid circle")
}

/// Counterclockwise ellipse with semi-axes `a` (along x) and `b`.
pub fn ellipse(a: f64, b: f64, n: usize) -> PlanarCurve {
    AnalyticCurve::Ellipse { a, b }.sample(n).expect("valid ellipse")
}

/// `y = a x^2` sampled uniformly in `x`.
pub fn parabola(a: f64, x_min: f64, x_max: f64, n: usize) -> PlanarCurve {
    AnalyticCurve::Parabola { a, x_min, x_max }.sample(n).expect("valid parabola")
}

/// Arc with curvature `kappa0 + rate * s`, `s` in `[0, length]`.
pub fn clothoid(kappa0: f64, rate: f64, length: f64, n: usize) -> PlanarCurve {
    AnalyticCurve::Clothoid { length, kappa0, rate }.sample(n).expect("valid clothoid")
}

/// Limaçon `r = b + a cos(theta)`; has an inner loop when `a > b`.
pub fn limacon(a: f64, b: f64, n: usize) -> PlanarCurve {
    AnalyticCurve::Limacon { a, b }.sample(n).expect("valid limacon")
}

/// Four-petalled flower `r = 1 + 0.2 cos(4 theta)`.
pub fn flower(n: usize) -> PlanarCurve {
    AnalyticCurve::PolarFourier { cos: vec![1.0, 0.0, 0.0, 0.0, 0.2], sin: vec![] }
        .sample(n)
        .expect("valid flower")
}

/// Convex egg without rotational symmetry.
pub fn egg(n: usize) -> PlanarCurve {
    AnalyticCurve::PolarFourier { cos: vec![1.0, 0.15, 0.0, 0.02], sin: vec![0.0, 0.0, 0.03] }
        .sample(n)
        .expect("valid egg")
}
