use crate::error::{Result, SigError};
use crate::spline::{CubicSpline, EndCondition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    Cubic,
}

/// A signature piece written as a graph `v = F(u)` over an interval.
#[derive(Debug, Clone)]
pub struct GraphFunction {
    u: Vec<f64>,
    f: Vec<f64>,
    spline: Option<CubicSpline>,
}

impl GraphFunction {
    /// Graph through `(u[i], f[i])`. `u` must be strictly monotone; a
    /// decreasing `u` is reversed.
    pub fn new(u: &[f64], f: &[f64], interp: Interpolation) -> Result<Self> {
        if u.len() != f.len() || u.len() < 2 {
            return Err(SigError::InvalidCurve("graph needs >= 2 matching samples".into()));
        }
        if u.iter().chain(f).any(|v| !v.is_finite()) {
            return Err(SigError::InvalidCurve("non-finite graph sample".into()));
        }
        let (mut u, mut f) = (u.to_vec(), f.to_vec());
        if u[1] < u[0] {
            u.reverse();
            f.reverse();
        }
        if let Some(i) = u.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(SigError::NotGraphLike { index: i + 1 });
        }
        let spline = match interp {
            Interpolation::Cubic if u.len() >= 4 => Some(CubicSpline::new(&u, &f, EndCondition::NotAKnot)?),
            _ => None,
        };
        Ok(GraphFunction { u, f, spline })
    }

    pub fn knots(&self) -> &[f64] {
        &self.u
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn interpolation(&self) -> Interpolation {
        if self.spline.is_some() {
            Interpolation::Cubic
        } else {
            Interpolation::Linear
        }
    }

    /// `[u_min, u_max]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.u[0], self.u[self.u.len() - 1])
    }

    /// `F(u)`, clamped to the domain.
    pub fn eval(&self, u: f64) -> f64 {
        let (a, b) = self.domain();
        let u = u.clamp(a, b);
        match &self.spline {
            Some(s) => s.eval(u),
            None => {
                let i = self.u.partition_point(|&v| v <= u).saturating_sub(1).min(self.u.len() - 2);
                let t = (u - self.u[i]) / (self.u[i + 1] - self.u[i]);
                self.f[i] + t * (self.f[i + 1] - self.f[i])
            }
        }
    }

    /// `min |F|` over the samples (and over a refinement for cubic graphs).
    pub fn min_abs(&self) -> f64 {
        self.refined(8).1.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.refined(8).1.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Knots with `per` equal sub-intervals inserted in each cubic piece.
    fn refined(&self, per: usize) -> (Vec<f64>, Vec<f64>) {
        if self.spline.is_none() {
            return (self.u.clone(), self.f.clone());
        }
        let mut u = Vec::with_capacity(self.u.len() * per);
        for w in self.u.windows(2) {
            for k in 0..per {
                u.push(w[0] + (w[1] - w[0]) * k as f64 / per as f64);
            }
        }
        u.push(self.u[self.u.len() - 1]);
        let f = u.iter().map(|&x| self.eval(x)).collect();
        (u, f)
    }
}

/// `int |F - F*| du` over the common domain `[max(x1,x2), min(y1,y2)]`.
///
/// Both graphs are evaluated on the merged breakpoint grid (cubic graphs are
/// refined first); on each cell the difference is linear and its absolute
/// value is integrated exactly, splitting at a sign change.
pub fn l1_signature_distance(f: &GraphFunction, fstar: &GraphFunction) -> Result<f64> {
    let (x1, y1) = f.domain();
    let (x2, y2) = fstar.domain();
    let (a, b) = (x1.max(x2), y1.min(y2));
    if !(a < b) {
        return Err(SigError::NoCommonDomain);
    }
    let (ua, _) = f.refined(16);
    let (ub, _) = fstar.refined(16);
    let mut grid: Vec<f64> = ua.into_iter().chain(ub).filter(|&u| u > a && u < b).collect();
    grid.push(a);
    grid.push(b);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let d: Vec<f64> = grid.iter().map(|&u| f.eval(u) - fstar.eval(u)).collect();
    let mut total = 0.0;
    for i in 0..grid.len() - 1 {
        let h = grid[i + 1] - grid[i];
        let (d0, d1) = (d[i], d[i + 1]);
        total += if d0 * d1 >= 0.0 {
            h * (d0.abs() + d1.abs()) / 2.0
        } else {
            h * (d0 * d0 + d1 * d1) / (2.0 * (d0.abs() + d1.abs()))
        };
    }
    Ok(total)
}
