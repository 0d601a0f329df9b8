//! Cubic interpolating splines in second-derivative (moment) form.
//!
//! Three end conditions are supported: periodic (for closed curves),
//! not-a-knot and natural. Knots must be strictly increasing.

use crate::error::{Result, SigError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    /// Periodic with the given period; the knot after the last is `x[0] + period`.
    Periodic,
    /// Third derivative continuous across the second and penultimate knots.
    NotAKnot,
    /// Zero second derivative at both ends.
    Natural,
}

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
    period: Option<f64>,
}

impl CubicSpline {
    /// Open spline through `(x[i], y[i])`.
    pub fn new(x: &[f64], y: &[f64], end: EndCondition) -> Result<Self> {
        if end == EndCondition::Periodic {
            return Err(SigError::InvalidCurve(
                "periodic spline requires a period; use CubicSpline::periodic".into(),
            ));
        }
        check_knots(x, y, 2)?;
        let n = x.len();
        let m = match end {
            EndCondition::NotAKnot if n >= 4 => not_a_knot_moments(x, y),
            _ => natural_moments(x, y),
        };
        Ok(CubicSpline { x: x.to_vec(), y: y.to_vec(), m, period: None })
    }

    /// Periodic spline; `x` spans less than one period and `y` is not repeated at the end.
    pub fn periodic(x: &[f64], y: &[f64], period: f64) -> Result<Self> {
        check_knots(x, y, 3)?;
        let n = x.len();
        if !(period > x[n - 1] - x[0]) {
            return Err(SigError::InvalidCurve("period must exceed the knot span".into()));
        }
        let m = periodic_moments(x, y, period);
        Ok(CubicSpline { x: x.to_vec(), y: y.to_vec(), m, period: Some(period) })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// Value and first three derivatives at `t`. Open splines extrapolate with the end cubic.
    pub fn eval_all(&self, t: f64) -> [f64; 4] {
        let (i, t) = self.locate(t);
        let (x0, x1, y0, y1, m0, m1) = self.interval(i);
        let h = x1 - x0;
        let a = x1 - t;
        let b = t - x0;
        let value = m0 * a * a * a / (6.0 * h)
            + m1 * b * b * b / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * a
            + (y1 / h - m1 * h / 6.0) * b;
        let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) + (y1 - y0) / h
            - (m1 - m0) * h / 6.0;
        let d2 = (m0 * a + m1 * b) / h;
        let d3 = (m1 - m0) / h;
        [value, d1, d2, d3]
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_all(t)[0]
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval_all(t)[1]
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        self.eval_all(t)[2]
    }

    /// Exact first derivative at knot `i`.
    pub fn knot_derivative(&self, i: usize) -> f64 {
        let n = self.x.len();
        if i + 1 < n || self.period.is_some() {
            let (x0, x1, y0, y1, m0, m1) = self.interval(i);
            let h = x1 - x0;
            (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0
        } else {
            let (x0, x1, y0, y1, m0, m1) = self.interval(n - 2);
            let h = x1 - x0;
            (y1 - y0) / h + h * (m0 + 2.0 * m1) / 6.0
        }
    }

    /// Second derivative at knot `i` (the spline moment).
    pub fn knot_second_derivative(&self, i: usize) -> f64 {
        self.m[i]
    }

    /// Integral of the spline over its open knot span (or one period).
    pub fn integral(&self) -> f64 {
        let intervals = if self.period.is_some() { self.x.len() } else { self.x.len() - 1 };
        (0..intervals)
            .map(|i| {
                let (x0, x1, y0, y1, m0, m1) = self.interval(i);
                let h = x1 - x0;
                h * (y0 + y1) / 2.0 - h * h * h * (m0 + m1) / 24.0
            })
            .sum()
    }

    /// Running integral from the first knot, evaluated at every knot.
    pub fn cumulative_integral(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.x.len());
        out.push(0.0);
        for i in 0..self.x.len() - 1 {
            let (x0, x1, y0, y1, m0, m1) = self.interval(i);
            let h = x1 - x0;
            out.push(out[i] + h * (y0 + y1) / 2.0 - h * h * h * (m0 + m1) / 24.0);
        }
        out
    }

    fn interval(&self, i: usize) -> (f64, f64, f64, f64, f64, f64) {
        let n = self.x.len();
        if i + 1 < n {
            (self.x[i], self.x[i + 1], self.y[i], self.y[i + 1], self.m[i], self.m[i + 1])
        } else {
            let p = self.period.expect("wrap-around interval on open spline");
            (self.x[n - 1], self.x[0] + p, self.y[n - 1], self.y[0], self.m[n - 1], self.m[0])
        }
    }

    /// Interval index and (for periodic splines) the wrapped abscissa.
    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.x.len();
        match self.period {
            Some(p) => {
                let x0 = self.x[0];
                let mut t = x0 + (t - x0).rem_euclid(p);
                if t >= x0 + p {
                    t = x0;
                }
                let i = self.x.partition_point(|&v| v <= t).saturating_sub(1);
                (i, t)
            }
            None => {
                let i = self.x.partition_point(|&v| v <= t).saturating_sub(1).min(n - 2);
                (i, t)
            }
        }
    }
}

fn check_knots(x: &[f64], y: &[f64], min: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(SigError::InvalidCurve("knot and value lengths differ".into()));
    }
    if x.len() < min {
        return Err(SigError::InsufficientResolution(format!(
            "spline needs at least {min} knots, got {}",
            x.len()
        )));
    }
    if let Some(i) = x.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(SigError::InvalidCurve(format!("spline knots not increasing at {}", i + 1)));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(SigError::InvalidCurve("non-finite spline data".into()));
    }
    Ok(())
}

fn rhs(x: &[f64], y: &[f64], i: usize) -> f64 {
    let h0 = x[i] - x[i - 1];
    let h1 = x[i + 1] - x[i];
    6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0)
}

fn natural_moments(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut r = vec![0.0; k];
    for j in 0..k {
        let i = j + 1;
        sub[j] = x[i] - x[i - 1];
        diag[j] = 2.0 * (x[i + 1] - x[i - 1]);
        sup[j] = x[i + 1] - x[i];
        r[j] = rhs(x, y, i);
    }
    let inner = solve_tridiagonal(&sub, &diag, &sup, &r);
    m[1..n - 1].copy_from_slice(&inner);
    m
}

fn not_a_knot_moments(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut r = vec![0.0; k];
    for j in 0..k {
        let i = j + 1;
        sub[j] = h[i - 1];
        diag[j] = 2.0 * (h[i - 1] + h[i]);
        sup[j] = h[i];
        r[j] = rhs(x, y, i);
    }
    // Eliminate M_0 and M_{n-1} using third-derivative continuity.
    let (h0, h1) = (h[0], h[1]);
    diag[0] = h0 * (h0 + h1) / h1 + 2.0 * (h0 + h1);
    sup[0] = h1 - h0 * h0 / h1;
    // n >= 4 so the two modified rows are distinct.
    let (ha, hb) = (h[n - 3], h[n - 2]);
    sub[k - 1] = ha - hb * hb / ha;
    diag[k - 1] = 2.0 * (ha + hb) + hb * (hb + ha) / ha;
    let inner = solve_tridiagonal(&sub, &diag, &sup, &r);
    let mut m = vec![0.0; n];
    m[1..n - 1].copy_from_slice(&inner);
    m[0] = m[1] + h0 * (m[1] - m[2]) / h1;
    m[n - 1] = m[n - 2] + hb * (m[n - 2] - m[n - 3]) / ha;
    m
}

fn periodic_moments(x: &[f64], y: &[f64], period: f64) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { x[i + 1] - x[i] } else { x[0] + period - x[n - 1] })
        .collect();
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut r = vec![0.0; n];
    for i in 0..n {
        let hp = h[(i + n - 1) % n];
        let hn = h[i];
        let yp = y[(i + n - 1) % n];
        let yn = y[(i + 1) % n];
        sub[i] = hp;
        diag[i] = 2.0 * (hp + hn);
        sup[i] = hn;
        r[i] = 6.0 * ((yn - y[i]) / hn - (y[i] - yp) / hp);
    }
    solve_cyclic_tridiagonal(&sub, &diag, &sup, &r)
}

/// Thomas algorithm. `sub[0]` and `sup[n-1]` are ignored.
pub(crate) fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], r: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = r[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / denom } else { 0.0 };
        d[i] = (r[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
    out
}

/// Cyclic tridiagonal solve via Sherman-Morrison. `sub[0]` couples row 0 to the
/// last unknown and `sup[n-1]` couples the last row to unknown 0.
fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], r: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let alpha = sup[n - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &b, sup, r);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &b, sup, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}
