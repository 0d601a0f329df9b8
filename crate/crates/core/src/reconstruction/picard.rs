//! Fundamental solutions of `A' = K(s) A` by Picard iteration and by RK4.

use nalgebra::DMatrix;

use super::cumulative_uniform;
use crate::error::{Result, SigError};

/// Matrix-valued function sampled on an increasing grid, linear in between.
#[derive(Debug, Clone)]
pub struct MatrixFunction {
    dim: usize,
    s: Vec<f64>,
    values: Vec<DMatrix<f64>>,
}

impl MatrixFunction {
    pub fn new(s: Vec<f64>, values: Vec<DMatrix<f64>>) -> Result<Self> {
        if s.len() < 2 || s.len() != values.len() {
            return Err(SigError::InvalidCurve("matrix function needs >= 2 samples".into()));
        }
        if s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SigError::InvalidCurve("matrix function grid must be strictly increasing".into()));
        }
        let dim = values[0].nrows();
        if values.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(SigError::InvalidCurve("matrix samples must be square and equal-sized".into()));
        }
        if values.iter().flat_map(|m| m.iter()).chain(&s).any(|v| !v.is_finite()) {
            return Err(SigError::InvalidCurve("non-finite matrix entry".into()));
        }
        Ok(MatrixFunction { dim, s, values })
    }

    /// `f` sampled at `samples` uniform points of `[s0, s1]`.
    pub fn from_fn<F: Fn(f64) -> DMatrix<f64>>(f: F, s0: f64, s1: f64, samples: usize) -> Result<Self> {
        let s: Vec<f64> = (0..samples).map(|i| s0 + (s1 - s0) * i as f64 / (samples - 1) as f64).collect();
        let values = s.iter().map(|&t| f(t)).collect();
        Self::new(s, values)
    }

    pub fn constant(k: DMatrix<f64>, s0: f64, s1: f64) -> Result<Self> {
        Self::new(vec![s0, s1], vec![k.clone(), k])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.s[0], self.s[self.s.len() - 1])
    }

    pub fn eval(&self, t: f64) -> DMatrix<f64> {
        let n = self.s.len();
        let i = self.s.partition_point(|&v| v <= t).saturating_sub(1).min(n - 2);
        let w = ((t - self.s[i]) / (self.s[i + 1] - self.s[i])).clamp(0.0, 1.0);
        &self.values[i] * (1.0 - w) + &self.values[i + 1] * w
    }

    /// `max_s |K(s)|` in the entrywise sup-norm.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|m| m.amax()).fold(0.0, f64::max)
    }
}

/// Sampled fundamental solution together with iteration diagnostics.
#[derive(Debug, Clone)]
pub struct FrameSolution {
    s: Vec<f64>,
    frames: Vec<DMatrix<f64>>,
    initial: DMatrix<f64>,
    anchor: usize,
    iteration_count: usize,
    sup_error_estimate: f64,
    differences: Vec<f64>,
    iterate_norms: Vec<f64>,
}

impl FrameSolution {
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn frames(&self) -> &[DMatrix<f64>] {
        &self.frames
    }

    pub fn initial(&self) -> &DMatrix<f64> {
        &self.initial
    }

    /// Index of the anchor `s*` in the grid.
    pub fn anchor_index(&self) -> usize {
        self.anchor
    }

    pub fn iteration_count(&self) -> usize {
        self.iteration_count
    }

    pub fn sup_error_estimate(&self) -> f64 {
        self.sup_error_estimate
    }

    /// `sup |A_j - A_{j-1}|` for `j = 1, 2, ...`.
    pub fn differences(&self) -> &[f64] {
        &self.differences
    }

    /// `sup |A_j|` for `j = 0, 1, ...`.
    pub fn iterate_norms(&self) -> &[f64] {
        &self.iterate_norms
    }

    /// Frame at `t`, linear between grid points.
    pub fn at(&self, t: f64) -> DMatrix<f64> {
        let n = self.s.len();
        let i = self.s.partition_point(|&v| v <= t).saturating_sub(1).min(n - 2);
        let w = ((t - self.s[i]) / (self.s[i + 1] - self.s[i])).clamp(0.0, 1.0);
        &self.frames[i] * (1.0 - w) + &self.frames[i + 1] * w
    }

    /// Largest entry of `A' - K A`, with `A'` by central differences at interior nodes.
    pub fn residual(&self, k: &MatrixFunction) -> f64 {
        let mut worst = 0.0_f64;
        for i in 1..self.s.len() - 1 {
            let d = (&self.frames[i + 1] - &self.frames[i - 1]) / (self.s[i + 1] - self.s[i - 1]);
            worst = worst.max((d - k.eval(self.s[i]) * &self.frames[i]).amax());
        }
        worst
    }

    /// Sup-norm distance to another solution on the same grid.
    pub fn distance(&self, other: &FrameSolution) -> f64 {
        self.frames.iter().zip(&other.frames).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max)
    }
}

/// `n^(j-1) M^j span^j / j!`: the Picard increment bound for `U = I`.
pub fn picard_error_bound(m: f64, n: usize, j: usize, span: f64) -> f64 {
    if j == 0 {
        return f64::INFINITY;
    }
    let mut b = m * span;
    for k in 2..=j {
        b *= n as f64 * m * span / k as f64;
    }
    b
}

/// Grid split at `s_star` into uniform pieces with about `steps` intervals in total.
fn split_grid(domain: (f64, f64), s_star: f64, steps: usize) -> (Vec<f64>, usize) {
    let (s0, s1) = domain;
    let span = s1 - s0;
    let nl = ((steps as f64) * (s_star - s0) / span).round() as usize;
    let nr = ((steps as f64) * (s1 - s_star) / span).round() as usize;
    let nl = if s_star > s0 { nl.max(4) } else { 0 };
    let nr = if s1 > s_star { nr.max(4) } else { 0 };
    let mut s = Vec::with_capacity(nl + nr + 1);
    for i in 0..nl {
        s.push(s0 + (s_star - s0) * i as f64 / nl as f64);
    }
    s.push(s_star);
    for i in 1..=nr {
        s.push(s_star + (s1 - s_star) * i as f64 / nr as f64);
    }
    (s, nl)
}

fn check_inputs(k: &MatrixFunction, u: &DMatrix<f64>, s_star: f64) -> Result<()> {
    let (s0, s1) = k.domain();
    if !(s_star >= s0 && s_star <= s1) {
        return Err(SigError::InvalidConfig(format!("anchor {s_star} outside [{s0}, {s1}]")));
    }
    if u.nrows() != k.dim() || u.ncols() != k.dim() {
        return Err(SigError::InvalidCurve("initial matrix has the wrong size".into()));
    }
    if u.clone().try_inverse().is_none() || u.determinant().abs() < 1e-14 * u.amax().max(1.0).powi(k.dim() as i32) {
        return Err(SigError::FrameSingular);
    }
    Ok(())
}

/// `int_{s*}^{s} f` for grid values `f`, fourth order on each uniform side.
fn integrate_from_anchor(s: &[f64], anchor: usize, f: &[f64]) -> Vec<f64> {
    let n = s.len();
    let mut out = vec![0.0; n];
    if anchor + 1 < n {
        let h = s[anchor + 1] - s[anchor];
        let c = cumulative_uniform(&f[anchor..], h);
        out[anchor..].copy_from_slice(&c);
    }
    if anchor > 0 {
        let h = s[anchor] - s[anchor - 1];
        let rev: Vec<f64> = f[..=anchor].iter().rev().cloned().collect();
        let c = cumulative_uniform(&rev, h);
        for (i, v) in c.iter().enumerate() {
            out[anchor - i] = -v;
        }
    }
    out
}

/// Picard iteration `A_j(s) = U + int_{s*}^s K A_{j-1}` on a grid of about
/// `steps` intervals, stopped when `sup |A_j - A_{j-1}| < tol`.
pub fn picard_frame(
    k: &MatrixFunction,
    u: &DMatrix<f64>,
    s_star: f64,
    tol: f64,
    j_max: usize,
    steps: usize,
) -> Result<FrameSolution> {
    check_inputs(k, u, s_star)?;
    let dim = k.dim();
    let (s, anchor) = split_grid(k.domain(), s_star, steps);
    let ks: Vec<DMatrix<f64>> = s.iter().map(|&t| k.eval(t)).collect();
    let mut current: Vec<DMatrix<f64>> = vec![u.clone(); s.len()];
    let mut differences = Vec::new();
    let mut iterate_norms = vec![u.amax()];
    let mut last = f64::INFINITY;
    let mut converged = false;
    let mut j = 0;
    while j < j_max {
        j += 1;
        let integrand: Vec<DMatrix<f64>> = ks.iter().zip(&current).map(|(kk, a)| kk * a).collect();
        let mut next = vec![u.clone(); s.len()];
        for r in 0..dim {
            for c in 0..dim {
                let f: Vec<f64> = integrand.iter().map(|m| m[(r, c)]).collect();
                let integral = integrate_from_anchor(&s, anchor, &f);
                for (m, v) in next.iter_mut().zip(integral) {
                    m[(r, c)] += v;
                }
            }
        }
        last = next.iter().zip(&current).map(|(a, b)| (a - b).amax()).fold(0.0, f64::max);
        iterate_norms.push(next.iter().map(|m| m.amax()).fold(0.0, f64::max));
        differences.push(last);
        current = next;
        if last < tol {
            converged = true;
            break;
        }
    }
    let (s0, s1) = k.domain();
    let span = (s1 - s_star).max(s_star - s0);
    let m = k.sup_norm();
    let scale = dim as f64 * u.amax();
    let tail: f64 = (j + 1..j + 200).map(|i| picard_error_bound(m, dim, i, span)).sum::<f64>() * scale;
    let solution = FrameSolution {
        s,
        frames: current,
        initial: u.clone(),
        anchor,
        iteration_count: j,
        sup_error_estimate: if tail.is_finite() { tail.max(last) } else { last },
        differences,
        iterate_norms,
    };
    if converged {
        Ok(solution)
    } else {
        Err(SigError::NoConvergence { last_difference: last, partial: Box::new(solution) })
    }
}

/// Classical RK4 for `A' = K A` outward from `s*` on the same grid as [`picard_frame`].
pub fn rk4_frame(k: &MatrixFunction, u: &DMatrix<f64>, s_star: f64, steps: usize) -> Result<FrameSolution> {
    check_inputs(k, u, s_star)?;
    let (s, anchor) = split_grid(k.domain(), s_star, steps);
    let mut frames = vec![u.clone(); s.len()];
    let step = |a: &DMatrix<f64>, t: f64, h: f64| {
        let k1 = k.eval(t) * a;
        let k2 = k.eval(t + h / 2.0) * (a + &k1 * (h / 2.0));
        let k3 = k.eval(t + h / 2.0) * (a + &k2 * (h / 2.0));
        let k4 = k.eval(t + h) * (a + &k3 * h);
        a + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    };
    for i in anchor..s.len() - 1 {
        frames[i + 1] = step(&frames[i], s[i], s[i + 1] - s[i]);
    }
    for i in (1..=anchor).rev() {
        frames[i - 1] = step(&frames[i], s[i], s[i - 1] - s[i]);
    }
    let norm = frames.iter().map(|m| m.amax()).fold(0.0, f64::max);
    Ok(FrameSolution {
        s,
        frames,
        initial: u.clone(),
        anchor,
        iteration_count: 0,
        sup_error_estimate: 0.0,
        differences: Vec::new(),
        iterate_norms: vec![norm],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expm(k: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
        // Scaling and squaring with a 20-term Taylor series.
        let a = k * t;
        let mut sq = 0;
        let mut scaled = a.clone();
        while scaled.amax() > 0.5 {
            scaled /= 2.0;
            sq += 1;
        }
        let n = k.nrows();
        let mut term = DMatrix::identity(n, n);
        let mut sum = DMatrix::identity(n, n);
        for i in 1..20 {
            term = &term * &scaled / i as f64;
            sum += &term;
        }
        for _ in 0..sq {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn zero_generator_is_constant() {
        let k = MatrixFunction::constant(DMatrix::zeros(2, 2), 0.0, 1.0).unwrap();
        let u = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]);
        let sol = picard_frame(&k, &u, 0.3, 1e-12, 10, 256).unwrap();
        assert_eq!(sol.iteration_count(), 1);
        assert!(sol.frames().iter().all(|a| a == &u));
    }

    #[test]
    fn constant_generators_match_exponential() {
        for entries in [[0.0, 1.0, 1.0, 0.0], [0.0, 1.0, -1.0, 0.0]] {
            let km = DMatrix::from_row_slice(2, 2, &entries);
            let k = MatrixFunction::constant(km.clone(), -1.0, 2.0).unwrap();
            let u = DMatrix::identity(2, 2);
            let sol = picard_frame(&k, &u, 0.5, 1e-13, 60, 2048).unwrap();
            for (t, a) in sol.s().iter().zip(sol.frames()) {
                assert!((a - expm(&km, t - 0.5)).amax() < 1e-8);
            }
            assert_eq!(sol.frames()[sol.anchor_index()], u);
            let rk = rk4_frame(&k, &u, 0.5, 2048).unwrap();
            assert!(sol.distance(&rk) < 1e-8);
        }
    }

    #[test]
    fn bound_arithmetic() {
        assert_eq!(picard_error_bound(3.0, 2, 1, 0.5), 1.5);
        assert_eq!(picard_error_bound(0.0, 2, 4, 1.0), 0.0);
        assert!((picard_error_bound(1.0, 2, 5, 1.0) - 16.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn non_convergence_returns_partial() {
        let km = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 3.0, 0.0]);
        let k = MatrixFunction::constant(km, 0.0, 2.0).unwrap();
        match picard_frame(&k, &DMatrix::identity(2, 2), 0.0, 1e-14, 3, 128) {
            Err(SigError::NoConvergence { partial, .. }) => assert_eq!(partial.iteration_count(), 3),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn singular_initial_matrix_rejected() {
        let k = MatrixFunction::constant(DMatrix::zeros(2, 2), 0.0, 1.0).unwrap();
        let u = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(rk4_frame(&k, &u, 0.0, 64), Err(SigError::FrameSingular)));
    }
}
