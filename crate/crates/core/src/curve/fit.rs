//! Derivatives of uniformly sampled data by local least-squares polynomials.

use nalgebra::DMatrix;

use crate::error::{Result, SigError};

const HALF_WIDTH: usize = 8;
const DEGREE: usize = 8;

/// Weights of a degree-`degree` least-squares fit over `width` consecutive
/// samples, one matrix per evaluation offset; row `k` of a matrix gives the
/// `k`-th derivative (in units of the sample spacing).
pub(crate) struct LocalFit {
    width: usize,
    half: usize,
    max_order: usize,
    weights: Vec<DMatrix<f64>>,
}

impl LocalFit {
    pub(crate) fn new(n: usize, max_order: usize) -> Result<Self> {
        let width = (2 * HALF_WIDTH + 1).min(n);
        let degree = DEGREE.min(width.saturating_sub(2)).max(max_order);
        if degree >= width {
            return Err(SigError::InsufficientResolution(format!(
                "{n} samples are too few for derivatives of order {max_order}"
            )));
        }
        let half = width / 2;
        let scale = half.max(1) as f64;
        let weights = (0..width)
            .map(|e| {
                let v = DMatrix::from_fn(width, degree + 1, |j, k| ((j as f64 - e as f64) / scale).powi(k as i32));
                let pinv = v.pseudo_inverse(1e-13).expect("full-rank Vandermonde");
                let mut w = DMatrix::zeros(max_order + 1, width);
                let mut factorial = 1.0;
                for k in 0..=max_order {
                    if k > 0 {
                        factorial *= k as f64;
                    }
                    let f = factorial / scale.powi(k as i32);
                    for j in 0..width {
                        w[(k, j)] = pinv[(k, j)] * f;
                    }
                }
                w
            })
            .collect();
        Ok(LocalFit { width, half, max_order, weights })
    }

    /// Columns `[f, f', ..., f^(max_order)]` of samples spaced `h` apart.
    /// Closed data wraps around; open data uses shifted windows at the ends.
    pub(crate) fn apply(&self, values: &[f64], h: f64, closed: bool) -> Vec<Vec<f64>> {
        let n = values.len();
        let mut out = vec![Vec::with_capacity(n); self.max_order + 1];
        for i in 0..n {
            let (w, start) = if closed {
                (&self.weights[self.half], i as isize - self.half as isize)
            } else {
                let start = i.saturating_sub(self.half).min(n - self.width);
                (&self.weights[i - start], start as isize)
            };
            for (k, col) in out.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..self.width {
                    let idx = (start + j as isize).rem_euclid(n as isize) as usize;
                    acc += w[(k, j)] * values[idx];
                }
                col.push(acc / h.powi(k as i32));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let n = 40;
        let h = 0.1;
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) - 0.1 * x.powi(5);
        let df = |x: f64| -2.0 + 1.5 * x * x - 0.5 * x.powi(4);
        let d2 = |x: f64| 3.0 * x - 2.0 * x.powi(3);
        let values: Vec<f64> = (0..n).map(|i| f(i as f64 * h)).collect();
        let cols = LocalFit::new(n, 2).unwrap().apply(&values, h, false);
        for i in 0..n {
            let x = i as f64 * h;
            assert!((cols[0][i] - f(x)).abs() < 1e-9);
            assert!((cols[1][i] - df(x)).abs() < 1e-8, "{i}");
            assert!((cols[2][i] - d2(x)).abs() < 1e-6, "{i}");
        }
    }

    #[test]
    fn periodic_sine() {
        let n = 256;
        let h = std::f64::consts::TAU / n as f64;
        let values: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
        let cols = LocalFit::new(n, 3).unwrap().apply(&values, h, true);
        for i in 0..n {
            let x = i as f64 * h;
            assert!((cols[1][i] - x.cos()).abs() < 1e-9);
            assert!((cols[3][i] + x.cos()).abs() < 1e-6);
        }
    }
}
