use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{derivative_range, explicit_bound, march_to, RHO_STEPS};
use crate::congruence::register;
use crate::config::Config;
use crate::curve::{
    apply_group, euclidean_curvature, hausdorff_distance, resample_by_arclength, CurvatureFunction, PlanarCurve,
    Polyline,
};
use crate::error::{Result, SigError};
use crate::reconstruction::curve_from_function;
use crate::spline::{CubicSpline, EndCondition};
use crate::Vec2;

/// `xi(s) = amplitude * sum_k c_k sin(w_k s + p_k) / sum_k |c_k|`, so `|xi| <= amplitude`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothNoise {
    pub amplitude: f64,
    terms: Vec<[f64; 3]>,
    norm: f64,
}

impl SmoothNoise {
    /// Three random modes with frequencies up to `4 pi / length`.
    pub fn random<R: Rng>(amplitude: f64, length: f64, rng: &mut R) -> Self {
        let terms: Vec<[f64; 3]> = (0..3)
            .map(|_| {
                [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.5..4.0) * std::f64::consts::PI / length,
                    rng.gen_range(0.0..std::f64::consts::TAU),
                ]
            })
            .collect();
        let norm = terms.iter().map(|t| t[0].abs()).sum::<f64>().max(f64::MIN_POSITIVE);
        SmoothNoise { amplitude, terms, norm }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.amplitude * self.terms.iter().map(|t| t[0] * (t[1] * s + t[2]).sin()).sum::<f64>() / self.norm
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.amplitude * self.terms.iter().map(|t| t[0] * t[1] * (t[1] * s + t[2]).cos()).sum::<f64>() / self.norm
    }

    /// `max |xi|` on a fine grid over `[0, length]`.
    pub fn sup(&self, length: f64) -> f64 {
        (0..=4096).map(|i| self.value(length * i as f64 / 4096.0).abs()).fold(0.0, f64::max)
    }
}

/// A curvature `kappa*(s) = kappa(r(s))` whose signature point at `s` sits
/// vertically above `(kappa(r), kappa'(r))` by `xi(s)`.
///
/// `r' = 1 + xi(s) / kappa'(r)`, `r(0) = 0`, run until `r = L`, so that
/// `kappa*' = kappa'(r) + xi` and the signature stays in the inner tube of
/// radius `sup |xi|`.
pub struct Perturbed<'a, C: ?Sized> {
    kappa: &'a C,
    r: CubicSpline,
    noise: SmoothNoise,
    length: f64,
}

impl<C: CurvatureFunction + ?Sized> Perturbed<'_, C> {
    pub fn noise(&self) -> &SmoothNoise {
        &self.noise
    }

    pub fn reparameterisation(&self, s: f64) -> f64 {
        self.r.eval(s)
    }
}

impl<C: CurvatureFunction + ?Sized> CurvatureFunction for Perturbed<'_, C> {
    fn length(&self) -> f64 {
        self.length
    }
    fn value(&self, s: f64) -> f64 {
        self.kappa.value(self.r.eval(s))
    }
    fn derivative(&self, s: f64) -> f64 {
        self.kappa.derivative(self.r.eval(s)) + self.noise.value(s)
    }
}

/// Builds [`Perturbed`] for `kappa` with noise of the given sup bound.
/// Requires `amplitude < min |kappa'|`.
pub fn synthetic_perturbation<'a, C: CurvatureFunction + ?Sized>(
    kappa: &'a C,
    noise: SmoothNoise,
) -> Result<Perturbed<'a, C>> {
    let range = derivative_range(kappa);
    if range.sign == 0.0 || noise.amplitude >= range.m {
        return Err(SigError::DeltaTooLarge { delta: noise.amplitude, limit: range.m });
    }
    let sol = march_to(|s, r| 1.0 + noise.value(s) / kappa.derivative(r), kappa.length(), RHO_STEPS);
    let length = sol.end();
    let r = CubicSpline::new(&sol.s, &sol.rho, EndCondition::NotAKnot)?;
    Ok(Perturbed { kappa, r, noise, length })
}

/// One row of the perturbation table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub trial: usize,
    /// Hausdorff distance between the two signatures.
    pub delta_measured: f64,
    /// Hausdorff distance between the curves after registration.
    pub d_curves: f64,
    /// `eps(delta)` at the tube radius `delta = sup |xi|`; absent out of hypothesis.
    pub eps_bound: Option<f64>,
    pub in_hypothesis: bool,
    /// `d_curves <= eps_bound + comparison_tol`; false out of hypothesis.
    pub pass: bool,
}

/// Additive perturbation `kappa + xi`, used when the curve has vertices.
struct Additive<'a, C: ?Sized> {
    kappa: &'a C,
    noise: &'a SmoothNoise,
}

impl<C: CurvatureFunction + ?Sized> CurvatureFunction for Additive<'_, C> {
    fn length(&self) -> f64 {
        self.kappa.length()
    }
    fn value(&self, s: f64) -> f64 {
        self.kappa.value(s) + self.noise.value(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        self.kappa.derivative(s) + self.noise.derivative(s)
    }
}

fn portrait<C: CurvatureFunction + ?Sized>(k: &C) -> Polyline {
    let n = 2049;
    let l = k.length();
    let rows: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let s = l * i as f64 / (n - 1) as f64;
            [k.value(s), k.derivative(s)]
        })
        .collect();
    Polyline::from_rows(&rows, false)
}

/// Seeded perturbation trials on an open curve.
///
/// Trial `i` draws smooth noise from `ChaCha8(seed + i)`. For a vertex-free
/// curve the noise is applied vertically in the signature (so the perturbed
/// signature stays in the tube) and the row carries `eps(delta)`. With
/// `allow_vertices` a curve with vertices gets additive curvature noise and
/// rows marked out of hypothesis; otherwise it fails with `VertexPresent`.
pub fn perturbation_experiment(
    curve: &PlanarCurve,
    amplitude: f64,
    trials: usize,
    seed: u64,
    allow_vertices: bool,
    cfg: &Config,
) -> Result<Vec<ExperimentRow>> {
    let open = PlanarCurve::new(curve.samples().to_vec(), false)?;
    let arc = resample_by_arclength(&open, cfg.resample_nodes)?;
    let kappa = euclidean_curvature(&arc, 1)?.interpolant()?;
    let range = derivative_range(&kappa);
    let eta = cfg.vertex_tol * range.big_m.max(1e-8);
    let in_hypothesis = range.sign != 0.0 && range.m > eta;
    if !in_hypothesis && !allow_vertices {
        return Err(SigError::VertexPresent { min_abs: range.m });
    }
    let base = curve_from_function(&kappa, Vec2::zeros(), 0.0, cfg.integrator_steps, false)?;
    let sig = portrait(&kappa);
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
            let noise = SmoothNoise::random(amplitude, kappa.length(), &mut rng);
            let theta0 = rng.gen_range(0.0..std::f64::consts::TAU);
            let x0 = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let delta = noise.sup(kappa.length());
            let (other, sig_star, eps) = if in_hypothesis {
                let p = synthetic_perturbation(&kappa, noise.clone())?;
                let eps = explicit_bound(&kappa, delta).ok().map(|b| b.epsilon_of_delta);
                (curve_from_function(&p, x0, theta0, cfg.integrator_steps, false)?, portrait(&p), eps)
            } else {
                let a = Additive { kappa: &kappa, noise: &noise };
                (curve_from_function(&a, x0, theta0, cfg.integrator_steps, false)?, portrait(&a), None)
            };
            let g = register(&base, &other, crate::curve::GroupKind::SE2, cfg)?;
            let d_curves = hausdorff_distance(&base.polyline(), &apply_group(&g, &other.to_planar()).polyline())?;
            let delta_measured = hausdorff_distance(&sig, &sig_star)?;
            let pass = eps.is_some_and(|e| d_curves <= e + cfg.comparison_tol);
            Ok(ExperimentRow { trial, delta_measured, d_curves, eps_bound: eps, in_hypothesis: eps.is_some(), pass })
        })
        .collect()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
