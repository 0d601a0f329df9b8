//! Envelope curves, explicit closeness bounds and the experiments that check them.

mod closeness;
mod perturb;

pub use closeness::{
    closeness_bound_curvature, closeness_experiment, l1_curvature_bound, l1_curvature_experiment, l1_curve_bound,
    l1_curve_experiment, ClosenessCheck, L1CurveCheck, L1CurvatureCheck,
};
pub use perturb::{
    perturbation_experiment, spearman, synthetic_perturbation, ExperimentRow, Perturbed, SmoothNoise,
};

use serde::Serialize;

use crate::curve::CurvatureFunction;
use crate::error::{Result, SigError};

/// RK4 steps used for the reparameterisations.
pub const RHO_STEPS: usize = 4096;
const GRID: usize = 2049;
const INVPHI: f64 = 0.618_033_988_749_894_9;

/// Extremes of `|kappa'|` over `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeRange {
    /// `min |kappa'|`.
    pub m: f64,
    /// `max |kappa'|`.
    #[serde(rename = "M")]
    pub big_m: f64,
    /// `+1` or `-1` when `kappa'` keeps one sign on the grid, `0` otherwise.
    pub sign: f64,
}

fn golden<F: Fn(f64) -> f64>(mut a: f64, mut b: f64, f: F) -> f64 {
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    f(0.5 * (a + b))
}

/// `min |kappa'|` and `max |kappa'|` from a 2049-point grid refined by
/// golden-section search around the best grid cell.
pub fn derivative_range<C: CurvatureFunction + ?Sized>(kappa: &C) -> DerivativeRange {
    let l = kappa.length();
    let h = l / (GRID - 1) as f64;
    let d: Vec<f64> = (0..GRID).map(|i| kappa.derivative(i as f64 * h)).collect();
    let pos = d.iter().all(|&v| v > 0.0);
    let neg = d.iter().all(|&v| v < 0.0);
    let sign = if pos { 1.0 } else if neg { -1.0 } else { 0.0 };
    let argmin = (0..GRID).min_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs())).unwrap();
    let argmax = (0..GRID).max_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs())).unwrap();
    let cell = |i: usize| ((i.saturating_sub(1)) as f64 * h, ((i + 1).min(GRID - 1)) as f64 * h);
    let (a, b) = cell(argmin);
    let m = golden(a, b, |s| kappa.derivative(s).abs()).min(d[argmin].abs());
    let (a, b) = cell(argmax);
    let big_m = (-golden(a, b, |s| -kappa.derivative(s).abs())).max(d[argmax].abs());
    DerivativeRange { m: if sign == 0.0 { 0.0 } else { m }, big_m, sign }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A sampled increasing reparameterisation `rho(s)` with `rho(0) = 0` and
/// `rho(s_end) = L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoSolution {
    pub s: Vec<f64>,
    pub rho: Vec<f64>,
}

impl RhoSolution {
    /// Parameter at which `rho` reaches `L`.
    pub fn end(&self) -> f64 {
        self.s[self.s.len() - 1]
    }

    /// Linear interpolation between RK4 nodes.
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.s.partition_point(|&v| v <= t).saturating_sub(1).min(self.s.len() - 2);
        let w = (t - self.s[i]) / (self.s[i + 1] - self.s[i]);
        self.rho[i] + w * (self.rho[i + 1] - self.rho[i])
    }
}

fn rk4_step<F: Fn(f64, f64) -> f64>(f: &F, s: f64, r: f64, h: f64) -> f64 {
    let k1 = f(s, r);
    let k2 = f(s + h / 2.0, r + h / 2.0 * k1);
    let k3 = f(s + h / 2.0, r + h / 2.0 * k2);
    let k4 = f(s + h, r + h * k3);
    r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// RK4 for `r' = f(s, r)`, `r(0) = 0`, with step `l / steps`, stopped when
/// `r` reaches `l`. The last step is shortened (by bisection on the step
/// size) so that it lands on `l`.
pub(crate) fn march_to<F: Fn(f64, f64) -> f64>(f: F, l: f64, steps: usize) -> RhoSolution {
    let h = l / steps as f64;
    let mut s = vec![0.0];
    let mut rho = vec![0.0];
    let limit = 4 * steps;
    while s.len() <= limit {
        let (s0, r0) = (s[s.len() - 1], rho[rho.len() - 1]);
        let r1 = rk4_step(&f, s0, r0, h);
        if r1 < l {
            s.push(s0 + h);
            rho.push(r1);
            continue;
        }
        let (mut lo, mut hi) = (0.0, h);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if rk4_step(&f, s0, r0, mid) < l {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let step = 0.5 * (lo + hi);
        if step > 1e-12 * h {
            s.push(s0 + step);
            rho.push(l);
        } else {
            let last = rho.len() - 1;
            rho[last] = l;
        }
        break;
    }
    RhoSolution { s, rho }
}

/// `rho^±` solving `rho' = 1 ± delta / kappa'(rho)`, `rho(0) = 0`, until
/// `rho = L`. Requires `delta < m = min |kappa'|`.
pub fn solve_rho<C: CurvatureFunction + ?Sized>(kappa: &C, delta: f64, sign: Sign) -> Result<RhoSolution> {
    let range = derivative_range(kappa);
    if !(delta >= 0.0) || delta >= range.m {
        return Err(SigError::DeltaTooLarge { delta, limit: range.m });
    }
    let pm = sign.value();
    Ok(march_to(|_, r| 1.0 + pm * delta / kappa.derivative(r), kappa.length(), RHO_STEPS))
}

/// `-kappa` when `kappa' < 0`, so that the curvature increases.
struct Oriented<'a, C: ?Sized> {
    kappa: &'a C,
    sign: f64,
}

impl<C: CurvatureFunction + ?Sized> CurvatureFunction for Oriented<'_, C> {
    fn length(&self) -> f64 {
        self.kappa.length()
    }
    fn value(&self, s: f64) -> f64 {
        self.sign * self.kappa.value(s)
    }
    fn derivative(&self, s: f64) -> f64 {
        self.sign * self.kappa.derivative(s)
    }
}

/// Inverse of an increasing curvature by bisection.
fn invert<C: CurvatureFunction + ?Sized>(kappa: &C, target: f64) -> f64 {
    let (mut a, mut b) = (0.0, kappa.length());
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if kappa.value(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= f64::EPSILON * kappa.length() {
            break;
        }
    }
    0.5 * (a + b)
}

/// Scalar constants of the envelope construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeConstants {
    pub delta: f64,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub ell_tau: f64,
    #[serde(rename = "L_tau")]
    pub l_tau: f64,
    pub ell_beta: f64,
    #[serde(rename = "L_beta")]
    pub l_beta: f64,
    /// True when `kappa' < 0` and the construction ran on `-kappa`.
    pub reflected: bool,
}

impl EnvelopeConstants {
    fn orient(&self) -> f64 {
        if self.reflected {
            -1.0
        } else {
            1.0
        }
    }

    /// `tau(s) = kappa((s + ell_tau)(1 + delta/m))` for the increasing orientation.
    pub fn tau<C: CurvatureFunction + ?Sized>(&self, kappa: &C, s: f64) -> f64 {
        self.orient() * kappa.value((s + self.ell_tau) * (1.0 + self.delta / self.m))
    }

    /// `beta(s) = kappa(s (1 - delta/m))` for the increasing orientation.
    pub fn beta<C: CurvatureFunction + ?Sized>(&self, kappa: &C, s: f64) -> f64 {
        self.orient() * kappa.value(s * (1.0 - self.delta / self.m))
    }

    /// `beta` continued past `ell_beta` by the line of slope `m` through `(ell_beta, kappa(L))`.
    pub fn beta_extended<C: CurvatureFunction + ?Sized>(&self, kappa: &C, s: f64) -> f64 {
        if s <= self.ell_beta {
            self.beta(kappa, s)
        } else {
            self.m * (s - self.ell_beta) + self.orient() * kappa.value(self.length)
        }
    }

    /// Upper envelope in the original orientation.
    pub fn upper<C: CurvatureFunction + ?Sized>(&self, kappa: &C, s: f64) -> f64 {
        if self.reflected {
            -self.beta(kappa, s)
        } else {
            self.tau(kappa, s)
        }
    }

    /// Lower envelope in the original orientation.
    pub fn lower<C: CurvatureFunction + ?Sized>(&self, kappa: &C, s: f64) -> f64 {
        if self.reflected {
            -self.tau(kappa, s)
        } else {
            self.beta(kappa, s)
        }
    }
}

/// Samples of the envelope construction for a strictly monotone curvature.
///
/// `tau`, `beta` and `beta_extended` are `(s, value)` pairs in the increasing
/// orientation (`-kappa` when `reflected`).
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeSet {
    pub constants: EnvelopeConstants,
    pub rho_plus: RhoSolution,
    pub rho_minus: RhoSolution,
    /// `(kappa(rho+), kappa'(rho+) + delta)` at the `rho_plus` nodes.
    pub sigma_plus: Vec<[f64; 2]>,
    /// `(kappa(rho-), kappa'(rho-) - delta)` at the `rho_minus` nodes.
    pub sigma_minus: Vec<[f64; 2]>,
    pub tau: Vec<[f64; 2]>,
    pub beta: Vec<[f64; 2]>,
    pub beta_extended: Vec<[f64; 2]>,
}

/// Validates `0 <= delta < min(|kappa(0) - kappa(L)| / 2, m)` and computes
/// the envelope constants.
pub fn envelope_constants<C: CurvatureFunction + ?Sized>(kappa: &C, delta: f64) -> Result<EnvelopeConstants> {
    let range = derivative_range(kappa);
    if range.sign == 0.0 || !(range.m > 0.0) {
        return Err(SigError::NotMonotone);
    }
    let l = kappa.length();
    let limit = ((kappa.value(0.0) - kappa.value(l)).abs() / 2.0).min(range.m);
    if !(delta >= 0.0) || delta >= limit {
        return Err(SigError::DeltaTooLarge { delta, limit });
    }
    let k = Oriented { kappa, sign: range.sign };
    let m = range.m;
    let r = delta / m;
    let ell_tau = invert(&k, k.value(0.0) + delta) / (1.0 + r);
    let l_tau = invert(&k, k.value(l) - delta) / (1.0 + r) - ell_tau;
    let ell_beta = l / (1.0 - r);
    Ok(EnvelopeConstants {
        delta,
        m,
        big_m: range.big_m,
        length: l,
        ell_tau,
        l_tau,
        ell_beta,
        l_beta: ell_beta + r,
        reflected: range.sign < 0.0,
    })
}

/// Envelope curves for `kappa` at tube radius `delta`.
pub fn envelopes<C: CurvatureFunction + ?Sized>(kappa: &C, delta: f64) -> Result<EnvelopeSet> {
    let c = envelope_constants(kappa, delta)?;
    let rho_plus = solve_rho(kappa, delta, Sign::Plus)?;
    let rho_minus = solve_rho(kappa, delta, Sign::Minus)?;
    let sigma = |rho: &RhoSolution, pm: f64| -> Vec<[f64; 2]> {
        rho.rho.iter().map(|&r| [kappa.value(r), kappa.derivative(r) + pm * delta]).collect()
    };
    let n = GRID;
    let sample = |end: f64, f: &dyn Fn(f64) -> f64| -> Vec<[f64; 2]> {
        (0..n)
            .map(|i| {
                let s = end * i as f64 / (n - 1) as f64;
                [s, f(s)]
            })
            .collect()
    };
    let tau = sample(c.l_tau, &|s| c.tau(kappa, s));
    let beta = sample(c.l_tau, &|s| c.beta(kappa, s));
    let beta_extended = sample(c.l_beta, &|s| c.beta_extended(kappa, s));
    Ok(EnvelopeSet {
        sigma_plus: sigma(&rho_plus, 1.0),
        sigma_minus: sigma(&rho_minus, -1.0),
        constants: c,
        rho_plus,
        rho_minus,
        tau,
        beta,
        beta_extended,
    })
}

/// Every constant of the explicit closeness bound at one `delta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub delta: f64,
    pub m: f64,
    pub m1: f64,
    pub m2: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub ell_tau: f64,
    #[serde(rename = "L_tau")]
    pub l_tau: f64,
    pub ell_beta: f64,
    #[serde(rename = "L_beta")]
    pub l_beta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    #[serde(rename = "eps")]
    pub epsilon_of_delta: f64,
    /// `ell_tau` replaced by its inverse-free upper estimate `delta / (m (1 + delta/m))`.
    pub ell_tau_inverse_free: f64,
    #[serde(rename = "L_tau_inverse_free")]
    pub l_tau_inverse_free: f64,
    pub eps_inverse_free: f64,
    pub reflected: bool,
    pub notes: Vec<String>,
}

fn epsilon(delta: f64, m: f64, big_m: f64, ell_tau: f64, l_tau: f64, l_beta: f64) -> f64 {
    let r = delta / m;
    let tail = (l_tau - l_beta).abs() + l_tau * l_tau * big_m * (delta * l_tau / m + ell_tau * (1.0 + r)) / 2.0;
    r.max(tail)
}

/// The explicit bound `eps(delta)` on the registered distance between a
/// vertex-free curve and any curve whose signature lies within `delta` of
/// its signature and inside its tube:
///
/// `eps = max{delta/m, |L_tau - L_beta| + L_tau^2 M (delta L_tau/m + ell_tau (1 + delta/m)) / 2}`.
pub fn explicit_bound<C: CurvatureFunction + ?Sized>(kappa: &C, delta: f64) -> Result<BoundReport> {
    let c = envelope_constants(kappa, delta)?;
    let (m, big_m, l) = (c.m, c.big_m, c.length);
    let r = delta / m;
    let alpha1 = big_m * (delta * l / m + c.ell_tau * (1.0 + r));
    let alpha2 = big_m * l * r;
    let ell_free = delta / (m * (1.0 + r));
    let l_tau_free = (l - r) / (1.0 + r) - ell_free;
    let mut notes = vec![
        "m1 = m2 = m = min|kappa'| over [0, L]".to_string(),
        "the offset in the upper reparameterisation is taken to be ell_tau".to_string(),
        "admissible delta: delta < min(|kappa(0) - kappa(L)|/2, m)".to_string(),
    ];
    if c.reflected {
        notes.push("kappa' < 0: constants computed for -kappa".to_string());
    }
    Ok(BoundReport {
        delta,
        m,
        m1: m,
        m2: m,
        big_m,
        length: l,
        ell_tau: c.ell_tau,
        l_tau: c.l_tau,
        ell_beta: c.ell_beta,
        l_beta: c.l_beta,
        alpha1,
        alpha2,
        alpha3: alpha1.max(alpha2),
        epsilon_of_delta: epsilon(delta, m, big_m, c.ell_tau, c.l_tau, c.l_beta),
        ell_tau_inverse_free: ell_free,
        l_tau_inverse_free: l_tau_free,
        eps_inverse_free: epsilon(delta, m, big_m, ell_free, l_tau_free, c.l_beta),
        reflected: c.reflected,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::AnalyticCurvature;

    fn linear() -> AnalyticCurvature<impl Fn(f64) -> f64 + Sync, impl Fn(f64) -> f64 + Sync> {
        AnalyticCurvature::new(|s| s, |_| 1.0, 1.0)
    }

    #[test]
    fn zero_delta_is_identity() {
        let k = AnalyticCurvature::new(|s: f64| s + s * s / 2.0, |s| 1.0 + s, 1.0);
        let r = solve_rho(&k, 0.0, Sign::Plus).unwrap();
        for (s, rho) in r.s.iter().zip(&r.rho) {
            assert!((s - rho).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_slope_is_linear() {
        let k = AnalyticCurvature::new(|s| 2.0 * s, |_| 2.0, 1.0);
        for (sign, f) in [(Sign::Plus, 1.05), (Sign::Minus, 0.95)] {
            let r = solve_rho(&k, 0.1, sign).unwrap();
            for (s, rho) in r.s.iter().zip(&r.rho) {
                assert!((rho - f * s).abs() < 1e-12, "{s} {rho}");
            }
            assert!((r.end() - 1.0 / f).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_matches_fine_oracle_and_sandwich() {
        let k = AnalyticCurvature::new(|s: f64| s + s * s / 2.0, |s| 1.0 + s, 1.0);
        for sign in [Sign::Plus, Sign::Minus] {
            let r = solve_rho(&k, 0.1, sign).unwrap();
            let pm = sign.value();
            let fine = march_to(|_, r| 1.0 + pm * 0.1 / (1.0 + r), 1.0, 1 << 16);
            for (s, rho) in r.s.iter().zip(&r.rho) {
                assert!((rho - fine.eval(*s)).abs() < 1e-8);
                assert!(s * 0.9 <= rho + 1e-15 && *rho <= s * 1.1 + 1e-15);
            }
        }
    }

    #[test]
    fn delta_at_m_rejected() {
        assert!(matches!(solve_rho(&linear(), 1.0, Sign::Plus), Err(SigError::DeltaTooLarge { .. })));
    }

    #[test]
    fn linear_constants() {
        let c = envelope_constants(&linear(), 0.01).unwrap();
        assert!((c.ell_tau - 0.01 / 1.01).abs() < 1e-12);
        assert!((c.l_tau - 0.970297).abs() < 1e-6);
        assert!((c.l_beta - (1.0 / 0.99 + 0.01)).abs() < 1e-12);
        let b = explicit_bound(&linear(), 0.01).unwrap();
        assert_eq!(b.alpha3, b.alpha1.max(b.alpha2));
        assert!(b.epsilon_of_delta > 0.0 && b.epsilon_of_delta.is_finite());
        // kappa^{-1} is the identity here, so the inverse-free values agree.
        assert!((b.ell_tau_inverse_free - b.ell_tau).abs() < 1e-12);
        assert!((b.eps_inverse_free - b.epsilon_of_delta).abs() < 1e-9);
    }

    #[test]
    fn limits_as_delta_vanishes() {
        let k = AnalyticCurvature::new(|s: f64| (0.5 * s).exp(), |s: f64| 0.5 * (0.5 * s).exp(), 2.0);
        let b = explicit_bound(&k, 0.0).unwrap();
        assert!(b.epsilon_of_delta.abs() < 1e-12);
        let c = envelope_constants(&k, 1e-9).unwrap();
        assert!((c.l_tau - 2.0).abs() < 1e-7 && (c.l_beta - 2.0).abs() < 1e-7);
        for s in [0.0, 0.5, 1.9] {
            assert!((c.tau(&k, s) - k.value(s)).abs() < 1e-7);
            assert!((c.beta(&k, s) - k.value(s)).abs() < 1e-7);
        }
    }

    #[test]
    fn extended_beta_reaches_kappa_l_plus_delta() {
        let k = linear();
        let c = envelope_constants(&k, 0.01).unwrap();
        assert!((c.beta_extended(&k, c.l_beta) - 1.01).abs() < 1e-12);
        assert!((c.beta_extended(&k, c.ell_beta) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decreasing_curvature_is_reflected() {
        let k = AnalyticCurvature::new(|s: f64| 2.0 - s, |_| -1.0, 1.0);
        let c = envelope_constants(&k, 0.01).unwrap();
        assert!(c.reflected);
        for s in [0.0, 0.3, 0.9] {
            assert!(c.lower(&k, s) <= k.value(s) && k.value(s) <= c.upper(&k, s));
        }
    }

    #[test]
    fn errors() {
        let wavy = AnalyticCurvature::new(|s: f64| s.sin(), |s: f64| s.cos(), 3.0);
        assert!(matches!(envelopes(&wavy, 0.01), Err(SigError::NotMonotone)));
        assert!(matches!(envelopes(&linear(), 0.6), Err(SigError::DeltaTooLarge { .. })));
    }

    #[test]
    fn eps_is_linear_in_delta() {
        let k = AnalyticCurvature::new(|s: f64| 1.0 + 0.5 * s + 0.25 * s * s, |s| 0.5 + 0.5 * s, 2.0);
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&d| explicit_bound(&k, d).unwrap().epsilon_of_delta / d)
            .collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), &r| (a.min(r), b.max(r)));
        assert!(hi / lo < 1.5, "{ratios:?}");
    }
}
