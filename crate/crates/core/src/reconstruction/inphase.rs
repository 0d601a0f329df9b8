//! Solving `u' = F(u)` for a graph-like signature.
//!
//! `G(u) = int_{u0}^u dv / F(v)` is strictly monotone, so `u(s) = G^{-1}(s)`.
//! `G` is accumulated with Simpson's rule over each knot interval of `F`
//! and inverted by bisection.

use crate::config::Config;
use crate::curve::CurvatureProfile;
use crate::error::{Result, SigError};
use crate::signature::{GraphFunction, Interpolation, PhasePortrait};

fn simpson<F: Fn(f64) -> f64>(a: f64, b: f64, f: &F) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

/// `u(s)` with `u(0) = u0` solving `u' = F(u)`, sampled at `nodes` uniform
/// points up to the time `u` reaches the end of the graph's domain.
///
/// Columns of the result are `u` and `F(u)`. Fails with `VanishingF` when
/// `|F| < floor` somewhere on the domain or `F` changes sign.
pub fn curvature_from_graph(graph: &GraphFunction, u0: f64, nodes: usize, floor: f64) -> Result<CurvatureProfile> {
    let (lo, hi) = graph.domain();
    if !(u0 >= lo && u0 <= hi) {
        return Err(SigError::InvalidCurve(format!("u0 = {u0} outside [{lo}, {hi}]")));
    }
    let values = graph.values();
    let min_abs = graph.min_abs();
    let mixed = values.iter().any(|&v| v > 0.0) && values.iter().any(|&v| v < 0.0);
    if min_abs < floor || mixed {
        return Err(SigError::VanishingF { min_abs: if mixed { 0.0 } else { min_abs } });
    }
    let sign = values[0].signum();
    let u_end = if sign > 0.0 { hi } else { lo };
    // Integration knots from u0 to u_end in travel order.
    let mut knots: Vec<f64> = Vec::new();
    knots.push(u0);
    let subdiv = if graph.interpolation() == Interpolation::Cubic { 4 } else { 1 };
    let base = graph.knots();
    let inner: Vec<f64> = base
        .windows(2)
        .flat_map(|w| (0..subdiv).map(move |k| w[0] + (w[1] - w[0]) * k as f64 / subdiv as f64))
        .chain(std::iter::once(hi))
        .filter(|&u| if sign > 0.0 { u > u0 } else { u < u0 })
        .collect();
    if sign > 0.0 {
        knots.extend(inner);
    } else {
        knots.extend(inner.into_iter().rev());
    }
    if knots.len() < 2 {
        return Err(SigError::DegenerateCurve { length: 0.0 });
    }
    let recip = |u: f64| 1.0 / graph.eval(u);
    let mut g = Vec::with_capacity(knots.len());
    g.push(0.0);
    for w in knots.windows(2) {
        g.push(g[g.len() - 1] + simpson(w[0], w[1], &recip));
    }
    let total = g[g.len() - 1];
    debug_assert!((knots[knots.len() - 1] - u_end).abs() == 0.0);
    if !(total > 0.0 && total.is_finite()) {
        return Err(SigError::DegenerateCurve { length: total });
    }
    let n = nodes.max(2);
    let mut s = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for i in 0..n {
        let target = total * i as f64 / (n - 1) as f64;
        let j = g.partition_point(|&v| v <= target).saturating_sub(1).min(knots.len() - 2);
        let (a, b) = (knots[j], knots[j + 1]);
        // Bisection on the interval containing `target`; orientation follows the sign of F.
        let (mut x, mut y) = (a, b);
        for _ in 0..200 {
            if (y - x).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
                break;
            }
            let mid = 0.5 * (x + y);
            if g[j] + simpson(a, mid, &recip) < target {
                x = mid;
            } else {
                y = mid;
            }
        }
        s.push(target);
        u.push(if i == 0 { u0 } else if i == n - 1 { u_end } else { 0.5 * (x + y) });
    }
    let f: Vec<f64> = u.iter().map(|&v| graph.eval(v)).collect();
    CurvatureProfile::new(s, vec![u, f], total, false)
}

/// Curvature (or affine curvature) from an order-1 graph-like portrait, starting at `u0`.
pub fn curvature_from_signature(sig: &PhasePortrait, u0: f64, cfg: &Config) -> Result<CurvatureProfile> {
    let graph = GraphFunction::new(&sig.column(0), &sig.column(1), Interpolation::Cubic)?;
    let floor = cfg.derivative_floor * graph.max_abs();
    curvature_from_graph(&graph, u0, cfg.integrator_steps + 1, floor)
}
