use crate::curve::PlanarCurve;
use crate::Vec2;

/// Crossings whose segments meet at `|sin(angle)|` below this are treated as
/// tangential near-misses rather than transverse crossings.
pub const DEFAULT_PARALLEL_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Parameter of the earlier pass through the point.
    pub t_first: f64,
    /// Parameter of the later pass.
    pub t_second: f64,
    pub point: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfIntersections {
    /// Crossings sorted by `t_first`.
    pub crossings: Vec<Crossing>,
    /// Segment pairs that met at a near-parallel angle and were excluded.
    pub near_parallel: usize,
}

impl SelfIntersections {
    /// All crossing parameters, sorted.
    pub fn sequence(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.crossings.iter().flat_map(|c| [c.t_first, c.t_second]).collect();
        t.sort_by(f64::total_cmp);
        t
    }
}

/// Transverse crossings of non-adjacent segments, parameterised by
/// cumulative chord length.
pub fn self_intersections(curve: &PlanarCurve, parallel_tol: f64) -> SelfIntersections {
    let pts = curve.samples();
    let mut params = Vec::with_capacity(pts.len() + 1);
    params.push(0.0);
    for i in 1..pts.len() {
        params.push(params[i - 1] + (pts[i] - pts[i - 1]).norm());
    }
    if curve.closed() {
        params.push(params[pts.len() - 1] + (pts[0] - pts[pts.len() - 1]).norm());
    }
    crossings_with_params(pts, &params, curve.closed(), parallel_tol)
}

/// `params[i]` is the parameter of `pts[i]`; closed curves carry one extra
/// entry for the return to `pts[0]`.
pub(crate) fn crossings_with_params(pts: &[Vec2], params: &[f64], closed: bool, parallel_tol: f64) -> SelfIntersections {
    let n = pts.len();
    let m = if closed { n } else { n - 1 };
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    // Sweep over segments sorted by their left end.
    let mut order: Vec<usize> = (0..m).collect();
    let lo = |i: usize| seg(i).0.x.min(seg(i).1.x);
    let hi = |i: usize| seg(i).0.x.max(seg(i).1.x);
    order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)));
    let mut crossings = Vec::new();
    let mut near_parallel = 0;
    for (oi, &i) in order.iter().enumerate() {
        let (a0, a1) = seg(i);
        let hi_i = hi(i);
        for &j in &order[oi + 1..] {
            if lo(j) > hi_i {
                break;
            }
            let (x, y) = (i.min(j), i.max(j));
            if y == x + 1 || (closed && x == 0 && y == m - 1) {
                continue;
            }
            let (b0, b1) = seg(j);
            if a0.y.max(a1.y) < b0.y.min(b1.y) || b0.y.max(b1.y) < a0.y.min(a1.y) {
                continue;
            }
            let (r, q) = (a1 - a0, b1 - b0);
            let denom = r.perp(&q);
            let w = b0 - a0;
            if denom == 0.0 {
                continue;
            }
            let lambda = w.perp(&q) / denom;
            let mu = w.perp(&r) / denom;
            // Half-open on both segments so a crossing at a shared vertex is counted once.
            if !(0.0..1.0).contains(&lambda) || !(0.0..1.0).contains(&mu) {
                continue;
            }
            if denom.abs() < parallel_tol * r.norm() * q.norm() {
                near_parallel += 1;
                continue;
            }
            let ti = params[i] + lambda * (params[i + 1] - params[i]);
            let tj = params[j] + mu * (params[j + 1] - params[j]);
            crossings.push(Crossing {
                t_first: ti.min(tj),
                t_second: ti.max(tj),
                point: a0 + r * lambda,
            });
        }
    }
    crossings.sort_by(|a, b| a.t_first.total_cmp(&b.t_first));
    SelfIntersections { crossings, near_parallel }
}
