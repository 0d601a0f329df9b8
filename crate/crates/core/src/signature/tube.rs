//! Inner tube `IT(S, delta)` and tube `T(S, delta)` around a graph-like portrait.

use super::PhasePortrait;
use crate::curve::point_segment_distance_sq;
use crate::error::{Result, SigError};
use crate::Vec2;

/// Vertical `delta`-band over a graph `v(u)`, plus the two sup-norm endpoint
/// rectangles of width `delta` that close it off.
#[derive(Debug, Clone)]
pub struct TubeNeighborhood {
    u: Vec<f64>,
    v: Vec<f64>,
    delta: f64,
}

impl TubeNeighborhood {
    /// Tube about the `(f, f')` columns of `base`.
    pub fn new(base: &PhasePortrait, delta: f64) -> Result<Self> {
        Self::from_graph(&base.column(0), &base.column(1), delta)
    }

    /// Tube about the polyline through `(u[i], v[i])`; `u` strictly monotone in either direction.
    pub fn from_graph(u: &[f64], v: &[f64], delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(SigError::InvalidConfig(format!("tube radius must be > 0, got {delta}")));
        }
        if u.len() != v.len() || u.len() < 2 {
            return Err(SigError::InvalidCurve("tube base needs >= 2 matching samples".into()));
        }
        let increasing = u[1] > u[0];
        if let Some(i) = u
            .windows(2)
            .position(|w| if increasing { !(w[1] > w[0]) } else { !(w[1] < w[0]) })
        {
            return Err(SigError::NotGraphLike { index: i + 1 });
        }
        let (mut u, mut v) = (u.to_vec(), v.to_vec());
        if !increasing {
            u.reverse();
            v.reverse();
        }
        Ok(TubeNeighborhood { u, v, delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Same base, different radius.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::from_graph(&self.u, &self.v, delta)
    }

    /// Endpoint with the smaller `u`.
    pub fn left(&self) -> Vec2 {
        Vec2::new(self.u[0], self.v[0])
    }

    /// Endpoint with the larger `u`.
    pub fn right(&self) -> Vec2 {
        let n = self.u.len();
        Vec2::new(self.u[n - 1], self.v[n - 1])
    }

    /// Graph value at `u` (linear between samples); `None` outside the u-range.
    pub fn graph_value(&self, u: f64) -> Option<f64> {
        let n = self.u.len();
        if !(u >= self.u[0] && u <= self.u[n - 1]) {
            return None;
        }
        let i = self.u.partition_point(|&x| x <= u).saturating_sub(1).min(n - 2);
        let t = (u - self.u[i]) / (self.u[i + 1] - self.u[i]);
        Some(self.v[i] + t * (self.v[i + 1] - self.v[i]))
    }

    pub fn inner_tube_contains(&self, p: &Vec2) -> bool {
        self.graph_value(p.x).is_some_and(|v| (p.y - v).abs() < self.delta)
    }

    pub fn tube_contains(&self, p: &Vec2) -> bool {
        if self.inner_tube_contains(p) {
            return true;
        }
        let (l, r) = (self.left(), self.right());
        (p.x < l.x && (p - l).amax() < self.delta) || (p.x > r.x && (p - r).amax() < self.delta)
    }

    /// Closed boundary polygon of `T(S, delta)`.
    fn boundary(&self) -> Vec<Vec2> {
        let d = self.delta;
        let (l, r) = (self.left(), self.right());
        let mut b = vec![
            Vec2::new(l.x, l.y + d),
            Vec2::new(l.x - d, l.y + d),
            Vec2::new(l.x - d, l.y - d),
        ];
        b.extend(self.u.iter().zip(&self.v).map(|(&u, &v)| Vec2::new(u, v - d)));
        b.push(Vec2::new(r.x + d, r.y - d));
        b.push(Vec2::new(r.x + d, r.y + d));
        b.extend(self.u.iter().zip(&self.v).rev().map(|(&u, &v)| Vec2::new(u, v + d)));
        b
    }
}

fn seg_seg_distance(a0: &Vec2, a1: &Vec2, b0: &Vec2, b1: &Vec2) -> f64 {
    let cross = |o: &Vec2, p: &Vec2, q: &Vec2| (p - o).perp(&(q - o));
    let (d1, d2) = (cross(b0, b1, a0), cross(b0, b1, a1));
    let (d3, d4) = (cross(a0, a1, b0), cross(a0, a1, b1));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    let ps = |p: &Vec2, s0: &Vec2, s1: &Vec2| {
        point_segment_distance_sq(p.as_slice(), s0.as_slice(), s1.as_slice())
    };
    ps(a0, b0, b1).min(ps(a1, b0, b1)).min(ps(b0, a0, a1)).min(ps(b1, a0, a1)).sqrt()
}

/// Largest radius `r` such that every point within `r` of the base polyline lies in `T(S, delta)`.
///
/// Computed exactly for the polyline model as the minimum segment-to-segment
/// distance between the base graph and the tube boundary.
pub fn delta_star(tube: &TubeNeighborhood) -> f64 {
    let boundary = tube.boundary();
    let nb = boundary.len();
    let base: Vec<Vec2> = tube.u.iter().zip(&tube.v).map(|(&u, &v)| Vec2::new(u, v)).collect();
    let mut best = tube.delta;
    for w in base.windows(2) {
        let (lo, hi) = (w[0].x, w[1].x);
        for j in 0..nb {
            let (b0, b1) = (&boundary[j], &boundary[(j + 1) % nb]);
            // Horizontal separation is a lower bound on the segment distance.
            let gap = (b0.x.min(b1.x) - hi).max(lo - b0.x.max(b1.x));
            if gap >= best {
                continue;
            }
            best = best.min(seg_seg_distance(&w[0], &w[1], b0, b1));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(c: f64, delta: f64) -> TubeNeighborhood {
        let u: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
        TubeNeighborhood::from_graph(&u, &vec![c; 50], delta).unwrap()
    }

    #[test]
    fn base_points_are_inside() {
        let t = flat(0.3, 1e-6);
        assert!(t.inner_tube_contains(&Vec2::new(0.5, 0.3)));
        assert!(!t.inner_tube_contains(&Vec2::new(1.5, 0.3)));
    }

    #[test]
    fn endpoint_rectangles() {
        let d = 0.1;
        let t = flat(0.0, d);
        let l = t.left();
        assert!(t.tube_contains(&(l + Vec2::new(-d / 2.0, 0.0))));
        assert!(!t.tube_contains(&(l + Vec2::new(-2.0 * d, 0.0))));
        assert!(!t.inner_tube_contains(&(l + Vec2::new(-d / 2.0, 0.0))));
    }

    #[test]
    fn flat_tube_delta_star_is_delta() {
        for d in [0.05, 0.1, 0.2] {
            assert!((delta_star(&flat(1.0, d)) - d).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_star_grows_with_delta() {
        let u: Vec<f64> = (0..200).map(|i| i as f64 / 199.0 * 3.0).collect();
        let v: Vec<f64> = u.iter().map(|x| x.sin()).collect();
        let t = TubeNeighborhood::from_graph(&u, &v, 0.05).unwrap();
        let d1 = delta_star(&t);
        let d2 = delta_star(&t.with_delta(0.1).unwrap());
        assert!(d1 > 0.0 && d2 >= d1);
        // Slope-one pieces shrink the radius to about delta / sqrt(2).
        assert!(d1 < 0.05 && d1 > 0.05 / 2.0_f64.sqrt() - 1e-3, "{d1}");
    }

    #[test]
    fn non_monotone_base_rejected() {
        let r = TubeNeighborhood::from_graph(&[0.0, 1.0, 0.5], &[0.0, 0.0, 0.0], 0.1);
        assert!(matches!(r, Err(SigError::NotGraphLike { index: 2 })));
        let r = TubeNeighborhood::from_graph(&[0.0, 1.0, 1.0], &[0.0, 0.0, 0.0], 0.1);
        assert!(r.is_err());
    }
}
