//! Hausdorff distance between sampled point sets.
//!
//! Sets are polylines in `R^d`: the directed distance from `A` to `B` is the
//! maximum over the vertices of `A` of the distance to the nearest *segment* of
//! `B`. For curves sampled with spacing `h` this is accurate to `O(h^2)`.

use crate::error::{Result, SigError};
use crate::Vec2;

/// A finitely sampled point set in `R^dim`, optionally joined into a polyline.
#[derive(Debug, Clone)]
pub struct Polyline {
    dim: usize,
    coords: Vec<f64>,
    closed: bool,
    segments: bool,
}

impl Polyline {
    /// Polyline through planar points.
    pub fn from_points(points: &[Vec2], closed: bool) -> Self {
        let coords = points.iter().flat_map(|p| [p.x, p.y]).collect();
        Polyline { dim: 2, coords, closed, segments: true }
    }

    /// Polyline through rows of equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], closed: bool) -> Self {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut coords = Vec::with_capacity(dim * rows.len());
        for r in rows {
            assert_eq!(r.as_ref().len(), dim, "ragged rows");
            coords.extend_from_slice(r.as_ref());
        }
        Polyline { dim, coords, closed, segments: true }
    }

    /// Bare point cloud without segment interpolation.
    pub fn points_only(mut self) -> Self {
        self.segments = false;
        self
    }

    pub fn len(&self) -> usize {
        self.coords.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn segment_count(&self) -> usize {
        let n = self.len();
        if !self.segments || n < 2 || self.closed {
            n
        } else {
            n - 1
        }
    }

    /// Distance from `p` to element `j` (segment, or point when segments are off).
    fn element_distance_sq(&self, p: &[f64], j: usize) -> f64 {
        let n = self.len();
        if !self.segments || n < 2 {
            return dist_sq(p, self.point(j));
        }
        point_segment_distance_sq(p, self.point(j), self.point((j + 1) % n))
    }

    /// Euclidean distance from `p` to the set.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        (0..self.segment_count())
            .map(|j| self.element_distance_sq(p, j))
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn point_segment_distance_sq(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut ab_ab = 0.0;
    let mut ap_ab = 0.0;
    for k in 0..p.len() {
        let ab = b[k] - a[k];
        ab_ab += ab * ab;
        ap_ab += (p[k] - a[k]) * ab;
    }
    let t = if ab_ab > 0.0 { (ap_ab / ab_ab).clamp(0.0, 1.0) } else { 0.0 };
    let mut d = 0.0;
    for k in 0..p.len() {
        let q = a[k] + t * (b[k] - a[k]);
        d += (p[k] - q) * (p[k] - q);
    }
    d
}

/// `sup_{a in A} d(a, B)`, exact for the polyline model.
///
/// Each vertex of `A` scans `B` outward from the previous vertex's nearest
/// element and stops as soon as it cannot raise the running maximum.
pub fn directed_hausdorff(a: &Polyline, b: &Polyline) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(SigError::EmptySet);
    }
    if a.dim != b.dim {
        return Err(SigError::InvalidCurve(format!(
            "dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    let m = b.segment_count();
    let mut cmax_sq = 0.0_f64;
    let mut hint = 0usize;
    for i in 0..a.len() {
        let p = a.point(i);
        let mut best = f64::INFINITY;
        let mut best_j = hint;
        let mut skipped = false;
        for step in 0..m {
            // hint, hint+1, hint-1, hint+2, ... wrapping around.
            let off = step.div_ceil(2);
            let j = if step % 2 == 1 { (hint + off) % m } else { (hint + m - off % m) % m };
            let d = b.element_distance_sq(p, j);
            if d < best {
                best = d;
                best_j = j;
            }
            if best <= cmax_sq {
                skipped = true;
                break;
            }
        }
        hint = best_j;
        if !skipped {
            cmax_sq = cmax_sq.max(best);
        }
    }
    Ok(cmax_sq.sqrt())
}

/// Symmetric Hausdorff distance `max(h(A,B), h(B,A))`.
pub fn hausdorff_distance(a: &Polyline, b: &Polyline) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(r: f64, n: usize) -> Vec<Vec2> {
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Vec2::new(r * t.cos(), r * t.sin())
            })
            .collect()
    }

    #[test]
    fn identical_sets_are_at_zero() {
        let c = Polyline::from_points(&circle(1.0, 50), true);
        assert_eq!(hausdorff_distance(&c, &c).unwrap(), 0.0);
    }

    #[test]
    fn origin_to_unit_circle_is_one() {
        let o = Polyline::from_points(&[Vec2::zeros()], false);
        let c = Polyline::from_points(&circle(1.0, 400), true);
        let d = hausdorff_distance(&o, &c).unwrap();
        assert!((d - 1.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn empty_set_is_an_error() {
        let e = Polyline::from_points(&[], false);
        let c = Polyline::from_points(&circle(1.0, 10), true);
        assert!(matches!(hausdorff_distance(&e, &c), Err(SigError::EmptySet)));
    }

    #[test]
    fn concentric_circles_match_brute_force() {
        let a = circle(1.0, 500);
        let b = circle(2.0, 700);
        let fast = hausdorff_distance(
            &Polyline::from_points(&a, true).points_only(),
            &Polyline::from_points(&b, true).points_only(),
        )
        .unwrap();
        // Dense point-to-point oracle.
        let brute = |x: &[Vec2], y: &[Vec2]| {
            x.iter()
                .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        let oracle = brute(&a, &b).max(brute(&b, &a));
        assert!((fast - oracle).abs() < 1e-12);
        assert!((fast - 1.0).abs() < 1e-3);
    }

    #[test]
    fn higher_dimensional_rows() {
        let a = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
        let b = [[0.0, 0.0, 0.5], [1.0, 0.0, 0.5]];
        let d = hausdorff_distance(&Polyline::from_rows(&a, false), &Polyline::from_rows(&b, false));
        assert!((d.unwrap() - 0.5).abs() < 1e-15);
    }
}
