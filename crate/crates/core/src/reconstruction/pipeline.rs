//! Signature → curvature → curve.

use super::{affine_curve_from_mu, cumulative_uniform, curvature_from_graph, curvature_from_signature, curve_from_curvature};
use crate::config::Config;
use crate::congruence::Partition;
use crate::curve::{apply_group, CurvatureProfile, GroupElement, PlanarCurve};
use crate::error::{Result, SigError};
use crate::signature::{GraphFunction, Interpolation, PhasePortrait, SignatureKind};
use crate::{Mat2, Vec2};

/// Reconstruct a curve from its signature and place it with `registration`.
///
/// A signature that collapses to a single point `(c, 0, ...)` is a
/// constant-curvature arc of the portrait's length. Otherwise an order-1
/// portrait must be a graph over a vertex-free range, or a partition of a
/// higher-order portrait must be supplied; each partition segment with witness
/// order `k` solves the in-phase equation for `f^(k-1)` and integrates down to
/// `f` from the segment's starting values.
pub fn reconstruct_from_signature(
    sig: &PhasePortrait,
    registration: &GroupElement,
    partition: Option<&Partition>,
    cfg: &Config,
) -> Result<PlanarCurve> {
    let profile = signature_profile(sig, partition, cfg)?;
    let mut curve = match sig.kind() {
        SignatureKind::Euclidean => curve_from_curvature(&profile, Vec2::zeros(), 0.0, cfg)?.to_planar(),
        SignatureKind::Affine => {
            affine_curve_from_mu(&profile, &Mat2::identity(), Vec2::zeros(), cfg.integrator_steps)?
        }
    };
    if sig.closed() && !curve.closed() {
        let mut pts = curve.samples().to_vec();
        pts.pop();
        curve = PlanarCurve::new(pts, true)?;
    }
    Ok(apply_group(registration, &curve))
}

fn is_point(sig: &PhasePortrait, cfg: &Config) -> bool {
    let k = sig.column(0);
    let lo = k.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = k.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = 0.5 * (lo + hi);
    let scale = mean.abs().max(1.0 / sig.length());
    let flat = (1..=sig.order()).all(|j| sig.rows().iter().all(|r| r[j].abs() <= cfg.vertex_tol * scale));
    hi - lo <= cfg.vertex_tol * scale && flat
}

/// Rows extended by the wrap-around sample at `s = L` for closed portraits.
fn open_rows(sig: &PhasePortrait) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut s = sig.s().to_vec();
    let mut rows = sig.rows().to_vec();
    if sig.closed() && sig.length() > s[s.len() - 1] {
        s.push(sig.length());
        rows.push(rows[0].clone());
    }
    (s, rows)
}

fn signature_profile(sig: &PhasePortrait, partition: Option<&Partition>, cfg: &Config) -> Result<CurvatureProfile> {
    if is_point(sig, cfg) {
        let k = sig.column(0);
        let c = k.iter().sum::<f64>() / k.len() as f64;
        let l = sig.length();
        return CurvatureProfile::new(vec![0.0, l], vec![vec![c, c], vec![0.0, 0.0]], l, false);
    }
    match partition {
        Some(p) => piecewise_profile(sig, p, cfg),
        None => {
            let first = sig.with_order(1)?;
            let (s, rows) = open_rows(&first);
            let open = PhasePortrait::new(first.kind(), s, rows, first.length(), false)?;
            curvature_from_signature(&open, open.rows()[0][0], cfg).map_err(|e| match e {
                SigError::VanishingF { min_abs } => SigError::VertexObstruction(format!(
                    "first derivative nearly vanishes (min {min_abs:e}) and no partition was supplied"
                )),
                SigError::NotGraphLike { index } => SigError::VertexObstruction(format!(
                    "signature is not a graph (turns back at sample {index}) and no partition was supplied"
                )),
                other => other,
            })
        }
    }
}

fn nearest(s: &[f64], t: f64) -> usize {
    let i = s.partition_point(|&v| v < t);
    if i == 0 {
        0
    } else if i == s.len() || (t - s[i - 1]) <= (s[i] - t) {
        i - 1
    } else {
        i
    }
}

fn piecewise_profile(sig: &PhasePortrait, partition: &Partition, cfg: &Config) -> Result<CurvatureProfile> {
    let (s, rows) = open_rows(sig);
    let total = s[s.len() - 1];
    let mut out_s: Vec<f64> = Vec::new();
    let mut out_k: Vec<f64> = Vec::new();
    let mut out_d: Vec<f64> = Vec::new();
    let mut offset = 0.0;
    for (seg, &k) in partition.witness_orders().iter().enumerate() {
        if k == 0 || k > sig.order() {
            return Err(SigError::InvalidConfig(format!("witness order {k} not available")));
        }
        let times = partition.times();
        let (i0, i1) = (nearest(&s, times[seg]), nearest(&s, times[seg + 1]));
        if i1 <= i0 {
            continue;
        }
        let u: Vec<f64> = rows[i0..=i1].iter().map(|r| r[k - 1]).collect();
        let f: Vec<f64> = rows[i0..=i1].iter().map(|r| r[k]).collect();
        let interp = if u.len() >= 4 { Interpolation::Cubic } else { Interpolation::Linear };
        let graph = GraphFunction::new(&u, &f, interp)?;
        let nodes = ((cfg.integrator_steps as f64) * (s[i1] - s[i0]) / total).ceil() as usize + 1;
        let piece = curvature_from_graph(&graph, u[0], nodes.max(32), 0.0)?;
        let h = piece.length() / (piece.len() - 1) as f64;
        // columns[j] holds f^(j) on the segment grid.
        let mut columns: Vec<Vec<f64>> = vec![Vec::new(); k + 1];
        columns[k] = piece.column(1).to_vec();
        columns[k - 1] = piece.column(0).to_vec();
        for j in (0..k - 1).rev() {
            let start = rows[i0][j];
            columns[j] = cumulative_uniform(&columns[j + 1], h).iter().map(|v| start + v).collect();
        }
        let skip = usize::from(!out_s.is_empty());
        for (idx, &t) in piece.s().iter().enumerate().skip(skip) {
            out_s.push(offset + t);
            out_k.push(columns[0][idx]);
            out_d.push(columns[1][idx]);
        }
        offset += piece.length();
    }
    if out_s.len() < 2 {
        return Err(SigError::VertexObstruction("partition produced no usable segment".into()));
    }
    CurvatureProfile::new(out_s, vec![out_k, out_d], offset, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{curve_distance, resample_by_arclength, shapes, GroupKind};
    use crate::signature::euclidean_signature;

    #[test]
    fn point_signature_gives_circle() {
        let l = 2.0 * std::f64::consts::PI;
        let rows = vec![vec![1.0, 0.0]; 8];
        let s: Vec<f64> = (0..8).map(|i| l * i as f64 / 8.0).collect();
        let sig = PhasePortrait::new(SignatureKind::Euclidean, s, rows, l, true).unwrap();
        let c = reconstruct_from_signature(&sig, &GroupElement::identity(GroupKind::SE2), None, &Config::default())
            .unwrap();
        assert!(c.closed());
        for p in c.samples() {
            assert!(((p - Vec2::new(0.0, 1.0)).norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn spiral_round_trip() {
        let cfg = Config::default();
        let original = shapes::clothoid(0.5, 1.0, 2.0, 2048);
        let arc = resample_by_arclength(&original, 2048).unwrap();
        let sig = euclidean_signature(&arc, 1).unwrap();
        let c = reconstruct_from_signature(&sig, &GroupElement::identity(GroupKind::SE2), None, &cfg).unwrap();
        assert!(curve_distance(&c, &original).unwrap() < 1e-4);
    }

    #[test]
    fn vertex_without_partition_is_an_obstruction() {
        let arc = resample_by_arclength(&shapes::ellipse(2.0, 1.0, 1024), 1024).unwrap();
        let sig = euclidean_signature(&arc, 1).unwrap();
        let r = reconstruct_from_signature(&sig, &GroupElement::identity(GroupKind::SE2), None, &Config::default());
        assert!(matches!(r, Err(SigError::VertexObstruction(_))));
    }
}
