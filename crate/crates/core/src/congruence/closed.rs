use rayon::prelude::*;
use serde_json::{json, Map};

use super::intersect::{crossings_with_params, SelfIntersections, DEFAULT_PARALLEL_TOL};
use super::{register, registered_distance, CongruenceVerdict, Decision};
use crate::config::Config;
use crate::curve::{resample_by_arclength, ArcLengthCurve, GroupElement, GroupKind, PlanarCurve};
use crate::error::{Result, SigError};
use crate::signature::{euclidean_signature, injectivity_gap};

/// Largest number of repeated traversals looked for.
const MAX_TRAVERSALS: usize = 8;
/// Cap on the number of starting points tried on the second curve.
const MAX_CANDIDATES: usize = 16;

/// Reduces a closed curve traversed `m` times to a single traversal.
pub fn minimal_traversal(arc: &ArcLengthCurve) -> Result<ArcLengthCurve> {
    if !arc.closed() {
        return Err(SigError::OpenCurve);
    }
    let (sx, sy) = arc.position_splines()?;
    let l = arc.length();
    let s = arc.arc_lengths();
    let tol = 1e-4 * l;
    for m in (2..=MAX_TRAVERSALS).rev() {
        let shift = l / m as f64;
        let repeats = arc.nodes().iter().zip(&s).all(|(p, &si)| {
            let (x, y) = (sx.eval(si + shift), sy.eval(si + shift));
            (p.x - x).hypot(p.y - y) < tol
        });
        if repeats {
            return arc.truncate_period(shift);
        }
    }
    Ok(arc.clone())
}

fn crossings(arc: &ArcLengthCurve) -> SelfIntersections {
    let mut params = arc.arc_lengths();
    params.push(arc.length());
    crossings_with_params(arc.nodes(), &params, true, DEFAULT_PARALLEL_TOL)
}

/// Arc-length positions on `b` whose signature point is closest to `q0`:
/// local minima of the squared distance, refined by a parabola through
/// three samples.
fn start_candidates(rows: &[Vec<f64>], h: f64, q0: &[f64], radius: f64) -> Vec<(f64, f64)> {
    let n = rows.len();
    let d2: Vec<f64> = rows.iter().map(|r| r.iter().zip(q0).map(|(a, b)| (a - b) * (a - b)).sum()).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let (l, c, r) = (d2[(i + n - 1) % n], d2[i], d2[(i + 1) % n]);
        if c <= l && c < r && c <= radius * radius {
            let denom = l - 2.0 * c + r;
            let off = if denom > 0.0 { (0.5 * (l - r) / denom).clamp(-0.5, 0.5) } else { 0.0 };
            out.push((c, (i as f64 + off) * h));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.truncate(MAX_CANDIDATES);
    out
}

struct Trial {
    start: f64,
    sequence: Vec<f64>,
    sequences_match: bool,
    max_dt: f64,
    g: GroupElement,
    distance: f64,
}

/// Congruence test for closed curves under rigid motions.
///
/// Both curves are reduced to a single traversal. A point `q0` of the
/// signature of `a` at its start is located on the signature of `b`; for each
/// matching position `b` is restarted there, its self-intersection parameter
/// sequence is compared termwise with that of `a`, and `b` is registered onto
/// `a`. Congruent iff some candidate matches both the sequence and the
/// registered distance within `threshold` (default `1e-3 L`).
pub fn congruence_closed(
    a: &PlanarCurve,
    b: &PlanarCurve,
    threshold: Option<f64>,
    cfg: &Config,
) -> Result<CongruenceVerdict> {
    if !a.closed() || !b.closed() {
        return Err(SigError::OpenCurve);
    }
    let aa = minimal_traversal(&resample_by_arclength(a, cfg.resample_nodes)?)?;
    let bb = minimal_traversal(&resample_by_arclength(b, cfg.resample_nodes)?)?;
    let threshold = threshold.unwrap_or(1e-3 * aa.length());
    let mut evidence = Map::new();
    evidence.insert("length_a".into(), json!(aa.length()));
    evidence.insert("length_b".into(), json!(bb.length()));
    let verdict = |decision, g, dist, evidence| CongruenceVerdict {
        decision,
        kind: GroupKind::SE2,
        g,
        registered_distance: dist,
        threshold,
        evidence,
    };
    if (aa.length() - bb.length()).abs() > threshold {
        evidence.insert("reason".into(), json!("minimal periods differ"));
        return Ok(verdict(Decision::NotCongruent, None, None, evidence));
    }
    let sa = euclidean_signature(&aa, 1)?;
    let sb = euclidean_signature(&bb, 1)?;
    evidence.insert(
        "injectivity_gap_a".into(),
        json!(injectivity_gap(&sa, cfg.injectivity_separation)),
    );
    let xa = crossings(&aa);
    let seq_a = xa.sequence();
    evidence.insert("n1".into(), json!(xa.crossings.len()));
    evidence.insert("near_parallel_a".into(), json!(xa.near_parallel));
    evidence.insert("sequence_a".into(), json!(seq_a));

    let kappa = sa.column(0);
    let (kmin, kmax) = kappa.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| (lo.min(k), hi.max(k)));
    let scale = kappa.iter().chain(sa.column(1).iter()).fold(0.0_f64, |m, v| m.max(v.abs()));
    let starts: Vec<f64> = if kmax - kmin <= cfg.vertex_tol * scale.max(f64::MIN_POSITIVE) {
        // Constant curvature: every start is equivalent.
        vec![0.0]
    } else {
        start_candidates(sb.rows(), bb.spacing(), &sa.rows()[0], 0.05 * scale)
            .into_iter()
            .map(|(_, s)| s)
            .collect()
    };
    evidence.insert("candidates".into(), json!(starts));
    if starts.is_empty() {
        evidence.insert("reason".into(), json!("no point of S_B matches the start of S_A"));
        return Ok(verdict(Decision::NotCongruent, None, None, evidence));
    }
    let trials: Vec<Trial> = starts
        .par_iter()
        .map(|&start| -> Result<Trial> {
            let rb = bb.rotate_start_at(start)?;
            let sequence = crossings(&rb).sequence();
            let sequences_match = sequence.len() == seq_a.len();
            let max_dt = if sequences_match {
                seq_a.iter().zip(&sequence).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
            } else {
                f64::INFINITY
            };
            let g = register(&aa, &rb, GroupKind::SE2, cfg)?;
            let distance = registered_distance(&aa, &rb, &g)?;
            Ok(Trial { start, sequence, sequences_match: sequences_match && max_dt <= threshold, max_dt, g, distance })
        })
        .collect::<Result<_>>()?;
    let passing = |t: &Trial| t.sequences_match && t.distance <= threshold;
    let best = trials
        .iter()
        .min_by(|x, y| (!passing(x)).cmp(&!passing(y)).then(x.distance.total_cmp(&y.distance)))
        .expect("at least one candidate");
    evidence.insert("start_b".into(), json!(best.start));
    evidence.insert("n2".into(), json!(best.sequence.len() / 2));
    evidence.insert("sequence_b".into(), json!(best.sequence));
    evidence.insert("max_dt".into(), json!(if best.max_dt.is_finite() { Some(best.max_dt) } else { None }));
    let decision = if passing(best) { Decision::Congruent } else { Decision::NotCongruent };
    Ok(verdict(decision, Some(best.g), Some(best.distance), evidence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{apply_group, shapes};
    use crate::Vec2;

    #[test]
    fn doubled_circle_reduces_to_one_turn() {
        let pts: Vec<Vec2> = (0..800)
            .map(|i| {
                let t = 4.0 * std::f64::consts::PI * i as f64 / 800.0;
                Vec2::new(t.cos(), t.sin())
            })
            .collect();
        let c = PlanarCurve::new(pts, true).unwrap();
        let arc = minimal_traversal(&resample_by_arclength(&c, 1024).unwrap()).unwrap();
        assert!((arc.length() - 2.0 * std::f64::consts::PI).abs() < 1e-6);
        assert!(crossings(&arc).crossings.is_empty());
    }

    #[test]
    fn ellipse_and_rigid_image() {
        let cfg = Config::default();
        let a = shapes::ellipse(2.0, 1.0, 1000);
        let b = apply_group(&GroupElement::rotation(1.1, Vec2::new(-3.0, 4.0)), &a);
        let v = congruence_closed(&a, &b, None, &cfg).unwrap();
        assert_eq!(v.decision, Decision::Congruent, "{:?}", v.evidence);
        let c = shapes::ellipse(2.0, 1.1, 1000);
        let w = congruence_closed(&a, &c, None, &cfg).unwrap();
        assert_eq!(w.decision, Decision::NotCongruent);
    }

    #[test]
    fn limacon_sequences_match() {
        let cfg = Config::default();
        let a = shapes::limacon(2.0, 1.0, 1000);
        let b = apply_group(&GroupElement::rotation(-0.7, Vec2::new(1.0, 2.0)), &a);
        let v = congruence_closed(&a, &b, None, &cfg).unwrap();
        assert_eq!(v.decision, Decision::Congruent, "{:?}", v.evidence);
        assert_eq!(v.evidence["n1"], json!(1));
        assert_eq!(v.evidence["n2"], json!(1));
        assert!(v.evidence["max_dt"].as_f64().unwrap() <= 1e-3);
    }

    #[test]
    fn open_input_rejected() {
        let a = shapes::parabola(1.0, -1.0, 1.0, 100);
        let b = shapes::circle(1.0, 100);
        assert!(matches!(congruence_closed(&a, &b, None, &Config::default()), Err(SigError::OpenCurve)));
    }
}
