//! Congruence decisions for open and closed curves.

mod closed;
mod insert;
mod intersect;
mod partition;
mod register;
mod symmetry;

pub use closed::{congruence_closed, minimal_traversal};
pub use insert::{find_vertices, insert_constant_curvature};
pub use intersect::{self_intersections, Crossing, SelfIntersections, DEFAULT_PARALLEL_TOL};
pub use partition::{find_partition, Partition};
pub use register::register;
pub use symmetry::{index_of_symmetry, SymmetryIndex};

use serde_json::{json, Map, Value};

use crate::config::Config;
use crate::curve::{
    apply_group, euclidean_curvature, hausdorff_distance, resample_by_arclength, ArcLengthCurve, GroupElement,
    GroupKind, PlanarCurve,
};
use crate::error::Result;
use crate::robustness::explicit_bound;
use crate::signature::{affine_signature, euclidean_signature, signature_hausdorff, PhasePortrait};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Congruent,
    NotCongruent,
    Undecidable,
}

/// Outcome of a congruence test with supporting evidence.
#[derive(Debug, Clone)]
pub struct CongruenceVerdict {
    pub decision: Decision,
    pub kind: GroupKind,
    pub g: Option<GroupElement>,
    /// Hausdorff distance after registration; `None` when no registration was attempted.
    pub registered_distance: Option<f64>,
    pub threshold: f64,
    pub evidence: Map<String, Value>,
}

impl CongruenceVerdict {
    pub fn is_congruent(&self) -> bool {
        self.decision == Decision::Congruent
    }

    pub fn to_json(&self) -> Value {
        let congruent = match self.decision {
            Decision::Congruent => json!(true),
            Decision::NotCongruent => json!(false),
            Decision::Undecidable => json!("undecidable"),
        };
        let g = self.g.map(|g| {
            let l = g.linear();
            json!({
                "linear": [[l[(0, 0)], l[(0, 1)]], [l[(1, 0)], l[(1, 1)]]],
                "translation": [g.translation().x, g.translation().y],
            })
        });
        json!({
            "congruent": congruent,
            "kind": match self.kind { GroupKind::SE2 => "SE2", GroupKind::Affine => "Affine" },
            "registered_distance": self.registered_distance,
            "threshold": self.threshold,
            "g": g,
            "evidence": Value::Object(self.evidence.clone()),
        })
    }
}

/// `eta = vertex_tol * max|f'|`, floored at `1e-8`.
pub(crate) fn vertex_threshold(derivative: &[f64], cfg: &Config) -> f64 {
    let max = derivative.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    cfg.vertex_tol * max.max(1e-8)
}

pub(crate) fn min_abs(values: &[f64]) -> f64 {
    values.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()))
}

fn one_sign(values: &[f64]) -> bool {
    values.iter().all(|&v| v > 0.0) || values.iter().all(|&v| v < 0.0)
}

/// How a curve satisfies the uniqueness hypothesis, if at all.
enum Regime {
    VertexFree { min_derivative: f64 },
    Partitioned { segments: usize, order: usize },
    Obstructed(String),
}

impl Regime {
    fn describe(&self) -> Value {
        match self {
            Regime::VertexFree { min_derivative } => json!({"regime": "vertex_free", "min_derivative": min_derivative}),
            Regime::Partitioned { segments, order } => {
                json!({"regime": "partition", "segments": segments, "order": order})
            }
            Regime::Obstructed(reason) => json!({"regime": "obstructed", "reason": reason}),
        }
    }
}

fn regime(arc: &ArcLengthCurve, kind: GroupKind, cfg: &Config) -> Result<(Regime, PhasePortrait)> {
    match kind {
        GroupKind::SE2 => {
            let sig = euclidean_signature(arc, 3)?;
            let d = sig.column(1);
            let eta = vertex_threshold(&d, cfg);
            let order1 = sig.with_order(1)?;
            let min_d = min_abs(&d);
            if min_d > eta && one_sign(&d) && !arc.closed() {
                return Ok((Regime::VertexFree { min_derivative: min_d }, order1));
            }
            for order in 2..=3 {
                if let Ok(p) = find_partition(&sig.with_order(order)?, cfg) {
                    return Ok((Regime::Partitioned { segments: p.witness_orders().len(), order }, order1));
                }
            }
            Ok((Regime::Obstructed(format!("VertexObstruction: min|kappa'| = {min_d:e}, no partition")), order1))
        }
        GroupKind::Affine => {
            let sig = affine_signature(arc, cfg)?;
            let d = sig.column(1);
            let eta = vertex_threshold(&d, cfg);
            let min_d = min_abs(&d);
            if min_d > eta && one_sign(&d) {
                return Ok((Regime::VertexFree { min_derivative: min_d }, sig));
            }
            match find_partition(&sig, cfg) {
                Ok(p) => Ok((Regime::Partitioned { segments: p.witness_orders().len(), order: 1 }, sig)),
                Err(_) => Ok((Regime::Obstructed(format!("VertexObstruction: min|mu_alpha| = {min_d:e}")), sig)),
            }
        }
    }
}

/// Registered Hausdorff distance between `a` and `g * b`.
pub(crate) fn registered_distance(a: &ArcLengthCurve, b: &ArcLengthCurve, g: &GroupElement) -> Result<f64> {
    let moved = apply_group(g, &b.to_planar());
    hausdorff_distance(&a.polyline(), &moved.polyline())
}

/// Congruence test for open curves.
///
/// Both curves must satisfy the uniqueness hypothesis: either no vertices
/// (`|f'| > eta` everywhere) or a partition of a higher-order signature.
/// Otherwise the verdict is undecidable. When decidable, `b` is registered
/// onto `a` at the initial point and frame, and the verdict is congruent iff
/// the registered Hausdorff distance is at most `threshold` (default `1e-3 L`).
pub fn congruence_open(
    a: &PlanarCurve,
    b: &PlanarCurve,
    kind: GroupKind,
    threshold: Option<f64>,
    cfg: &Config,
) -> Result<CongruenceVerdict> {
    let aa = resample_by_arclength(&PlanarCurve::new(a.samples().to_vec(), false)?, cfg.resample_nodes)?;
    let bb = resample_by_arclength(&PlanarCurve::new(b.samples().to_vec(), false)?, cfg.resample_nodes)?;
    let threshold = threshold.unwrap_or(1e-3 * aa.length());
    let mut evidence = Map::new();
    let (ra, sa) = regime(&aa, kind, cfg)?;
    let (rb, sb) = regime(&bb, kind, cfg)?;
    evidence.insert("regime_a".into(), ra.describe());
    evidence.insert("regime_b".into(), rb.describe());
    evidence.insert("length_a".into(), json!(aa.length()));
    evidence.insert("length_b".into(), json!(bb.length()));
    let sig_distance = signature_hausdorff(&sa, &sb)?;
    evidence.insert("signature_distance".into(), json!(sig_distance));
    for r in [&ra, &rb] {
        if let Regime::Obstructed(reason) = r {
            evidence.insert("reason".into(), json!(reason));
            return Ok(CongruenceVerdict {
                decision: Decision::Undecidable,
                kind,
                g: None,
                registered_distance: None,
                threshold,
                evidence,
            });
        }
    }
    if let (GroupKind::SE2, Regime::VertexFree { .. }) = (kind, &ra) {
        // Bound implied by the signature distance, when it is admissible.
        let profile = euclidean_curvature(&aa, 1)?;
        if let Ok(f) = profile.interpolant() {
            if let Ok(report) = explicit_bound(&f, sig_distance.max(f64::MIN_POSITIVE)) {
                evidence.insert("eps_bound".into(), json!(report.epsilon_of_delta));
            }
        }
    }
    let g = register(&aa, &bb, kind, cfg)?;
    let dist = registered_distance(&aa, &bb, &g)?;
    let decision = if dist <= threshold { Decision::Congruent } else { Decision::NotCongruent };
    Ok(CongruenceVerdict { decision, kind, g: Some(g), registered_distance: Some(dist), threshold, evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::shapes;
    use crate::Vec2;

    #[test]
    fn rigid_image_of_spiral_is_congruent() {
        let cfg = Config::default();
        let a = shapes::clothoid(0.5, 1.0, 2.0, 1024);
        let b = apply_group(&GroupElement::rotation(0.4, Vec2::new(2.0, -1.0)), &a);
        let v = congruence_open(&a, &b, GroupKind::SE2, None, &cfg).unwrap();
        assert_eq!(v.decision, Decision::Congruent);
        assert!(v.registered_distance.unwrap() < 1e-6);
        let back = congruence_open(&b, &a, GroupKind::SE2, None, &cfg).unwrap();
        assert_eq!(back.decision, Decision::Congruent);
    }

    #[test]
    fn scaled_spiral_is_not_congruent() {
        let cfg = Config::default();
        let a = shapes::clothoid(0.5, 1.0, 2.0, 1024);
        let b = apply_group(&GroupElement::affine(crate::Mat2::identity() * 1.01, Vec2::zeros()).unwrap(), &a);
        let v = congruence_open(&a, &b, GroupKind::SE2, None, &cfg).unwrap();
        assert_eq!(v.decision, Decision::NotCongruent);
        let w = congruence_open(&b, &a, GroupKind::SE2, None, &cfg).unwrap();
        assert_eq!(w.decision, Decision::NotCongruent);
    }

    #[test]
    fn circle_arc_is_undecidable() {
        let cfg = Config::default();
        let pts: Vec<Vec2> = (0..200).map(|i| {
            let t = i as f64 / 199.0 * 2.0;
            Vec2::new(t.cos(), t.sin())
        }).collect();
        let a = PlanarCurve::new(pts, false).unwrap();
        let v = congruence_open(&a, &a, GroupKind::SE2, None, &cfg).unwrap();
        assert_eq!(v.decision, Decision::Undecidable, "{:?}", v.evidence);
        assert_eq!(v.to_json()["congruent"], json!("undecidable"));
    }
}
