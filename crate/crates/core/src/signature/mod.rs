//! Phase-portrait signatures, tube neighbourhoods and signature metrics.

mod affine;
mod graph;
mod tube;

pub use affine::{affine_frame_data, affine_signature, AffineFrameData};
pub use graph::{l1_signature_distance, GraphFunction, Interpolation};
pub use tube::{delta_star, TubeNeighborhood};

use serde::{Deserialize, Serialize};

use crate::curve::{euclidean_curvature, hausdorff_distance, ArcLengthCurve, CurvatureProfile, Polyline};
use crate::error::{Result, SigError};
use crate::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignatureKind {
    Euclidean,
    Affine,
}

impl SignatureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SignatureKind::Euclidean => "euclidean",
            SignatureKind::Affine => "affine",
        }
    }
}

/// Sampled in-phase portrait `{(f, f', ..., f^(i))}` with its parameter `s`.
///
/// For Euclidean signatures `f = kappa` and `s` is arc length; for affine
/// signatures `f = mu` and `s` is affine arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePortrait {
    kind: SignatureKind,
    order: usize,
    s: Vec<f64>,
    rows: Vec<Vec<f64>>,
    length: f64,
    closed: bool,
}

impl PhasePortrait {
    pub fn new(
        kind: SignatureKind,
        s: Vec<f64>,
        rows: Vec<Vec<f64>>,
        length: f64,
        closed: bool,
    ) -> Result<Self> {
        let order = rows.first().map_or(0, |r| r.len()).saturating_sub(1);
        if rows.is_empty() || order == 0 {
            return Err(SigError::InvalidCurve("portrait needs rows of at least two entries".into()));
        }
        if rows.len() != s.len() || rows.iter().any(|r| r.len() != order + 1) {
            return Err(SigError::InvalidCurve("ragged portrait rows".into()));
        }
        if s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SigError::InvalidCurve("portrait parameter must be strictly increasing".into()));
        }
        if rows.iter().flatten().chain(&s).any(|v| !v.is_finite()) {
            return Err(SigError::InvalidCurve("non-finite portrait entry".into()));
        }
        Ok(PhasePortrait { kind, order, s, rows, length, closed })
    }

    pub fn from_profile(kind: SignatureKind, profile: &CurvatureProfile) -> Result<Self> {
        let rows = (0..profile.len()).map(|i| profile.row(i)).collect();
        Self::new(kind, profile.s().to_vec(), rows, profile.length(), profile.closed())
    }

    pub fn kind(&self) -> SignatureKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Portrait truncated to `order` (keeps columns `0..=order`).
    pub fn with_order(&self, order: usize) -> Result<PhasePortrait> {
        if order == 0 || order > self.order {
            return Err(SigError::InvalidCurve(format!("cannot truncate order {} to {order}", self.order)));
        }
        let rows = self.rows.iter().map(|r| r[..=order].to_vec()).collect();
        Ok(PhasePortrait { order, rows, ..self.clone() })
    }

    pub fn to_profile(&self) -> Result<CurvatureProfile> {
        let columns = (0..=self.order).map(|j| self.column(j)).collect();
        CurvatureProfile::new(self.s.clone(), columns, self.length, self.closed)
    }

    pub fn polyline(&self) -> Polyline {
        Polyline::from_rows(&self.rows, self.closed)
    }

    /// Largest interior mismatch between the central difference of column `j`
    /// and column `j + 1`, over all `j < order`.
    pub fn in_phase_defect(&self) -> f64 {
        let n = self.rows.len();
        let mut worst = 0.0_f64;
        for j in 0..self.order {
            for i in 1..n.saturating_sub(1) {
                let d = (self.rows[i + 1][j] - self.rows[i - 1][j]) / (self.s[i + 1] - self.s[i - 1]);
                worst = worst.max((d - self.rows[i][j + 1]).abs());
            }
        }
        worst
    }
}

/// Euclidean signature `{(kappa, kappa', ..., kappa^(order))}` in arc length.
pub fn euclidean_signature(curve: &ArcLengthCurve, order: usize) -> Result<PhasePortrait> {
    if order == 0 {
        return Err(SigError::InvalidCurve("signature order must be >= 1".into()));
    }
    let profile = euclidean_curvature(curve, order)?;
    PhasePortrait::from_profile(SignatureKind::Euclidean, &profile)
}

/// Hausdorff distance between two portraits viewed as point sets.
pub fn signature_hausdorff(a: &PhasePortrait, b: &PhasePortrait) -> Result<f64> {
    if a.kind != b.kind || a.order != b.order {
        return Err(SigError::KindMismatch);
    }
    hausdorff_distance(&a.polyline(), &b.polyline())
}

/// Portrait samples with the in-phase parameter appended as a last coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSignature {
    rows: Vec<Vec<f64>>,
    base_point: Vec2,
    length: f64,
}

impl LiftedSignature {
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn base_point(&self) -> Vec2 {
        self.base_point
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn t(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[r.len() - 1]).collect()
    }

    /// Smallest distance between two samples whose parameters differ by more than `separation`.
    pub fn injectivity_gap(&self, separation: f64) -> f64 {
        let t = self.t();
        let mut best = f64::INFINITY;
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if (t[j] - t[i]).abs() > separation {
                    best = best.min(dist(&self.rows[i], &self.rows[j]));
                }
            }
        }
        best
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Lift of the order-`order` signature of a closed curve started at node `base_point_index`.
pub fn lift_signature(curve: &ArcLengthCurve, order: usize, base_point_index: usize) -> Result<LiftedSignature> {
    if !curve.closed() {
        return Err(SigError::OpenCurve);
    }
    let rotated = curve.rotate_start(base_point_index)?;
    let sig = euclidean_signature(&rotated, order)?;
    let rows = sig
        .rows()
        .iter()
        .zip(sig.s())
        .map(|(r, &t)| {
            let mut r = r.clone();
            r.push(t);
            r
        })
        .collect();
    Ok(LiftedSignature { rows, base_point: rotated.nodes()[0], length: curve.length() })
}

/// Smallest distance between portrait samples whose parameters are more than
/// `separation * L` apart (cyclically for closed portraits). A positive gap
/// above the injectivity tolerance means no point of the signature is visited twice.
pub fn injectivity_gap(portrait: &PhasePortrait, separation: f64) -> f64 {
    let s = portrait.s();
    let l = portrait.length();
    let sep = separation * l;
    let rows = portrait.rows();
    let mut best = f64::INFINITY;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let mut ds = s[j] - s[i];
            if portrait.closed() {
                ds = ds.min(l - ds);
            }
            if ds > sep {
                best = best.min(dist(&rows[i], &rows[j]));
            }
        }
    }
    best
}
