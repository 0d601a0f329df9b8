use serde::{Deserialize, Serialize};

use super::PlanarCurve;
use crate::error::{Result, SigError};
use crate::{Mat2, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    /// Rotations and translations.
    SE2,
    /// Invertible linear maps and translations.
    Affine,
}

/// A group element acting on the plane by `x -> linear * x + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    kind: GroupKind,
    linear: Mat2,
    translation: Vec2,
}

const ORTHO_TOL: f64 = 1e-9;

impl GroupElement {
    pub fn new(kind: GroupKind, linear: Mat2, translation: Vec2) -> Result<Self> {
        if linear.iter().chain(translation.iter()).any(|v| !v.is_finite()) {
            return Err(SigError::InvalidGroup("non-finite entries".into()));
        }
        let det = linear.determinant();
        match kind {
            GroupKind::SE2 => {
                let defect = (linear.transpose() * linear - Mat2::identity()).amax();
                if defect > ORTHO_TOL || (det - 1.0).abs() > ORTHO_TOL {
                    return Err(SigError::InvalidGroup(format!(
                        "SE2 linear part must be a rotation (orthogonality defect {defect:e}, det {det})"
                    )));
                }
            }
            GroupKind::Affine => {
                if det.abs() < 1e-14 * linear.amax().max(1.0).powi(2) {
                    return Err(SigError::InvalidGroup("affine linear part is singular".into()));
                }
            }
        }
        Ok(GroupElement { kind, linear, translation })
    }

    pub fn identity(kind: GroupKind) -> Self {
        GroupElement { kind, linear: Mat2::identity(), translation: Vec2::zeros() }
    }

    /// Rotation by `angle` followed by translation.
    pub fn rotation(angle: f64, translation: Vec2) -> Self {
        let (s, c) = angle.sin_cos();
        GroupElement { kind: GroupKind::SE2, linear: Mat2::new(c, -s, s, c), translation }
    }

    pub fn affine(linear: Mat2, translation: Vec2) -> Result<Self> {
        Self::new(GroupKind::Affine, linear, translation)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn linear(&self) -> &Mat2 {
        &self.linear
    }

    pub fn translation(&self) -> &Vec2 {
        &self.translation
    }

    pub fn apply_point(&self, p: &Vec2) -> Vec2 {
        self.linear * p + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let kind = if self.kind == GroupKind::SE2 && other.kind == GroupKind::SE2 {
            GroupKind::SE2
        } else {
            GroupKind::Affine
        };
        GroupElement {
            kind,
            linear: self.linear * other.linear,
            translation: self.linear * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = match self.kind {
            GroupKind::SE2 => self.linear.transpose(),
            GroupKind::Affine => self.linear.try_inverse().expect("validated invertible"),
        };
        GroupElement { kind: self.kind, linear: inv, translation: -(inv * self.translation) }
    }

    /// Max of the linear-part sup-norm defect and the translation norm relative to identity.
    pub fn distance_from_identity(&self) -> f64 {
        (self.linear - Mat2::identity()).amax().max(self.translation.norm())
    }
}

/// Pointwise image `g·Γ`. Closedness is preserved; the analytic tag is dropped.
pub fn apply_group(g: &GroupElement, curve: &PlanarCurve) -> PlanarCurve {
    let samples = curve.samples().iter().map(|p| g.apply_point(p)).collect();
    PlanarCurve::from_validated(samples, curve.closed())
}
