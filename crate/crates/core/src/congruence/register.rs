use crate::config::Config;
use crate::curve::{ArcLengthCurve, GroupElement, GroupKind};
use crate::error::{Result, SigError};
use crate::signature::affine_frame_data;
use crate::Mat2;

/// Group element `g` with `g * b` starting where `a` starts, with the same
/// unit tangent (SE2) or the same affine frame (Affine).
pub fn register(a: &ArcLengthCurve, b: &ArcLengthCurve, kind: GroupKind, cfg: &Config) -> Result<GroupElement> {
    let (pa, pb) = (a.nodes()[0], b.nodes()[0]);
    match kind {
        GroupKind::SE2 => {
            let (ta, tb) = (a.tangent(0)?, b.tangent(0)?);
            let angle = ta.y.atan2(ta.x) - tb.y.atan2(tb.x);
            let rot = GroupElement::rotation(angle, nalgebra::zero());
            let t = pa - rot.apply_point(&pb);
            Ok(GroupElement::rotation(angle, t))
        }
        GroupKind::Affine => {
            // Frames hold T and N as rows; as columns they transform by the linear part.
            let fa = affine_frame_data(a, cfg)?.frame0.transpose();
            let fb = affine_frame_data(b, cfg)?.frame0.transpose();
            let scale = fb.amax().max(1.0);
            if fb.determinant().abs() < 1e-12 * scale * scale {
                return Err(SigError::FrameSingular);
            }
            let inv: Mat2 = fb.try_inverse().ok_or(SigError::FrameSingular)?;
            let linear = fa * inv;
            let t = pa - linear * pb;
            GroupElement::new(GroupKind::Affine, linear, t).map_err(|_| SigError::FrameSingular)
        }
    }
}
