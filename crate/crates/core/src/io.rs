//! Curve files.
//!
//! A curve is either sampled, `{"closed": bool, "samples": [[x, y], ...]}`,
//! or generated, `{"kind": "...", "params": {...}, "n": int}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curve::{AnalyticCurve, PlanarCurve};
use crate::error::{Result, SigError};
use crate::Vec2;

/// Default sample count for generated curves without `n`.
pub const DEFAULT_SAMPLES: usize = 1024;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledFile {
    closed: bool,
    samples: Vec<[f64; 2]>,
}

/// Parses a curve from JSON text.
pub fn parse_curve(text: &str) -> Result<PlanarCurve> {
    let value: Value = serde_json::from_str(text).map_err(|e| SigError::InvalidCurve(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| SigError::InvalidCurve("expected a JSON object".into()))?;
    if obj.contains_key("kind") {
        let n = match obj.get("n") {
            None => DEFAULT_SAMPLES,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| SigError::InvalidCurve("n must be a non-negative integer".into()))?
                as usize,
        };
        let mut desc = obj.clone();
        desc.remove("n");
        if !desc.contains_key("params") {
            desc.insert("params".into(), Value::Object(Default::default()));
        }
        let analytic: AnalyticCurve =
            serde_json::from_value(Value::Object(desc)).map_err(|e| SigError::InvalidCurve(e.to_string()))?;
        return analytic.sample(n);
    }
    let file: SampledFile = serde_json::from_value(value).map_err(|e| SigError::InvalidCurve(e.to_string()))?;
    PlanarCurve::new(file.samples.iter().map(|p| Vec2::new(p[0], p[1])).collect(), file.closed)
}

/// JSON text of a sampled curve.
pub fn curve_to_json(curve: &PlanarCurve) -> String {
    let file = SampledFile {
        closed: curve.closed(),
        samples: curve.samples().iter().map(|p| [p.x, p.y]).collect(),
    };
    serde_json::to_string(&file).expect("finite samples serialize")
}

pub fn read_curve(path: &Path) -> std::io::Result<Result<PlanarCurve>> {
    Ok(parse_curve(&std::fs::read_to_string(path)?))
}
