use serde::{Deserialize, Serialize};

use super::projection::{project, CameraSpec};
use crate::io::AnimationSet;
use crate::{Error, Result};

/// Global NDC extrema used to map every clip onto one scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub frame: usize,
    /// Normalized and clamped to `[0, 1]`.
    pub bar_x: f64,
    pub bar_y: f64,
    /// Normalized, before clamping.
    pub bar_x_unclamped: f64,
    pub bar_y_unclamped: f64,
    pub ndc: [f64; 2],
    pub out_of_view: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipCurve {
    pub clip_id: String,
    pub samples: Vec<CurveSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointCurves {
    pub joint: usize,
    pub joint_name: String,
    pub clips: Vec<ClipCurve>,
    pub normalization: Normalization,
}

fn normalize(v: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        (v - lo) / (hi - lo)
    } else {
        0.5
    }
}

/// Screen-space X/Y curves of one joint for every clip.
///
/// Each frame's joint position is projected by the main camera. X and Y are
/// normalized independently by their global extrema over all clips (samples
/// whose NDC had to be replaced by the sentinel are excluded from the
/// extrema); a degenerate range maps to 0.5. Samples keep both the clamped and
/// unclamped bar value plus an out-of-view flag.
pub fn joint_curves(set: &AnimationSet, camera: &CameraSpec, joint: usize) -> Result<JointCurves> {
    camera.validate()?;
    let joint_name = set
        .skeleton()
        .joint(joint)
        .map(|j| j.name.clone())
        .ok_or_else(|| Error::structural(format!("joint {joint} out of range")))?;
    let projected: Vec<Vec<_>> = set
        .clips()
        .iter()
        .map(|clip| clip.global_poses().iter().map(|p| project(camera, &p.positions[joint])).collect())
        .collect();

    let mut bounds: Option<Normalization> = None;
    for p in projected.iter().flatten().filter(|p| p.finite) {
        let [x, y] = p.ndc;
        bounds = Some(match bounds {
            None => Normalization { min_x: x, max_x: x, min_y: y, max_y: y },
            Some(b) => Normalization {
                min_x: b.min_x.min(x),
                max_x: b.max_x.max(x),
                min_y: b.min_y.min(y),
                max_y: b.max_y.max(y),
            },
        });
    }
    let normalization = bounds.unwrap_or(Normalization { min_x: 0.0, max_x: 0.0, min_y: 0.0, max_y: 0.0 });

    let clips = set
        .clips()
        .iter()
        .zip(projected)
        .map(|(clip, proj)| ClipCurve {
            clip_id: clip.id().to_string(),
            samples: proj
                .into_iter()
                .enumerate()
                .map(|(frame, p)| {
                    let ux = normalize(p.ndc[0], normalization.min_x, normalization.max_x);
                    let uy = normalize(p.ndc[1], normalization.min_y, normalization.max_y);
                    CurveSample {
                        frame,
                        bar_x: ux.clamp(0.0, 1.0),
                        bar_y: uy.clamp(0.0, 1.0),
                        bar_x_unclamped: ux,
                        bar_y_unclamped: uy,
                        ndc: p.ndc,
                        out_of_view: !p.in_view,
                    }
                })
                .collect(),
        })
        .collect();
    Ok(JointCurves { joint, joint_name, clips, normalization })
}
