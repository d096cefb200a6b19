//! Clip-JSON: a self-contained JSON document holding one skeleton and one clip.
//!
//! ```json
//! { "skeleton": { "up_axis": "Y",
//!                 "joints": [{ "name": "hips", "parent": -1, "offset": [0, 0, 0] }],
//!                 "chains": { "spine": [0] } },
//!   "fps": 24,
//!   "frames": [{ "root_translation": [0, 1, 0], "rotations": [[1, 0, 0, 0]] }] }
//! ```
//!
//! Rotations are `[w, x, y, z]`. An optional top-level `"id"` carries the clip id.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::anim::{AnimationClip, Frame, Joint, Skeleton, UpAxis};
use crate::{ParseError, Quat, Vec3};

const UNIT_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipDoc {
    pub skeleton: SkeletonDoc,
    pub fps: f64,
    pub frames: Vec<FrameDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonDoc {
    #[serde(default = "default_up_axis")]
    pub up_axis: String,
    pub joints: Vec<JointDoc>,
    #[serde(default)]
    pub chains: BTreeMap<String, Vec<usize>>,
}

fn default_up_axis() -> String {
    "Y".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDoc {
    pub name: String,
    /// Parent index, or -1 for the root.
    pub parent: i64,
    pub offset: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameDoc {
    pub root_translation: [f64; 3],
    pub rotations: Vec<[f64; 4]>,
}

impl SkeletonDoc {
    pub fn from_skeleton(skeleton: &Skeleton) -> Self {
        Self {
            up_axis: skeleton.up_axis().label().to_string(),
            joints: skeleton
                .joints()
                .iter()
                .map(|j| JointDoc {
                    name: j.name.clone(),
                    parent: j.parent.map_or(-1, |p| p as i64),
                    offset: [j.rest_offset.x, j.rest_offset.y, j.rest_offset.z],
                })
                .collect(),
            chains: skeleton.chains().clone(),
        }
    }

    pub fn to_skeleton(&self) -> Result<Skeleton, ParseError> {
        let up_axis = UpAxis::from_label(&self.up_axis)
            .ok_or_else(|| ParseError::at_path("skeleton.up_axis", format!("unknown axis {:?}", self.up_axis)))?;
        let n = self.joints.len();
        if n == 0 {
            return Err(ParseError::at_path("skeleton.joints", "skeleton has no joints"));
        }
        let mut joints = Vec::with_capacity(n);
        for (i, j) in self.joints.iter().enumerate() {
            let parent = match j.parent {
                -1 => None,
                p if p >= 0 && (p as usize) < i => Some(p as usize),
                p => {
                    return Err(ParseError::at_path(
                        format!("skeleton.joints[{i}].parent"),
                        format!("parent {p} must be -1 or an earlier joint index"),
                    ))
                }
            };
            if i == 0 && parent.is_some() || i > 0 && parent.is_none() {
                return Err(ParseError::at_path(
                    format!("skeleton.joints[{i}].parent"),
                    "exactly one root, at index 0, is required",
                ));
            }
            joints.push(Joint::new(j.name.clone(), parent, Vec3::from(j.offset)));
        }
        for (name, members) in &self.chains {
            if let Some(pos) = members.iter().position(|&m| m >= n) {
                return Err(ParseError::at_path(
                    format!("skeleton.chains.{name}[{pos}]"),
                    format!("joint index {} out of range", members[pos]),
                ));
            }
        }
        Skeleton::new(joints, up_axis, self.chains.clone())
            .map_err(|e| ParseError::at_path("skeleton", e.to_string()))
    }
}

impl ClipDoc {
    pub fn from_clip(clip: &AnimationClip) -> Self {
        Self {
            skeleton: SkeletonDoc::from_skeleton(clip.skeleton()),
            fps: clip.fps(),
            frames: clip
                .frames()
                .iter()
                .map(|f| FrameDoc {
                    root_translation: [f.root_translation.x, f.root_translation.y, f.root_translation.z],
                    rotations: f
                        .rotations
                        .iter()
                        .map(|q| [q.w, q.i, q.j, q.k])
                        .collect(),
                })
                .collect(),
            id: Some(clip.id().to_string()),
        }
    }

    /// Validates the document and builds the clip, reusing `skeleton` when given.
    pub fn to_clip(&self, skeleton: Option<Arc<Skeleton>>) -> Result<AnimationClip, ParseError> {
        let skeleton = match skeleton {
            Some(sk) => sk,
            None => Arc::new(self.skeleton.to_skeleton()?),
        };
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(ParseError::at_path("fps", format!("fps must be positive, got {}", self.fps)));
        }
        if self.frames.is_empty() {
            return Err(ParseError::at_path("frames", "clip has no frames"));
        }
        let n = skeleton.joint_count();
        let mut frames = Vec::with_capacity(self.frames.len());
        for (t, f) in self.frames.iter().enumerate() {
            if f.rotations.len() != n {
                return Err(ParseError::at_path(
                    format!("frames[{t}].rotations"),
                    format!("expected {n} rotations, found {}", f.rotations.len()),
                ));
            }
            if !f.root_translation.iter().all(|c| c.is_finite()) {
                return Err(ParseError::at_path(format!("frames[{t}].root_translation"), "non-finite value"));
            }
            let mut rotations = Vec::with_capacity(n);
            for (j, [w, x, y, z]) in f.rotations.iter().copied().enumerate() {
                let q = nalgebra::Quaternion::new(w, x, y, z);
                let norm = q.norm();
                if !((norm - 1.0).abs() <= UNIT_NORM_TOL) {
                    return Err(ParseError::at_path(
                        format!("frames[{t}].rotations[{j}]"),
                        format!("quaternion norm {norm} is not 1"),
                    ));
                }
                // Leave already-unit values bit-exact so documents round-trip.
                if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
                    rotations.push(Quat::new_unchecked(q));
                } else {
                    rotations.push(Quat::new_normalize(q));
                }
            }
            frames.push(Frame { root_translation: Vec3::from(f.root_translation), rotations });
        }
        let id = self.id.clone().unwrap_or_else(|| "clip".to_string());
        AnimationClip::new(id, skeleton, self.fps, frames).map_err(|e| ParseError::new(e.to_string()))
    }
}

/// Parses a Clip-JSON document. Errors carry the path of the offending field.
pub fn parse_clip_json(text: &str) -> Result<(Arc<Skeleton>, AnimationClip), ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ClipDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ParseError {
            line: (inner.line() > 0).then(|| inner.line()),
            path: (path != ".").then_some(path),
            ..ParseError::new(inner.to_string())
        }
    })?;
    let skeleton = Arc::new(doc.skeleton.to_skeleton()?);
    let clip = doc.to_clip(Some(skeleton.clone()))?;
    Ok((skeleton, clip))
}

/// Serializes a clip, including its skeleton and id, as compact Clip-JSON.
pub fn emit_clip_json(clip: &AnimationClip) -> String {
    serde_json::to_string(&ClipDoc::from_clip(clip)).expect("clip documents always serialize")
}
