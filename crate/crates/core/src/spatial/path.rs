use serde::{Deserialize, Serialize};

use crate::anim::AnimationClip;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPath {
    pub clip_id: String,
    pub joint: usize,
    /// World position at every frame.
    pub points: Vec<Vec3>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathStats {
    pub arc_length: f64,
    pub bbox_min: Vec3,
    pub bbox_max: Vec3,
    /// Largest coordinate along the skeleton's up axis.
    pub max_height: f64,
}

impl JointPath {
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    pub fn stats(&self, up: crate::anim::UpAxis) -> PathStats {
        let first = self.points[0];
        let (bbox_min, bbox_max) = self
            .points
            .iter()
            .fold((first, first), |(lo, hi), p| (lo.inf(p), hi.sup(p)));
        let max_height = self.points.iter().map(|p| up.height(p)).fold(f64::NEG_INFINITY, f64::max);
        PathStats { arc_length: self.arc_length(), bbox_min, bbox_max, max_height }
    }
}

/// World-space trajectory of one joint over the whole clip.
pub fn joint_path(clip: &AnimationClip, joint: usize) -> Result<JointPath> {
    if joint >= clip.skeleton().joint_count() {
        return Err(Error::structural(format!(
            "joint {joint} out of range; skeleton has {}",
            clip.skeleton().joint_count()
        )));
    }
    let points = clip.global_poses().into_iter().map(|p| p.positions[joint]).collect();
    Ok(JointPath { clip_id: clip.id().to_string(), joint, points })
}

/// Paths of every joint, computing forward kinematics once per frame.
pub fn joint_paths(clip: &AnimationClip) -> Vec<JointPath> {
    let poses = clip.global_poses();
    (0..clip.skeleton().joint_count())
        .map(|j| JointPath {
            clip_id: clip.id().to_string(),
            joint: j,
            points: poses.iter().map(|p| p.positions[j]).collect(),
        })
        .collect()
}
