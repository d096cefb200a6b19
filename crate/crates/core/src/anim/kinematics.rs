use serde::{Deserialize, Serialize};

use super::{Frame, Skeleton};
use crate::{Error, Quat, Result, Vec3};

/// World-space joint positions and orientations for one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalPose {
    pub positions: Vec<Vec3>,
    /// Accumulated world rotation of each joint.
    #[serde(with = "crate::serde_util::quat_wxyz_vec")]
    pub rotations: Vec<Quat>,
}

impl GlobalPose {
    pub fn joint_count(&self) -> usize {
        self.positions.len()
    }
}

/// Forward kinematics over a topologically ordered skeleton.
///
/// The root sits at the frame's root translation; every other joint is its
/// parent's position plus the rest offset rotated by the parent's accumulated
/// rotation.
pub fn forward_kinematics(skeleton: &Skeleton, frame: &Frame) -> Result<GlobalPose> {
    let n = skeleton.joint_count();
    if frame.rotations.len() != n {
        return Err(Error::structural(format!(
            "frame has {} rotations, skeleton has {n} joints",
            frame.rotations.len()
        )));
    }
    let mut positions = Vec::with_capacity(n);
    let mut rotations: Vec<Quat> = Vec::with_capacity(n);
    for (i, joint) in skeleton.joints().iter().enumerate() {
        match joint.parent {
            None => {
                positions.push(frame.root_translation);
                rotations.push(frame.rotations[i]);
            }
            Some(p) => {
                let parent_rot = rotations[p];
                positions.push(positions[p] + parent_rot * joint.rest_offset);
                rotations.push(parent_rot * frame.rotations[i]);
            }
        }
    }
    Ok(GlobalPose { positions, rotations })
}
