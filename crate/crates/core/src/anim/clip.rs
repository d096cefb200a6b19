use std::sync::Arc;

use super::kinematics::{forward_kinematics, GlobalPose};
use super::Skeleton;
use crate::{Error, Quat, Result, Vec3};

/// Unit-norm tolerance for stored rotations.
pub(crate) const UNIT_NORM_TOL: f64 = 1e-6;

/// Local transforms of one frame: root translation plus one rotation per joint.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub root_translation: Vec3,
    pub rotations: Vec<Quat>,
}

impl Frame {
    pub fn identity(joint_count: usize) -> Self {
        Self { root_translation: Vec3::zeros(), rotations: vec![Quat::identity(); joint_count] }
    }
}

/// Fixed-rate sequence of poses on a shared skeleton.
#[derive(Debug, Clone, PartialEq)]
pub struct AnimationClip {
    id: String,
    skeleton: Arc<Skeleton>,
    fps: f64,
    frames: Vec<Frame>,
}

impl AnimationClip {
    pub fn new(
        id: impl Into<String>,
        skeleton: Arc<Skeleton>,
        fps: f64,
        frames: Vec<Frame>,
    ) -> Result<Self> {
        let id = id.into();
        if !(fps.is_finite() && fps > 0.0) {
            return Err(Error::structural(format!("clip {id}: fps must be positive, got {fps}")));
        }
        if frames.is_empty() {
            return Err(Error::structural(format!("clip {id}: no frames")));
        }
        let joints = skeleton.joint_count();
        for (t, frame) in frames.iter().enumerate() {
            if frame.rotations.len() != joints {
                return Err(Error::structural(format!(
                    "clip {id}: frame {t} has {} rotations, skeleton has {joints} joints",
                    frame.rotations.len()
                )));
            }
            if !frame.root_translation.iter().all(|c| c.is_finite()) {
                return Err(Error::structural(format!("clip {id}: frame {t} has a non-finite root translation")));
            }
            if let Some(j) = frame
                .rotations
                .iter()
                .position(|q| !((q.quaternion().norm() - 1.0).abs() <= UNIT_NORM_TOL))
            {
                return Err(Error::structural(format!(
                    "clip {id}: frame {t} joint {j} rotation is not unit-norm"
                )));
            }
        }
        Ok(Self { id, skeleton, fps, frames })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn skeleton(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.frames.len() as f64 / self.fps
    }

    /// World-space pose at frame `t`.
    pub fn global_pose(&self, t: usize) -> Result<GlobalPose> {
        let frame = self.frames.get(t).ok_or_else(|| Error::FrameOutOfRange {
            clip: self.id.clone(),
            frame: t as i64,
        })?;
        forward_kinematics(&self.skeleton, frame)
    }

    /// World-space poses for every frame.
    pub fn global_poses(&self) -> Vec<GlobalPose> {
        self.frames
            .iter()
            .map(|f| forward_kinematics(&self.skeleton, f).expect("validated at construction"))
            .collect()
    }

    /// Rebinds the clip to an equivalent skeleton, permuting rotations by joint name.
    pub(crate) fn rebind(&self, target: &Arc<Skeleton>) -> Result<Self> {
        let order: Vec<usize> = target
            .joints()
            .iter()
            .map(|j| {
                self.skeleton.joint_index(&j.name).ok_or_else(|| {
                    Error::structural(format!("clip {}: joint {} missing", self.id, j.name))
                })
            })
            .collect::<Result<_>>()?;
        let frames = self
            .frames
            .iter()
            .map(|f| Frame {
                root_translation: f.root_translation,
                rotations: order.iter().map(|&src| f.rotations[src]).collect(),
            })
            .collect();
        Ok(Self { id: self.id.clone(), skeleton: Arc::clone(target), fps: self.fps, frames })
    }

    /// Applies a rigid ground-plane placement: yaw (radians) about the up axis
    /// through the world origin, then a translation.
    pub fn placed(&self, yaw: f64, translation: Vec3) -> Self {
        let rot = Quat::from_axis_angle(&self.skeleton.up_axis().unit(), yaw);
        let frames = self
            .frames
            .iter()
            .map(|f| {
                let mut rotations = f.rotations.clone();
                rotations[0] = rot * rotations[0];
                Frame { root_translation: rot * f.root_translation + translation, rotations }
            })
            .collect();
        Self { frames, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anim::Joint;

    fn skeleton() -> Arc<Skeleton> {
        Arc::new(
            Skeleton::from_joints(vec![
                Joint::new("root", None, Vec3::zeros()),
                Joint::new("child", Some(0), Vec3::new(0.0, 1.0, 0.0)),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn rejects_empty_and_bad_fps() {
        let sk = skeleton();
        assert!(AnimationClip::new("a", sk.clone(), 24.0, vec![]).is_err());
        assert!(AnimationClip::new("a", sk.clone(), 0.0, vec![Frame::identity(2)]).is_err());
        assert!(AnimationClip::new("a", sk, f64::NAN, vec![Frame::identity(2)]).is_err());
    }

    #[test]
    fn rejects_joint_count_mismatch() {
        let err = AnimationClip::new("a", skeleton(), 24.0, vec![Frame::identity(3)]).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn rejects_non_unit_rotation() {
        let mut frame = Frame::identity(2);
        frame.rotations[1] = Quat::new_unchecked(nalgebra::Quaternion::new(1.1, 0.0, 0.0, 0.0));
        assert!(AnimationClip::new("a", skeleton(), 24.0, vec![frame]).is_err());
    }

    #[test]
    fn global_pose_out_of_range() {
        let clip = AnimationClip::new("a", skeleton(), 24.0, vec![Frame::identity(2)]).unwrap();
        assert!(matches!(clip.global_pose(1), Err(Error::FrameOutOfRange { .. })));
    }

    #[test]
    fn placed_moves_every_joint_rigidly() {
        let clip = AnimationClip::new("a", skeleton(), 24.0, vec![Frame::identity(2)]).unwrap();
        let moved = clip.placed(std::f64::consts::FRAC_PI_2, Vec3::new(3.0, 0.0, 0.0));
        let pose = moved.global_pose(0).unwrap();
        assert!((pose.positions[0] - Vec3::new(3.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((pose.positions[1] - Vec3::new(3.0, 1.0, 0.0)).norm() < 1e-12);
    }
}
