//! Fixture builders shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use animlens_core::anim::{AnimationClip, Frame, Joint, Skeleton, UpAxis};
use animlens_core::io::AnimationSet;
use animlens_core::{Quat, Vec3};
use rand::Rng;

/// Seven-joint upper body, Y up: hips, spine, head and two two-joint arms.
pub fn upper_body() -> Arc<Skeleton> {
    let joints = vec![
        Joint::new("hips", None, Vec3::zeros()),
        Joint::new("spine", Some(0), Vec3::new(0.0, 0.5, 0.0)),
        Joint::new("head", Some(1), Vec3::new(0.0, 0.4, 0.0)),
        Joint::new("l_shoulder", Some(1), Vec3::new(0.2, 0.3, 0.0)),
        Joint::new("l_hand", Some(3), Vec3::new(0.0, -0.5, 0.0)),
        Joint::new("r_shoulder", Some(1), Vec3::new(-0.2, 0.3, 0.0)),
        Joint::new("r_hand", Some(5), Vec3::new(0.0, -0.5, 0.0)),
    ];
    let mut chains = BTreeMap::new();
    chains.insert("left_arm".to_string(), vec![3, 4]);
    chains.insert("right_arm".to_string(), vec![5, 6]);
    Arc::new(Skeleton::new(joints, UpAxis::Y, chains).unwrap())
}

/// Arms hanging (`false`) or raised straight up (`true`).
pub fn arm_pose(arms_up: bool) -> Frame {
    let mut frame = Frame::identity(7);
    frame.root_translation = Vec3::new(0.0, 1.0, 0.0);
    if arms_up {
        frame.rotations[3] = Quat::from_axis_angle(&Vec3::z_axis(), 2.0 * FRAC_PI_2);
        frame.rotations[5] = Quat::from_axis_angle(&Vec3::z_axis(), -2.0 * FRAC_PI_2);
    }
    frame
}

/// `first` pose for frames `[0, step)`, the other pose until `len`.
pub fn step_clip(id: &str, skeleton: &Arc<Skeleton>, first_up: bool, step: usize, len: usize) -> AnimationClip {
    let frames = (0..len).map(|t| arm_pose(if t < step { first_up } else { !first_up })).collect();
    AnimationClip::new(id, skeleton.clone(), 24.0, frames).unwrap()
}

pub fn constant_clip(id: &str, skeleton: &Arc<Skeleton>, frame: Frame, len: usize) -> AnimationClip {
    AnimationClip::new(id, skeleton.clone(), 24.0, vec![frame; len]).unwrap()
}

/// Clip whose joint angles follow random low-frequency sines.
pub fn smooth_random_clip<R: Rng>(id: &str, skeleton: &Arc<Skeleton>, len: usize, rng: &mut R) -> AnimationClip {
    let n = skeleton.joint_count();
    let waves: Vec<(Vec3, f64, f64, f64)> = (0..n)
        .map(|_| {
            let axis = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let axis = if axis.norm() < 1e-3 { Vec3::x() } else { axis.normalize() };
            (axis, rng.random_range(0.1..1.2), rng.random_range(0.02..0.2), rng.random_range(0.0..6.28))
        })
        .collect();
    let drift = Vec3::new(rng.random_range(-0.05..0.05), 0.0, rng.random_range(-0.05..0.05));
    let frames = (0..len)
        .map(|t| {
            let t = t as f64;
            Frame {
                root_translation: Vec3::new(0.0, 1.0, 0.0) + drift * t,
                rotations: waves
                    .iter()
                    .map(|(axis, amp, freq, phase)| {
                        Quat::from_axis_angle(&nalgebra::Unit::new_unchecked(*axis), amp * (freq * t + phase).sin())
                    })
                    .collect(),
            }
        })
        .collect();
    AnimationClip::new(id, skeleton.clone(), 24.0, frames).unwrap()
}

/// Clip with independent random rotations at every frame.
pub fn random_clip<R: Rng>(id: &str, skeleton: &Arc<Skeleton>, len: usize, rng: &mut R) -> AnimationClip {
    let n = skeleton.joint_count();
    let frames = (0..len)
        .map(|_| Frame {
            root_translation: Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(0.0..2.0), rng.random_range(-2.0..2.0)),
            rotations: (0..n)
                .map(|_| {
                    Quat::from_euler_angles(rng.random_range(-3.0..3.0), rng.random_range(-1.5..1.5), rng.random_range(-3.0..3.0))
                })
                .collect(),
        })
        .collect();
    AnimationClip::new(id, skeleton.clone(), 24.0, frames).unwrap()
}

pub fn set_of(clips: Vec<AnimationClip>) -> AnimationSet {
    let skeleton = clips[0].skeleton().clone();
    let names = clips.iter().map(|c| format!("{}.json", c.id())).collect();
    AnimationSet::new(skeleton, clips, names).unwrap()
}

/// Two-joint BVH: root at the origin rotated 90 degrees about Z, child one
/// unit up the root's Y.
pub const TWO_JOINT_BVH: &str = "\
HIERARCHY
ROOT root
{
  OFFSET 0.0 0.0 0.0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT child
  {
    OFFSET 0.0 1.0 0.0
    CHANNELS 3 Zrotation Xrotation Yrotation
    End Site
    {
      OFFSET 0.0 1.0 0.0
    }
  }
}
MOTION
Frames: 1
Frame Time: 0.0416667
0 0 0 90 0 0 0 0 0
";
