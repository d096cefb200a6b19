use serde::{Deserialize, Serialize};

use super::{GlobalPose, Skeleton, UpAxis};
use crate::{Error, Quat, Result, Vec3};

/// Below this ground-plane length the root's forward axis is treated as
/// vertical and the heading falls back to zero.
const DEGENERATE_HEADING: f64 = 1e-9;

/// Root-relative, heading-normalized joint positions flattened as
/// `[x0, y0, z0, x1, y1, z1, ...]` in joint order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoseFeature(pub Vec<f64>);

impl PoseFeature {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }
}

impl From<Vec<f64>> for PoseFeature {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Yaw of the root's forward axis about `up`, in radians.
///
/// Returns 0 when the forward axis is (nearly) parallel to `up`.
pub fn heading_angle(up: UpAxis, root_rotation: &Quat) -> f64 {
    let (forward, side) = up.ground_basis();
    let f = root_rotation * forward;
    let a = f.dot(&forward);
    let b = f.dot(&side);
    if a.hypot(b) < DEGENERATE_HEADING {
        0.0
    } else {
        b.atan2(a)
    }
}

/// Grid that absorbs rounding noise from re-placing a clip on the ground, so
/// rigidly moved clips produce bit-identical features and cluster the same.
const FEATURE_GRID: f64 = 1e-9;

fn snap(c: f64) -> f64 {
    (c / FEATURE_GRID).round() * FEATURE_GRID + 0.0
}

/// Expresses a pose relative to its root and rotates it so the root faces
/// the reference forward axis.
pub fn pose_feature(skeleton: &Skeleton, pose: &GlobalPose) -> Result<PoseFeature> {
    let n = skeleton.joint_count();
    if pose.positions.len() != n || pose.rotations.len() != n {
        return Err(Error::structural(format!(
            "pose has {} joints, skeleton has {n}",
            pose.positions.len()
        )));
    }
    let up = skeleton.up_axis();
    let heading = heading_angle(up, &pose.rotations[0]);
    let unyaw = Quat::from_axis_angle(&up.unit(), -heading);
    let root = pose.positions[0];
    let mut out = Vec::with_capacity(3 * n);
    out.extend_from_slice(&[0.0, 0.0, 0.0]);
    for p in &pose.positions[1..] {
        let local: Vec3 = unyaw * (p - root);
        out.extend(local.iter().map(|&c| snap(c)));
    }
    Ok(PoseFeature(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anim::{forward_kinematics, Frame, Joint};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn skeleton() -> Skeleton {
        Skeleton::from_joints(vec![
            Joint::new("hips", None, Vec3::zeros()),
            Joint::new("spine", Some(0), Vec3::new(0.0, 0.5, 0.0)),
            Joint::new("l_arm", Some(1), Vec3::new(0.4, 0.3, 0.1)),
            Joint::new("r_arm", Some(1), Vec3::new(-0.4, 0.3, 0.1)),
        ])
        .unwrap()
    }

    fn posed(root_rot: Quat, translation: Vec3) -> GlobalPose {
        let sk = skeleton();
        let mut frame = Frame::identity(4);
        frame.root_translation = translation;
        frame.rotations[0] = root_rot;
        frame.rotations[1] = Quat::from_euler_angles(0.2, 0.1, -0.3);
        frame.rotations[2] = Quat::from_euler_angles(-0.7, 0.4, 0.0);
        forward_kinematics(&sk, &frame).unwrap()
    }

    fn max_diff(a: &PoseFeature, b: &PoseFeature) -> f64 {
        a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn translation_invariance() {
        let sk = skeleton();
        let base = pose_feature(&sk, &posed(Quat::identity(), Vec3::zeros())).unwrap();
        let moved = pose_feature(&sk, &posed(Quat::identity(), Vec3::new(5.0, 0.0, 5.0))).unwrap();
        assert!(max_diff(&base, &moved) < 1e-12);
    }

    #[test]
    fn yaw_invariance_quarter_turn() {
        let sk = skeleton();
        let base = pose_feature(&sk, &posed(Quat::identity(), Vec3::zeros())).unwrap();
        let yaw = Quat::from_axis_angle(&Vec3::y_axis(), FRAC_PI_2);
        let turned = pose_feature(&sk, &posed(yaw, Vec3::zeros())).unwrap();
        assert!(max_diff(&base, &turned) < 1e-9);
    }

    #[test]
    fn t_pose_unchanged_at_zero_heading() {
        let sk = Skeleton::from_joints(vec![
            Joint::new("a", None, Vec3::zeros()),
            Joint::new("b", Some(0), Vec3::new(1.0, 0.0, 0.0)),
            Joint::new("c", Some(1), Vec3::new(1.0, 0.0, 0.0)),
        ])
        .unwrap();
        let pose = forward_kinematics(&sk, &Frame::identity(3)).unwrap();
        let f = pose_feature(&sk, &pose).unwrap();
        assert_eq!(f.0, vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn vertical_forward_falls_back_to_zero_heading() {
        // Pitch the root so its +Z points straight up.
        let pitch = Quat::from_axis_angle(&Vec3::x_axis(), -FRAC_PI_2);
        assert_eq!(heading_angle(UpAxis::Y, &pitch), 0.0);
    }

    #[test]
    fn pose_size_mismatch() {
        let sk = skeleton();
        let mut pose = posed(Quat::identity(), Vec3::zeros());
        pose.positions.pop();
        assert!(pose_feature(&sk, &pose).is_err());
    }

    proptest! {
        #[test]
        fn rigid_ground_motion_invariance(
            yaw in -3.2f64..3.2,
            dx in -50.0f64..50.0,
            dz in -50.0f64..50.0,
            base_yaw in -3.2f64..3.2,
            tilt in -0.5f64..0.5,
        ) {
            let sk = skeleton();
            let root = Quat::from_axis_angle(&Vec3::y_axis(), base_yaw) * Quat::from_axis_angle(&Vec3::x_axis(), tilt);
            let base = pose_feature(&sk, &posed(root, Vec3::new(0.1, 0.9, -0.3))).unwrap();
            let r = Quat::from_axis_angle(&Vec3::y_axis(), yaw);
            let pose = posed(root, Vec3::new(0.1, 0.9, -0.3));
            let moved = GlobalPose {
                positions: pose.positions.iter().map(|p| r * p + Vec3::new(dx, 0.0, dz)).collect(),
                rotations: pose.rotations.iter().map(|q| r * q).collect(),
            };
            let f = pose_feature(&sk, &moved).unwrap();
            prop_assert_eq!(&f.0[..3], &[0.0, 0.0, 0.0]);
            prop_assert!(max_diff(&base, &f) < 1e-9);
        }
    }
}
