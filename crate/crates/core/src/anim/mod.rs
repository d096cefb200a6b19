//! Skeletal data model, forward kinematics and pose features.

mod clip;
mod feature;
mod kinematics;
mod resample;
mod skeleton;

pub use clip::{AnimationClip, Frame};
pub use feature::{heading_angle, pose_feature, PoseFeature};
pub use kinematics::{forward_kinematics, GlobalPose};
pub use resample::resample;
pub use skeleton::{Joint, Skeleton, UpAxis};

use crate::{Quat, Vec3};

/// Shortest-arc spherical interpolation. Returns `a` exactly when `a == b`.
pub fn slerp(a: &Quat, b: &Quat, t: f64) -> Quat {
    if a == b || t == 0.0 {
        return *a;
    }
    if t == 1.0 {
        return *b;
    }
    let qa = a.quaternion();
    let mut qb = *b.quaternion();
    let mut dot = qa.coords.dot(&qb.coords);
    if dot < 0.0 {
        qb = -qb;
        dot = -dot;
    }
    if dot > 0.9995 {
        let lerped = qa.coords * (1.0 - t) + qb.coords * t;
        return Quat::new_normalize(nalgebra::Quaternion::from(lerped));
    }
    let theta = dot.clamp(-1.0, 1.0).acos();
    let sin_theta = theta.sin();
    let wa = ((1.0 - t) * theta).sin() / sin_theta;
    let wb = (t * theta).sin() / sin_theta;
    Quat::new_normalize(nalgebra::Quaternion::from(qa.coords * wa + qb.coords * wb))
}

/// Linear interpolation. Returns `a` exactly when `a == b`.
pub fn lerp(a: &Vec3, b: &Vec3, t: f64) -> Vec3 {
    if a == b {
        return *a;
    }
    a + (b - a) * t
}
