use super::{lerp, slerp, AnimationClip, Frame};
use crate::{Error, Result};

/// Resamples a clip to `target_fps`.
///
/// The output has `round(T * target / source)` frames (at least one). Output
/// frame `i` samples source time `i / target_fps`, interpolating the root
/// translation linearly and rotations spherically between the bracketing
/// source frames. The first and last output frames are the source's first and
/// last frames.
pub fn resample(clip: &AnimationClip, target_fps: f64) -> Result<AnimationClip> {
    if !(target_fps.is_finite() && target_fps > 0.0) {
        return Err(Error::validation(format!("target fps must be positive, got {target_fps}")));
    }
    if target_fps == clip.fps() {
        return Ok(clip.clone());
    }
    let src = clip.frames();
    let t_src = src.len();
    let ratio = target_fps / clip.fps();
    let t_out = ((t_src as f64 * ratio).round() as usize).max(1);
    let last = t_src - 1;

    let mut frames = Vec::with_capacity(t_out);
    for i in 0..t_out {
        let frame = if i == 0 {
            src[0].clone()
        } else if i == t_out - 1 {
            src[last].clone()
        } else {
            let s = (i as f64 / ratio).min(last as f64);
            let lo = s.floor() as usize;
            let hi = (lo + 1).min(last);
            let w = s - lo as f64;
            if hi == lo || w == 0.0 {
                src[lo].clone()
            } else {
                Frame {
                    root_translation: lerp(&src[lo].root_translation, &src[hi].root_translation, w),
                    rotations: src[lo]
                        .rotations
                        .iter()
                        .zip(&src[hi].rotations)
                        .map(|(a, b)| slerp(a, b, w))
                        .collect(),
                }
            }
        };
        frames.push(frame);
    }
    AnimationClip::new(clip.id(), clip.skeleton().clone(), target_fps, frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anim::{Joint, Skeleton};
    use crate::{Quat, Vec3};
    use std::sync::Arc;

    fn skeleton() -> Arc<Skeleton> {
        Arc::new(
            Skeleton::from_joints(vec![
                Joint::new("root", None, Vec3::zeros()),
                Joint::new("child", Some(0), Vec3::new(0.0, 1.0, 0.0)),
            ])
            .unwrap(),
        )
    }

    fn clip_with_roots(roots: &[Vec3], fps: f64) -> AnimationClip {
        let frames = roots
            .iter()
            .map(|r| Frame { root_translation: *r, rotations: vec![Quat::identity(); 2] })
            .collect();
        AnimationClip::new("c", skeleton(), fps, frames).unwrap()
    }

    #[test]
    fn same_fps_is_identity() {
        let clip = clip_with_roots(&[Vec3::new(0.1, 0.2, 0.3), Vec3::new(1.0, 2.0, 3.0)], 24.0);
        assert_eq!(resample(&clip, 24.0).unwrap(), clip);
    }

    #[test]
    fn doubling_rate_hits_linear_midpoint() {
        let clip = clip_with_roots(&[Vec3::zeros(), Vec3::new(0.0, 0.0, 2.0)], 12.0);
        let out = resample(&clip, 24.0).unwrap();
        assert_eq!(out.frame_count(), 4);
        assert_eq!(out.frames()[1].root_translation, Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(out.frames()[0], clip.frames()[0]);
        assert_eq!(out.frames()[3], clip.frames()[1]);
    }

    #[test]
    fn constant_clip_stays_constant() {
        let mut frame = Frame::identity(2);
        frame.root_translation = Vec3::new(0.3, 1.0, -2.0);
        frame.rotations[1] = Quat::from_euler_angles(0.4, 0.2, 0.1);
        let clip = AnimationClip::new("c", skeleton(), 30.0, vec![frame.clone(); 30]).unwrap();
        for fps in [24.0, 60.0, 7.5] {
            let out = resample(&clip, fps).unwrap();
            assert!(out.frames().iter().all(|f| *f == frame));
        }
    }

    #[test]
    fn thirty_to_twenty_four_frame_count() {
        let roots: Vec<Vec3> = (0..45).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let out = resample(&clip_with_roots(&roots, 30.0), 24.0).unwrap();
        assert_eq!(out.frame_count(), 36);
        assert_eq!(out.frames()[35].root_translation.x, 44.0);
        // Interior frame i samples source time i * 30 / 24.
        assert!((out.frames()[10].root_translation.x - 12.5).abs() < 1e-12);
        assert_eq!(out.fps(), 24.0);
    }

    #[test]
    fn rejects_bad_target() {
        let clip = clip_with_roots(&[Vec3::zeros()], 24.0);
        assert!(resample(&clip, 0.0).is_err());
        assert!(resample(&clip, -1.0).is_err());
    }
}
