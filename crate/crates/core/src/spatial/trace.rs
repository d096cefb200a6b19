use crate::anim::{AnimationClip, GlobalPose};
use crate::{Error, Result};

/// Poses for frames `max(0, t - n) ..= min(T - 1, t + n)`, ascending.
pub fn trace_window(clip: &AnimationClip, t: usize, n: usize) -> Result<Vec<(usize, GlobalPose)>> {
    let len = clip.frame_count();
    if t >= len {
        return Err(Error::FrameOutOfRange { clip: clip.id().to_string(), frame: t as i64 });
    }
    let lo = t.saturating_sub(n);
    let hi = t.saturating_add(n).min(len - 1);
    (lo..=hi).map(|f| clip.global_pose(f).map(|p| (f, p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anim::{Frame, Joint, Skeleton};
    use crate::Vec3;
    use std::sync::Arc;

    fn clip(len: usize) -> AnimationClip {
        let sk = Arc::new(Skeleton::from_joints(vec![Joint::new("root", None, Vec3::zeros())]).unwrap());
        AnimationClip::new("c", sk, 24.0, vec![Frame::identity(1); len]).unwrap()
    }

    fn frames(c: &AnimationClip, t: usize, n: usize) -> Vec<usize> {
        trace_window(c, t, n).unwrap().into_iter().map(|(f, _)| f).collect()
    }

    #[test]
    fn windows_clip_at_both_ends() {
        let c = clip(100);
        assert_eq!(frames(&c, 0, 10), (0..=10).collect::<Vec<_>>());
        assert_eq!(frames(&c, 50, 10), (40..=60).collect::<Vec<_>>());
        assert_eq!(frames(&c, 95, 10), (85..=99).collect::<Vec<_>>());
        assert_eq!(frames(&c, 3, 0), vec![3]);
    }

    #[test]
    fn size_formula() {
        let c = clip(17);
        for t in 0..17 {
            for n in 0..20 {
                let expected = t.min(n) + (16 - t).min(n) + 1;
                assert_eq!(trace_window(&c, t, n).unwrap().len(), expected);
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(trace_window(&clip(5), 5, 1), Err(Error::FrameOutOfRange { frame: 5, .. })));
    }
}
