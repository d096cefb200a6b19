use serde::{Deserialize, Serialize};

use crate::io::AnimationSet;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPair {
    pub pos_a: Vec3,
    pub pos_b: Vec3,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffFrame {
    /// Global timeline frame.
    pub frame: i64,
    pub clip_a: String,
    pub clip_b: String,
    pub local_a: usize,
    pub local_b: usize,
    pub joint_pairs: Vec<JointPair>,
}

impl DiffFrame {
    pub fn mean_distance(&self) -> f64 {
        self.joint_pairs.iter().map(|p| p.distance).sum::<f64>() / self.joint_pairs.len() as f64
    }
}

/// Per-joint world positions and distances between two clips at a global
/// timeline frame. `offsets[i]` is clip `i`'s timeline offset in frames.
pub fn diff_frames(set: &AnimationSet, clip_a: &str, clip_b: &str, offsets: &[i64], frame: i64) -> Result<DiffFrame> {
    if clip_a == clip_b {
        return Err(Error::structural("diff needs two different clips"));
    }
    if offsets.len() != set.len() {
        return Err(Error::structural(format!("expected {} offsets, got {}", set.len(), offsets.len())));
    }
    let local = |id: &str| -> Result<(usize, usize)> {
        let index = set.clip_index(id).ok_or_else(|| Error::NotFound(format!("clip {id}")))?;
        let local = frame - offsets[index];
        let len = set.clips()[index].frame_count() as i64;
        if !(0..len).contains(&local) {
            return Err(Error::FrameOutOfRange { clip: id.to_string(), frame: local });
        }
        Ok((index, local as usize))
    };
    let (ia, la) = local(clip_a)?;
    let (ib, lb) = local(clip_b)?;
    let pa = set.clips()[ia].global_pose(la)?;
    let pb = set.clips()[ib].global_pose(lb)?;
    let joint_pairs = pa
        .positions
        .iter()
        .zip(&pb.positions)
        .map(|(a, b)| JointPair { pos_a: *a, pos_b: *b, distance: (a - b).norm() })
        .collect();
    Ok(DiffFrame {
        frame,
        clip_a: clip_a.to_string(),
        clip_b: clip_b.to_string(),
        local_a: la,
        local_b: lb,
        joint_pairs,
    })
}
