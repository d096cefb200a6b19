use serde::{Deserialize, Serialize};

use crate::anim::{AnimationClip, GlobalPose};
use crate::{Error, Result, Vec3};

/// Frames whose error is within this of the maximum count as tied, so
/// round-off on exactly interpolable motion does not break the tie-break.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyposeSet {
    pub clip_id: String,
    /// Strictly increasing frame indices.
    pub frames: Vec<usize>,
    pub poses: Vec<GlobalPose>,
}

/// Squared joint-position error of `frame` against linear interpolation
/// between the selected frames `lo` and `hi` that bracket it.
fn frame_error(positions: &[Vec<Vec3>], lo: usize, hi: usize, frame: usize) -> f64 {
    let t = (frame - lo) as f64 / (hi - lo) as f64;
    positions[frame]
        .iter()
        .zip(&positions[lo])
        .zip(&positions[hi])
        .map(|((p, a), b)| (p - (a + (b - a) * t)).norm_squared())
        .sum()
}

/// Total reconstruction error of a keyframe selection: for each frame, the
/// summed squared distance between actual joint positions and the linear
/// interpolation between the bracketing selected frames.
///
/// `selected` must be strictly increasing and contain the first and last frame.
pub fn reconstruction_error(positions: &[Vec<Vec3>], selected: &[usize]) -> f64 {
    selected
        .windows(2)
        .map(|w| ((w[0] + 1)..w[1]).map(|f| frame_error(positions, w[0], w[1], f)).sum::<f64>())
        .sum()
}

/// Greedy curve simplification: start from the first and last frame, then
/// repeatedly add the frame with the largest reconstruction error (lowest
/// index on ties) until `min(k, T)` frames are selected.
pub fn extract_keyposes(clip: &AnimationClip, k: usize) -> Result<KeyposeSet> {
    let poses = clip.global_poses();
    let t_len = poses.len();
    if t_len >= 2 && k < 2 {
        return Err(Error::validation(format!("keypose count must be at least 2, got {k}")));
    }
    let target = k.min(t_len);
    let frames = if target >= t_len {
        (0..t_len).collect()
    } else {
        let positions: Vec<Vec<Vec3>> = poses.iter().map(|p| p.positions.clone()).collect();
        greedy_select(&positions, target)
    };
    let poses = frames.iter().map(|&f| poses[f].clone()).collect();
    Ok(KeyposeSet { clip_id: clip.id().to_string(), frames, poses })
}

fn greedy_select(positions: &[Vec<Vec3>], target: usize) -> Vec<usize> {
    let t_len = positions.len();
    let mut selected = vec![false; t_len];
    selected[0] = true;
    selected[t_len - 1] = true;
    let mut errors = vec![0.0; t_len];
    refresh(positions, &mut errors, 0, t_len - 1);
    for _ in 2..target {
        let max = errors
            .iter()
            .zip(&selected)
            .filter(|(_, &s)| !s)
            .map(|(e, _)| *e)
            .fold(f64::NEG_INFINITY, f64::max);
        let pick = (0..t_len)
            .find(|&f| !selected[f] && errors[f] >= max - TIE_TOL)
            .expect("fewer than T frames selected");
        selected[pick] = true;
        errors[pick] = 0.0;
        let lo = (0..pick).rev().find(|&f| selected[f]).expect("frame 0 is selected");
        let hi = (pick + 1..t_len).find(|&f| selected[f]).expect("last frame is selected");
        refresh(positions, &mut errors, lo, pick);
        refresh(positions, &mut errors, pick, hi);
    }
    (0..t_len).filter(|&f| selected[f]).collect()
}

fn refresh(positions: &[Vec<Vec3>], errors: &mut [f64], lo: usize, hi: usize) {
    for f in (lo + 1)..hi {
        errors[f] = frame_error(positions, lo, hi, f);
    }
}
