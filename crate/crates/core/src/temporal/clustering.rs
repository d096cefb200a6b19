use serde::{Deserialize, Serialize};

use super::dba::{dba_average, DbaParams};
use super::kmeans::kmeans;
use super::xmeans::{xmeans, XMeansParams};
use crate::anim::{pose_feature, AnimationClip, PoseFeature};
use crate::config::{DEFAULT_KMEANS_MAX_ITER, DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_MEDIAN_WINDOW};
use crate::io::AnimationSet;
use crate::{Error, Result};

/// Fixed timeline palette; cluster colors index into it.
pub const PALETTE: [&str; 16] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#1f77b4", "#17becf", "#bcbd22", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub k_min: usize,
    pub k_max: usize,
    /// Odd label-smoothing window; 1 disables smoothing.
    pub median_window: usize,
    pub dba: DbaParams,
    pub kmeans_max_iter: usize,
}

impl Default for ClusterParams {
    fn default() -> Self {
        Self {
            k_min: DEFAULT_K_MIN,
            k_max: DEFAULT_K_MAX,
            median_window: DEFAULT_MEDIAN_WINDOW,
            dba: DbaParams::default(),
            kmeans_max_iter: DEFAULT_KMEANS_MAX_ITER,
        }
    }
}

/// Run of frames sharing a cluster label; `end_frame` is exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub cluster_id: usize,
    pub start_frame: usize,
    pub end_frame: usize,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end_frame - self.start_frame
    }

    pub fn is_empty(&self) -> bool {
        self.end_frame == self.start_frame
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoseClustering {
    pub n_clusters: usize,
    pub centroids: Vec<PoseFeature>,
    /// Per clip, one label per frame.
    pub labels: Vec<Vec<usize>>,
    pub segments: Vec<Vec<Segment>>,
    /// Palette index per cluster id, ordered by first appearance across clips.
    pub colors: Vec<usize>,
    pub seed: u64,
}

/// Pose feature of every frame of a clip.
pub fn clip_features(clip: &AnimationClip) -> Vec<PoseFeature> {
    let skeleton = clip.skeleton();
    clip.global_poses()
        .iter()
        .map(|pose| pose_feature(skeleton, pose).expect("pose comes from the clip's own skeleton"))
        .collect()
}

/// Collapses per-frame labels into maximal runs.
pub fn segments_from_labels(labels: &[usize]) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    for (t, &l) in labels.iter().enumerate() {
        match out.last_mut() {
            Some(seg) if seg.cluster_id == l => seg.end_frame = t + 1,
            _ => out.push(Segment { cluster_id: l, start_frame: t, end_frame: t + 1 }),
        }
    }
    out
}

/// Sliding median of labels over a centered window of `window` frames,
/// shrunk at the clip ends. Even-sized windows take the lower median.
pub fn median_filter(labels: &[usize], window: usize) -> Vec<usize> {
    if window <= 1 || labels.is_empty() {
        return labels.to_vec();
    }
    let half = window / 2;
    (0..labels.len())
        .map(|t| {
            let lo = t.saturating_sub(half);
            let hi = (t + half + 1).min(labels.len());
            let mut w = labels[lo..hi].to_vec();
            w.sort_unstable();
            w[(w.len() - 1) / 2]
        })
        .collect()
}

/// Two-pass pose clustering across an animation set.
///
/// 1. pose features for every frame of every clip;
/// 2. a DTW barycenter average of all clips;
/// 3. x-means on the average's frames picks the cluster count and centroids;
/// 4. k-means over all frames of all clips, started from those centroids;
/// 5. labels, optionally median-smoothed, become run-length segments.
pub fn cluster_poses(set: &AnimationSet, params: &ClusterParams, seed: u64) -> Result<PoseClustering> {
    if set.is_empty() {
        return Err(Error::EmptySession);
    }
    if params.median_window == 0 {
        return Err(Error::validation("median window must be at least 1"));
    }
    let features: Vec<Vec<PoseFeature>> = set.clips().iter().map(clip_features).collect();
    let average = dba_average(&features, seed, params.dba)?.average;
    let xparams = XMeansParams { k_min: params.k_min, k_max: params.k_max, max_iter: params.kmeans_max_iter };
    let initial = xmeans(&average, xparams, seed)?;

    let all: Vec<PoseFeature> = features.iter().flatten().cloned().collect();
    let refined = kmeans(&all, initial, params.kmeans_max_iter)?;

    let mut labels = Vec::with_capacity(features.len());
    let mut offset = 0;
    for f in &features {
        let raw = &refined.labels[offset..offset + f.len()];
        labels.push(median_filter(raw, params.median_window));
        offset += f.len();
    }
    let segments = labels.iter().map(|l| segments_from_labels(l)).collect();
    let colors = first_appearance_colors(refined.centroids.len(), &labels);
    Ok(PoseClustering {
        n_clusters: refined.centroids.len(),
        centroids: refined.centroids,
        labels,
        segments,
        colors,
        seed,
    })
}

fn first_appearance_colors(n: usize, labels: &[Vec<usize>]) -> Vec<usize> {
    let mut rank = vec![usize::MAX; n];
    let mut next = 0;
    for &l in labels.iter().flatten() {
        if rank[l] == usize::MAX {
            rank[l] = next;
            next += 1;
        }
    }
    for r in rank.iter_mut().filter(|r| **r == usize::MAX) {
        *r = next;
        next += 1;
    }
    rank.into_iter().map(|r| r % PALETTE.len()).collect()
}
