use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::anim::Skeleton;
use crate::config::{DEFAULT_KEYPOSE_K, DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_MEDIAN_WINDOW, DEFAULT_SEED, DEFAULT_TRACE_N};
use crate::temporal::ClusterParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CameraLens {
    #[default]
    Overlay,
    Grid,
    Diff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialLens {
    Model,
    Skeleton,
    Keyposes,
    Trace,
    Path,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemporalLens {
    #[default]
    Pose,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensParams {
    pub trace_n: usize,
    pub keypose_k: usize,
    pub median_window: usize,
    pub seed: u64,
    pub k_min: usize,
    pub k_max: usize,
}

impl Default for LensParams {
    fn default() -> Self {
        Self {
            trace_n: DEFAULT_TRACE_N,
            keypose_k: DEFAULT_KEYPOSE_K,
            median_window: DEFAULT_MEDIAN_WINDOW,
            seed: DEFAULT_SEED,
            k_min: DEFAULT_K_MIN,
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl LensParams {
    pub fn validate(&self) -> Result<()> {
        if self.keypose_k < 2 {
            return Err(Error::validation("keypose_k must be at least 2"));
        }
        if self.median_window == 0 {
            return Err(Error::validation("median_window must be positive"));
        }
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(Error::validation("need 1 <= k_min <= k_max"));
        }
        Ok(())
    }

    pub fn cluster_params(&self) -> ClusterParams {
        ClusterParams { k_min: self.k_min, k_max: self.k_max, median_window: self.median_window, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensConfig {
    pub camera_lens: CameraLens,
    pub spatial: BTreeSet<SpatialLens>,
    /// Visible joint indices.
    pub joint_filter: BTreeSet<usize>,
    pub temporal_lens: TemporalLens,
    pub temporal_joint: usize,
    pub params: LensParams,
    /// Set when Diff was switched off because the selection stopped being two clips.
    #[serde(default)]
    pub diff_deactivated: bool,
}

impl LensConfig {
    pub fn new(joint_count: usize) -> Self {
        Self {
            camera_lens: CameraLens::default(),
            spatial: [SpatialLens::Model, SpatialLens::Skeleton].into_iter().collect(),
            joint_filter: (0..joint_count).collect(),
            temporal_lens: TemporalLens::default(),
            temporal_joint: 0,
            params: LensParams::default(),
            diff_deactivated: false,
        }
    }

    pub fn validate(&self, skeleton: &Skeleton, selected_clips: usize) -> Result<()> {
        self.params.validate()?;
        let n = skeleton.joint_count();
        if self.temporal_joint >= n {
            return Err(Error::validation(format!("temporal_joint {} out of range", self.temporal_joint)));
        }
        if let Some(j) = self.joint_filter.iter().find(|&&j| j >= n) {
            return Err(Error::validation(format!("joint_filter references joint {j}, skeleton has {n}")));
        }
        if self.camera_lens == CameraLens::Diff && selected_clips != 2 {
            return Err(Error::validation(format!(
                "the diff lens compares exactly two clips; {selected_clips} selected"
            )));
        }
        Ok(())
    }
}

/// Joint indices covered by the named chains.
pub fn joints_for_chains(skeleton: &Skeleton, chains: &[String]) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for name in chains {
        let members = skeleton
            .chains()
            .get(name)
            .ok_or_else(|| Error::NotFound(format!("chain {name}")))?;
        out.extend(members.iter().copied());
    }
    Ok(out)
}
