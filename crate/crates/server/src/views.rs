//! Response bodies that reshape core results for the wire.

use serde::Serialize;

use animlens_core::anim::UpAxis;
use animlens_core::camera::{DiffFrame, JointCurves};
use animlens_core::session::{ActivePose, CameraLens, LensConfig, Session, TimelineState};
use animlens_core::spatial::{JointPath, PathStats, SceneObject};
use animlens_core::camera::CameraSpec;
use animlens_core::temporal::{PoseClustering, Segment, PALETTE};
use animlens_core::anim::PoseFeature;

#[derive(Debug, Serialize)]
pub struct SessionCreated {
    pub session_id: String,
}

/// Everything but the animation data, returned by every write.
#[derive(Debug, Serialize)]
pub struct SessionState<'a> {
    pub scene: &'a [SceneObject],
    pub camera: &'a CameraSpec,
    pub timeline: &'a TimelineState,
    pub lens: &'a LensConfig,
}

impl<'a> SessionState<'a> {
    pub fn of(session: &'a Session) -> Self {
        Self { scene: session.scene(), camera: session.camera(), timeline: session.timeline(), lens: session.lens() }
    }
}

/// A run of equal labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabelRun {
    pub label: usize,
    pub count: usize,
}

pub fn run_length(labels: &[usize]) -> Vec<LabelRun> {
    let mut runs: Vec<LabelRun> = Vec::new();
    for &label in labels {
        match runs.last_mut() {
            Some(run) if run.label == label => run.count += 1,
            _ => runs.push(LabelRun { label, count: 1 }),
        }
    }
    runs
}

#[derive(Debug, Serialize)]
pub struct ClipClusters<'a> {
    pub clip_id: &'a str,
    pub frame_count: usize,
    pub labels: Vec<LabelRun>,
    pub segments: &'a [Segment],
}

#[derive(Debug, Serialize)]
pub struct PoseClusters<'a> {
    pub n_clusters: usize,
    pub seed: u64,
    pub centroids: &'a [PoseFeature],
    /// Timeline color of each cluster.
    pub colors: Vec<&'static str>,
    pub clips: Vec<ClipClusters<'a>>,
}

impl<'a> PoseClusters<'a> {
    pub fn new(pc: &'a PoseClustering, clip_ids: &'a [String]) -> Self {
        Self {
            n_clusters: pc.n_clusters,
            seed: pc.seed,
            centroids: &pc.centroids,
            colors: pc.colors.iter().map(|&i| PALETTE[i % PALETTE.len()]).collect(),
            clips: clip_ids
                .iter()
                .zip(&pc.labels)
                .zip(&pc.segments)
                .map(|((id, labels), segments)| ClipClusters {
                    clip_id: id,
                    frame_count: labels.len(),
                    labels: run_length(labels),
                    segments,
                })
                .collect(),
        }
    }
}

/// Joint curves with each clip's timeline offset, so bars can be drawn shifted.
#[derive(Debug, Serialize)]
pub struct JointCurvesView<'a> {
    #[serde(flatten)]
    pub curves: &'a JointCurves,
    pub offsets: Vec<i64>,
}

#[derive(Debug, Serialize)]
pub struct PathView<'a> {
    #[serde(flatten)]
    pub path: &'a JointPath,
    pub stats: PathStats,
}

impl<'a> PathView<'a> {
    pub fn new(path: &'a JointPath, up: UpAxis) -> Self {
        Self { path, stats: path.stats(up) }
    }
}

#[derive(Debug, Serialize)]
pub struct DiffView {
    #[serde(flatten)]
    pub diff: DiffFrame,
    pub mean_distance: f64,
}

#[derive(Debug, Serialize)]
pub struct FrameView {
    pub frame: u64,
    pub camera_lens: CameraLens,
    pub poses: Vec<ActivePose>,
}

#[derive(Debug, Serialize)]
pub struct TraceEntry {
    pub frame: usize,
    pub pose: animlens_core::anim::GlobalPose,
}
