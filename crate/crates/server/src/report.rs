//! Batch comparison report over a set of clip files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use animlens_core::camera::CameraSpec;
use animlens_core::session::Session;
use animlens_core::spatial::{CollisionEvent, SceneObject};
use animlens_core::temporal::{Segment, PALETTE};
use animlens_core::{ErrorCode, Vec3};

use crate::api::open_session;
use crate::config::EngineConfig;
use crate::error::ApiError;
use crate::svg;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub files: Vec<PathBuf>,
    pub camera: Option<PathBuf>,
    pub scene: Option<PathBuf>,
    pub out: PathBuf,
    pub svg: bool,
    /// Joint drawn in the joint-lens strip; the root when absent.
    pub joint: Option<String>,
    pub config: EngineConfig,
}

#[derive(Debug)]
pub enum ReportError {
    /// Bad input content; carries the API error payload.
    Input(ApiError),
    Io(std::io::Error),
}

impl From<ApiError> for ReportError {
    fn from(e: ApiError) -> Self {
        ReportError::Input(e)
    }
}

impl From<animlens_core::Error> for ReportError {
    fn from(e: animlens_core::Error) -> Self {
        ReportError::Input(e.into())
    }
}

impl From<std::io::Error> for ReportError {
    fn from(e: std::io::Error) -> Self {
        ReportError::Io(e)
    }
}

#[derive(Debug, Serialize)]
pub struct ClipSummary {
    pub id: String,
    pub source: String,
    pub frame_count: usize,
}

#[derive(Debug, Serialize)]
pub struct ClusterSummary {
    pub n_clusters: usize,
    pub colors: Vec<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct ClipSegments {
    pub clip_id: String,
    pub segments: Vec<Segment>,
}

#[derive(Debug, Serialize)]
pub struct ClipKeyposes {
    pub clip_id: String,
    pub frames: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct PathSummary {
    pub clip_id: String,
    pub joint: usize,
    pub joint_name: String,
    pub arc_length: f64,
    pub bbox_min: Vec3,
    pub bbox_max: Vec3,
    pub max_height: f64,
}

#[derive(Debug, Serialize)]
pub struct PairDiff {
    pub a: String,
    pub b: String,
    /// Frames compared: both clips from frame 0 with no offset.
    pub frames: usize,
    pub mean_distance: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub seed: u64,
    pub fps: f64,
    pub clips: Vec<ClipSummary>,
    pub clusters: ClusterSummary,
    pub segments: Vec<ClipSegments>,
    pub keyposes: Vec<ClipKeyposes>,
    pub path_stats: Vec<PathSummary>,
    pub collisions: Vec<CollisionEvent>,
    pub pairwise_diff: Vec<PairDiff>,
}

/// Computes the report for a loaded session.
pub fn build_report(session: &mut Session) -> Result<Report, animlens_core::Error> {
    let bundle = session.recompute()?;
    let set = session.set().clone();
    let skeleton = set.skeleton();
    let ids: Vec<String> = set.clips().iter().map(|c| c.id().to_string()).collect();
    let pc = &bundle.clustering;

    let mut pairwise_diff = Vec::new();
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            let frames = set.clips()[i].frame_count().min(set.clips()[j].frame_count());
            let mut total = 0.0;
            for f in 0..frames {
                total += session.diff(&ids[i], &ids[j], f as i64)?.mean_distance();
            }
            pairwise_diff.push(PairDiff {
                a: ids[i].clone(),
                b: ids[j].clone(),
                frames,
                mean_distance: total / frames as f64,
            });
        }
    }

    Ok(Report {
        version: REPORT_VERSION,
        seed: pc.seed,
        fps: session.timeline().fps,
        clips: set
            .clips()
            .iter()
            .zip(set.source_names())
            .map(|(c, s)| ClipSummary { id: c.id().to_string(), source: s.clone(), frame_count: c.frame_count() })
            .collect(),
        clusters: ClusterSummary {
            n_clusters: pc.n_clusters,
            colors: pc.colors.iter().map(|&i| PALETTE[i % PALETTE.len()]).collect(),
        },
        segments: ids
            .iter()
            .zip(&pc.segments)
            .map(|(id, s)| ClipSegments { clip_id: id.clone(), segments: s.clone() })
            .collect(),
        keyposes: bundle
            .keyposes
            .iter()
            .map(|k| ClipKeyposes { clip_id: k.clip_id.clone(), frames: k.frames.clone() })
            .collect(),
        path_stats: bundle
            .joint_paths
            .iter()
            .map(|p| {
                let s = p.stats(skeleton.up_axis());
                PathSummary {
                    clip_id: p.clip_id.clone(),
                    joint: p.joint,
                    joint_name: skeleton.joints()[p.joint].name.clone(),
                    arc_length: s.arc_length,
                    bbox_min: s.bbox_min,
                    bbox_max: s.bbox_max,
                    max_height: s.max_height,
                }
            })
            .collect(),
        collisions: bundle.collisions.as_ref().clone(),
        pairwise_diff,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, ReportError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| {
        let name = path.display().to_string();
        ReportError::Input(ApiError {
            code: ErrorCode::ParseError,
            message: format!("{name}: {e}"),
            detail: serde_json::json!({ "file": name, "line": e.line(), "column": e.column() }),
        })
    })
}

/// Loads the inputs, writes `report.json` (and SVG strips when asked) into
/// `out`, and returns the report.
pub fn run_report(options: &ReportOptions) -> Result<Report, ReportError> {
    let mut files = Vec::with_capacity(options.files.len());
    for path in &options.files {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        files.push((name, std::fs::read(path)?));
    }
    let mut session = open_session(&files, &options.config)?;
    if let Some(path) = &options.camera {
        session.set_camera(read_json::<CameraSpec>(path)?)?;
    }
    if let Some(path) = &options.scene {
        session.set_scene(read_json::<Vec<SceneObject>>(path)?)?;
    }
    let joint = match &options.joint {
        Some(name) => session
            .set()
            .skeleton()
            .joint_index(name)
            .ok_or_else(|| ApiError::not_found(format!("joint {name}")))?,
        None => 0,
    };
    let report = build_report(&mut session)?;

    std::fs::create_dir_all(&options.out)?;
    let mut bytes = serde_json::to_vec_pretty(&report).map_err(std::io::Error::other)?;
    bytes.push(b'\n');
    std::fs::write(options.out.join("report.json"), bytes)?;

    if options.svg {
        let ids: Vec<String> = session.set().clips().iter().map(|c| c.id().to_string()).collect();
        let counts: Vec<usize> = session.set().clips().iter().map(|c| c.frame_count()).collect();
        let pc = session.pose_clustering()?;
        std::fs::write(options.out.join("pose_lens.svg"), svg::pose_strip(&ids, &pc))?;
        std::fs::write(options.out.join("keyposes_lens.svg"), svg::keypose_strip(&counts, &session.keyposes()?))?;
        std::fs::write(options.out.join("joint_lens.svg"), svg::joint_strip(&*session.joint_curves(joint)?))?;
    }
    Ok(report)
}
