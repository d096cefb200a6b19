//! Mutable comparison state: animation set, scene, camera, timeline and lens
//! configuration, with memoized analysis results.

mod lens;
mod persist;
mod timeline;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use lens::{joints_for_chains, CameraLens, LensConfig, LensParams, SpatialLens, TemporalLens};
pub use persist::{SessionDocument, SetDocument, SESSION_VERSION};
pub use timeline::{ClipTrack, PlaybackMode, TimelineState};

use crate::anim::GlobalPose;
use crate::camera::{diff_frames, joint_curves, CameraSpec, DiffFrame, JointCurves};
use crate::io::AnimationSet;
use crate::spatial::{
    extract_keyposes, joint_paths, path_collisions, trace_window, CollisionEvent, JointPath, KeyposeSet, SceneObject,
};
use crate::temporal::{cluster_poses, PoseClustering};
use crate::{Error, Result};

type Key = [u8; 32];

fn key_of<T: Serialize + ?Sized>(parts: &T) -> Key {
    let bytes = serde_json::to_vec(parts).expect("cache keys serialize");
    Sha256::digest(bytes).into()
}

/// How many times each analysis kernel actually ran.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct KernelCounters {
    pub clustering: u64,
    pub keyposes: u64,
    pub joint_curves: u64,
    pub joint_paths: u64,
    pub collisions: u64,
}

impl KernelCounters {
    pub fn total(&self) -> u64 {
        self.clustering + self.keyposes + self.joint_curves + self.joint_paths + self.collisions
    }
}

#[derive(Debug, Clone)]
struct Memo<T> {
    key: Key,
    value: Arc<T>,
}

#[derive(Debug, Clone, Default)]
struct AnalysisCache {
    clustering: Option<Memo<PoseClustering>>,
    keyposes: Option<Memo<Vec<KeyposeSet>>>,
    joint_curves: HashMap<usize, Memo<JointCurves>>,
    joint_paths: Option<Memo<Vec<JointPath>>>,
    collisions: Option<Memo<Vec<CollisionEvent>>>,
}

/// Every analysis result for the current session state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonBundle {
    pub clustering: Arc<PoseClustering>,
    pub keyposes: Arc<Vec<KeyposeSet>>,
    /// Curves of the lens's temporal joint.
    pub joint_curves: Arc<JointCurves>,
    pub joint_paths: Arc<Vec<JointPath>>,
    pub collisions: Arc<Vec<CollisionEvent>>,
}

/// Pose of one clip at a global timeline frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActivePose {
    pub clip_id: String,
    pub local_frame: usize,
    pub pose: GlobalPose,
}

#[derive(Debug, Clone)]
pub struct Session {
    set: Arc<AnimationSet>,
    scene: Vec<SceneObject>,
    camera: CameraSpec,
    timeline: TimelineState,
    lens: LensConfig,
    cache: AnalysisCache,
    counters: KernelCounters,
}

impl Session {
    pub fn new(set: AnimationSet) -> Self {
        let timeline = TimelineState::new(set.len());
        let lens = LensConfig::new(set.skeleton().joint_count());
        Self {
            set: Arc::new(set),
            scene: Vec::new(),
            camera: CameraSpec::default(),
            timeline,
            lens,
            cache: AnalysisCache::default(),
            counters: KernelCounters::default(),
        }
    }

    pub fn set(&self) -> &Arc<AnimationSet> {
        &self.set
    }

    pub fn scene(&self) -> &[SceneObject] {
        &self.scene
    }

    pub fn camera(&self) -> &CameraSpec {
        &self.camera
    }

    pub fn timeline(&self) -> &TimelineState {
        &self.timeline
    }

    pub fn lens(&self) -> &LensConfig {
        &self.lens
    }

    pub fn counters(&self) -> KernelCounters {
        self.counters
    }

    fn clip_lengths(&self) -> Vec<usize> {
        self.set.clips().iter().map(|c| c.frame_count()).collect()
    }

    pub fn add_object(&mut self, object: SceneObject) -> Result<()> {
        object.validate()?;
        if self.scene.iter().any(|o| o.id == object.id) {
            return Err(Error::validation(format!("object id {} already in scene", object.id)));
        }
        self.scene.push(object);
        Ok(())
    }

    pub fn update_object(&mut self, object: SceneObject) -> Result<()> {
        object.validate()?;
        let slot = self
            .scene
            .iter_mut()
            .find(|o| o.id == object.id)
            .ok_or_else(|| Error::NotFound(format!("object {}", object.id)))?;
        *slot = object;
        Ok(())
    }

    pub fn remove_object(&mut self, id: &str) -> Result<SceneObject> {
        let idx = self
            .scene
            .iter()
            .position(|o| o.id == id)
            .ok_or_else(|| Error::NotFound(format!("object {id}")))?;
        Ok(self.scene.remove(idx))
    }

    /// Replaces the whole scene; ids must be unique and scales positive.
    pub fn set_scene(&mut self, objects: Vec<SceneObject>) -> Result<()> {
        let mut next = Vec::with_capacity(objects.len());
        std::mem::swap(&mut next, &mut self.scene);
        let previous = next;
        for object in objects {
            if let Err(e) = self.add_object(object) {
                self.scene = previous;
                return Err(e);
            }
        }
        Ok(())
    }

    /// Replaces the camera and drops every cached joint curve.
    pub fn set_camera(&mut self, camera: CameraSpec) -> Result<()> {
        camera.validate()?;
        self.camera = camera;
        self.cache.joint_curves.clear();
        Ok(())
    }

    /// Replaces the timeline. If the diff lens is active and the selection is
    /// no longer exactly two clips, the lens falls back to overlay and flags it.
    pub fn set_timeline(&mut self, timeline: TimelineState) -> Result<()> {
        timeline.validate(self.set.len())?;
        self.timeline = timeline;
        if self.lens.camera_lens == CameraLens::Diff && self.timeline.selected_count() != 2 {
            self.lens.camera_lens = CameraLens::Overlay;
            self.lens.diff_deactivated = true;
        }
        Ok(())
    }

    pub fn set_lens(&mut self, mut lens: LensConfig) -> Result<()> {
        lens.validate(self.set.skeleton(), self.timeline.selected_count())?;
        lens.diff_deactivated = false;
        self.lens = lens;
        Ok(())
    }

    pub fn tick(&mut self, wall_dt: f64) {
        self.timeline = self.timeline.tick(wall_dt, &self.clip_lengths());
    }

    pub fn active_frames(&self) -> Vec<Option<usize>> {
        self.timeline.active_frames(&self.clip_lengths())
    }

    /// World poses of the clips active at global frame `t`, in row order.
    pub fn frame(&self, t: u64) -> Result<Vec<ActivePose>> {
        let active = self.timeline.active_frames_at(t, &self.clip_lengths());
        let mut out = Vec::new();
        for (clip, local) in self.set.clips().iter().zip(active) {
            if let Some(local) = local {
                out.push(ActivePose { clip_id: clip.id().to_string(), local_frame: local, pose: clip.global_pose(local)? });
            }
        }
        Ok(out)
    }

    /// Pairwise joint distances at global frame `frame` under the timeline offsets.
    pub fn diff(&self, clip_a: &str, clip_b: &str, frame: i64) -> Result<DiffFrame> {
        let offsets: Vec<i64> = self.timeline.clips.iter().map(|c| c.offset_frames).collect();
        diff_frames(&self.set, clip_a, clip_b, &offsets, frame)
    }

    pub fn trace(&self, clip_id: &str, t: usize) -> Result<Vec<(usize, GlobalPose)>> {
        let clip = self.set.clip(clip_id).ok_or_else(|| Error::NotFound(format!("clip {clip_id}")))?;
        trace_window(clip, t, self.lens.params.trace_n)
    }

    pub fn pose_clustering(&mut self) -> Result<Arc<PoseClustering>> {
        let params = self.lens.params.cluster_params();
        let seed = self.lens.params.seed;
        let key = key_of(&(self.set.content_hash(), seed, &params));
        if let Some(m) = self.cache.clustering.as_ref().filter(|m| m.key == key) {
            return Ok(m.value.clone());
        }
        self.counters.clustering += 1;
        let value = Arc::new(cluster_poses(&self.set, &params, seed)?);
        self.cache.clustering = Some(Memo { key, value: value.clone() });
        Ok(value)
    }

    /// Keyposes of every clip, in row order.
    pub fn keyposes(&mut self) -> Result<Arc<Vec<KeyposeSet>>> {
        let k = self.lens.params.keypose_k;
        let key = key_of(&(self.set.content_hash(), k));
        if let Some(m) = self.cache.keyposes.as_ref().filter(|m| m.key == key) {
            return Ok(m.value.clone());
        }
        self.counters.keyposes += 1;
        let value =
            Arc::new(self.set.clips().iter().map(|c| extract_keyposes(c, k)).collect::<Result<Vec<_>>>()?);
        self.cache.keyposes = Some(Memo { key, value: value.clone() });
        Ok(value)
    }

    pub fn joint_curves(&mut self, joint: usize) -> Result<Arc<JointCurves>> {
        let key = key_of(&(self.set.content_hash(), &self.camera, joint));
        if let Some(m) = self.cache.joint_curves.get(&joint).filter(|m| m.key == key) {
            return Ok(m.value.clone());
        }
        self.counters.joint_curves += 1;
        let value = Arc::new(joint_curves(&self.set, &self.camera, joint)?);
        self.cache.joint_curves.insert(joint, Memo { key, value: value.clone() });
        Ok(value)
    }

    /// Paths of every joint of every clip, clip-major.
    pub fn joint_paths(&mut self) -> Result<Arc<Vec<JointPath>>> {
        let key = key_of(&self.set.content_hash());
        if let Some(m) = self.cache.joint_paths.as_ref().filter(|m| m.key == key) {
            return Ok(m.value.clone());
        }
        self.counters.joint_paths += 1;
        let value = Arc::new(self.set.clips().iter().flat_map(joint_paths).collect::<Vec<_>>());
        self.cache.joint_paths = Some(Memo { key, value: value.clone() });
        Ok(value)
    }

    pub fn collisions(&mut self) -> Result<Arc<Vec<CollisionEvent>>> {
        let key = key_of(&(self.set.content_hash(), &self.scene));
        if let Some(m) = self.cache.collisions.as_ref().filter(|m| m.key == key) {
            return Ok(m.value.clone());
        }
        let paths = self.joint_paths()?;
        self.counters.collisions += 1;
        let mut events = Vec::new();
        for path in paths.iter() {
            events.extend(path_collisions(path, &self.scene)?);
        }
        let value = Arc::new(events);
        self.cache.collisions = Some(Memo { key, value: value.clone() });
        Ok(value)
    }

    /// Brings every analysis result up to date, running only the kernels
    /// whose inputs changed.
    pub fn recompute(&mut self) -> Result<ComparisonBundle> {
        Ok(ComparisonBundle {
            clustering: self.pose_clustering()?,
            keyposes: self.keyposes()?,
            joint_curves: self.joint_curves(self.lens.temporal_joint)?,
            joint_paths: self.joint_paths()?,
            collisions: self.collisions()?,
        })
    }

    pub fn to_document(&self) -> SessionDocument {
        SessionDocument::from_parts(&self.set, &self.scene, &self.camera, &self.timeline, &self.lens)
    }

    pub fn from_document(doc: SessionDocument) -> Result<Self> {
        let (set, scene, camera, timeline, lens) = doc.into_parts()?;
        let mut session = Session::new(set);
        session.set_scene(scene)?;
        session.set_camera(camera)?;
        timeline.validate(session.set.len())?;
        session.timeline = timeline;
        let flagged = lens.diff_deactivated;
        session.set_lens(lens)?;
        session.lens.diff_deactivated = flagged;
        Ok(session)
    }
}
