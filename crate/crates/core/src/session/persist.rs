use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{LensConfig, TimelineState};
use crate::camera::CameraSpec;
use crate::io::{AnimationSet, ClipDoc, SkeletonDoc};
use crate::spatial::SceneObject;
use crate::{Error, ParseError, Result};

pub const SESSION_VERSION: u32 = 1;

/// The animation set as a list of Clip-JSON documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetDocument {
    pub clips: Vec<ClipDoc>,
    pub source_names: Vec<String>,
}

/// On-disk and over-the-wire form of a whole session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionDocument {
    pub version: u32,
    pub animation_set: SetDocument,
    pub scene: Vec<SceneObject>,
    pub camera: CameraSpec,
    pub timeline: TimelineState,
    pub lens: LensConfig,
}

impl SessionDocument {
    pub(crate) fn from_parts(
        set: &AnimationSet,
        scene: &[SceneObject],
        camera: &CameraSpec,
        timeline: &TimelineState,
        lens: &LensConfig,
    ) -> Self {
        let clips = set.clips().iter().map(ClipDoc::from_clip).collect();
        Self {
            version: SESSION_VERSION,
            animation_set: SetDocument { clips, source_names: set.source_names().to_vec() },
            scene: scene.to_vec(),
            camera: camera.clone(),
            timeline: timeline.clone(),
            lens: lens.clone(),
        }
    }

    pub(crate) fn into_parts(
        self,
    ) -> Result<(AnimationSet, Vec<SceneObject>, CameraSpec, TimelineState, LensConfig)> {
        if self.version != SESSION_VERSION {
            return Err(Error::validation(format!("unsupported session version {}", self.version)));
        }
        let first = self.animation_set.clips.first().ok_or(Error::EmptySession)?;
        let skeleton = Arc::new(first.skeleton.to_skeleton()?);
        let reference = SkeletonDoc::from_skeleton(&skeleton);
        let mut clips = Vec::with_capacity(self.animation_set.clips.len());
        for (i, doc) in self.animation_set.clips.iter().enumerate() {
            if doc.skeleton != reference {
                return Err(ParseError::at_path(format!("animation_set.clips[{i}].skeleton"), "skeleton differs from the first clip").into());
            }
            let clip = doc.to_clip(Some(skeleton.clone())).map_err(|e| {
                let path = match &e.path {
                    Some(p) => format!("animation_set.clips[{i}].{p}"),
                    None => format!("animation_set.clips[{i}]"),
                };
                ParseError::at_path(path, e.message)
            })?;
            clips.push(clip);
        }
        let set = AnimationSet::new(skeleton, clips, self.animation_set.source_names)?;
        Ok((set, self.scene, self.camera, self.timeline, self.lens))
    }
}
