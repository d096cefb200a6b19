use serde::{Deserialize, Serialize};

use super::path::JointPath;
use super::scene::SceneObject;
use crate::Result;

/// Half-open frame range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameInterval {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionEvent {
    pub clip_id: String,
    pub joint: usize,
    pub object_id: String,
    /// Sorted, disjoint frame ranges where the path touches the object.
    pub frame_intervals: Vec<FrameInterval>,
}

/// Tests each path segment `[i, i + 1]` against every object in its local
/// frame. A hit on segment `i` covers frames `i` and `i + 1`; overlapping
/// and adjacent hits merge. A single-frame path is tested as a point.
///
/// Objects the path never touches produce no event.
pub fn path_collisions(path: &JointPath, scene: &[SceneObject]) -> Result<Vec<CollisionEvent>> {
    let mut events = Vec::new();
    for object in scene {
        let frame = object.local_frame()?;
        let local: Vec<_> = path.points.iter().map(|p| frame.to_local(p)).collect();
        let hits: Vec<bool> = if local.len() == 1 {
            vec![object.kind.contains_local(&local[0])]
        } else {
            local.windows(2).map(|w| object.kind.segment_hits_local(&w[0], &w[1])).collect()
        };
        let span = if local.len() == 1 { 1 } else { 2 };
        let frame_intervals = merge_hits(&hits, span);
        if !frame_intervals.is_empty() {
            events.push(CollisionEvent {
                clip_id: path.clip_id.clone(),
                joint: path.joint,
                object_id: object.id.clone(),
                frame_intervals,
            });
        }
    }
    Ok(events)
}

/// Turns per-segment hits into merged frame intervals; a hit at `i` covers
/// `[i, i + span)`.
pub(crate) fn merge_hits(hits: &[bool], span: usize) -> Vec<FrameInterval> {
    let mut out: Vec<FrameInterval> = Vec::new();
    for (i, _) in hits.iter().enumerate().filter(|(_, h)| **h) {
        let (start, end) = (i, i + span);
        match out.last_mut() {
            Some(last) if start <= last.end => last.end = last.end.max(end),
            _ => out.push(FrameInterval { start, end }),
        }
    }
    out
}
