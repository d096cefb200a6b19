use std::collections::{BTreeSet, HashSet};
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::bvh::parse_bvh;
use super::clip_json::{emit_clip_json, parse_clip_json};
use crate::anim::{resample, AnimationClip, Skeleton};
use crate::config::DEFAULT_FPS;
use crate::{Error, ParseError, Result};

/// Clips sharing one skeleton, in timeline row order.
#[derive(Debug, Clone, PartialEq)]
pub struct AnimationSet {
    skeleton: Arc<Skeleton>,
    clips: Vec<AnimationClip>,
    source_names: Vec<String>,
    content_hash: [u8; 32],
}

impl AnimationSet {
    pub fn new(skeleton: Arc<Skeleton>, clips: Vec<AnimationClip>, source_names: Vec<String>) -> Result<Self> {
        if clips.is_empty() {
            return Err(Error::EmptySession);
        }
        if source_names.len() != clips.len() {
            return Err(Error::structural("one source name per clip is required"));
        }
        let mut seen = HashSet::new();
        for clip in &clips {
            if !seen.insert(clip.id()) {
                return Err(Error::structural(format!("duplicate clip id {}", clip.id())));
            }
            if **clip.skeleton() != *skeleton {
                return Err(Error::structural(format!("clip {} uses a different skeleton", clip.id())));
            }
        }
        let clips: Vec<AnimationClip> = clips
            .into_iter()
            .map(|c| if Arc::ptr_eq(c.skeleton(), &skeleton) { Ok(c) } else { c.rebind(&skeleton) })
            .collect::<Result<_>>()?;
        let mut hasher = Sha256::new();
        for (clip, name) in clips.iter().zip(&source_names) {
            hasher.update(emit_clip_json(clip).as_bytes());
            hasher.update([0u8]);
            hasher.update(name.as_bytes());
            hasher.update([0u8]);
        }
        let content_hash = hasher.finalize().into();
        Ok(Self { skeleton, clips, source_names, content_hash })
    }

    pub fn skeleton(&self) -> &Arc<Skeleton> {
        &self.skeleton
    }

    pub fn clips(&self) -> &[AnimationClip] {
        &self.clips
    }

    pub fn source_names(&self) -> &[String] {
        &self.source_names
    }

    pub fn len(&self) -> usize {
        self.clips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clips.is_empty()
    }

    pub fn clip_index(&self, id: &str) -> Option<usize> {
        self.clips.iter().position(|c| c.id() == id)
    }

    pub fn clip(&self, id: &str) -> Option<&AnimationClip> {
        self.clips.iter().find(|c| c.id() == id)
    }

    /// SHA-256 over the Clip-JSON of every clip; stable across processes.
    pub fn content_hash(&self) -> [u8; 32] {
        self.content_hash
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadOptions {
    /// Every clip is resampled to this rate.
    pub fps: f64,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self { fps: DEFAULT_FPS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Bvh,
    ClipJson,
}

/// Picks a format by extension, falling back to the first non-blank bytes.
pub fn sniff_format(name: &str, text: &str) -> Option<FileFormat> {
    let ext = Path::new(name).extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("bvh") => return Some(FileFormat::Bvh),
        Some("json") => return Some(FileFormat::ClipJson),
        _ => {}
    }
    let head = text.trim_start_matches('\u{feff}').trim_start();
    if head.starts_with('{') {
        Some(FileFormat::ClipJson)
    } else if head.starts_with("HIERARCHY") {
        Some(FileFormat::Bvh)
    } else {
        None
    }
}

/// Parses one file by sniffed format.
pub fn parse_file(name: &str, bytes: &[u8]) -> std::result::Result<(Arc<Skeleton>, AnimationClip), ParseError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| ParseError::new(format!("not valid UTF-8: {e}")).in_file(name))?;
    let parsed = match sniff_format(name, text) {
        Some(FileFormat::Bvh) => parse_bvh(text),
        Some(FileFormat::ClipJson) => parse_clip_json(text),
        None => Err(ParseError::new("unrecognized animation format (expected BVH or Clip-JSON)")),
    };
    parsed.map_err(|e| e.in_file(name))
}

fn file_stem(name: &str) -> String {
    Path::new(name)
        .file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .unwrap_or("clip")
        .to_string()
}

/// Parses, unifies and resamples a batch of animation files.
///
/// The first file's skeleton is the reference; later files must have the same
/// joint names and parent links (joint order may differ) and are rebound to
/// the reference joint order. Clip ids are file stems, de-duplicated with a
/// numeric suffix.
pub fn load_session(files: &[(String, Vec<u8>)], options: LoadOptions) -> Result<AnimationSet> {
    if files.is_empty() {
        return Err(Error::EmptySession);
    }
    if !(options.fps.is_finite() && options.fps > 0.0) {
        return Err(Error::validation(format!("session fps must be positive, got {}", options.fps)));
    }
    let mut reference: Option<Arc<Skeleton>> = None;
    let mut clips = Vec::with_capacity(files.len());
    let mut names = Vec::with_capacity(files.len());
    let mut used_ids = HashSet::new();
    for (name, bytes) in files {
        let (skeleton, clip) = parse_file(name, bytes)?;
        let reference = reference.get_or_insert_with(|| skeleton.clone());
        check_compatible(reference, &skeleton, name)?;
        let stem = file_stem(name);
        let mut id = stem.clone();
        let mut n = 2;
        while !used_ids.insert(id.clone()) {
            id = format!("{stem}-{n}");
            n += 1;
        }
        let clip = clip.rebind(reference)?.with_id(id);
        clips.push(resample(&clip, options.fps)?);
        names.push(stem);
    }
    AnimationSet::new(reference.expect("at least one file"), clips, names)
}

fn check_compatible(reference: &Skeleton, other: &Skeleton, file: &str) -> Result<()> {
    let ref_names: BTreeSet<&str> = reference.joints().iter().map(|j| j.name.as_str()).collect();
    let other_names: BTreeSet<&str> = other.joints().iter().map(|j| j.name.as_str()).collect();
    let missing: Vec<String> = ref_names.difference(&other_names).map(|s| s.to_string()).collect();
    let extra: Vec<String> = other_names.difference(&ref_names).map(|s| s.to_string()).collect();
    let reparented: Vec<String> = reference
        .joints()
        .iter()
        .enumerate()
        .filter_map(|(i, j)| {
            let k = other.joint_index(&j.name)?;
            (reference.parent_name(i) != other.parent_name(k)).then(|| j.name.clone())
        })
        .collect();
    if missing.is_empty() && extra.is_empty() && reparented.is_empty() && reference.up_axis() == other.up_axis() {
        Ok(())
    } else {
        Err(Error::IncompatibleSkeletons { file: file.to_string(), missing, extra, reparented })
    }
}
