//! Animation file parsing and animation-set assembly.

mod bvh;
mod clip_json;
mod set;

pub use bvh::parse_bvh;
pub use clip_json::{emit_clip_json, parse_clip_json, ClipDoc, FrameDoc, JointDoc, SkeletonDoc};
pub use set::{load_session, parse_file, sniff_format, AnimationSet, FileFormat, LoadOptions};
