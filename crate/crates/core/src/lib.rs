//! Analysis engine for comparing sets of skeletal character animations.
//!
//! The crate is organised around the lenses a comparison studio needs:
//!
//! * [`anim`]: skeleton model, forward kinematics, pose features, resampling.
//! * [`io`]: BVH and Clip-JSON parsing, animation-set assembly.
//! * [`temporal`]: DTW, DBA averaging and two-pass pose clustering.
//! * [`spatial`]: keyposes, trace windows, joint paths, path/scene collisions.
//! * [`camera`]: camera projection, joint curves in screen space, pairwise diffs.
//! * [`session`]: mutable comparison state with memoized analysis results.

pub mod anim;
pub mod camera;
pub mod config;
pub mod error;
pub mod serde_util;
pub mod io;
pub mod session;
pub mod spatial;
pub mod temporal;

pub use error::{Error, ErrorCode, ParseError, Result};

/// World-space 3-vector in length units.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Unit quaternion rotation.
pub type Quat = nalgebra::UnitQuaternion<f64>;
