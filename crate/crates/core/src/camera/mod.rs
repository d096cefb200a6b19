//! Main-camera model, screen-space joint curves and two-clip diffs.

mod curves;
mod diff;
mod projection;

pub use curves::{joint_curves, ClipCurve, CurveSample, JointCurves, Normalization};
pub use diff::{diff_frames, DiffFrame, JointPair};
pub use projection::{project, CameraSpec, Projection, NDC_SENTINEL};
