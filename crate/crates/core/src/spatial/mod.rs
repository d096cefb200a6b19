//! In-scene visualization data: keyposes, trace windows, joint paths and
//! path-vs-scene collisions.

mod collision;
mod keyposes;
mod path;
mod scene;
mod trace;

pub use collision::{path_collisions, CollisionEvent, FrameInterval};
pub use keyposes::{extract_keyposes, reconstruction_error, KeyposeSet};
pub use path::{joint_path, joint_paths, JointPath, PathStats};
pub use scene::{LocalFrame, PrimitiveKind, SceneObject, SURFACE_EPS};
pub use trace::trace_window;
