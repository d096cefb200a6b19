//! Default analysis parameters.

/// Playback and analysis frame rate.
pub const DEFAULT_FPS: f64 = 24.0;
/// Past/future frames shown around the current frame by the trace lens.
pub const DEFAULT_TRACE_N: usize = 10;
/// Number of keyposes extracted per clip.
pub const DEFAULT_KEYPOSE_K: usize = 15;
/// Lower bound on the pose cluster count.
pub const DEFAULT_K_MIN: usize = 1;
/// Upper bound on the pose cluster count; also the timeline palette size.
pub const DEFAULT_K_MAX: usize = 16;
/// Label smoothing window; 1 disables smoothing.
pub const DEFAULT_MEDIAN_WINDOW: usize = 1;
/// Iteration cap for barycenter averaging.
pub const DEFAULT_DBA_MAX_ITER: usize = 30;
/// Relative cost-decrease threshold for barycenter averaging.
pub const DEFAULT_DBA_TOL: f64 = 1e-6;
/// Iteration cap for the second k-means pass.
pub const DEFAULT_KMEANS_MAX_ITER: usize = 100;
/// Default RNG seed.
pub const DEFAULT_SEED: u64 = 0;
