use clap::Args;

use animlens_core::config::{
    DEFAULT_FPS, DEFAULT_KEYPOSE_K, DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_MEDIAN_WINDOW, DEFAULT_SEED, DEFAULT_TRACE_N,
};
use animlens_core::io::LoadOptions;
use animlens_core::session::LensParams;

/// Analysis defaults for new sessions. Each flag can also come from the
/// environment; flags take precedence.
#[derive(Debug, Clone, Args)]
pub struct EngineConfig {
    #[arg(long, env = "SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Session frame rate; clips are resampled to it.
    #[arg(long, env = "FPS", default_value_t = DEFAULT_FPS)]
    pub fps: f64,
    #[arg(long, env = "TRACE_N", default_value_t = DEFAULT_TRACE_N)]
    pub trace_n: usize,
    #[arg(long, env = "KEYPOSE_K", default_value_t = DEFAULT_KEYPOSE_K)]
    pub keypose_k: usize,
    #[arg(long, env = "K_MIN", default_value_t = DEFAULT_K_MIN)]
    pub k_min: usize,
    #[arg(long, env = "K_MAX", default_value_t = DEFAULT_K_MAX)]
    pub k_max: usize,
    #[arg(long, env = "MEDIAN_WINDOW", default_value_t = DEFAULT_MEDIAN_WINDOW)]
    pub median_window: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            fps: DEFAULT_FPS,
            trace_n: DEFAULT_TRACE_N,
            keypose_k: DEFAULT_KEYPOSE_K,
            k_min: DEFAULT_K_MIN,
            k_max: DEFAULT_K_MAX,
            median_window: DEFAULT_MEDIAN_WINDOW,
        }
    }
}

impl EngineConfig {
    pub fn lens_params(&self) -> LensParams {
        LensParams {
            trace_n: self.trace_n,
            keypose_k: self.keypose_k,
            median_window: self.median_window,
            seed: self.seed,
            k_min: self.k_min,
            k_max: self.k_max,
        }
    }

    pub fn load_options(&self) -> LoadOptions {
        LoadOptions { fps: self.fps }
    }
}
