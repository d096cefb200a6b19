//! HTTP API and batch report CLI over the `animlens-core` analysis engine.

pub mod api;
pub mod config;
pub mod error;
pub mod report;
pub mod svg;
pub mod views;

pub use api::{open_session, router, AppState};
pub use config::EngineConfig;
pub use error::ApiError;
