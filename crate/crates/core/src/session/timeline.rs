use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_FPS;
use crate::{Error, Result};

/// Accumulated fractions this close below a whole frame count as one.
const FRAME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaybackMode {
    /// All selected clips play at once, shifted by their offsets.
    #[default]
    Concurrent,
    /// Selected clips play back to back in row order; offsets are ignored.
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClipTrack {
    pub offset_frames: i64,
    pub selected: bool,
}

impl Default for ClipTrack {
    fn default() -> Self {
        Self { offset_frames: 0, selected: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineState {
    /// One track per clip, in row order.
    pub clips: Vec<ClipTrack>,
    pub playback_mode: PlaybackMode,
    pub speed: f64,
    pub current_frame: u64,
    pub fps: f64,
    #[serde(default)]
    pub playing: bool,
    /// Wrap to frame 0 past the end instead of stopping.
    #[serde(default = "default_true")]
    pub looping: bool,
    /// Fractional frames carried between ticks.
    #[serde(default)]
    pub frame_remainder: f64,
}

fn default_true() -> bool {
    true
}

impl TimelineState {
    pub fn new(clip_count: usize) -> Self {
        Self {
            clips: vec![ClipTrack::default(); clip_count],
            playback_mode: PlaybackMode::default(),
            speed: 1.0,
            current_frame: 0,
            fps: DEFAULT_FPS,
            playing: false,
            looping: true,
            frame_remainder: 0.0,
        }
    }

    pub fn validate(&self, clip_count: usize) -> Result<()> {
        if self.clips.len() != clip_count {
            return Err(Error::validation(format!(
                "timeline has {} tracks for {clip_count} clips",
                self.clips.len()
            )));
        }
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(Error::validation(format!("speed must be positive, got {}", self.speed)));
        }
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(Error::validation(format!("fps must be positive, got {}", self.fps)));
        }
        Ok(())
    }

    pub fn selected_count(&self) -> usize {
        self.clips.iter().filter(|c| c.selected).count()
    }

    /// Number of global frames the selected clips span from frame 0.
    pub fn extent(&self, lengths: &[usize]) -> u64 {
        let selected = self.clips.iter().zip(lengths).filter(|(c, _)| c.selected);
        match self.playback_mode {
            PlaybackMode::Concurrent => {
                selected.map(|(c, &len)| (c.offset_frames + len as i64).max(0) as u64).max().unwrap_or(0)
            }
            PlaybackMode::Sequential => selected.map(|(_, &len)| len as u64).sum(),
        }
    }

    /// Local frame of every clip at the current global frame, `None` when inactive.
    pub fn active_frames(&self, lengths: &[usize]) -> Vec<Option<usize>> {
        self.active_frames_at(self.current_frame, lengths)
    }

    pub fn active_frames_at(&self, global: u64, lengths: &[usize]) -> Vec<Option<usize>> {
        let g = global as i64;
        match self.playback_mode {
            PlaybackMode::Concurrent => self
                .clips
                .iter()
                .zip(lengths)
                .map(|(c, &len)| {
                    let local = g - c.offset_frames;
                    (c.selected && (0..len as i64).contains(&local)).then_some(local as usize)
                })
                .collect(),
            PlaybackMode::Sequential => {
                let mut start = 0i64;
                self.clips
                    .iter()
                    .zip(lengths)
                    .map(|(c, &len)| {
                        if !c.selected {
                            return None;
                        }
                        let local = g - start;
                        start += len as i64;
                        (0..len as i64).contains(&local).then_some(local as usize)
                    })
                    .collect()
            }
        }
    }

    /// Advances playback by `wall_dt` seconds at `fps * speed`, carrying the
    /// fractional remainder. Past the end it wraps to the start when looping,
    /// otherwise it stops on the last frame.
    pub fn tick(&self, wall_dt: f64, lengths: &[usize]) -> TimelineState {
        let mut next = self.clone();
        if !self.playing || !(wall_dt > 0.0) {
            return next;
        }
        let extent = self.extent(lengths);
        if extent == 0 {
            next.frame_remainder = 0.0;
            return next;
        }
        let total = self.frame_remainder + wall_dt * self.fps * self.speed;
        let whole = (total + FRAME_EPS).floor();
        next.frame_remainder = (total - whole).max(0.0);
        let advanced = self.current_frame.saturating_add(whole as u64);
        if advanced >= extent {
            if self.looping {
                next.current_frame = advanced % extent;
            } else {
                next.current_frame = extent - 1;
                next.playing = false;
                next.frame_remainder = 0.0;
            }
        } else {
            next.current_frame = advanced;
        }
        next
    }
}
