//! Timeline strips as standalone SVG: one row per clip, one column per frame.

use std::fmt::Write;

use animlens_core::camera::JointCurves;
use animlens_core::spatial::KeyposeSet;
use animlens_core::temporal::{PoseClustering, PALETTE};

const FRAME_W: f64 = 4.0;
const ROW_H: f64 = 24.0;
const LABEL_W: f64 = 120.0;

struct Strip {
    body: String,
    rows: usize,
    frames: usize,
}

impl Strip {
    fn new(rows: usize, frames: usize) -> Self {
        Self { body: String::new(), rows, frames }
    }

    fn label(&mut self, row: usize, text: &str) {
        let y = row as f64 * ROW_H + ROW_H * 0.65;
        let _ = writeln!(self.body, r#"<text x="4" y="{y}" font-family="sans-serif" font-size="11">{}</text>"#, escape(text));
    }

    fn rect(&mut self, row: usize, frame: usize, len: usize, top: f64, height: f64, fill: &str) {
        let x = LABEL_W + frame as f64 * FRAME_W;
        let y = row as f64 * ROW_H + top;
        let w = len as f64 * FRAME_W;
        let _ = writeln!(self.body, r#"<rect x="{x}" y="{y:.3}" width="{w}" height="{height:.3}" fill="{fill}"/>"#);
    }

    fn finish(self) -> String {
        let width = LABEL_W + self.frames as f64 * FRAME_W;
        let height = self.rows as f64 * ROW_H;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n{}</svg>\n",
            self.body
        )
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Pose lens: segments colored by cluster.
pub fn pose_strip(clip_ids: &[String], clustering: &PoseClustering) -> String {
    let longest = clustering.labels.iter().map(Vec::len).max().unwrap_or(0);
    let mut strip = Strip::new(clip_ids.len(), longest);
    for (row, (id, segments)) in clip_ids.iter().zip(&clustering.segments).enumerate() {
        strip.label(row, id);
        for s in segments {
            let color = PALETTE[clustering.colors[s.cluster_id] % PALETTE.len()];
            strip.rect(row, s.start_frame, s.len(), 2.0, ROW_H - 4.0, color);
        }
    }
    strip.finish()
}

/// Keyposes lens: a tick at every selected frame.
pub fn keypose_strip(frame_counts: &[usize], keyposes: &[KeyposeSet]) -> String {
    let longest = frame_counts.iter().copied().max().unwrap_or(0);
    let mut strip = Strip::new(keyposes.len(), longest);
    for (row, (ks, &len)) in keyposes.iter().zip(frame_counts).enumerate() {
        strip.label(row, &ks.clip_id);
        strip.rect(row, 0, len, ROW_H / 2.0 - 1.0, 2.0, "#cccccc");
        for &f in &ks.frames {
            strip.rect(row, f, 1, 2.0, ROW_H - 4.0, "#333333");
        }
    }
    strip.finish()
}

/// Joint lens: per frame, the normalized screen x (upper half) and y (lower
/// half) of one joint as bar heights; frames out of view are shaded red.
pub fn joint_strip(curves: &JointCurves) -> String {
    let longest = curves.clips.iter().map(|c| c.samples.len()).max().unwrap_or(0);
    let mut strip = Strip::new(curves.clips.len(), longest);
    let half = ROW_H / 2.0 - 1.0;
    for (row, clip) in curves.clips.iter().enumerate() {
        strip.label(row, &clip.clip_id);
        for s in &clip.samples {
            if s.out_of_view {
                strip.rect(row, s.frame, 1, 0.0, ROW_H, "#f4cccc");
            }
            strip.rect(row, s.frame, 1, 1.0 + half * (1.0 - s.bar_x), half * s.bar_x, "#4e79a7");
            strip.rect(row, s.frame, 1, ROW_H / 2.0 + half * (1.0 - s.bar_y), half * s.bar_y, "#e15759");
        }
    }
    strip.finish()
}
