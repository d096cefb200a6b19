//! Helpers for driving the router in-process.
#![allow(dead_code)]

use std::fmt::Write;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use animlens_server::{router, AppState, EngineConfig};

pub const BOUNDARY: &str = "animlens-test-boundary";

pub fn app() -> Router {
    app_with(EngineConfig::default())
}

pub fn app_with(config: EngineConfig) -> Router {
    router(Arc::new(AppState::new(config)), None)
}

/// Upper body in BVH: hips (6 channels), then spine, head and two arms with
/// 3 rotation channels each. `frames` holds, per frame, the hips position and
/// a ZXY Euler triple in degrees for each of the 7 joints.
pub fn bvh(frames: &[([f64; 3], [[f64; 3]; 7])]) -> String {
    let mut s = String::from(
        "HIERARCHY
ROOT hips
{
  OFFSET 0 0 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT spine
  {
    OFFSET 0 0.5 0
    CHANNELS 3 Zrotation Xrotation Yrotation
    JOINT head
    {
      OFFSET 0 0.4 0
      CHANNELS 3 Zrotation Xrotation Yrotation
      End Site
      {
        OFFSET 0 0.2 0
      }
    }
    JOINT l_shoulder
    {
      OFFSET 0.2 0.3 0
      CHANNELS 3 Zrotation Xrotation Yrotation
      JOINT l_hand
      {
        OFFSET 0 -0.5 0
        CHANNELS 3 Zrotation Xrotation Yrotation
        End Site
        {
          OFFSET 0 -0.1 0
        }
      }
    }
    JOINT r_shoulder
    {
      OFFSET -0.2 0.3 0
      CHANNELS 3 Zrotation Xrotation Yrotation
      JOINT r_hand
      {
        OFFSET 0 -0.5 0
        CHANNELS 3 Zrotation Xrotation Yrotation
        End Site
        {
          OFFSET 0 -0.1 0
        }
      }
    }
  }
}
MOTION
",
    );
    let _ = writeln!(s, "Frames: {}", frames.len());
    let _ = writeln!(s, "Frame Time: 0.0416667");
    for (root, rots) in frames {
        let values: Vec<String> = root.iter().chain(rots.iter().flatten()).map(|v| format!("{v:.6}")).collect();
        let _ = writeln!(s, "{}", values.join(" "));
    }
    s
}

fn arms(up: bool) -> [[f64; 3]; 7] {
    let mut r = [[0.0; 3]; 7];
    if up {
        r[3][0] = 180.0;
        r[5][0] = -180.0;
    }
    r
}

/// Arms down (or up) until `step`, then the other way.
pub fn step_bvh(first_up: bool, step: usize, len: usize) -> String {
    let frames: Vec<_> = (0..len).map(|t| ([0.0, 1.0, 0.0], arms(if t < step { first_up } else { !first_up }))).collect();
    bvh(&frames)
}

/// Arms swinging sinusoidally while the hips walk along +X.
pub fn wave_bvh(len: usize, speed: f64, phase: f64) -> String {
    let frames: Vec<_> = (0..len)
        .map(|t| {
            let a = (t as f64 * speed + phase).sin();
            let mut r = [[0.0; 3]; 7];
            r[3] = [60.0 * a, 10.0 * a, 0.0];
            r[5] = [-60.0 * a, 0.0, 10.0 * a];
            r[4] = [30.0 * a.abs(), 0.0, 0.0];
            r[1] = [0.0, 5.0 * a, 0.0];
            ([0.02 * t as f64, 1.0, 0.0], r)
        })
        .collect();
    bvh(&frames)
}

/// The 4-clip upload used throughout: two opposite steps and two waves.
pub fn four_clips() -> Vec<(String, String)> {
    vec![
        ("idle_armsup.bvh".into(), step_bvh(false, 20, 40)),
        ("armsup_idle.bvh".into(), step_bvh(true, 15, 40)),
        ("wave_slow.bvh".into(), wave_bvh(48, 0.15, 0.0)),
        ("wave_fast.bvh".into(), wave_bvh(36, 0.35, 1.0)),
    ]
}

pub fn multipart(files: &[(String, String)]) -> Vec<u8> {
    let mut body = String::new();
    for (name, content) in files {
        let _ = write!(
            body,
            "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"files\"; filename=\"{name}\"\r\nContent-Type: application/octet-stream\r\n\r\n{content}\r\n"
        );
    }
    let _ = write!(body, "--{BOUNDARY}--\r\n");
    body.into_bytes()
}

pub async fn send(app: &Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, bytes)
}

pub async fn upload(app: &Router, files: &[(String, String)]) -> (StatusCode, Value) {
    let req = Request::post("/sessions")
        .header("content-type", format!("multipart/form-data; boundary={BOUNDARY}"))
        .body(Body::from(multipart(files)))
        .unwrap();
    let (status, body) = send(app, req).await;
    (status, serde_json::from_slice(&body).unwrap())
}

pub async fn create(app: &Router, files: &[(String, String)]) -> String {
    let (status, body) = upload(app, files).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["session_id"].as_str().unwrap().to_string()
}

pub async fn get(app: &Router, uri: &str) -> (StatusCode, Vec<u8>) {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

pub async fn get_json(app: &Router, uri: &str) -> (StatusCode, Value) {
    let (status, body) = get(app, uri).await;
    (status, serde_json::from_slice(&body).unwrap())
}

pub async fn put_json(app: &Router, uri: &str, body: &Value) -> (StatusCode, Value) {
    let req = Request::put(uri)
        .header("content-type", "application/json")
        .body(Body::from(serde_json::to_vec(body).unwrap()))
        .unwrap();
    let (status, bytes) = send(app, req).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

/// Panics unless `value` satisfies the shipped schema `name`.
pub fn assert_schema(name: &str, value: &Value) {
    let path = format!("{}/schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}
