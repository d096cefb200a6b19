//! HTTP routes. Reads recompute lazily through the session's memo caches;
//! writes only replace state.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Multipart, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use animlens_core::camera::CameraSpec;
use animlens_core::io::load_session;
use animlens_core::session::{joints_for_chains, LensConfig, Session, SessionDocument, TimelineState};
use animlens_core::spatial::SceneObject;

use crate::config::EngineConfig;
use crate::error::ApiError;
use crate::views::{
    DiffView, FrameView, JointCurvesView, PathView, PoseClusters, SessionCreated, SessionState, TraceEntry,
};

type ApiResult<T> = Result<T, ApiError>;

pub struct AppState {
    config: EngineConfig,
    data_dir: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
}

impl AppState {
    pub fn new(config: EngineConfig) -> Self {
        Self { config, data_dir: None, sessions: RwLock::default(), next_id: AtomicU64::new(1) }
    }

    /// Keeps every session as `<dir>/<id>.json` and restores the ones already there.
    pub fn with_data_dir(mut self, dir: PathBuf) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        let mut highest = 0;
        let mut sessions = HashMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()).map(str::to_string) else { continue };
            let restored = std::fs::read(&path)
                .map_err(|e| e.to_string())
                .and_then(|bytes| serde_json::from_slice::<SessionDocument>(&bytes).map_err(|e| e.to_string()))
                .and_then(|doc| Session::from_document(doc).map_err(|e| e.to_string()));
            match restored {
                Ok(session) => {
                    highest = highest.max(u64::from_str_radix(&id, 16).unwrap_or(0));
                    sessions.insert(id, Arc::new(Mutex::new(session)));
                }
                Err(e) => tracing::warn!("skipping {}: {e}", path.display()),
            }
        }
        self.sessions = RwLock::new(sessions);
        self.next_id = AtomicU64::new(highest + 1);
        self.data_dir = Some(dir);
        Ok(self)
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        let sessions = self.sessions.read().unwrap_or_else(|e| e.into_inner());
        sessions.get(id).cloned().ok_or_else(|| ApiError::not_found(format!("session {id}")))
    }

    fn insert(&self, session: Session) -> String {
        let id = format!("{:016x}", self.next_id.fetch_add(1, Ordering::Relaxed));
        self.save(&id, &session);
        let mut sessions = self.sessions.write().unwrap_or_else(|e| e.into_inner());
        sessions.insert(id.clone(), Arc::new(Mutex::new(session)));
        id
    }

    fn save(&self, id: &str, session: &Session) {
        let Some(dir) = &self.data_dir else { return };
        let path = dir.join(format!("{id}.json"));
        let written = serde_json::to_vec(&session.to_document())
            .map_err(std::io::Error::other)
            .and_then(|bytes| std::fs::write(&path, bytes));
        if let Err(e) = written {
            tracing::warn!("could not save {}: {e}", path.display());
        }
    }
}

/// Builds a session from uploaded files with the configured defaults.
pub fn open_session(files: &[(String, Vec<u8>)], config: &EngineConfig) -> Result<Session, animlens_core::Error> {
    let set = load_session(files, config.load_options())?;
    let mut session = Session::new(set);
    let mut timeline = session.timeline().clone();
    timeline.fps = config.fps;
    session.set_timeline(timeline)?;
    let mut lens = session.lens().clone();
    lens.params = config.lens_params();
    session.set_lens(lens)?;
    Ok(session)
}

pub fn router(state: Arc<AppState>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/timeline", put(put_timeline))
        .route("/sessions/{id}/tick", post(tick))
        .route("/sessions/{id}/scene/objects", put(put_objects).post(add_object))
        .route("/sessions/{id}/scene/objects/{object_id}", put(update_object).delete(remove_object))
        .route("/sessions/{id}/scene/camera", put(put_camera))
        .route("/sessions/{id}/lens", put(put_lens))
        .route("/sessions/{id}/pose-clusters", get(pose_clusters))
        .route("/sessions/{id}/joint-curves", get(joint_curves))
        .route("/sessions/{id}/keyposes", get(keyposes))
        .route("/sessions/{id}/paths", get(paths))
        .route("/sessions/{id}/collisions", get(collisions))
        .route("/sessions/{id}/diff", get(diff))
        .route("/sessions/{id}/frame", get(frame))
        .route("/sessions/{id}/trace", get(trace))
        .with_state(state)
        .layer(CorsLayer::permissive());
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    match serde_json::to_vec(body) {
        Ok(bytes) => (status, [(header::CONTENT_TYPE, "application/json")], bytes).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

/// Runs `f` on the locked session off the async runtime and serializes its result.
async fn read<F, T>(state: &AppState, id: &str, f: F) -> ApiResult<Response>
where
    F: FnOnce(&mut Session) -> ApiResult<T> + Send + 'static,
    T: Serialize,
{
    let session = state.session(id)?;
    let response = tokio::task::spawn_blocking(move || {
        let mut guard = session.lock().unwrap_or_else(|e| e.into_inner());
        f(&mut guard).map(|body| json_response(StatusCode::OK, &body))
    })
    .await;
    match response {
        Ok(r) => r,
        Err(e) => std::panic::resume_unwind(e.into_panic()),
    }
}

/// Applies a write and answers with the resulting session state.
fn write<F>(state: &AppState, id: &str, f: F) -> ApiResult<Response>
where
    F: FnOnce(&mut Session) -> Result<(), animlens_core::Error>,
{
    let session = state.session(id)?;
    let mut guard = session.lock().unwrap_or_else(|e| e.into_inner());
    f(&mut guard)?;
    state.save(id, &guard);
    Ok(json_response(StatusCode::OK, &SessionState::of(&guard)))
}

async fn create_session(State(state): State<Arc<AppState>>, mut multipart: Multipart) -> ApiResult<Response> {
    let mut files = Vec::new();
    while let Some(field) = multipart.next_field().await? {
        let name = field
            .file_name()
            .or(field.name())
            .map(str::to_string)
            .unwrap_or_else(|| format!("upload{}", files.len() + 1));
        files.push((name, field.bytes().await?.to_vec()));
    }
    let config = state.config.clone();
    let session = tokio::task::spawn_blocking(move || open_session(&files, &config))
        .await
        .unwrap_or_else(|e| std::panic::resume_unwind(e.into_panic()))?;
    let session_id = state.insert(session);
    Ok(json_response(StatusCode::CREATED, &SessionCreated { session_id }))
}

async fn get_session(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    read(&state, &id, |s| Ok(s.to_document())).await
}

async fn put_timeline(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<TimelineState>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(timeline) = body?;
    write(&state, &id, |s| s.set_timeline(timeline))
}

#[derive(Debug, Deserialize)]
struct TickRequest {
    wall_dt: f64,
}

async fn tick(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<TickRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(req) = body?;
    if !(req.wall_dt.is_finite() && req.wall_dt >= 0.0) {
        return Err(ApiError::validation("wall_dt must be a non-negative number of seconds"));
    }
    write(&state, &id, |s| {
        s.tick(req.wall_dt);
        Ok(())
    })
}

async fn put_objects(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<Vec<SceneObject>>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(objects) = body?;
    write(&state, &id, |s| s.set_scene(objects))
}

async fn add_object(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<SceneObject>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(object) = body?;
    write(&state, &id, |s| s.add_object(object))
}

async fn update_object(
    State(state): State<Arc<AppState>>,
    Path((id, object_id)): Path<(String, String)>,
    body: Result<Json<SceneObject>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(object) = body?;
    if object.id != object_id {
        return Err(ApiError::validation(format!("body id {} does not match path id {object_id}", object.id)));
    }
    write(&state, &id, |s| s.update_object(object))
}

async fn remove_object(
    State(state): State<Arc<AppState>>,
    Path((id, object_id)): Path<(String, String)>,
) -> ApiResult<Response> {
    write(&state, &id, |s| s.remove_object(&object_id).map(drop))
}

async fn put_camera(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<CameraSpec>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(camera) = body?;
    write(&state, &id, |s| s.set_camera(camera))
}

#[derive(Debug, Deserialize)]
struct LensRequest {
    #[serde(flatten)]
    lens: LensConfig,
    /// Chain names whose joints are added to `joint_filter`.
    #[serde(default)]
    chains: Vec<String>,
}

async fn put_lens(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<LensRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let Json(LensRequest { mut lens, chains }) = body?;
    write(&state, &id, |s| {
        lens.joint_filter.extend(joints_for_chains(s.set().skeleton(), &chains)?);
        s.set_lens(lens)
    })
}

async fn pose_clusters(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    read(&state, &id, |s| {
        let pc = s.pose_clustering()?;
        let ids: Vec<String> = s.set().clips().iter().map(|c| c.id().to_string()).collect();
        Ok(serde_json::to_value(PoseClusters::new(&pc, &ids)).expect("serializable"))
    })
    .await
}

#[derive(Debug, Deserialize)]
struct JointQuery {
    joint: String,
}

fn joint_index(s: &Session, name: &str) -> ApiResult<usize> {
    s.set().skeleton().joint_index(name).ok_or_else(|| ApiError::not_found(format!("joint {name}")))
}

async fn joint_curves(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<JointQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = query?;
    read(&state, &id, move |s| {
        let joint = joint_index(s, &q.joint)?;
        let curves = s.joint_curves(joint)?;
        let offsets = s.timeline().clips.iter().map(|c| c.offset_frames).collect();
        Ok(serde_json::to_value(JointCurvesView { curves: &curves, offsets }).expect("serializable"))
    })
    .await
}

#[derive(Debug, Deserialize)]
struct ClipQuery {
    clip: String,
}

async fn keyposes(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<ClipQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = query?;
    read(&state, &id, move |s| {
        let index = s.set().clip_index(&q.clip).ok_or_else(|| ApiError::not_found(format!("clip {}", q.clip)))?;
        Ok(s.keyposes()?[index].clone())
    })
    .await
}

async fn paths(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<JointQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = query?;
    read(&state, &id, move |s| {
        let joint = joint_index(s, &q.joint)?;
        let up = s.set().skeleton().up_axis();
        let all = s.joint_paths()?;
        let views: Vec<PathView> = all.iter().filter(|p| p.joint == joint).map(|p| PathView::new(p, up)).collect();
        Ok(serde_json::to_value(views).expect("serializable"))
    })
    .await
}

async fn collisions(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    read(&state, &id, |s| Ok(s.collisions()?)).await
}

#[derive(Debug, Deserialize)]
struct DiffQuery {
    a: String,
    b: String,
    frame: i64,
}

async fn diff(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<DiffQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = query?;
    read(&state, &id, move |s| {
        let diff = s.diff(&q.a, &q.b, q.frame)?;
        let mean_distance = diff.mean_distance();
        Ok(DiffView { diff, mean_distance })
    })
    .await
}

#[derive(Debug, Deserialize)]
struct FrameQuery {
    /// Global timeline frame; the session's current frame when absent.
    t: Option<u64>,
}

async fn frame(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<FrameQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = query?;
    read(&state, &id, move |s| {
        let t = q.t.unwrap_or(s.timeline().current_frame);
        Ok(FrameView { frame: t, camera_lens: s.lens().camera_lens, poses: s.frame(t)? })
    })
    .await
}

#[derive(Debug, Deserialize)]
struct TraceQuery {
    clip: String,
    t: usize,
}

async fn trace(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    query: Result<Query<TraceQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(q) = query?;
    read(&state, &id, move |s| {
        let window = s.trace(&q.clip, q.t)?;
        Ok(window.into_iter().map(|(frame, pose)| TraceEntry { frame, pose }).collect::<Vec<_>>())
    })
    .await
}
