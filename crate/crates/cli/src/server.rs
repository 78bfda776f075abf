//! HTTP session service.
//!
//! Each session holds a [`MutationHistory`]. Reads are concurrent; a write
//! (mutate or undo) takes the session's writer slot with `try_lock`, so a
//! second write arriving while one is in flight gets `409`.

use std::collections::HashMap;
use std::path::{Path as FsPath, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Mutex;

use cyforge_core::document::{to_dot, DocumentError, QpDocument};
use cyforge_core::jacobian::jacobian_dims;
use cyforge_core::mutation::MutationHistory;
use cyforge_core::Error;

/// Largest `max_len` the jacobian endpoint accepts.
pub const MAX_JACOBIAN_LEN: usize = 12;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.into(),
            message: message.into(),
        }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "UnknownSession", format!("no session `{id}`"))
    }

    fn busy(id: &str) -> Self {
        ApiError::new(StatusCode::CONFLICT, "ConcurrentWrite", format!("session `{id}` has a write in progress"))
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string())
    }
}

impl From<DocumentError> for ApiError {
    fn from(e: DocumentError) -> Self {
        let code = match &e {
            DocumentError::Parse { .. } => "ParseError",
            DocumentError::Invalid { source, .. } => source.code(),
        };
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "code": self.code, "message": self.message }))).into_response()
    }
}

pub struct Session {
    pub history: MutationHistory,
    pub created: u64,
    pub modified: u64,
}

struct Slot {
    writer: Mutex<()>,
    session: RwLock<Session>,
}

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
    state_dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct StepRecord {
    vertex: String,
    reduce: bool,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    session_id: String,
    created: u64,
    modified: u64,
    initial: QpDocument,
    steps: Vec<StepRecord>,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl AppState {
    pub fn new(state_dir: Option<PathBuf>) -> Self {
        AppState {
            sessions: RwLock::default(),
            state_dir,
        }
    }

    /// Restores every snapshot in the state directory by replaying its steps.
    pub fn load(state_dir: PathBuf) -> std::io::Result<Self> {
        std::fs::create_dir_all(&state_dir)?;
        let state = AppState::new(Some(state_dir.clone()));
        for entry in std::fs::read_dir(&state_dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            match restore(&path) {
                Ok((id, session)) => state.insert(id, session),
                Err(message) => eprintln!("skipping snapshot {}: {message}", path.display()),
            }
        }
        Ok(state)
    }

    fn insert(&self, id: String, session: Session) {
        let slot = Arc::new(Slot {
            writer: Mutex::new(()),
            session: RwLock::new(session),
        });
        self.sessions.write().expect("session table").insert(id, slot);
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ApiError> {
        self.sessions
            .read()
            .expect("session table")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("session table").len()
    }

    fn snapshot(&self, id: &str, session: &Session) {
        let Some(dir) = &self.state_dir else { return };
        let snap = Snapshot {
            session_id: id.to_string(),
            created: session.created,
            modified: session.modified,
            initial: QpDocument::from_qp(session.history.initial()),
            steps: session
                .history
                .steps()
                .iter()
                .map(|s| StepRecord {
                    vertex: s.vertex.clone(),
                    reduce: s.reduce,
                })
                .collect(),
        };
        let text = serde_json::to_string_pretty(&snap).expect("snapshots serialize");
        let tmp = dir.join(format!("{id}.json.tmp"));
        let result = std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, dir.join(format!("{id}.json"))));
        if let Err(e) = result {
            eprintln!("snapshot of session {id} failed: {e}");
        }
    }
}

fn restore(path: &FsPath) -> Result<(String, Session), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let snap: Snapshot = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let mut history = MutationHistory::new(snap.initial.qp().map_err(|e| e.to_string())?);
    for step in &snap.steps {
        history.apply(&step.vertex, step.reduce).map_err(|e| e.to_string())?;
    }
    Ok((
        snap.session_id,
        Session {
            history,
            created: snap.created,
            modified: snap.modified,
        },
    ))
}

fn view(id: &str, s: &Session) -> serde_json::Value {
    let history: Vec<_> = s
        .history
        .steps()
        .iter()
        .map(|step| json!({ "vertex": step.vertex, "reduce": step.reduce, "removed": step.removed }))
        .collect();
    json!({
        "session_id": id,
        "qp": QpDocument::from_qp(s.history.current()),
        "history": history,
        "created": s.created,
        "modified": s.modified,
    })
}

type Shared = Arc<AppState>;

async fn create(State(state): State<Shared>, body: String) -> Result<Response, ApiError> {
    let qp = QpDocument::parse(&body)?.qp()?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let t = now();
    let session = Session {
        history: MutationHistory::new(qp),
        created: t,
        modified: t,
    };
    state.snapshot(&id, &session);
    state.insert(id.clone(), session);
    Ok((StatusCode::CREATED, Json(json!({ "session_id": id }))).into_response())
}

async fn show(State(state): State<Shared>, Path(id): Path<String>) -> Result<Json<serde_json::Value>, ApiError> {
    let slot = state.slot(&id)?;
    let session = slot.session.read().expect("session");
    Ok(Json(view(&id, &session)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MutateRequest {
    vertex: String,
    #[serde(default)]
    reduce: bool,
}

/// Runs `edit` on a copy of the history under the writer slot and commits it.
fn write_session(
    state: &AppState,
    id: &str,
    edit: impl FnOnce(&mut MutationHistory) -> Result<(), ApiError>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let slot = state.slot(id)?;
    let _writer = slot.writer.try_lock().map_err(|_| ApiError::busy(id))?;
    let mut history = slot.session.read().expect("session").history.clone();
    edit(&mut history)?;
    let mut session = slot.session.write().expect("session");
    session.history = history;
    session.modified = now();
    state.snapshot(id, &session);
    Ok(Json(view(id, &session)))
}

async fn mutate(
    State(state): State<Shared>,
    Path(id): Path<String>,
    body: String,
) -> Result<Json<serde_json::Value>, ApiError> {
    let req: MutateRequest = serde_json::from_str(&body)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "ParseError", e.to_string()))?;
    write_session(&state, &id, |h| {
        h.apply(&req.vertex, req.reduce)?;
        Ok(())
    })
}

async fn undo(State(state): State<Shared>, Path(id): Path<String>) -> Result<Json<serde_json::Value>, ApiError> {
    write_session(&state, &id, |h| {
        if h.undo() {
            Ok(())
        } else {
            Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "NothingToUndo", "history is empty"))
        }
    })
}

#[derive(Deserialize)]
struct JacobianQuery {
    max_len: Option<usize>,
}

async fn jacobian(
    State(state): State<Shared>,
    Path(id): Path<String>,
    Query(query): Query<JacobianQuery>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let max_len = query.max_len.unwrap_or(6);
    if max_len > MAX_JACOBIAN_LEN {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "UnsupportedArgument",
            format!("max_len is capped at {MAX_JACOBIAN_LEN}"),
        ));
    }
    let qp = state.slot(&id)?.session.read().expect("session").history.current().clone();
    let j = tokio::task::spawn_blocking(move || jacobian_dims(qp.potential(), max_len))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", e.to_string()))?;
    Ok(Json(json!({
        "max_len": j.max_len,
        "dims": j.dims,
        "total": j.total(),
        "stabilized": j.stabilized,
        "length_homogeneous": j.length_homogeneous,
    })))
}

async fn dot(State(state): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let slot = state.slot(&id)?;
    let session = slot.session.read().expect("session");
    let qp = session.history.current();
    let w = qp.potential();
    let text = to_dot(qp.quiver(), (!w.is_zero()).then_some(w));
    Ok(([(header::CONTENT_TYPE, "text/vnd.graphviz; charset=utf-8")], text).into_response())
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/mutate", post(mutate))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/jacobian", get(jacobian))
        .route("/sessions/{id}/dot", get(dot))
        .with_state(state)
}

pub async fn serve(port: u16, state_dir: Option<PathBuf>) -> std::io::Result<()> {
    let state = match state_dir {
        Some(dir) => AppState::load(dir)?,
        None => AppState::new(None),
    };
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on {} ({} sessions restored)", listener.local_addr()?, state.session_count());
    axum::serve(listener, router(Arc::new(state))).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use axum::body::Body;
    use axum::http::Request;
    use cyforge_core::catalog::a3_qp;
    use tower::ServiceExt;

    #[tokio::test]
    async fn write_during_write_is_rejected() {
        let state = Arc::new(AppState::new(None));
        let doc = QpDocument::from_qp(&a3_qp()).emit();
        let res = router(state.clone())
            .oneshot(Request::post("/sessions").body(Body::from(doc)).unwrap())
            .await
            .unwrap();
        assert_eq!(res.status(), StatusCode::CREATED);
        let id = state.sessions.read().unwrap().keys().next().unwrap().clone();

        let slot = state.slot(&id).unwrap();
        let held = slot.writer.try_lock().unwrap();
        let req = || {
            Request::post(format!("/sessions/{id}/mutate"))
                .body(Body::from(r#"{"vertex":"2","reduce":false}"#))
                .unwrap()
        };
        let res = router(state.clone()).oneshot(req()).await.unwrap();
        assert_eq!(res.status(), StatusCode::CONFLICT);
        let res = router(state.clone())
            .oneshot(Request::get(format!("/sessions/{id}")).body(Body::empty()).unwrap())
            .await
            .unwrap();
        assert_eq!(res.status(), StatusCode::OK, "reads proceed during a write");
        drop(held);
        let res = router(state).oneshot(req()).await.unwrap();
        assert_eq!(res.status(), StatusCode::OK);
    }
}
