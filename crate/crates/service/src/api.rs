//! Routes, request handling and the error body.

use std::collections::HashMap;
use std::io::{Cursor, Write};
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use icb_core::dialogue::{start, step};
use icb_core::{serialize, validate, BotTurn, DialogueState, GeneratedArtifact, Phase, ValidationIssue};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Mutex as AsyncMutex;

use crate::store::{is_valid_id, new_id, Session, Store};

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("no session with id {0}")]
    NotFound(String),
    #[error("the conversation is finished; start a new session")]
    Finished,
    #[error("no code has been generated yet")]
    NotGenerated,
    #[error("message text must not be empty")]
    EmptyMessage,
    #[error("invalid request body: {0}")]
    BadBody(String),
    #[error("storage failure: {0}")]
    Storage(#[from] std::io::Error),
    #[error("archive failure: {0}")]
    Archive(String),
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Finished | ApiError::NotGenerated => StatusCode::CONFLICT,
            ApiError::EmptyMessage | ApiError::BadBody(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Storage(_) | ApiError::Archive(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            ApiError::NotFound(_) => "not_found",
            ApiError::Finished => "session_finished",
            ApiError::NotGenerated => "not_generated",
            ApiError::EmptyMessage => "empty_message",
            ApiError::BadBody(_) => "invalid_body",
            ApiError::Storage(_) => "storage_error",
            ApiError::Archive(_) => "archive_error",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody { code: self.code().to_string(), message: self.to_string() };
        (self.status(), Json(body)).into_response()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MessageRequest {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CreatedSession {
    pub id: String,
    pub prompt: String,
    pub turn: BotTurn,
    pub phase: Phase,
    pub dsl: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MessageReply {
    pub turn: BotTurn,
    pub phase: Phase,
    pub dsl: String,
    /// Findings raised by this turn.
    pub issues: Vec<ValidationIssue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub id: String,
    pub created_at: chrono::DateTime<Utc>,
    pub updated_at: chrono::DateTime<Utc>,
    pub phase: Phase,
    pub dsl: String,
    pub state: DialogueState,
    /// Findings on the current draft.
    pub issues: Vec<ValidationIssue>,
    pub artifacts: Option<Vec<String>>,
}

impl SessionView {
    fn of(s: &Session) -> Self {
        SessionView {
            id: s.id.clone(),
            created_at: s.created_at,
            updated_at: s.updated_at,
            phase: s.state.phase,
            dsl: serialize(&s.state.draft),
            state: s.state.clone(),
            issues: validate(&s.state.draft),
            artifacts: s.artifacts.as_ref().map(|a| a.iter().map(|x| x.rel_path.clone()).collect()),
        }
    }
}

/// Shared handler state: the store plus one lock per session.
#[derive(Clone)]
pub struct AppState {
    store: Arc<dyn Store>,
    locks: Arc<Mutex<HashMap<String, Arc<AsyncMutex<()>>>>>,
}

impl AppState {
    pub fn new(store: Arc<dyn Store>) -> Self {
        AppState { store, locks: Arc::default() }
    }

    fn lock_for(&self, id: &str) -> Arc<AsyncMutex<()>> {
        self.locks.lock().unwrap().entry(id.to_string()).or_default().clone()
    }

    fn load(&self, id: &str) -> Result<Session, ApiError> {
        if !is_valid_id(id) {
            return Err(ApiError::NotFound(id.to_string()));
        }
        self.store.load(id)?.ok_or_else(|| ApiError::NotFound(id.to_string()))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/health", get(health))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/messages", post(post_message))
        .route("/api/sessions/{id}/artifacts", get(get_artifacts))
        .with_state(state)
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

async fn create_session(State(app): State<AppState>) -> Result<(StatusCode, Json<CreatedSession>), ApiError> {
    let (state, turn) = start();
    let now = Utc::now();
    let session = Session { id: new_id(), state, created_at: now, updated_at: now, artifacts: None };
    app.store.save(&session)?;
    let body = CreatedSession {
        id: session.id,
        prompt: turn.prompt.clone(),
        turn,
        phase: session.state.phase,
        dsl: serialize(&session.state.draft),
    };
    Ok((StatusCode::CREATED, Json(body)))
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    Ok(Json(SessionView::of(&app.load(&id)?)))
}

async fn post_message(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MessageRequest>, JsonRejection>,
) -> Result<Json<MessageReply>, ApiError> {
    // unknown sessions win over bad bodies
    app.load(&id)?;
    let Json(req) = body.map_err(|e| ApiError::BadBody(e.body_text()))?;
    if req.text.trim().is_empty() {
        return Err(ApiError::EmptyMessage);
    }
    let lock = app.lock_for(&id);
    let _guard = lock.lock().await;
    let mut session = app.load(&id)?;
    if session.state.is_done() {
        return Err(ApiError::Finished);
    }
    let (state, turn) = step(&session.state, &req.text);
    if state.is_done() && session.artifacts.is_none() {
        session.artifacts = turn.artifact_offer.clone().or_else(|| state.artifacts());
    }
    session.state = state;
    session.updated_at = Utc::now().max(session.created_at);
    app.store.save(&session)?;
    Ok(Json(MessageReply {
        issues: turn.issues.clone(),
        turn,
        phase: session.state.phase,
        dsl: serialize(&session.state.draft),
    }))
}

#[derive(Debug, Deserialize)]
struct ArtifactQuery {
    format: Option<String>,
}

async fn get_artifacts(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ArtifactQuery>,
) -> Result<Response, ApiError> {
    let session = app.load(&id)?;
    let generated = matches!(session.state.phase, Phase::Generate | Phase::Done);
    let artifacts = session.artifacts.filter(|_| generated).ok_or(ApiError::NotGenerated)?;
    match q.format.as_deref() {
        Some("zip") => {
            let bytes = zip_artifacts(&artifacts).map_err(|e| ApiError::Archive(e.to_string()))?;
            let disposition = format!("attachment; filename=\"{id}.zip\"");
            Ok((
                [(header::CONTENT_TYPE, "application/zip".to_string()), (header::CONTENT_DISPOSITION, disposition)],
                bytes,
            )
                .into_response())
        }
        Some("json") | None => Ok(Json(artifacts).into_response()),
        Some(other) => Err(ApiError::BadBody(format!("unknown format {other:?}; use json or zip"))),
    }
}

/// A stored (uncompressed) archive with one entry per artifact.
pub fn zip_artifacts(artifacts: &[GeneratedArtifact]) -> zip::result::ZipResult<Vec<u8>> {
    let mut w = zip::ZipWriter::new(Cursor::new(Vec::new()));
    let opts = zip::write::SimpleFileOptions::default().compression_method(zip::CompressionMethod::Stored);
    for a in artifacts {
        w.start_file(a.rel_path.as_str(), opts)?;
        w.write_all(a.content.as_bytes())?;
    }
    Ok(w.finish()?.into_inner())
}
