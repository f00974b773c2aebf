use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gaitdom::classify::classify_gait;
use gaitdom::mapping::write_responses_csv;
use gaitdom::mocap::Gait;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::session::AssignmentPolicy;
use crate::store::RatingSubmission;
use crate::{AppState, ServiceError};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Invalid(_) | ServiceError::Core(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Corrupt(_) | ServiceError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (status, Json(serde_json::json!({ "error": self.to_string() }))).into_response()
    }
}

type Shared = State<Arc<AppState>>;

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(|e| ServiceError::Invalid(e.to_string()))
}

fn json(status: StatusCode, text: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], text).into_response()
}

#[derive(Deserialize)]
struct NewSession {
    participant_id: String,
    #[serde(default = "auto")]
    policy: AssignmentPolicy,
}

fn auto() -> AssignmentPolicy {
    AssignmentPolicy::Auto
}

async fn create_session(State(app): Shared, body: Bytes) -> Result<Response, ServiceError> {
    let req: NewSession = parse(&body)?;
    let session = app.create_session(&req.participant_id, req.policy)?;
    Ok((StatusCode::CREATED, Json(session)).into_response())
}

async fn get_session(State(app): Shared, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let status = app.store.snapshot().session(&id).ok_or_else(|| ServiceError::NotFound(format!("session `{id}`")))?;
    Ok(Json(status).into_response())
}

async fn list_gaits(State(app): Shared) -> Response {
    Json(app.corpus.summaries()).into_response()
}

async fn get_gait(State(app): Shared, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let gait = app.corpus.get(&id).ok_or_else(|| ServiceError::NotFound(format!("gait `{id}`")))?;
    Ok(json(StatusCode::OK, gait.to_json()))
}

async fn submit_rating(State(app): Shared, body: Bytes) -> Result<Response, ServiceError> {
    let sub: RatingSubmission = parse(&body)?;
    let stored = app.store.submit(&sub)?;
    Ok((StatusCode::CREATED, Json(stored)).into_response())
}

async fn export_responses(State(app): Shared) -> Result<Response, ServiceError> {
    let mut out = Vec::new();
    write_responses_csv(&mut out, &app.store.snapshot().records()).map_err(|e| ServiceError::Io(e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "text/csv")], out).into_response())
}

#[derive(Deserialize)]
struct ClassifyQuery {
    model: Option<String>,
}

async fn classify(State(app): Shared, Query(q): Query<ClassifyQuery>, body: Bytes) -> Result<Response, ServiceError> {
    let model = match &q.model {
        Some(id) => app.models.get(id).ok_or_else(|| ServiceError::NotFound(format!("model `{id}`")))?,
        None if app.models.len() == 1 => app.models.values().next().expect("one model"),
        None => return Err(ServiceError::Invalid(format!("choose one of {} models with ?model=", app.models.len()))),
    };
    let text = std::str::from_utf8(&body).map_err(|e| ServiceError::Invalid(e.to_string()))?;
    let gait = Gait::from_json(text).map_err(gaitdom::Error::from)?;
    let result = classify_gait(&gait, model, app.mapping.as_ref())?;
    Ok(json(StatusCode::OK, serde_json::to_string(&result).expect("classification serialises")))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/gaits", get(list_gaits))
        .route("/gaits/{id}", get(get_gait))
        .route("/ratings", post(submit_rating))
        .route("/export/responses.csv", get(export_responses))
        .route("/classify", post(classify))
        .with_state(state)
}
