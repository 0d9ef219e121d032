//! JSON-over-HTTP routes for the browser client.

use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use treasure_hunter::harness::HarnessError;
use treasure_hunter::service::{ServiceError, SessionManager};
use treasure_hunter::Position;

pub type AppState = Arc<SessionManager>;

pub fn router(manager: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{token}/state", get(get_state))
        .route("/sessions/{token}/move", post(post_move))
        .route("/sessions/{token}/questionnaire", post(post_questionnaire))
        .route("/sessions/{token}/export", get(get_export))
        .with_state(manager)
}

/// A service error with the HTTP status it maps to.
pub struct ApiError(pub ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let message = self.0.to_string();
        let (status, code) = match &self.0 {
            ServiceError::EmptyParticipant => (StatusCode::BAD_REQUEST, "empty-participant"),
            ServiceError::Conflict(_) => (StatusCode::CONFLICT, "participant-exists"),
            ServiceError::NotFound => (StatusCode::NOT_FOUND, "unknown-session"),
            ServiceError::Abandoned => (StatusCode::GONE, "abandoned"),
            ServiceError::IllegalMove { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "illegal-move"),
            ServiceError::QuestionnaireRequired => (StatusCode::CONFLICT, "questionnaire-required"),
            ServiceError::SessionComplete => (StatusCode::CONFLICT, "session-complete"),
            ServiceError::NotComplete => (StatusCode::CONFLICT, "session-not-complete"),
            ServiceError::Harness(HarnessError::RatingOutOfRange(_)) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "rating-out-of-range")
            }
            ServiceError::Harness(HarnessError::TrialNotOver(_)) => {
                (StatusCode::CONFLICT, "map-not-finished")
            }
            ServiceError::Harness(HarnessError::TrialSealed(_)) => {
                (StatusCode::CONFLICT, "already-answered")
            }
            ServiceError::EmptyPlan | ServiceError::UnknownMap(_) | ServiceError::Harness(_) => {
                tracing::error!(error = %self.0, "internal error");
                (StatusCode::INTERNAL_SERVER_ERROR, "internal")
            }
        };
        let mut body = json!({ "error": code, "message": message });
        if let ServiceError::IllegalMove { frontier, .. } = &self.0 {
            body["frontier"] = json!(frontier);
        }
        (status, Json(body)).into_response()
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct CreateBody {
    participant_id: String,
}

#[derive(Deserialize)]
struct MoveBody {
    cell: Position,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct QuestionnaireBody {
    trust: i64,
    self_confidence: i64,
}

async fn create_session(
    State(m): State<AppState>,
    Json(body): Json<CreateBody>,
) -> Result<Response, ApiError> {
    let created = m.create_session(&body.participant_id)?;
    tracing::info!(participant = %created.participant_id, index = created.participant_index, "session created");
    Ok((StatusCode::CREATED, Json(created)).into_response())
}

async fn get_state(
    State(m): State<AppState>,
    Path(token): Path<String>,
) -> Result<Response, ApiError> {
    Ok(Json(m.state(&token)?).into_response())
}

async fn post_move(
    State(m): State<AppState>,
    Path(token): Path<String>,
    Json(body): Json<MoveBody>,
) -> Result<Response, ApiError> {
    Ok(Json(m.post_move(&token, body.cell)?).into_response())
}

async fn post_questionnaire(
    State(m): State<AppState>,
    Path(token): Path<String>,
    Json(body): Json<QuestionnaireBody>,
) -> Result<Response, ApiError> {
    let outcome = m.post_questionnaire(&token, body.trust, body.self_confidence)?;
    Ok(Json(outcome).into_response())
}

async fn get_export(
    State(m): State<AppState>,
    Path(token): Path<String>,
) -> Result<Response, ApiError> {
    let csv = m.export(&token)?;
    Ok((
        [
            (header::CONTENT_TYPE, "text/csv; charset=utf-8"),
            (
                header::CONTENT_DISPOSITION,
                "attachment; filename=\"session.csv\"",
            ),
        ],
        csv,
    )
        .into_response())
}
