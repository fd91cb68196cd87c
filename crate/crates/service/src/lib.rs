//! HTTP+JSON service for live play against engine seats.
//!
//! ```text
//! POST /games              {"descriptor": "cyclic:9", "seats": ["HUMAN", "ENGINE", "ENGINE"]}
//! GET  /games/{id}
//! POST /games/{id}/moves   {"element": 3}
//! GET  /groups/catalog
//! ```

pub mod session;

use std::future::Future;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dng_core::play::MoveError;
use serde::Deserialize;
use serde_json::json;
use tokio::net::TcpListener;

pub use session::{Controller, SessionError, SessionView, Status, Store};

#[derive(Deserialize)]
struct CreateRequest {
    descriptor: String,
    seats: [Controller; 3],
}

#[derive(Deserialize)]
struct MoveRequest {
    element: usize,
}

pub struct ApiError(StatusCode, String);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match &e {
            SessionError::Group(_) => StatusCode::BAD_REQUEST,
            SessionError::NotFound(_) => StatusCode::NOT_FOUND,
            SessionError::NotHumanTurn(_) | SessionError::Move(MoveError::GameOver) => StatusCode::CONFLICT,
            SessionError::Move(_) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult = Result<Json<SessionView>, ApiError>;

async fn create(State(store): State<Arc<Store>>, body: Result<Json<CreateRequest>, JsonRejection>) -> ApiResult {
    let Json(req) = body?;
    // Solving can take a while on large groups.
    let view = tokio::task::spawn_blocking(move || store.create(&req.descriptor, req.seats))
        .await
        .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(view))
}

async fn show(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult {
    Ok(Json(store.view(&id)?))
}

async fn play(
    State(store): State<Arc<Store>>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult {
    let Json(req) = body?;
    Ok(Json(store.play(&id, req.element)?))
}

async fn groups(State(store): State<Arc<Store>>) -> Json<Vec<String>> {
    Json(store.catalog())
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/games", post(create))
        .route("/games/{id}", get(show))
        .route("/games/{id}/moves", post(play))
        .route("/groups/catalog", get(groups))
        .with_state(store)
}

/// Serve until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    store: Arc<Store>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(store))
        .with_graceful_shutdown(shutdown)
        .await
}
