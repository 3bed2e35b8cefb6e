//! HTTP front end for the play-out [`Service`].

use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Assignment, CreateSession, Service, ServiceError, SCHEMA};

/// Default and largest page size of the graph endpoint.
pub const DEFAULT_PAGE: usize = 100;
pub const MAX_PAGE: usize = 1000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRequest {
    pub assignment: Assignment,
}

#[derive(Debug, Deserialize)]
struct PageQuery {
    offset: Option<usize>,
    limit: Option<usize>,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match self.code() {
            "not_found" => StatusCode::NOT_FOUND,
            "illegal_move" => StatusCode::UNPROCESSABLE_ENTITY,
            "finished" | "mode_unavailable" => StatusCode::CONFLICT,
            _ => StatusCode::BAD_REQUEST,
        };
        let body = json!({ "schema": SCHEMA, "error": { "code": self.code(), "message": self.to_string() } });
        (status, Json(body)).into_response()
    }
}

type Shared = Arc<Service>;

/// Run synchronous service work off the async runtime.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f).await.expect("service task panicked")
}

async fn create(State(s): State<Shared>, Json(req): Json<CreateSession>) -> Result<impl IntoResponse, ServiceError> {
    let view = blocking(move || s.create_session(&req)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn list(State(s): State<Shared>) -> impl IntoResponse {
    Json(json!({ "schema": SCHEMA, "sessions": s.sessions() }))
}

async fn show(State(s): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, ServiceError> {
    Ok(Json(s.view(&id)?))
}

async fn step(
    State(s): State<Shared>,
    Path(id): Path<String>,
    Json(req): Json<StepRequest>,
) -> Result<impl IntoResponse, ServiceError> {
    let view = blocking(move || s.step(&id, &req.assignment)).await?;
    Ok(Json(view))
}

async fn trace(State(s): State<Shared>, Path(id): Path<String>) -> Result<impl IntoResponse, ServiceError> {
    let steps = s.trace(&id)?;
    Ok(Json(json!({ "schema": SCHEMA, "id": id, "steps": steps })))
}

async fn artifacts(State(s): State<Shared>) -> impl IntoResponse {
    Json(json!({ "schema": SCHEMA, "artifacts": s.artifacts() }))
}

async fn graph(
    State(s): State<Shared>,
    Path(name): Path<String>,
    Query(q): Query<PageQuery>,
) -> Result<impl IntoResponse, ServiceError> {
    let offset = q.offset.unwrap_or(0);
    let limit = q.limit.unwrap_or(DEFAULT_PAGE).min(MAX_PAGE);
    let page = blocking(move || s.graph(&name, offset, limit)).await?;
    Ok(Json(page))
}

pub fn router(service: Shared) -> Router {
    Router::new()
        .route("/sessions", post(create).get(list))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/trace", get(trace))
        .route("/artifacts", get(artifacts))
        .route("/artifacts/{name}/graph", get(graph))
        .with_state(service)
}

/// Serve until interrupted.
pub async fn serve(service: Shared, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
