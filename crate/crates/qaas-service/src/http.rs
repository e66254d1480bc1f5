//! HTTP surface: submission, status lookup, and health. All bodies are
//! JSON; error responses carry `{"error": reason}`.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::jobs::{ServiceState, SubmitError};

pub fn router(state: Arc<ServiceState>) -> Router {
    Router::new()
        .route("/jobs", post(submit_job))
        .route("/jobs/{id}", get(get_job))
        .route("/healthz", get(healthz))
        .with_state(state)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobRequest {
    kind: String,
    payload: Value,
    #[serde(default)]
    seed: u64,
}

fn error_body(status: StatusCode, message: &str) -> Response {
    (status, Json(json!({ "error": message }))).into_response()
}

/// Body is parsed by hand so every malformed request maps to 400 with a
/// diagnostic, regardless of content type.
async fn submit_job(State(state): State<Arc<ServiceState>>, body: Bytes) -> Response {
    let request: JobRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error_body(StatusCode::BAD_REQUEST, &e.to_string()),
    };
    match state.submit(&request.kind, request.payload, request.seed) {
        Ok(id) => (StatusCode::ACCEPTED, Json(json!({ "id": id }))).into_response(),
        Err(SubmitError::Malformed(m)) => error_body(StatusCode::BAD_REQUEST, &m),
        Err(SubmitError::Infeasible(m)) => error_body(StatusCode::UNPROCESSABLE_ENTITY, &m),
    }
}

async fn get_job(State(state): State<Arc<ServiceState>>, Path(id): Path<String>) -> Response {
    match state.get(&id) {
        Some(job) => (StatusCode::OK, Json(job)).into_response(),
        None => error_body(StatusCode::NOT_FOUND, &format!("unknown job id {id:?}")),
    }
}

async fn healthz() -> Response {
    (StatusCode::OK, Json(json!({ "status": "ok" }))).into_response()
}

/// Binds and serves on a background thread with its own runtime; returns
/// the bound address. Port 0 picks a free port.
pub fn spawn_service(port: u16, workers: usize) -> std::io::Result<SocketAddr> {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let runtime = tokio::runtime::Builder::new_current_thread()
            .enable_all()
            .build()
            .expect("runtime");
        runtime.block_on(async move {
            let bound = tokio::net::TcpListener::bind(("127.0.0.1", port)).await;
            let listener = match bound {
                Ok(l) => l,
                Err(e) => {
                    let _ = tx.send(Err(e));
                    return;
                }
            };
            let addr = match listener.local_addr() {
                Ok(a) => a,
                Err(e) => {
                    let _ = tx.send(Err(e));
                    return;
                }
            };
            let state = ServiceState::start(workers);
            let _ = tx.send(Ok(addr));
            if let Err(e) = axum::serve(listener, router(state)).await {
                eprintln!("service stopped: {e}");
            }
        });
    });
    rx.recv().expect("service thread reports its bind result")
}
