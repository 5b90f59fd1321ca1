//! HTTP service that runs decision sessions through their phases and keeps
//! each one as a JSON document on disk.
//!
//! | method | path | body | success |
//! |---|---|---|---|
//! | POST | `/sessions` | session config | 201 session |
//! | GET | `/sessions/{id}` | | 200 session |
//! | POST | `/sessions/{id}/phase` | `{"target": phase}` | 200 session |
//! | POST | `/sessions/{id}/participants` | participant | 201 participant |
//! | POST | `/sessions/{id}/assessments` | assessment | 201 assessment |
//! | POST | `/sessions/{id}/messages` | `{participant, alternative, text}` | 201 message and its affect |
//! | POST | `/sessions/{id}/ranking` | | 200 ranking |
//! | POST | `/sessions/{id}/feedback` | `{participant, agreement, confidence}` | 201 entry with score |
//! | GET | `/sessions/{id}/consensus` | | 200 consensus report |
//! | GET | `/sessions/{id}/export` | | 200 session document |
//!
//! Errors come back as `{"error": "..."}` with 404 for unknown sessions,
//! 409 for phase violations, duplicates and unmet preconditions, and 422
//! for anything that fails validation.

mod error;
mod routes;
mod store;

use std::future::Future;
use std::sync::Arc;

use gdm_core::affect::AffectWeights;
use gdm_core::pipeline::Engine;
use tokio::net::TcpListener;

pub use error::ApiError;
pub use routes::router;
pub use store::{Store, StoreError};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub engine: Arc<Engine>,
    /// Used when a new session does not set its own weights.
    pub default_affect: AffectWeights,
}

impl AppState {
    pub fn new(store: Store, engine: Engine, default_affect: AffectWeights) -> Self {
        Self {
            store: Arc::new(store),
            engine: Arc::new(engine),
            default_affect,
        }
    }
}

/// Serves until `shutdown` resolves, then lets in-flight requests finish.
/// Every accepted mutation is on disk before its response is sent, so
/// nothing is left to flush afterwards.
pub async fn serve(
    listener: TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}
