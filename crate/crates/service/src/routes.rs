use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Path, Request, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use gdm_core::affect::AffectScore;
use gdm_core::consensus::ConsensusReport;
use gdm_core::pipeline::{Engine, RankingResult};
use gdm_core::preference::Assessment;
use gdm_core::session::{
    FeedbackEntry, Message, Participant, Phase, Session, SessionConfig, SessionError,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{ApiError, AppState};

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/export", get(get_session))
        .route("/sessions/{id}/phase", post(change_phase))
        .route("/sessions/{id}/participants", post(add_participant))
        .route("/sessions/{id}/assessments", post(submit_assessment))
        .route("/sessions/{id}/messages", post(post_message))
        .route("/sessions/{id}/ranking", post(compute_ranking))
        .route("/sessions/{id}/feedback", post(submit_feedback))
        .route("/sessions/{id}/consensus", get(consensus))
        .with_state(state)
}

/// `Json` whose rejections come back as 422 with the usual error body.
struct Body<T>(T);

impl<S, T> FromRequest<S> for Body<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(value)) => Ok(Body(value)),
            Err(e) => Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                rejection_text(e),
            )),
        }
    }
}

fn rejection_text(e: JsonRejection) -> String {
    match e {
        JsonRejection::JsonDataError(e) => format!("invalid body: {}", e.body_text()),
        JsonRejection::JsonSyntaxError(e) => format!("malformed JSON: {}", e.body_text()),
        other => other.body_text(),
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Applies `op` to a copy of the session and commits it to disk and memory
/// only if it succeeds, so a rejected request changes nothing.
async fn mutate<T>(
    state: &AppState,
    id: &str,
    op: impl FnOnce(&mut Session, &Engine) -> Result<T, SessionError>,
) -> ApiResult<T> {
    let cell = state.store.get(id).ok_or_else(|| ApiError::not_found(id))?;
    let mut current = cell.write().await;
    let mut next = current.clone();
    let out = op(&mut next, &state.engine)?;
    if next != *current {
        state.store.persist(&next)?;
        *current = next;
    }
    Ok(out)
}

async fn create_session(
    State(state): State<AppState>,
    Body(config): Body<SessionConfig>,
) -> ApiResult<(StatusCode, Json<Session>)> {
    let id = uuid::Uuid::new_v4().simple().to_string();
    let session = Session::new(id, config, state.default_affect)?;
    state.store.insert(session.clone())?;
    log::info!("created session {}", session.id);
    Ok((StatusCode::CREATED, Json(session)))
}

async fn get_session(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<Session>> {
    let cell = state
        .store
        .get(&id)
        .ok_or_else(|| ApiError::not_found(&id))?;
    let session = cell.read().await.clone();
    Ok(Json(session))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseRequest {
    target: Phase,
}

async fn change_phase(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Body(req): Body<PhaseRequest>,
) -> ApiResult<Json<Session>> {
    let session = mutate(&state, &id, |s, engine| {
        s.transition(req.target, engine)?;
        Ok(s.clone())
    })
    .await?;
    log::info!("session {id} moved to {}", req.target);
    Ok(Json(session))
}

async fn add_participant(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Body(participant): Body<Participant>,
) -> ApiResult<(StatusCode, Json<Participant>)> {
    let added = participant.clone();
    mutate(&state, &id, |s, _| s.add_participant(participant)).await?;
    Ok((StatusCode::CREATED, Json(added)))
}

async fn submit_assessment(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Body(assessment): Body<Assessment>,
) -> ApiResult<(StatusCode, Json<Assessment>)> {
    let submitted = assessment.clone();
    mutate(&state, &id, |s, _| s.submit_assessment(assessment)).await?;
    Ok((StatusCode::CREATED, Json(submitted)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MessageRequest {
    participant: String,
    alternative: String,
    text: String,
}

#[derive(Serialize)]
struct PostedMessage {
    message: Message,
    affect: AffectScore,
}

async fn post_message(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Body(req): Body<MessageRequest>,
) -> ApiResult<(StatusCode, Json<PostedMessage>)> {
    let posted = mutate(&state, &id, |s, engine| {
        s.post_message(&req.participant, &req.alternative, &req.text, Utc::now())?;
        let message = s.messages.last().cloned().expect("message was just pushed");
        let affect = engine.affect.score(&message.text, s.affect);
        Ok(PostedMessage { message, affect })
    })
    .await?;
    Ok((StatusCode::CREATED, Json(posted)))
}

async fn compute_ranking(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<RankingResult>> {
    let ranking = mutate(&state, &id, |s, engine| s.compute_ranking(engine).cloned()).await?;
    Ok(Json(ranking))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FeedbackRequest {
    participant: String,
    agreement: f64,
    confidence: f64,
}

async fn submit_feedback(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Body(req): Body<FeedbackRequest>,
) -> ApiResult<(StatusCode, Json<FeedbackEntry>)> {
    let score = mutate(&state, &id, |s, engine| {
        s.submit_feedback(&req.participant, req.agreement, req.confidence, engine)
    })
    .await?;
    Ok((
        StatusCode::CREATED,
        Json(FeedbackEntry {
            participant: req.participant,
            agreement: req.agreement,
            confidence: req.confidence,
            score: Some(score),
        }),
    ))
}

async fn consensus(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<ConsensusReport>> {
    let report = mutate(&state, &id, |s, engine| s.consensus_report(engine).cloned()).await?;
    Ok(Json(report))
}
