//! Decision sessions: intake, the phase machine and the session document.
//!
//! Every mutating operation validates first and only then touches the
//! session, so a rejected request leaves it unchanged.

use std::collections::HashSet;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affect::AffectWeights;
use crate::consensus::{in_feedback_range, ConsensusError, ConsensusReport, ConsensusThresholds};
use crate::decision::DecisionError;
use crate::pipeline::{Engine, RankingResult};
use crate::preference::{
    assessment_vector, check_weights, unique_ids, validate_setup, Alternative, Assessment,
    FeatureSpec, PreferenceError,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_MESSAGE_CHARS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Setup,
    Voting,
    Discussion,
    Ranking,
    Feedback,
    Closed,
}

impl Phase {
    pub const ALL: [Phase; 6] = [
        Phase::Setup,
        Phase::Voting,
        Phase::Discussion,
        Phase::Ranking,
        Phase::Feedback,
        Phase::Closed,
    ];

    pub fn next(self) -> Option<Phase> {
        match self {
            Phase::Setup => Some(Phase::Voting),
            Phase::Voting => Some(Phase::Discussion),
            Phase::Discussion => Some(Phase::Ranking),
            Phase::Ranking => Some(Phase::Feedback),
            Phase::Feedback => Some(Phase::Closed),
            Phase::Closed => None,
        }
    }

    /// Forward by one step, or Feedback back to Discussion.
    pub fn can_transition(self, to: Phase) -> bool {
        self.next() == Some(to) || (self == Phase::Feedback && to == Phase::Discussion)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Setup => "setup",
            Phase::Voting => "voting",
            Phase::Discussion => "discussion",
            Phase::Ranking => "ranking",
            Phase::Feedback => "feedback",
            Phase::Closed => "closed",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Conflict,
    Invalid,
    Internal,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("phase violation: cannot {action} during {phase}")]
    PhaseViolation { action: &'static str, phase: Phase },
    #[error("phase violation: no transition from {from} to {to}")]
    IllegalTransition { from: Phase, to: Phase },
    #[error("participant `{0}` is already registered")]
    DuplicateParticipant(String),
    #[error("late joiner: participants cannot register during {0}")]
    LateJoiner(Phase),
    #[error("already voted: participant `{0}`")]
    AlreadyVoted(String),
    #[error("participant `{0}` already gave feedback")]
    DuplicateFeedback(String),
    #[error("unknown participant `{0}`")]
    UnknownParticipant(String),
    #[error("unknown alternative `{0}`")]
    UnknownAlternative(String),
    #[error("invalid participant: {0}")]
    InvalidParticipant(String),
    #[error("invalid message: {0}")]
    InvalidMessage(String),
    #[error("panel incomplete: no assessment from {}", .0.join(", "))]
    PanelIncomplete(Vec<String>),
    #[error("empty panel")]
    EmptyPanel,
    #[error("ranking has not been computed")]
    RankingMissing,
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("invalid session document: {0}")]
    Document(String),
    #[error(transparent)]
    Preference(#[from] PreferenceError),
    #[error(transparent)]
    Consensus(#[from] ConsensusError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
}

impl SessionError {
    pub fn kind(&self) -> ErrorKind {
        use SessionError::*;
        match self {
            PhaseViolation { .. }
            | IllegalTransition { .. }
            | DuplicateParticipant(_)
            | LateJoiner(_)
            | AlreadyVoted(_)
            | DuplicateFeedback(_)
            | PanelIncomplete(_)
            | EmptyPanel
            | RankingMissing => ErrorKind::Conflict,
            Preference(PreferenceError::EmptyPanel) => ErrorKind::Conflict,
            Consensus(ConsensusError::InsufficientFeedback(_)) => ErrorKind::Conflict,
            Consensus(ConsensusError::OutOfRange { .. } | ConsensusError::InvalidThresholds) => {
                ErrorKind::Invalid
            }
            Consensus(_) | Decision(_) => ErrorKind::Internal,
            UnknownParticipant(_)
            | UnknownAlternative(_)
            | InvalidParticipant(_)
            | InvalidMessage(_)
            | SchemaVersion(_)
            | Document(_)
            | Preference(_) => ErrorKind::Invalid,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(w: &f64) -> bool {
    *w == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Participant {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight: f64,
}

impl Participant {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: String::new(),
            weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Message {
    pub participant: String,
    pub alternative: String,
    pub text: String,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackEntry {
    pub participant: String,
    pub agreement: f64,
    pub confidence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
}

/// What it takes to open a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub features: Vec<FeatureSpec>,
    pub alternatives: Vec<Alternative>,
    #[serde(default)]
    pub participants: Vec<Participant>,
    #[serde(default)]
    pub affect: Option<AffectWeights>,
    #[serde(default)]
    pub consensus_thresholds: Option<ConsensusThresholds>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Session {
    pub schema_version: u32,
    pub id: String,
    pub phase: Phase,
    pub features: Vec<FeatureSpec>,
    pub alternatives: Vec<Alternative>,
    #[serde(default)]
    pub participants: Vec<Participant>,
    #[serde(default)]
    pub assessments: Vec<Assessment>,
    #[serde(default)]
    pub messages: Vec<Message>,
    #[serde(default)]
    pub affect: AffectWeights,
    #[serde(default)]
    pub consensus_thresholds: ConsensusThresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<RankingResult>,
    #[serde(default)]
    pub feedback: Vec<FeedbackEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consensus: Option<ConsensusReport>,
}

impl Session {
    pub fn new(
        id: impl Into<String>,
        config: SessionConfig,
        default_affect: AffectWeights,
    ) -> Result<Self, SessionError> {
        let session = Self {
            schema_version: SCHEMA_VERSION,
            id: id.into(),
            phase: Phase::Setup,
            features: config.features,
            alternatives: config.alternatives,
            participants: config.participants,
            assessments: Vec::new(),
            messages: Vec::new(),
            affect: config.affect.unwrap_or(default_affect),
            consensus_thresholds: config.consensus_thresholds.unwrap_or_default(),
            ranking: None,
            feedback: Vec::new(),
            consensus: None,
        };
        session.validate()?;
        Ok(session)
    }

    /// Parses and validates a session document. Errors name the offending
    /// field path and position.
    pub fn from_json(text: &str) -> Result<Self, SessionError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let session: Session = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            SessionError::Document(if path == "." {
                inner.to_string()
            } else {
                format!("{path}: {inner}")
            })
        })?;
        session.validate()?;
        Ok(session)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sessions always serialize")
    }

    /// Checks the whole document: setup, references, domains, duplicates.
    pub fn validate(&self) -> Result<(), SessionError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(SessionError::SchemaVersion(self.schema_version));
        }
        validate_setup(&self.features, &self.alternatives)?;
        self.consensus_thresholds.validate()?;
        unique_ids(
            "participant",
            self.participants.iter().map(|p| p.id.as_str()),
        )?;
        for p in &self.participants {
            check_participant(p)?;
        }
        let mut voted = HashSet::new();
        for a in &self.assessments {
            self.participant(&a.participant)?;
            if !voted.insert(a.participant.as_str()) {
                return Err(SessionError::AlreadyVoted(a.participant.clone()));
            }
            assessment_vector(&self.features, a)?;
        }
        for m in &self.messages {
            self.participant(&m.participant)?;
            self.alternative(&m.alternative)?;
            check_text(&m.text)?;
        }
        let mut gave = HashSet::new();
        for f in &self.feedback {
            self.participant(&f.participant)?;
            if !gave.insert(f.participant.as_str()) {
                return Err(SessionError::DuplicateFeedback(f.participant.clone()));
            }
            check_feedback_range(f.agreement, f.confidence)?;
        }
        Ok(())
    }

    fn participant(&self, id: &str) -> Result<&Participant, SessionError> {
        self.participants
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| SessionError::UnknownParticipant(id.to_string()))
    }

    fn alternative(&self, id: &str) -> Result<&Alternative, SessionError> {
        self.alternatives
            .iter()
            .find(|a| a.id == id)
            .ok_or_else(|| SessionError::UnknownAlternative(id.to_string()))
    }

    fn require(&self, action: &'static str, phases: &[Phase]) -> Result<(), SessionError> {
        if phases.contains(&self.phase) {
            Ok(())
        } else {
            Err(SessionError::PhaseViolation {
                action,
                phase: self.phase,
            })
        }
    }

    /// Participants without an assessment, in registration order.
    pub fn missing_assessments(&self) -> Vec<String> {
        self.participants
            .iter()
            .filter(|p| !self.assessments.iter().any(|a| a.participant == p.id))
            .map(|p| p.id.clone())
            .collect()
    }

    pub fn add_participant(&mut self, participant: Participant) -> Result<(), SessionError> {
        if !matches!(self.phase, Phase::Setup | Phase::Voting) {
            return Err(SessionError::LateJoiner(self.phase));
        }
        check_participant(&participant)?;
        if self.participants.iter().any(|p| p.id == participant.id) {
            return Err(SessionError::DuplicateParticipant(participant.id));
        }
        self.participants.push(participant);
        Ok(())
    }

    pub fn submit_assessment(&mut self, assessment: Assessment) -> Result<(), SessionError> {
        self.require("submit assessments", &[Phase::Voting])?;
        self.participant(&assessment.participant)?;
        if self
            .assessments
            .iter()
            .any(|a| a.participant == assessment.participant)
        {
            return Err(SessionError::AlreadyVoted(assessment.participant));
        }
        assessment_vector(&self.features, &assessment)?;
        self.assessments.push(assessment);
        Ok(())
    }

    pub fn post_message(
        &mut self,
        participant: &str,
        alternative: &str,
        text: &str,
        timestamp: DateTime<Utc>,
    ) -> Result<(), SessionError> {
        self.require("post messages", &[Phase::Discussion])?;
        self.participant(participant)?;
        self.alternative(alternative)?;
        check_text(text)?;
        self.messages.push(Message {
            participant: participant.to_string(),
            alternative: alternative.to_string(),
            text: text.to_string(),
            timestamp,
        });
        Ok(())
    }

    /// Moves to `target`. Leaving Ranking needs a computed ranking; closing
    /// computes the consensus report; reopening discards ranking, feedback
    /// and report.
    pub fn transition(&mut self, target: Phase, engine: &Engine) -> Result<(), SessionError> {
        if !self.phase.can_transition(target) {
            return Err(SessionError::IllegalTransition {
                from: self.phase,
                to: target,
            });
        }
        match (self.phase, target) {
            (Phase::Ranking, Phase::Feedback) if self.ranking.is_none() => {
                return Err(SessionError::RankingMissing)
            }
            (Phase::Feedback, Phase::Closed) => {
                self.consensus = Some(engine.consensus(self)?);
            }
            (Phase::Feedback, Phase::Discussion) => {
                self.ranking = None;
                self.feedback.clear();
                self.consensus = None;
            }
            _ => {}
        }
        self.phase = target;
        Ok(())
    }

    pub fn compute_ranking(&mut self, engine: &Engine) -> Result<&RankingResult, SessionError> {
        self.require("compute the ranking", &[Phase::Ranking])?;
        let result = engine.rank(self)?;
        Ok(self.ranking.insert(result))
    }

    /// Records feedback and returns its score.
    pub fn submit_feedback(
        &mut self,
        participant: &str,
        agreement: f64,
        confidence: f64,
        engine: &Engine,
    ) -> Result<f64, SessionError> {
        self.require("submit feedback", &[Phase::Feedback])?;
        self.participant(participant)?;
        if self.feedback.iter().any(|f| f.participant == participant) {
            return Err(SessionError::DuplicateFeedback(participant.to_string()));
        }
        check_feedback_range(agreement, confidence)?;
        let score = engine.feedback.feedback_score(agreement, confidence)?;
        self.feedback.push(FeedbackEntry {
            participant: participant.to_string(),
            agreement,
            confidence,
            score: Some(score),
        });
        self.consensus = None;
        Ok(score)
    }

    pub fn consensus_report(&mut self, engine: &Engine) -> Result<&ConsensusReport, SessionError> {
        self.require("report consensus", &[Phase::Feedback, Phase::Closed])?;
        let report = engine.consensus(self)?;
        Ok(self.consensus.insert(report))
    }
}

fn check_participant(p: &Participant) -> Result<(), SessionError> {
    if p.id.trim().is_empty() {
        return Err(SessionError::InvalidParticipant("empty id".into()));
    }
    check_weights(&[p.weight]).map_err(|_| {
        SessionError::InvalidParticipant(format!("weight {} of `{}`", p.weight, p.id))
    })?;
    Ok(())
}

fn check_text(text: &str) -> Result<(), SessionError> {
    if text.trim().is_empty() {
        return Err(SessionError::InvalidMessage("empty text".into()));
    }
    let n = text.chars().count();
    if n > MAX_MESSAGE_CHARS {
        return Err(SessionError::InvalidMessage(format!(
            "{n} characters, at most {MAX_MESSAGE_CHARS} allowed"
        )));
    }
    Ok(())
}

fn check_feedback_range(agreement: f64, confidence: f64) -> Result<(), SessionError> {
    if in_feedback_range(agreement) && in_feedback_range(confidence) {
        Ok(())
    } else {
        Err(ConsensusError::OutOfRange {
            agreement,
            confidence,
        }
        .into())
    }
}
