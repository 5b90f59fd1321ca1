//! The full decision pipeline over a session: affect scoring, voting
//! preferences, total preference, ranking and consensus.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::affect::{AffectAnalyzer, AffectWeights};
use crate::consensus::{ConsensusReport, ConsensusThresholds, FeedbackFis};
use crate::decision::{rank, PreferenceFis, RankedAlternative};
use crate::exec::Execution;
use crate::preference::{aggregate, assessment_vector, normalize_features};
use crate::session::{FeedbackEntry, Session, SessionError, SCHEMA_VERSION};

/// Everything needed to evaluate sessions. Immutable once built.
#[derive(Debug, Clone)]
pub struct Engine {
    pub preference: PreferenceFis,
    pub feedback: FeedbackFis,
    pub affect: AffectAnalyzer,
    pub exec: Execution,
}

impl Engine {
    pub fn shipped() -> Self {
        Self {
            preference: PreferenceFis::shipped(),
            feedback: FeedbackFis::shipped(),
            affect: AffectAnalyzer::shipped(),
            exec: Execution::default(),
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    /// Ranks the session's alternatives from its intake data.
    pub fn rank(&self, session: &Session) -> Result<RankingResult, SessionError> {
        if session.participants.is_empty() {
            return Err(SessionError::EmptyPanel);
        }
        let missing = session.missing_assessments();
        if !missing.is_empty() {
            return Err(SessionError::PanelIncomplete(missing));
        }
        let normalized = normalize_features(&session.features, &session.alternatives)?;
        let assessments = session
            .participants
            .iter()
            .map(|p| {
                let a = session
                    .assessments
                    .iter()
                    .find(|a| a.participant == p.id)
                    .expect("checked above");
                assessment_vector(&session.features, a)
            })
            .collect::<Result<Vec<_>, _>>()?;

        let weights = session.affect;
        let messages: Vec<MessageScore> = self.exec.map(&session.messages, |m| {
            let score = self.affect.score(&m.text, weights);
            MessageScore {
                participant: m.participant.clone(),
                alternative: m.alternative.clone(),
                text: m.text.clone(),
                sentiment: score.sentiment,
                emotion: score.emotion,
                fused: score.fused,
            }
        });
        let affect: Vec<Vec<Option<f64>>> = session
            .participants
            .iter()
            .map(|p| {
                session
                    .alternatives
                    .iter()
                    .map(|a| {
                        let cell: Vec<f64> = messages
                            .iter()
                            .filter(|m| m.participant == p.id && m.alternative == a.id)
                            .map(|m| m.fused)
                            .collect();
                        (!cell.is_empty()).then(|| cell.iter().sum::<f64>() / cell.len() as f64)
                    })
                    .collect()
            })
            .collect();

        let panel_weights: Vec<f64> = session.participants.iter().map(|p| p.weight).collect();
        let matrix = aggregate(&normalized.matrix, &assessments, &affect, &panel_weights)?;
        let pairs: Vec<(f64, f64)> = matrix
            .voting
            .iter()
            .copied()
            .zip(matrix.collective_sentiment.iter().copied())
            .collect();
        let totals = self.preference.total_preferences(&pairs, self.exec)?;
        let ids: Vec<String> = session.alternatives.iter().map(|a| a.id.clone()).collect();
        let ranking = rank(&ids, &totals)?;

        let alternatives = session
            .alternatives
            .iter()
            .enumerate()
            .map(|(i, a)| AlternativeResult {
                id: a.id.clone(),
                normalized: normalized.matrix[i].clone(),
                raw: matrix.raw.iter().map(|row| row[i]).collect(),
                scaled: matrix.scaled.iter().map(|row| row[i]).collect(),
                voting: matrix.voting[i],
                sentiment: matrix.sentiment.iter().map(|row| row[i]).collect(),
                sentiment_preference: matrix.collective_sentiment[i],
                total: totals[i],
            })
            .collect();
        Ok(RankingResult {
            features: session.features.iter().map(|f| f.id.clone()).collect(),
            participants: session.participants.iter().map(|p| p.id.clone()).collect(),
            weights: matrix.weights,
            alternatives,
            messages,
            order: ranking.order,
            top_ranked: ranking.top_ranked,
            warnings: normalized.warnings,
        })
    }

    /// Feedback entries with freshly computed scores.
    pub fn score_feedback(&self, session: &Session) -> Result<Vec<FeedbackEntry>, SessionError> {
        session
            .feedback
            .iter()
            .map(|f| {
                Ok(FeedbackEntry {
                    score: Some(self.feedback.feedback_score(f.agreement, f.confidence)?),
                    ..f.clone()
                })
            })
            .collect()
    }

    pub fn consensus(&self, session: &Session) -> Result<ConsensusReport, SessionError> {
        let scores = self
            .score_feedback(session)?
            .iter()
            .filter_map(|f| f.score)
            .collect();
        Ok(ConsensusReport::from_scores(
            scores,
            &session.consensus_thresholds,
        )?)
    }

    /// Runs everything the session has data for. The consensus section is
    /// absent with fewer than two feedback entries.
    pub fn report(&self, session: &Session) -> Result<Report, SessionError> {
        let ranking = self.rank(session)?;
        let feedback = self.score_feedback(session)?;
        let consensus = if feedback.len() >= 2 {
            Some(self.consensus(session)?)
        } else {
            None
        };
        Ok(Report {
            schema_version: SCHEMA_VERSION,
            affect: session.affect,
            consensus_thresholds: session.consensus_thresholds,
            ranking,
            feedback,
            consensus,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageScore {
    pub participant: String,
    pub alternative: String,
    pub text: String,
    pub sentiment: f64,
    pub emotion: f64,
    pub fused: f64,
}

/// Per-alternative figures; vectors run over participants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlternativeResult {
    pub id: String,
    pub normalized: Vec<u8>,
    pub raw: Vec<i32>,
    pub scaled: Vec<f64>,
    pub voting: f64,
    pub sentiment: Vec<Option<f64>>,
    pub sentiment_preference: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingResult {
    pub features: Vec<String>,
    pub participants: Vec<String>,
    pub weights: Vec<f64>,
    pub alternatives: Vec<AlternativeResult>,
    pub messages: Vec<MessageScore>,
    pub order: Vec<RankedAlternative>,
    pub top_ranked: String,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub affect: AffectWeights,
    pub consensus_thresholds: ConsensusThresholds,
    pub ranking: RankingResult,
    pub feedback: Vec<FeedbackEntry>,
    pub consensus: Option<ConsensusReport>,
}

impl Report {
    /// Pretty JSON with a trailing newline; field order is fixed.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn render_table(&self) -> String {
        let r = &self.ranking;
        let mut out = String::new();
        let _ = writeln!(out, "Normalized features ({})", r.features.join(", "));
        for a in &r.alternatives {
            let bits: Vec<String> = a.normalized.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "  {:<12} {}", a.id, bits.join(" "));
        }

        let _ = writeln!(out, "\nVoting preference (raw / scaled per participant)");
        let _ = writeln!(
            out,
            "  {:<12} {}  {:>8}",
            "",
            r.participants.join(" "),
            "average"
        );
        for a in &r.alternatives {
            let cells: Vec<String> = a
                .raw
                .iter()
                .zip(&a.scaled)
                .map(|(raw, scaled)| format!("{raw:>2}/{scaled:<3}"))
                .collect();
            let _ = writeln!(out, "  {:<12} {}  {:>8.2}", a.id, cells.join(" "), a.voting);
        }

        let _ = writeln!(
            out,
            "\nSentiment preference (alpha {}, beta {})",
            self.affect.alpha(),
            self.affect.beta()
        );
        for a in &r.alternatives {
            let cells: Vec<String> = a
                .sentiment
                .iter()
                .map(|s| s.map_or("    -  ".to_string(), |v| format!("{v:>7.4}")))
                .collect();
            let _ = writeln!(
                out,
                "  {:<12} {}  {:>8.4}",
                a.id,
                cells.join(" "),
                a.sentiment_preference
            );
        }

        let _ = writeln!(out, "\nRanking");
        for (i, x) in r.order.iter().enumerate() {
            let _ = writeln!(out, "  {}. {:<12} {:.4}", i + 1, x.alternative, x.total);
        }
        let _ = writeln!(out, "  top: {}", r.top_ranked);

        match &self.consensus {
            Some(c) => {
                let _ = writeln!(out, "\nFeedback");
                for f in &self.feedback {
                    let _ = writeln!(
                        out,
                        "  {:<12} agreement {:>4} confidence {:>4} -> {:.4}",
                        f.participant,
                        f.agreement,
                        f.confidence,
                        f.score.unwrap_or(f64::NAN)
                    );
                }
                let _ = writeln!(
                    out,
                    "\nConsensus: {} (Q1 {:.4}, Q3 {:.4}, IQR {:.4})",
                    c.level.display_label(),
                    c.q1,
                    c.q3,
                    c.iqr
                );
                if let Some(note) = &c.note {
                    let _ = writeln!(out, "  note: {note}");
                }
            }
            None => {
                let _ = writeln!(
                    out,
                    "\nConsensus: not available (fewer than 2 feedback entries)"
                );
            }
        }
        for w in &r.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
