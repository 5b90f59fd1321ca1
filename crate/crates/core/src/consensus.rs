//! Post-decision consensus measurement.
//!
//! Each participant reports agreement with the chosen alternative and
//! confidence in that agreement, both on `[0, 10]`. The feedback FIS maps the
//! pair to a feedback score; the spread of those scores, measured by the
//! interquartile range, classifies the group's consensus.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fuzzy::{Clause, FuzzyError, Rule, RuleBase};

pub const AGREEMENT: &str = "agreement";
pub const CONFIDENCE: &str = "confidence";
pub const FEEDBACK: &str = "feedback";

pub const AGREEMENT_TERMS: [&str; 3] = ["disagree", "neutral", "agree"];
pub const CONFIDENCE_TERMS: [&str; 3] = ["unsure", "neutral", "sure"];
pub const FEEDBACK_TERMS: [&str; 3] = ["weak", "moderate", "strong"];

/// (agreement, confidence) -> feedback.
pub const FEEDBACK_RULES: [(&str, &str, &str); 9] = [
    ("agree", "unsure", "moderate"),
    ("agree", "neutral", "moderate"),
    ("agree", "sure", "strong"),
    ("neutral", "unsure", "moderate"),
    ("neutral", "neutral", "moderate"),
    ("neutral", "sure", "strong"),
    ("disagree", "unsure", "moderate"),
    ("disagree", "neutral", "weak"),
    ("disagree", "sure", "weak"),
];

const SHIPPED_CONFIG: &str = include_str!("../data/feedback_fis.toml");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConsensusError {
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("feedback FIS must have inputs `{AGREEMENT}`, `{CONFIDENCE}` and output `{FEEDBACK}`")]
    WrongShape,
    #[error("feedback out of range: agreement {agreement}, confidence {confidence} (both must be in [0, 10])")]
    OutOfRange { agreement: f64, confidence: f64 },
    #[error("insufficient feedback: need at least 2 scores, got {0}")]
    InsufficientFeedback(usize),
    #[error("scores must be finite")]
    NonFiniteScore,
    #[error("negative IQR {0}")]
    NegativeIqr(f64),
    #[error("invalid consensus thresholds: need 0 <= high_max <= medium_max")]
    InvalidThresholds,
}

pub fn feedback_rules() -> Vec<Rule> {
    FEEDBACK_RULES
        .iter()
        .map(|(a, c, f)| Rule {
            antecedents: vec![Clause::new(AGREEMENT, *a), Clause::new(CONFIDENCE, *c)],
            consequent: Clause::new(FEEDBACK, *f),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackFis {
    rule_base: RuleBase,
}

impl FeedbackFis {
    pub fn new(rule_base: RuleBase) -> Result<Self, ConsensusError> {
        let names: Vec<&str> = rule_base.inputs().iter().map(|v| v.name()).collect();
        if names != [AGREEMENT, CONFIDENCE] || rule_base.output().name() != FEEDBACK {
            return Err(ConsensusError::WrongShape);
        }
        Ok(Self { rule_base })
    }

    pub fn shipped() -> Self {
        Self::from_toml_str(SHIPPED_CONFIG).expect("bundled feedback FIS is valid")
    }

    pub fn shipped_toml() -> &'static str {
        SHIPPED_CONFIG
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConsensusError> {
        Self::new(RuleBase::from_toml_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConsensusError> {
        Self::new(RuleBase::load(path)?)
    }

    pub fn rule_base(&self) -> &RuleBase {
        &self.rule_base
    }

    pub fn feedback_score(&self, agreement: f64, confidence: f64) -> Result<f64, ConsensusError> {
        if !in_feedback_range(agreement) || !in_feedback_range(confidence) {
            return Err(ConsensusError::OutOfRange {
                agreement,
                confidence,
            });
        }
        Ok(self.rule_base.infer_crisp(&[agreement, confidence])?)
    }
}

pub fn in_feedback_range(v: f64) -> bool {
    (0.0..=10.0).contains(&v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
}

/// Quantile by linear interpolation between order statistics: position
/// `q * (n - 1)` in the sorted sample.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn compute_iqr(scores: &[f64]) -> Result<Quartiles, ConsensusError> {
    if scores.len() < 2 {
        return Err(ConsensusError::InsufficientFeedback(scores.len()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(ConsensusError::NonFiniteScore);
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    Ok(Quartiles {
        q1,
        q3,
        iqr: q3 - q1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConsensusLevel {
    High,
    Medium,
    None,
}

impl ConsensusLevel {
    /// Human-facing label; the lowest band reads as "Low".
    pub fn display_label(self) -> &'static str {
        match self {
            ConsensusLevel::High => "High",
            ConsensusLevel::Medium => "Medium",
            ConsensusLevel::None => "Low",
        }
    }
}

impl fmt::Display for ConsensusLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConsensusLevel::High => "High",
            ConsensusLevel::Medium => "Medium",
            ConsensusLevel::None => "None",
        })
    }
}

/// Upper IQR bounds (inclusive) of the High and Medium bands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsensusThresholds {
    pub high_max: f64,
    pub medium_max: f64,
}

impl Default for ConsensusThresholds {
    fn default() -> Self {
        Self {
            high_max: 2.0,
            medium_max: 4.0,
        }
    }
}

impl ConsensusThresholds {
    pub fn validate(&self) -> Result<(), ConsensusError> {
        let ok = self.high_max.is_finite()
            && self.medium_max.is_finite()
            && 0.0 <= self.high_max
            && self.high_max <= self.medium_max;
        if ok {
            Ok(())
        } else {
            Err(ConsensusError::InvalidThresholds)
        }
    }

    pub fn classify(&self, iqr: f64) -> Result<ConsensusLevel, ConsensusError> {
        if iqr.is_nan() || iqr < 0.0 {
            return Err(ConsensusError::NegativeIqr(iqr));
        }
        Ok(if iqr <= self.high_max {
            ConsensusLevel::High
        } else if iqr <= self.medium_max {
            ConsensusLevel::Medium
        } else {
            ConsensusLevel::None
        })
    }
}

pub fn classify_consensus(iqr: f64) -> Result<ConsensusLevel, ConsensusError> {
    ConsensusThresholds::default().classify(iqr)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusReport {
    pub scores: Vec<f64>,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub level: ConsensusLevel,
    /// Set when the IQR sits on the boundary where the inclusive band table
    /// and a strict `IQR < high_max` reading would disagree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConsensusReport {
    pub fn from_scores(
        scores: Vec<f64>,
        thresholds: &ConsensusThresholds,
    ) -> Result<Self, ConsensusError> {
        thresholds.validate()?;
        let Quartiles { q1, q3, iqr } = compute_iqr(&scores)?;
        let level = thresholds.classify(iqr)?;
        let note = (iqr >= thresholds.high_max && iqr < thresholds.high_max + 0.01).then(|| {
            format!(
                "IQR {iqr:.4} is at the High/Medium boundary {}; classified {level} with inclusive upper bounds",
                thresholds.high_max
            )
        });
        Ok(Self {
            scores,
            q1,
            q3,
            iqr,
            level,
            note,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iqr_examples() {
        let q = compute_iqr(&[8.14, 8.14, 7.95, 8.14, 7.95]).unwrap();
        assert_eq!(q.q1, 7.95);
        assert_eq!(q.q3, 8.14);
        assert!((q.iqr - 0.19).abs() < 1e-12);

        let flat = compute_iqr(&[3.0; 6]).unwrap();
        assert_eq!(flat.iqr, 0.0);

        let split = compute_iqr(&[0.0, 0.0, 10.0, 10.0]).unwrap();
        assert_eq!((split.q1, split.q3, split.iqr), (0.0, 10.0, 10.0));
    }

    #[test]
    fn iqr_needs_two_scores() {
        assert_eq!(
            compute_iqr(&[1.0]),
            Err(ConsensusError::InsufficientFeedback(1))
        );
        assert_eq!(
            compute_iqr(&[]),
            Err(ConsensusError::InsufficientFeedback(0))
        );
        assert_eq!(
            compute_iqr(&[1.0, f64::NAN]),
            Err(ConsensusError::NonFiniteScore)
        );
    }

    #[test]
    fn classification_bands() {
        assert_eq!(classify_consensus(0.19), Ok(ConsensusLevel::High));
        assert_eq!(classify_consensus(2.0), Ok(ConsensusLevel::High));
        assert_eq!(classify_consensus(2.005), Ok(ConsensusLevel::Medium));
        assert_eq!(classify_consensus(4.0), Ok(ConsensusLevel::Medium));
        assert_eq!(classify_consensus(4.5), Ok(ConsensusLevel::None));
        assert!(classify_consensus(-0.1).is_err());
        assert_eq!(ConsensusLevel::None.display_label(), "Low");
    }

    #[test]
    fn custom_thresholds() {
        let t = ConsensusThresholds {
            high_max: 0.1,
            medium_max: 0.5,
        };
        assert_eq!(t.classify(0.19), Ok(ConsensusLevel::Medium));
        let bad = ConsensusThresholds {
            high_max: 3.0,
            medium_max: 1.0,
        };
        assert_eq!(
            ConsensusReport::from_scores(vec![1.0, 2.0], &bad),
            Err(ConsensusError::InvalidThresholds)
        );
    }

    #[test]
    fn boundary_note() {
        let t = ConsensusThresholds::default();
        let r = ConsensusReport::from_scores(vec![0.0, 0.0, 2.0, 2.0, 2.0], &t).unwrap();
        assert_eq!(r.iqr, 2.0);
        assert_eq!(r.level, ConsensusLevel::High);
        assert!(r.note.is_some());
        let r = ConsensusReport::from_scores(vec![8.14, 8.14, 7.95, 8.14, 7.95], &t).unwrap();
        assert!(r.note.is_none());
    }

    #[test]
    fn feedback_range_checked() {
        let fis = FeedbackFis::shipped();
        assert!(matches!(
            fis.feedback_score(11.0, 5.0),
            Err(ConsensusError::OutOfRange { .. })
        ));
        assert!(fis.feedback_score(-0.5, 5.0).is_err());
        assert!(fis.feedback_score(f64::NAN, 5.0).is_err());
        assert!(fis.feedback_score(0.0, 10.0).is_ok());
    }

    #[test]
    fn shipped_rules_match_table() {
        let fis = FeedbackFis::shipped();
        assert_eq!(fis.rule_base().rules(), feedback_rules().as_slice());
    }
}
