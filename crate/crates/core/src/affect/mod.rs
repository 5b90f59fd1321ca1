//! Sentiment and emotion scoring of chat messages.

mod emotion;
mod sentiment;
mod tokenize;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use emotion::{emotion_score, Emotion, EmotionLexicon, EmotionVector};
pub use sentiment::SentimentLexicon;
pub use tokenize::{tokenize, Token, Tokenized};

#[derive(Debug, Error, PartialEq)]
pub enum AffectError {
    #[error("invalid affect weights: alpha={alpha}, beta={beta}")]
    InvalidWeights { alpha: f64, beta: f64 },
    #[error("{source_name}:{line}: {reason}")]
    Lexicon {
        source_name: String,
        line: usize,
        reason: String,
    },
    #[error("cannot read lexicon {path}: {reason}")]
    Unreadable { path: String, reason: String },
}

/// Weights of sentiment and emotion in the fused score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct AffectWeights {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawWeights> for AffectWeights {
    type Error = AffectError;
    fn try_from(raw: RawWeights) -> Result<Self, Self::Error> {
        Self::new(raw.alpha, raw.beta)
    }
}

impl From<AffectWeights> for RawWeights {
    fn from(w: AffectWeights) -> Self {
        Self {
            alpha: w.alpha,
            beta: w.beta,
        }
    }
}

impl AffectWeights {
    pub const FUSED: Self = Self {
        alpha: 0.6,
        beta: 0.4,
    };
    pub const SENTIMENT_ONLY: Self = Self {
        alpha: 1.0,
        beta: 0.0,
    };

    pub fn new(alpha: f64, beta: f64) -> Result<Self, AffectError> {
        let ok = alpha.is_finite()
            && beta.is_finite()
            && alpha >= 0.0
            && beta >= 0.0
            && (alpha + beta - 1.0).abs() <= 1e-9;
        if ok {
            Ok(Self { alpha, beta })
        } else {
            Err(AffectError::InvalidWeights { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for AffectWeights {
    fn default() -> Self {
        Self::FUSED
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffectScore {
    pub sentiment: f64,
    pub emotion: f64,
    pub fused: f64,
    pub alpha: f64,
    pub beta: f64,
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

/// `SP = alpha * S + beta * E`, everything clamped to `[-1, 1]`.
pub fn fuse_affect(sentiment: f64, emotion: f64, weights: AffectWeights) -> AffectScore {
    let sentiment = clamp_unit(sentiment);
    let emotion = clamp_unit(emotion);
    AffectScore {
        sentiment,
        emotion,
        fused: clamp_unit(weights.alpha * sentiment + weights.beta * emotion),
        alpha: weights.alpha,
        beta: weights.beta,
    }
}

/// Both lexicons together.
#[derive(Debug, Clone)]
pub struct AffectAnalyzer {
    pub sentiment: SentimentLexicon,
    pub emotion: EmotionLexicon,
}

impl AffectAnalyzer {
    pub fn shipped() -> Self {
        Self {
            sentiment: SentimentLexicon::shipped().clone(),
            emotion: EmotionLexicon::shipped().clone(),
        }
    }

    /// Loads either lexicon from a file, falling back to the bundled one.
    pub fn load(sentiment: Option<&Path>, emotion: Option<&Path>) -> Result<Self, AffectError> {
        Ok(Self {
            sentiment: match sentiment {
                Some(p) => SentimentLexicon::load(p)?,
                None => SentimentLexicon::shipped().clone(),
            },
            emotion: match emotion {
                Some(p) => EmotionLexicon::load(p)?,
                None => EmotionLexicon::shipped().clone(),
            },
        })
    }

    pub fn score(&self, text: &str, weights: AffectWeights) -> AffectScore {
        let s = self.sentiment.compound(text);
        let e = emotion_score(&self.emotion.vector(text));
        fuse_affect(s, e, weights)
    }
}

pub(crate) fn read_lexicon(path: &Path) -> Result<String, AffectError> {
    std::fs::read_to_string(path).map_err(|e| AffectError::Unreadable {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Non-empty, non-comment lines split at the first tab.
pub(crate) fn lexicon_entries<'a>(
    text: &'a str,
    source_name: &'a str,
) -> impl Iterator<Item = Result<(usize, &'a str, &'a str), AffectError>> + 'a {
    text.lines().enumerate().filter_map(move |(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        let mut cols = line.split('\t');
        let token = cols.next().unwrap_or_default();
        Some(match cols.next() {
            Some(value) if !token.is_empty() => Ok((i + 1, token, value.trim())),
            _ => Err(AffectError::Lexicon {
                source_name: source_name.to_string(),
                line: i + 1,
                reason: "expected `token<TAB>value`".into(),
            }),
        })
    })
}
