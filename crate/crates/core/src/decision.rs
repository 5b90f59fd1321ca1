//! Total preference per alternative and the final ranking.
//!
//! The preference FIS takes the collective voting preference (0-100) and the
//! collective sentiment preference (-1..1) of an alternative and infers a
//! total preference on 0-10. Its 15 rules cover the 5 voting terms by the 3
//! sentiment terms.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::fuzzy::{Clause, FuzzyError, Rule, RuleBase};

pub const VOTING: &str = "voting_preference";
pub const SENTIMENT: &str = "sentiment_preference";
pub const TOTAL: &str = "total_preference";

pub const VOTING_TERMS: [&str; 5] = ["very_low", "low", "medium", "high", "very_high"];
pub const SENTIMENT_TERMS: [&str; 3] = ["negative", "neutral", "positive"];
pub const TOTAL_TERMS: [&str; 5] = ["very_weak", "weak", "moderate", "strong", "very_strong"];

const SHIPPED_CONFIG: &str = include_str!("../data/preference_fis.toml");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecisionError {
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("preference FIS must have inputs `{VOTING}`, `{SENTIMENT}` and output `{TOTAL}`")]
    WrongShape,
    #[error("no alternatives to rank")]
    NoAlternatives,
    #[error("{alternatives} alternatives but {totals} totals")]
    LengthMismatch { alternatives: usize, totals: usize },
}

/// The default rule matrix: the consequent steps up one total-preference
/// term per voting term and shifts by one for negative/positive sentiment,
/// saturating at both ends. Medium voting with neutral sentiment is moderate.
pub fn default_rules() -> Vec<Rule> {
    let mut rules = Vec::with_capacity(15);
    for (vi, v) in VOTING_TERMS.iter().enumerate() {
        for (si, s) in SENTIMENT_TERMS.iter().enumerate() {
            let out = (vi + si).saturating_sub(1).min(TOTAL_TERMS.len() - 1);
            rules.push(Rule {
                antecedents: vec![Clause::new(VOTING, *v), Clause::new(SENTIMENT, *s)],
                consequent: Clause::new(TOTAL, TOTAL_TERMS[out]),
            });
        }
    }
    rules
}

/// Voting x sentiment -> total preference.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceFis {
    rule_base: RuleBase,
}

impl PreferenceFis {
    pub fn new(rule_base: RuleBase) -> Result<Self, DecisionError> {
        let names: Vec<&str> = rule_base.inputs().iter().map(|v| v.name()).collect();
        if names != [VOTING, SENTIMENT] || rule_base.output().name() != TOTAL {
            return Err(DecisionError::WrongShape);
        }
        Ok(Self { rule_base })
    }

    /// The calibrated configuration bundled with the crate.
    pub fn shipped() -> Self {
        Self::from_toml_str(SHIPPED_CONFIG).expect("bundled preference FIS is valid")
    }

    pub fn shipped_toml() -> &'static str {
        SHIPPED_CONFIG
    }

    pub fn from_toml_str(text: &str) -> Result<Self, DecisionError> {
        Self::new(RuleBase::from_toml_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DecisionError> {
        Self::new(RuleBase::load(path)?)
    }

    pub fn rule_base(&self) -> &RuleBase {
        &self.rule_base
    }

    /// Total preference in `[0, 10]`; inputs are clamped to their universes.
    pub fn total_preference(&self, voting: f64, sentiment: f64) -> Result<f64, DecisionError> {
        Ok(self.rule_base.infer_crisp(&[voting, sentiment])?)
    }

    /// Evaluates a batch of `(voting, sentiment)` pairs.
    pub fn total_preferences(
        &self,
        pairs: &[(f64, f64)],
        exec: Execution,
    ) -> Result<Vec<f64>, DecisionError> {
        exec.map(pairs, |&(v, s)| self.total_preference(v, s))
            .into_iter()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedAlternative {
    pub alternative: String,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub order: Vec<RankedAlternative>,
    pub top_ranked: String,
}

/// Sorts by total preference, highest first; ties go to the smaller id.
pub fn rank(alternatives: &[String], totals: &[f64]) -> Result<Ranking, DecisionError> {
    if alternatives.is_empty() {
        return Err(DecisionError::NoAlternatives);
    }
    if alternatives.len() != totals.len() {
        return Err(DecisionError::LengthMismatch {
            alternatives: alternatives.len(),
            totals: totals.len(),
        });
    }
    let mut order: Vec<RankedAlternative> = alternatives
        .iter()
        .zip(totals)
        .map(|(a, &t)| RankedAlternative {
            alternative: a.clone(),
            total: t,
        })
        .collect();
    order.sort_by(|x, y| {
        y.total
            .total_cmp(&x.total)
            .then_with(|| x.alternative.cmp(&y.alternative))
    });
    let top_ranked = order[0].alternative.clone();
    Ok(Ranking { order, top_ranked })
}
