//! Feature normalization, per-expert preference values and their aggregation.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PreferenceError {
    #[error("incomplete alternative `{alternative}`: no value for feature `{feature}`")]
    IncompleteAlternative {
        alternative: String,
        feature: String,
    },
    #[error("alternative `{alternative}` has unknown feature `{feature}`")]
    UnknownFeature {
        alternative: String,
        feature: String,
    },
    #[error("binary feature `{feature}` of `{alternative}` must be 0 or 1, got {value}")]
    NotBinary {
        alternative: String,
        feature: String,
        value: f64,
    },
    #[error("feature `{feature}` of `{alternative}` is not a finite number")]
    NonFinite {
        alternative: String,
        feature: String,
    },
    #[error("duplicate {what} id `{id}`")]
    Duplicate { what: &'static str, id: String },
    #[error("empty {0} id")]
    EmptyId(&'static str),
    #[error("at least {min} {what} required, got {got}")]
    TooFew {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("invalid assessment: {0}")]
    InvalidAssessment(String),
    #[error("vectors of length {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("empty panel")]
    EmptyPanel,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AboveMean,
    BelowMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Continuous,
    Binary,
}

/// A feature of the alternatives. Continuous features are reduced to 0/1
/// by comparing against the mean across alternatives in the favorable
/// direction; binary ones are used as they are.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFeature")]
pub struct FeatureSpec {
    pub id: String,
    pub kind: FeatureKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeature {
    id: String,
    kind: FeatureKind,
    #[serde(default)]
    direction: Option<Direction>,
}

impl TryFrom<RawFeature> for FeatureSpec {
    type Error = String;
    fn try_from(raw: RawFeature) -> Result<Self, Self::Error> {
        match (raw.kind, raw.direction) {
            (FeatureKind::Continuous, None) => {
                Err(format!("continuous feature `{}` needs a direction", raw.id))
            }
            (FeatureKind::Binary, Some(_)) => {
                Err(format!("binary feature `{}` takes no direction", raw.id))
            }
            (kind, direction) => Ok(Self {
                id: raw.id,
                kind,
                direction,
            }),
        }
    }
}

impl FeatureSpec {
    pub fn continuous(id: impl Into<String>, direction: Direction) -> Self {
        Self {
            id: id.into(),
            kind: FeatureKind::Continuous,
            direction: Some(direction),
        }
    }

    pub fn binary(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind: FeatureKind::Binary,
            direction: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Alternative {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
    pub features: BTreeMap<String, f64>,
}

/// One participant's -1/0/1 stance per feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assessment {
    pub participant: String,
    pub values: BTreeMap<String, i8>,
}

/// Checks ids, completeness and binary values of a feature/alternative set.
pub fn validate_setup(
    features: &[FeatureSpec],
    alternatives: &[Alternative],
) -> Result<(), PreferenceError> {
    if features.is_empty() {
        return Err(PreferenceError::TooFew {
            what: "features",
            min: 1,
            got: 0,
        });
    }
    if alternatives.len() < 2 {
        return Err(PreferenceError::TooFew {
            what: "alternatives",
            min: 2,
            got: alternatives.len(),
        });
    }
    unique_ids("feature", features.iter().map(|f| f.id.as_str()))?;
    unique_ids("alternative", alternatives.iter().map(|a| a.id.as_str()))?;
    for alt in alternatives {
        for key in alt.features.keys() {
            if !features.iter().any(|f| &f.id == key) {
                return Err(PreferenceError::UnknownFeature {
                    alternative: alt.id.clone(),
                    feature: key.clone(),
                });
            }
        }
        for f in features {
            let value = feature_value(alt, &f.id)?;
            if f.kind == FeatureKind::Binary && value != 0.0 && value != 1.0 {
                return Err(PreferenceError::NotBinary {
                    alternative: alt.id.clone(),
                    feature: f.id.clone(),
                    value,
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn unique_ids<'a>(
    what: &'static str,
    ids: impl Iterator<Item = &'a str>,
) -> Result<(), PreferenceError> {
    let mut seen = HashSet::new();
    for id in ids {
        if id.trim().is_empty() {
            return Err(PreferenceError::EmptyId(what));
        }
        if !seen.insert(id) {
            return Err(PreferenceError::Duplicate {
                what,
                id: id.to_string(),
            });
        }
    }
    Ok(())
}

fn feature_value(alt: &Alternative, feature: &str) -> Result<f64, PreferenceError> {
    let value =
        *alt.features
            .get(feature)
            .ok_or_else(|| PreferenceError::IncompleteAlternative {
                alternative: alt.id.clone(),
                feature: feature.to_string(),
            })?;
    if !value.is_finite() {
        return Err(PreferenceError::NonFinite {
            alternative: alt.id.clone(),
            feature: feature.to_string(),
        });
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFeatures {
    /// One 0/1 row per alternative, columns in feature order.
    pub matrix: Vec<Vec<u8>>,
    pub warnings: Vec<String>,
}

pub fn normalize_features(
    features: &[FeatureSpec],
    alternatives: &[Alternative],
) -> Result<NormalizedFeatures, PreferenceError> {
    if alternatives.is_empty() {
        return Err(PreferenceError::TooFew {
            what: "alternatives",
            min: 1,
            got: 0,
        });
    }
    let mut matrix = vec![Vec::with_capacity(features.len()); alternatives.len()];
    let mut warnings = Vec::new();
    for f in features {
        let column = alternatives
            .iter()
            .map(|a| feature_value(a, &f.id))
            .collect::<Result<Vec<_>, _>>()?;
        let bits: Vec<u8> = match f.direction {
            None => column.iter().map(|&v| u8::from(v == 1.0)).collect(),
            Some(direction) => {
                let mean = column.iter().sum::<f64>() / column.len() as f64;
                if column.iter().all(|&v| v == column[0]) {
                    warnings.push(format!(
                        "feature `{}` has the same value for every alternative; normalized to 0",
                        f.id
                    ));
                }
                column
                    .iter()
                    .map(|&v| {
                        u8::from(match direction {
                            Direction::AboveMean => v > mean,
                            Direction::BelowMean => v < mean,
                        })
                    })
                    .collect()
            }
        };
        for (row, b) in matrix.iter_mut().zip(bits) {
            row.push(b);
        }
    }
    Ok(NormalizedFeatures { matrix, warnings })
}

/// Assessment values in feature order, checked for domain and completeness.
pub fn assessment_vector(
    features: &[FeatureSpec],
    assessment: &Assessment,
) -> Result<Vec<i8>, PreferenceError> {
    for key in assessment.values.keys() {
        if !features.iter().any(|f| &f.id == key) {
            return Err(PreferenceError::InvalidAssessment(format!(
                "unknown feature `{key}`"
            )));
        }
    }
    features
        .iter()
        .map(|f| match assessment.values.get(&f.id) {
            Some(&z) if (-1..=1).contains(&z) => Ok(z),
            Some(&z) => Err(PreferenceError::InvalidAssessment(format!(
                "value {z} for `{}` is not -1, 0 or 1",
                f.id
            ))),
            None => Err(PreferenceError::InvalidAssessment(format!(
                "no value for `{}`",
                f.id
            ))),
        })
        .collect()
}

/// `sum_k F_k * Z_k`.
pub fn raw_preference(f: &[u8], z: &[i8]) -> Result<i32, PreferenceError> {
    if f.len() != z.len() {
        return Err(PreferenceError::LengthMismatch(f.len(), z.len()));
    }
    Ok(f.iter()
        .zip(z)
        .map(|(&f, &z)| i32::from(f) * i32::from(z))
        .sum())
}

/// `50 + 10 * raw`, clamped to `[0, 100]`.
pub fn scale_preference(raw: i32) -> f64 {
    (50.0 + 10.0 * f64::from(raw)).clamp(0.0, 100.0)
}

/// Weighted mean; weights need not be normalized.
pub fn weighted_mean(values: &[f64], weights: &[f64]) -> Result<f64, PreferenceError> {
    if values.is_empty() {
        return Err(PreferenceError::EmptyPanel);
    }
    if values.len() != weights.len() {
        return Err(PreferenceError::LengthMismatch(values.len(), weights.len()));
    }
    let total = check_weights(weights)?;
    Ok(values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total)
}

/// Returns the weight sum after checking every weight is finite and non-negative.
pub fn check_weights(weights: &[f64]) -> Result<f64, PreferenceError> {
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(PreferenceError::InvalidWeights(format!(
            "{w} is not a finite non-negative number"
        )));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(PreferenceError::InvalidWeights(
            "weights sum to zero".into(),
        ));
    }
    Ok(total)
}

/// Voting and sentiment preferences of a whole panel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceMatrix {
    /// Participant x alternative.
    pub raw: Vec<Vec<i32>>,
    pub scaled: Vec<Vec<f64>>,
    /// Participant x alternative fused affect; `None` where nothing was said.
    pub sentiment: Vec<Vec<Option<f64>>>,
    /// Normalized to sum to 1.
    pub weights: Vec<f64>,
    pub voting: Vec<f64>,
    pub collective_sentiment: Vec<f64>,
}

/// Builds the panel matrix from normalized features (alternative rows),
/// assessment vectors (participant rows) and per-cell affect.
pub fn aggregate(
    normalized: &[Vec<u8>],
    assessments: &[Vec<i8>],
    affect: &[Vec<Option<f64>>],
    weights: &[f64],
) -> Result<PreferenceMatrix, PreferenceError> {
    if assessments.is_empty() {
        return Err(PreferenceError::EmptyPanel);
    }
    if assessments.len() != weights.len() || assessments.len() != affect.len() {
        return Err(PreferenceError::LengthMismatch(
            assessments.len(),
            weights.len(),
        ));
    }
    let total = check_weights(weights)?;
    let raw = assessments
        .iter()
        .map(|z| normalized.iter().map(|f| raw_preference(f, z)).collect())
        .collect::<Result<Vec<Vec<i32>>, _>>()?;
    let scaled: Vec<Vec<f64>> = raw
        .iter()
        .map(|row| row.iter().map(|&r| scale_preference(r)).collect())
        .collect();
    for row in affect {
        if row.len() != normalized.len() {
            return Err(PreferenceError::LengthMismatch(row.len(), normalized.len()));
        }
    }
    let column_mean = |cell: &dyn Fn(usize, usize) -> f64, i: usize| {
        (0..weights.len())
            .map(|j| weights[j] * cell(j, i))
            .sum::<f64>()
            / total
    };
    let voting = (0..normalized.len())
        .map(|i| column_mean(&|j, i| scaled[j][i], i))
        .collect();
    let collective_sentiment = (0..normalized.len())
        .map(|i| column_mean(&|j, i| affect[j][i].unwrap_or(0.0), i))
        .collect();
    Ok(PreferenceMatrix {
        raw,
        scaled,
        sentiment: affect.to_vec(),
        weights: weights.iter().map(|w| w / total).collect(),
        voting,
        collective_sentiment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn restaurant() -> (Vec<FeatureSpec>, Vec<Alternative>) {
        let features = vec![
            FeatureSpec::continuous("affordability", Direction::BelowMean),
            FeatureSpec::continuous("location", Direction::AboveMean),
            FeatureSpec::binary("vegan"),
            FeatureSpec::binary("child_friendly"),
            FeatureSpec::continuous("interior", Direction::AboveMean),
        ];
        let rows = [
            ("alter1", [7500.0, 1.0, 1.0, 0.0, 3.0]),
            ("alter2", [9000.0, 2.0, 1.0, 1.0, 5.0]),
            ("alter3", [4000.0, 2.0, 0.0, 0.0, 2.0]),
            ("alter4", [8000.0, 3.0, 0.0, 0.0, 4.0]),
        ];
        let alternatives = rows
            .iter()
            .map(|(id, values)| Alternative {
                id: id.to_string(),
                label: String::new(),
                features: features.iter().map(|f| f.id.clone()).zip(*values).collect(),
            })
            .collect();
        (features, alternatives)
    }

    #[test]
    fn normalization_matches_table() {
        let (features, alternatives) = restaurant();
        let n = normalize_features(&features, &alternatives).unwrap();
        assert_eq!(
            n.matrix,
            vec![
                vec![0, 0, 1, 0, 0],
                vec![0, 0, 1, 1, 1],
                vec![1, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 1],
            ]
        );
        assert!(n.warnings.is_empty());
    }

    #[test]
    fn flat_column_is_zero_with_warning() {
        let (features, mut alternatives) = restaurant();
        for a in &mut alternatives {
            a.features.insert("interior".into(), 3.0);
        }
        let n = normalize_features(&features, &alternatives).unwrap();
        assert!(n.matrix.iter().all(|row| row[4] == 0));
        assert_eq!(n.warnings.len(), 1);
    }

    #[test]
    fn missing_value_is_reported() {
        let (features, mut alternatives) = restaurant();
        alternatives[2].features.remove("child_friendly");
        assert_eq!(
            normalize_features(&features, &alternatives),
            Err(PreferenceError::IncompleteAlternative {
                alternative: "alter3".into(),
                feature: "child_friendly".into()
            })
        );
    }

    #[test]
    fn raw_and_scaled_examples() {
        assert_eq!(raw_preference(&[0, 0, 1, 0, 0], &[1, 0, -1, 1, 0]), Ok(-1));
        assert_eq!(raw_preference(&[0, 0, 1, 1, 1], &[0, 0, 1, 1, 1]), Ok(3));
        assert_eq!(raw_preference(&[1, 1], &[0, 0]), Ok(0));
        assert!(raw_preference(&[1], &[0, 0]).is_err());
        assert_eq!(scale_preference(-1), 40.0);
        assert_eq!(scale_preference(0), 50.0);
        assert_eq!(scale_preference(2), 70.0);
        assert_eq!(scale_preference(3), 80.0);
        assert_eq!(scale_preference(-5), 0.0);
        assert_eq!(scale_preference(-6), 0.0);
    }

    #[test]
    fn aggregation_examples() {
        let w = [1.0; 5];
        assert_eq!(weighted_mean(&[80.0, 60.0, 70.0, 50.0, 50.0], &w), Ok(62.0));
        let s = weighted_mean(&[0.42, 0.0, 0.0, 0.70, -0.07], &w).unwrap();
        assert!((s - 0.21).abs() < 1e-12);
        assert_eq!(weighted_mean(&[], &[]), Err(PreferenceError::EmptyPanel));
        assert!(weighted_mean(&[1.0], &[-1.0]).is_err());

        let m = aggregate(
            &[vec![1, 0], vec![0, 1]],
            &[vec![1, -1]],
            &[vec![Some(0.5), None]],
            &[3.0],
        )
        .unwrap();
        assert_eq!(m.voting, vec![60.0, 40.0]);
        assert_eq!(m.collective_sentiment, vec![0.5, 0.0]);
        assert_eq!(m.weights, vec![1.0]);
    }

    #[test]
    fn assessments_are_checked() {
        let (features, _) = restaurant();
        let mut a = Assessment {
            participant: "p".into(),
            values: features.iter().map(|f| (f.id.clone(), 0)).collect(),
        };
        assert_eq!(assessment_vector(&features, &a).unwrap(), vec![0; 5]);
        a.values.insert("child_friendly".into(), 2);
        assert!(assessment_vector(&features, &a).is_err());
        a.values.remove("child_friendly");
        assert!(assessment_vector(&features, &a).is_err());
    }

    #[test]
    fn feature_spec_json() {
        let f: FeatureSpec =
            serde_json::from_str(r#"{"id":"price","kind":"continuous","direction":"below_mean"}"#)
                .unwrap();
        assert_eq!(f, FeatureSpec::continuous("price", Direction::BelowMean));
        assert!(serde_json::from_str::<FeatureSpec>(r#"{"id":"p","kind":"continuous"}"#).is_err());
        assert!(serde_json::from_str::<FeatureSpec>(
            r#"{"id":"p","kind":"binary","direction":"above_mean"}"#
        )
        .is_err());
        assert_eq!(
            serde_json::to_string(&FeatureSpec::binary("child_friendly")).unwrap(),
            r#"{"id":"child_friendly","kind":"binary"}"#
        );
    }

    #[test]
    fn setup_validation() {
        let (features, alternatives) = restaurant();
        assert!(validate_setup(&features, &alternatives).is_ok());
        assert!(validate_setup(&features, &alternatives[..1]).is_err());
        let mut dup = features.clone();
        dup.push(FeatureSpec::binary("child_friendly"));
        assert!(matches!(
            validate_setup(&dup, &alternatives),
            Err(PreferenceError::Duplicate { .. })
        ));
        let mut bad = alternatives.clone();
        bad[0].features.insert("child_friendly".into(), 0.5);
        assert!(matches!(
            validate_setup(&features, &bad),
            Err(PreferenceError::NotBinary { .. })
        ));
    }
}
