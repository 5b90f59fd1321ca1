#![allow(dead_code)]

use gdm_core::preference::{Alternative, Assessment, Direction, FeatureSpec};

pub const FEATURES: [&str; 5] = [
    "affordability",
    "location",
    "vegan",
    "child_friendly",
    "interior",
];
pub const ALTERNATIVES: [&str; 4] = ["alter1", "alter2", "alter3", "alter4"];
pub const PARTICIPANTS: [&str; 5] = ["partp1", "partp2", "partp3", "partp4", "partp5"];

pub const FEATURE_VALUES: [[f64; 5]; 4] = [
    [7500.0, 1.0, 1.0, 0.0, 3.0],
    [9000.0, 2.0, 1.0, 1.0, 5.0],
    [4000.0, 2.0, 0.0, 0.0, 2.0],
    [8000.0, 3.0, 0.0, 0.0, 4.0],
];

pub const ASSESSMENTS: [[i8; 5]; 5] = [
    [0, 0, 1, 1, 1],
    [0, 1, 1, 0, 0],
    [1, 1, 1, 0, 1],
    [1, 0, -1, 1, 0],
    [0, 1, 0, -1, 1],
];

/// Alternative x participant.
pub const RAW: [[i32; 5]; 4] = [
    [1, 1, 1, -1, 0],
    [3, 1, 2, 0, 0],
    [0, 0, 1, 1, 0],
    [1, 1, 2, 0, 2],
];
pub const SCALED: [[f64; 5]; 4] = [
    [60.0, 60.0, 60.0, 40.0, 50.0],
    [80.0, 60.0, 70.0, 50.0, 50.0],
    [50.0, 50.0, 60.0, 60.0, 50.0],
    [60.0, 60.0, 70.0, 50.0, 70.0],
];
pub const VOTING: [f64; 4] = [54.0, 62.0, 54.0, 62.0];

/// Alternative x participant, as published (two decimals).
pub const SENTIMENT_CELLS: [[f64; 5]; 4] = [
    [0.42, 0.00, 0.00, 0.70, -0.07],
    [0.81, 0.95, 0.00, 0.80, 0.78],
    [0.06, 0.36, 0.34, 0.77, 0.51],
    [-0.30, 0.67, 0.66, 0.94, 0.71],
];
pub const SENTIMENT: [f64; 4] = [0.21, 0.67, 0.41, 0.54];
pub const TOTALS: [f64; 4] = [5.0, 5.99, 5.0, 5.36];

pub const FEEDBACK: [(f64, f64, f64); 5] = [
    (9.0, 9.0, 8.14),
    (10.0, 10.0, 8.14),
    (7.0, 8.0, 7.95),
    (9.0, 9.0, 8.14),
    (7.0, 9.0, 7.95),
];

pub fn features_with(directions: [Direction; 3]) -> Vec<FeatureSpec> {
    vec![
        FeatureSpec::continuous(FEATURES[0], directions[0]),
        FeatureSpec::continuous(FEATURES[1], directions[1]),
        FeatureSpec::binary(FEATURES[2]),
        FeatureSpec::binary(FEATURES[3]),
        FeatureSpec::continuous(FEATURES[4], directions[2]),
    ]
}

pub fn features() -> Vec<FeatureSpec> {
    features_with([
        Direction::BelowMean,
        Direction::AboveMean,
        Direction::AboveMean,
    ])
}

pub fn alternatives() -> Vec<Alternative> {
    ALTERNATIVES
        .iter()
        .zip(FEATURE_VALUES)
        .map(|(id, values)| Alternative {
            id: id.to_string(),
            label: String::new(),
            features: FEATURES.iter().map(|f| f.to_string()).zip(values).collect(),
        })
        .collect()
}

pub fn assessments() -> Vec<Assessment> {
    PARTICIPANTS
        .iter()
        .zip(ASSESSMENTS)
        .map(|(p, z)| Assessment {
            participant: p.to_string(),
            values: FEATURES.iter().map(|f| f.to_string()).zip(z).collect(),
        })
        .collect()
}
