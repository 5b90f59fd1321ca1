//! TOML rule-base documents.
//!
//! ```toml
//! name = "feedback"
//! resolution = 1000
//! rules = ["IF agreement IS agree AND confidence IS sure THEN feedback IS strong", ...]
//!
//! [[inputs]]
//! name = "agreement"
//! universe = [0.0, 10.0]
//!
//! [[inputs.terms]]
//! label = "disagree"
//! mf = [0.0, 0.0, 2.0, 5.0]
//!
//! [output]
//! name = "feedback"
//! universe = [0.0, 10.0]
//! ...
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    FuzzyError, LinguisticVariable, Rule, RuleBase, Term, TrapezoidMf, DEFAULT_RESOLUTION,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleBaseDoc {
    pub name: String,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    pub rules: Vec<String>,
    pub inputs: Vec<VariableDoc>,
    pub output: VariableDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    pub universe: [f64; 2],
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub label: String,
    pub mf: [f64; 4],
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

impl VariableDoc {
    fn build(&self) -> Result<LinguisticVariable, FuzzyError> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(Term::new(t.label.clone(), TrapezoidMf::try_from(t.mf)?)))
            .collect::<Result<Vec<_>, FuzzyError>>()?;
        LinguisticVariable::new(
            self.name.clone(),
            (self.universe[0], self.universe[1]),
            terms,
        )
    }

    fn from_variable(v: &LinguisticVariable) -> Self {
        let (lo, hi) = v.universe();
        Self {
            name: v.name().to_string(),
            universe: [lo, hi],
            terms: v
                .terms()
                .iter()
                .map(|t| TermDoc {
                    label: t.label.clone(),
                    mf: t.mf.breakpoints(),
                })
                .collect(),
        }
    }
}

impl RuleBaseDoc {
    pub fn build(&self) -> Result<RuleBase, FuzzyError> {
        let inputs = self
            .inputs
            .iter()
            .map(VariableDoc::build)
            .collect::<Result<Vec<_>, _>>()?;
        let output = self.output.build()?;
        let rules = self
            .rules
            .iter()
            .map(|r| r.parse::<Rule>())
            .collect::<Result<Vec<_>, _>>()?;
        RuleBase::new(self.name.clone(), inputs, output, rules)?.with_resolution(self.resolution)
    }
}

impl From<&RuleBase> for RuleBaseDoc {
    fn from(rb: &RuleBase) -> Self {
        Self {
            name: rb.name().to_string(),
            resolution: rb.resolution(),
            rules: rb.rules().iter().map(Rule::to_string).collect(),
            inputs: rb.inputs().iter().map(VariableDoc::from_variable).collect(),
            output: VariableDoc::from_variable(rb.output()),
        }
    }
}

impl RuleBase {
    pub fn from_toml_str(text: &str) -> Result<Self, FuzzyError> {
        let doc: RuleBaseDoc =
            toml::from_str(text).map_err(|e| FuzzyError::Config(e.to_string()))?;
        doc.build()
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&RuleBaseDoc::from(self)).expect("rule base documents always serialize")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FuzzyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| FuzzyError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }
}
