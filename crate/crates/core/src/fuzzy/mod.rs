//! Mamdani fuzzy inference over trapezoidal linguistic variables.
//!
//! A [`RuleBase`] holds the input variables, the output variable and a
//! complete rule table (one rule per combination of input terms). Inference
//! uses minimum for AND, clips each consequent at its rule strength,
//! aggregates with pointwise maximum and defuzzifies with the centroid of
//! the aggregate sampled uniformly over the output universe.

mod config;
mod membership;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use config::RuleBaseDoc;
pub use membership::TrapezoidMf;

/// Number of uniformly spaced samples used for centroid defuzzification.
pub const DEFAULT_RESOLUTION: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error(
        "invalid membership function ({a}, {b}, {c}, {d}): breakpoints must be finite and ordered"
    )]
    InvalidMembership { a: f64, b: f64, c: f64, d: f64 },
    #[error("variable `{0}`: invalid universe")]
    InvalidUniverse(String),
    #[error("variable `{variable}`: term `{term}` lies outside the universe")]
    TermOutsideUniverse { variable: String, term: String },
    #[error("variable `{variable}`: no term covers {at}")]
    CoverageGap { variable: String, at: f64 },
    #[error("variable `{variable}`: duplicate term `{term}`")]
    DuplicateTerm { variable: String, term: String },
    #[error("variable `{variable}` has no terms")]
    NoTerms { variable: String },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{variable}` has no term `{term}`")]
    UnknownTerm { variable: String, term: String },
    #[error("rule `{0}` must constrain every input exactly once")]
    PartialRule(String),
    #[error("input combination {0} is covered by more than one rule")]
    DuplicateCombination(String),
    #[error("rule table incomplete: {missing} input combinations have no rule")]
    MissingCombinations { missing: usize },
    #[error("incomplete inputs: missing {0:?}")]
    IncompleteInputs(Vec<String>),
    #[error("no rule fired")]
    NoRuleFired,
    #[error("cannot parse rule `{rule}`: {reason}")]
    RuleSyntax { rule: String, reason: String },
    #[error("resolution must be at least 2 samples, got {0}")]
    InvalidResolution(usize),
    #[error("config: {0}")]
    Config(String),
}

/// A labelled fuzzy set of a linguistic variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub mf: TrapezoidMf,
}

impl Term {
    pub fn new(label: impl Into<String>, mf: TrapezoidMf) -> Self {
        Self {
            label: label.into(),
            mf,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    universe: (f64, f64),
    terms: Vec<Term>,
}

impl LinguisticVariable {
    /// Builds a variable, checking that every term lies inside the universe
    /// and that every point of the universe belongs to at least one term.
    pub fn new(
        name: impl Into<String>,
        universe: (f64, f64),
        terms: Vec<Term>,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        let (lo, hi) = universe;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FuzzyError::InvalidUniverse(name));
        }
        if terms.is_empty() {
            return Err(FuzzyError::NoTerms { variable: name });
        }
        let mut seen = HashSet::new();
        for term in &terms {
            if !seen.insert(term.label.as_str()) {
                return Err(FuzzyError::DuplicateTerm {
                    variable: name,
                    term: term.label.clone(),
                });
            }
            let [a, _, _, d] = term.mf.breakpoints();
            if a < lo || d > hi {
                return Err(FuzzyError::TermOutsideUniverse {
                    variable: name,
                    term: term.label.clone(),
                });
            }
        }
        let var = Self {
            name,
            universe,
            terms,
        };
        if let Some(at) = var.coverage_gap() {
            return Err(FuzzyError::CoverageGap {
                variable: var.name,
                at,
            });
        }
        Ok(var)
    }

    // Positive-membership regions only change at breakpoints, so checking
    // every breakpoint and every midpoint between neighbours is exhaustive.
    fn coverage_gap(&self) -> Option<f64> {
        let (lo, hi) = self.universe;
        let mut critical: Vec<f64> = vec![lo, hi];
        for term in &self.terms {
            let (s_lo, _, s_hi, _) = term.mf.support();
            for p in term.mf.breakpoints().into_iter().chain([s_lo, s_hi]) {
                if p > lo && p < hi {
                    critical.push(p);
                }
            }
        }
        critical.sort_by(f64::total_cmp);
        critical.dedup();
        let midpoints: Vec<f64> = critical.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
        critical
            .into_iter()
            .chain(midpoints)
            .find(|&x| self.terms.iter().all(|t| t.mf.membership(x) <= 0.0))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.universe.0, self.universe.1)
    }

    /// Membership of the (clamped) crisp value in every term, in term order.
    pub fn fuzzify(&self, x: f64) -> Vec<f64> {
        let x = self.clamp(x);
        self.terms.iter().map(|t| t.mf.membership(x)).collect()
    }
}

/// `variable IS term`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub variable: String,
    pub term: String,
}

impl Clause {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Self {
            variable: variable.into(),
            term: term.into(),
        }
    }
}

/// `IF a IS x AND b IS y THEN out IS z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub antecedents: Vec<Clause>,
    pub consequent: Clause,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("IF ")?;
        for (i, c) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            write!(f, "{} IS {}", c.variable, c.term)?;
        }
        write!(
            f,
            " THEN {} IS {}",
            self.consequent.variable, self.consequent.term
        )
    }
}

impl FromStr for Rule {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = |reason: &str| FuzzyError::RuleSyntax {
            rule: s.to_string(),
            reason: reason.to_string(),
        };
        let words: Vec<&str> = s.split_whitespace().collect();
        if words.first() != Some(&"IF") {
            return Err(syntax("expected leading IF"));
        }
        let then_at = words
            .iter()
            .position(|w| *w == "THEN")
            .ok_or_else(|| syntax("missing THEN"))?;

        let clause = |chunk: &[&str]| -> Result<Clause, FuzzyError> {
            match chunk {
                [var, "IS", term] if is_ident(var) && is_ident(term) => {
                    Ok(Clause::new(*var, *term))
                }
                _ => Err(syntax("expected `variable IS term`")),
            }
        };

        let antecedents = words[1..then_at]
            .split(|w| *w == "AND")
            .map(clause)
            .collect::<Result<Vec<_>, _>>()?;
        let consequent = clause(&words[then_at + 1..])?;
        Ok(Rule {
            antecedents,
            consequent,
        })
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "IF" | "AND" | "THEN" | "IS")
}

#[derive(Debug, Clone, PartialEq)]
struct CompiledRule {
    // term index per input, in input order
    terms: Vec<usize>,
    consequent: usize,
}

/// A complete Mamdani rule base.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    name: String,
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<Rule>,
    compiled: Vec<CompiledRule>,
    resolution: usize,
}

impl RuleBase {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<LinguisticVariable>,
        output: LinguisticVariable,
        rules: Vec<Rule>,
    ) -> Result<Self, FuzzyError> {
        let mut names = HashSet::new();
        for v in inputs.iter().chain(std::iter::once(&output)) {
            if !names.insert(v.name()) {
                return Err(FuzzyError::DuplicateVariable(v.name().to_string()));
            }
        }

        let mut compiled = Vec::with_capacity(rules.len());
        let mut combos = HashSet::new();
        for rule in &rules {
            if rule.antecedents.len() != inputs.len() {
                return Err(FuzzyError::PartialRule(rule.to_string()));
            }
            let mut terms = vec![usize::MAX; inputs.len()];
            for clause in &rule.antecedents {
                let vi = inputs
                    .iter()
                    .position(|v| v.name() == clause.variable)
                    .ok_or_else(|| FuzzyError::UnknownVariable(clause.variable.clone()))?;
                if terms[vi] != usize::MAX {
                    return Err(FuzzyError::PartialRule(rule.to_string()));
                }
                terms[vi] =
                    inputs[vi]
                        .term_index(&clause.term)
                        .ok_or_else(|| FuzzyError::UnknownTerm {
                            variable: clause.variable.clone(),
                            term: clause.term.clone(),
                        })?;
            }
            if rule.consequent.variable != output.name() {
                return Err(FuzzyError::UnknownVariable(
                    rule.consequent.variable.clone(),
                ));
            }
            let consequent = output.term_index(&rule.consequent.term).ok_or_else(|| {
                FuzzyError::UnknownTerm {
                    variable: rule.consequent.variable.clone(),
                    term: rule.consequent.term.clone(),
                }
            })?;
            if !combos.insert(terms.clone()) {
                let labels: Vec<&str> = rule.antecedents.iter().map(|c| c.term.as_str()).collect();
                return Err(FuzzyError::DuplicateCombination(labels.join("/")));
            }
            compiled.push(CompiledRule { terms, consequent });
        }
        let expected: usize = inputs.iter().map(|v| v.terms().len()).product();
        if combos.len() != expected {
            return Err(FuzzyError::MissingCombinations {
                missing: expected - combos.len(),
            });
        }

        Ok(Self {
            name: name.into(),
            inputs,
            output,
            rules,
            compiled,
            resolution: DEFAULT_RESOLUTION,
        })
    }

    pub fn with_resolution(mut self, resolution: usize) -> Result<Self, FuzzyError> {
        if resolution < 2 {
            return Err(FuzzyError::InvalidResolution(resolution));
        }
        self.resolution = resolution;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Inference from named crisp inputs. Every input variable must be
    /// present; values are clamped to their universes.
    pub fn infer(&self, inputs: &[(&str, f64)]) -> Result<f64, FuzzyError> {
        for (name, _) in inputs {
            if !self.inputs.iter().any(|v| v.name() == *name) {
                return Err(FuzzyError::UnknownVariable(name.to_string()));
            }
        }
        let mut values = Vec::with_capacity(self.inputs.len());
        let mut missing = Vec::new();
        for var in &self.inputs {
            match inputs.iter().find(|(n, _)| *n == var.name()) {
                Some((_, x)) => values.push(*x),
                None => missing.push(var.name().to_string()),
            }
        }
        if !missing.is_empty() {
            return Err(FuzzyError::IncompleteInputs(missing));
        }
        self.infer_crisp(&values)
    }

    /// Inference from crisp values given in input-variable order.
    pub fn infer_crisp(&self, values: &[f64]) -> Result<f64, FuzzyError> {
        let strengths = self.consequent_strengths(values)?;
        self.defuzzify(&strengths)
    }

    /// Firing strength of each output term (max over the rules concluding it).
    pub fn consequent_strengths(&self, values: &[f64]) -> Result<Vec<f64>, FuzzyError> {
        if values.len() != self.inputs.len() {
            let missing = self
                .inputs
                .iter()
                .skip(values.len())
                .map(|v| v.name().to_string())
                .collect();
            return Err(FuzzyError::IncompleteInputs(missing));
        }
        let degrees: Vec<Vec<f64>> = self
            .inputs
            .iter()
            .zip(values)
            .map(|(var, &x)| var.fuzzify(x))
            .collect();
        let mut strengths = vec![0.0_f64; self.output.terms().len()];
        for rule in &self.compiled {
            let s = rule
                .terms
                .iter()
                .enumerate()
                .map(|(vi, &ti)| degrees[vi][ti])
                .fold(1.0_f64, f64::min);
            let slot = &mut strengths[rule.consequent];
            *slot = slot.max(s);
        }
        Ok(strengths)
    }

    /// Sampled aggregate output set `(x, mu)` for the given term strengths.
    pub fn aggregate(&self, strengths: &[f64]) -> Vec<(f64, f64)> {
        let (lo, hi) = self.output.universe();
        let step = (hi - lo) / (self.resolution - 1) as f64;
        (0..self.resolution)
            .map(|k| {
                let x = lo + k as f64 * step;
                let mu = self
                    .output
                    .terms()
                    .iter()
                    .zip(strengths)
                    .filter(|(_, &s)| s > 0.0)
                    .map(|(t, &s)| t.mf.membership(x).min(s))
                    .fold(0.0_f64, f64::max);
                (x, mu)
            })
            .collect()
    }

    fn defuzzify(&self, strengths: &[f64]) -> Result<f64, FuzzyError> {
        if strengths.iter().all(|&s| s <= 0.0) {
            return Err(FuzzyError::NoRuleFired);
        }
        // trapezoid rule: the two end samples count half
        let samples = self.aggregate(strengths);
        let last = samples.len() - 1;
        let (num, den) =
            samples
                .into_iter()
                .enumerate()
                .fold((0.0, 0.0), |(n, d), (k, (x, mu))| {
                    let w = if k == 0 || k == last { 0.5 * mu } else { mu };
                    (n + x * w, d + w)
                });
        if den <= 0.0 {
            return Err(FuzzyError::NoRuleFired);
        }
        let (lo, hi) = self.output.universe();
        Ok((num / den).clamp(lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mf(a: f64, b: f64, c: f64, d: f64) -> TrapezoidMf {
        TrapezoidMf::new(a, b, c, d).unwrap()
    }

    fn var(name: &str, terms: &[(&str, [f64; 4])]) -> LinguisticVariable {
        LinguisticVariable::new(
            name,
            (0.0, 10.0),
            terms
                .iter()
                .map(|(l, p)| Term::new(*l, mf(p[0], p[1], p[2], p[3])))
                .collect(),
        )
        .unwrap()
    }

    fn single_rule_base() -> RuleBase {
        let input = var("x", &[("any", [0.0, 0.0, 10.0, 10.0])]);
        let output = var(
            "y",
            &[
                ("lo", [0.0, 0.0, 1.0, 3.0]),
                ("mid", [2.0, 4.0, 6.0, 8.0]),
                ("hi", [7.0, 9.0, 10.0, 10.0]),
            ],
        );
        RuleBase::new(
            "single",
            vec![input],
            output,
            vec!["IF x IS any THEN y IS mid".parse().unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn symmetric_consequent_defuzzifies_to_midpoint() {
        let rb = single_rule_base();
        let y = rb.infer(&[("x", 3.0)]).unwrap();
        assert!((y - 5.0).abs() < 1e-9, "{y}");
    }

    #[test]
    fn out_of_universe_inputs_are_clamped() {
        let rb = single_rule_base();
        assert_eq!(rb.infer(&[("x", -50.0)]), rb.infer(&[("x", 0.0)]));
    }

    #[test]
    fn missing_and_unknown_inputs() {
        let rb = single_rule_base();
        assert_eq!(
            rb.infer(&[]),
            Err(FuzzyError::IncompleteInputs(vec!["x".into()]))
        );
        assert!(matches!(
            rb.infer(&[("x", 1.0), ("z", 1.0)]),
            Err(FuzzyError::UnknownVariable(_))
        ));
        assert!(matches!(
            rb.infer_crisp(&[]),
            Err(FuzzyError::IncompleteInputs(_))
        ));
    }

    #[test]
    fn no_rule_fired_is_reported() {
        let rb = single_rule_base();
        assert_eq!(rb.defuzzify(&[0.0, 0.0]), Err(FuzzyError::NoRuleFired));
    }

    #[test]
    fn coverage_gap_rejected() {
        let err = LinguisticVariable::new(
            "g",
            (0.0, 10.0),
            vec![
                Term::new("a", mf(0.0, 0.0, 3.0, 4.0)),
                Term::new("b", mf(4.0, 5.0, 10.0, 10.0)),
            ],
        )
        .unwrap_err();
        assert_eq!(
            err,
            FuzzyError::CoverageGap {
                variable: "g".into(),
                at: 4.0
            }
        );
        // open support at the universe edge leaves the bound uncovered
        assert!(LinguisticVariable::new(
            "h",
            (0.0, 10.0),
            vec![Term::new("a", mf(0.0, 1.0, 10.0, 10.0))]
        )
        .is_err());
    }

    #[test]
    fn term_outside_universe_rejected() {
        let err = LinguisticVariable::new(
            "v",
            (0.0, 10.0),
            vec![Term::new("a", mf(-1.0, 0.0, 10.0, 10.0))],
        );
        assert!(matches!(err, Err(FuzzyError::TermOutsideUniverse { .. })));
    }

    #[test]
    fn incomplete_or_duplicated_rule_tables_rejected() {
        let a = var(
            "a",
            &[("lo", [0.0, 0.0, 4.0, 6.0]), ("hi", [4.0, 6.0, 10.0, 10.0])],
        );
        let out = var("o", &[("all", [0.0, 0.0, 10.0, 10.0])]);
        let r = |s: &str| s.parse::<Rule>().unwrap();
        let missing = RuleBase::new(
            "m",
            vec![a.clone()],
            out.clone(),
            vec![r("IF a IS lo THEN o IS all")],
        );
        assert_eq!(missing, Err(FuzzyError::MissingCombinations { missing: 1 }));
        let dup = RuleBase::new(
            "d",
            vec![a.clone()],
            out.clone(),
            vec![
                r("IF a IS lo THEN o IS all"),
                r("IF a IS lo THEN o IS all"),
                r("IF a IS hi THEN o IS all"),
            ],
        );
        assert!(matches!(dup, Err(FuzzyError::DuplicateCombination(_))));
        let unknown = RuleBase::new("u", vec![a], out, vec![r("IF a IS mid THEN o IS all")]);
        assert!(matches!(unknown, Err(FuzzyError::UnknownTerm { .. })));
    }

    #[test]
    fn rule_text_round_trips() {
        let text = "IF agreement IS agree AND confidence IS sure THEN feedback IS strong";
        let rule: Rule = text.parse().unwrap();
        assert_eq!(rule.to_string(), text);
        assert!("agreement IS agree THEN x IS y".parse::<Rule>().is_err());
        assert!("IF a IS b".parse::<Rule>().is_err());
        assert!("IF a IS b AND THEN c IS d".parse::<Rule>().is_err());
    }

    #[test]
    fn resolution_must_be_at_least_two() {
        assert!(single_rule_base().with_resolution(1).is_err());
        assert!(single_rule_base().with_resolution(2).is_ok());
    }
}
