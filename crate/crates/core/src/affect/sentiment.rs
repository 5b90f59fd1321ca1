use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use super::tokenize::{is_upper, tokenize};
use super::{lexicon_entries, read_lexicon, AffectError};

const B_INCR: f64 = 0.293;
const B_DECR: f64 = -0.293;
const C_INCR: f64 = 0.733;
const N_SCALAR: f64 = -0.74;
const EXCLAMATION_GAIN: f64 = 0.292;
const MAX_EXCLAMATIONS: usize = 4;
const ALPHA: f64 = 15.0;

const SHIPPED: &str = include_str!("../../data/sentiment_lexicon.tsv");

const NEGATORS: &[&str] = &[
    "aint",
    "arent",
    "cannot",
    "cant",
    "couldnt",
    "darent",
    "didnt",
    "doesnt",
    "ain't",
    "aren't",
    "can't",
    "couldn't",
    "daren't",
    "didn't",
    "doesn't",
    "dont",
    "hadnt",
    "hasnt",
    "havent",
    "isnt",
    "mightnt",
    "mustnt",
    "neither",
    "don't",
    "hadn't",
    "hasn't",
    "haven't",
    "isn't",
    "mightn't",
    "mustn't",
    "neednt",
    "needn't",
    "never",
    "none",
    "nope",
    "nor",
    "not",
    "nothing",
    "nowhere",
    "oughtnt",
    "shant",
    "shouldnt",
    "uhuh",
    "wasnt",
    "werent",
    "oughtn't",
    "shan't",
    "shouldn't",
    "uh-uh",
    "wasn't",
    "weren't",
    "without",
    "wont",
    "wouldnt",
    "won't",
    "wouldn't",
    "rarely",
    "seldom",
    "despite",
];

const INCREMENTS: &[&str] = &[
    "absolutely",
    "amazingly",
    "awfully",
    "completely",
    "considerable",
    "considerably",
    "decidedly",
    "deeply",
    "effing",
    "enormous",
    "enormously",
    "entirely",
    "especially",
    "exceptional",
    "exceptionally",
    "extreme",
    "extremely",
    "fabulously",
    "flipping",
    "flippin",
    "frackin",
    "fracking",
    "fricking",
    "frickin",
    "frigging",
    "friggin",
    "fully",
    "fuckin",
    "fucking",
    "fuggin",
    "fugging",
    "greatly",
    "hella",
    "highly",
    "hugely",
    "incredible",
    "incredibly",
    "intensely",
    "major",
    "majorly",
    "more",
    "most",
    "particularly",
    "purely",
    "quite",
    "really",
    "remarkably",
    "so",
    "substantially",
    "thoroughly",
    "total",
    "totally",
    "tremendous",
    "tremendously",
    "uber",
    "unbelievably",
    "unusually",
    "utter",
    "utterly",
    "very",
];

const DECREMENTS: &[&str] = &[
    "almost",
    "barely",
    "hardly",
    "just enough",
    "kind of",
    "kinda",
    "kindof",
    "kind-of",
    "less",
    "little",
    "marginal",
    "marginally",
    "occasional",
    "occasionally",
    "partly",
    "scarce",
    "scarcely",
    "slight",
    "slightly",
    "somewhat",
    "sort of",
    "sorta",
    "sortof",
    "sort-of",
];

const SPECIAL_CASES: &[(&str, f64)] = &[
    ("the shit", 3.0),
    ("the bomb", 3.0),
    ("bad ass", 1.5),
    ("badass", 1.5),
    ("bus stop", 0.0),
    ("yeah right", -2.0),
    ("kiss of death", -1.5),
    ("to die for", 3.0),
    ("beating heart", 3.5),
];

/// Valences, boosters and negators for compound sentiment scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentLexicon {
    entries: HashMap<String, f64>,
    boosters: HashMap<String, f64>,
    negators: HashSet<String>,
}

impl SentimentLexicon {
    pub fn shipped() -> &'static Self {
        static LEX: OnceLock<SentimentLexicon> = OnceLock::new();
        LEX.get_or_init(|| {
            Self::parse(SHIPPED, "sentiment_lexicon.tsv").expect("bundled lexicon parses")
        })
    }

    pub fn load(path: &Path) -> Result<Self, AffectError> {
        Self::parse(&read_lexicon(path)?, &path.display().to_string())
    }

    /// Parses `token<TAB>valence` lines; extra columns are ignored.
    pub fn parse(text: &str, source_name: &str) -> Result<Self, AffectError> {
        let mut entries = HashMap::new();
        for entry in lexicon_entries(text, source_name) {
            let (line, token, value) = entry?;
            let value = value.split('\t').next().unwrap_or_default();
            let valence: f64 = value.parse().map_err(|_| AffectError::Lexicon {
                source_name: source_name.to_string(),
                line,
                reason: format!("bad valence `{value}`"),
            })?;
            if !valence.is_finite() {
                return Err(AffectError::Lexicon {
                    source_name: source_name.to_string(),
                    line,
                    reason: "valence must be finite".into(),
                });
            }
            entries.insert(token.to_lowercase(), valence);
        }
        let boosters = INCREMENTS
            .iter()
            .map(|w| (w.to_string(), B_INCR))
            .chain(DECREMENTS.iter().map(|w| (w.to_string(), B_DECR)))
            .collect();
        let negators = NEGATORS.iter().map(|w| w.to_string()).collect();
        Ok(Self {
            entries,
            boosters,
            negators,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.entries.get(&token.to_lowercase()).copied()
    }

    fn negated(&self, lower: &str) -> bool {
        self.negators.contains(lower) || lower.contains("n't")
    }

    fn scalar_inc_dec(&self, word: &str, lower: &str, valence: f64, cap_diff: bool) -> f64 {
        let Some(&b) = self.boosters.get(lower) else {
            return 0.0;
        };
        let mut scalar = if valence < 0.0 { -b } else { b };
        if cap_diff && is_upper(word) {
            scalar += if valence > 0.0 { C_INCR } else { -C_INCR };
        }
        scalar
    }

    /// Compound score in `[-1, 1]`, rounded to 4 decimals.
    pub fn compound(&self, text: &str) -> f64 {
        let tokenized = tokenize(text.trim());
        let words: Vec<&str> = tokenized.tokens.iter().map(|t| t.text.as_str()).collect();
        let lower: Vec<&str> = tokenized.tokens.iter().map(|t| t.lower.as_str()).collect();
        if words.is_empty() {
            return 0.0;
        }
        let caps = words.iter().filter(|w| is_upper(w)).count();
        let cap_diff = caps > 0 && caps < words.len();

        let mut sentiments = Vec::with_capacity(words.len());
        for i in 0..words.len() {
            if self.boosters.contains_key(lower[i])
                || (lower[i] == "kind" && lower.get(i + 1) == Some(&"of"))
            {
                sentiments.push(0.0);
                continue;
            }
            sentiments.push(self.valence_at(&words, &lower, i, cap_diff));
        }

        if let Some(bi) = lower.iter().position(|w| *w == "but") {
            for (si, s) in sentiments.iter_mut().enumerate() {
                if si < bi {
                    *s *= 0.5;
                } else if si > bi {
                    *s *= 1.5;
                }
            }
        }

        let mut sum: f64 = sentiments.iter().sum();
        let emphasis = punctuation_emphasis(tokenized.exclamations, tokenized.questions);
        if sum > 0.0 {
            sum += emphasis;
        } else if sum < 0.0 {
            sum -= emphasis;
        }
        round4((sum / (sum * sum + ALPHA).sqrt()).clamp(-1.0, 1.0))
    }

    fn valence_at(&self, words: &[&str], lower: &[&str], i: usize, cap_diff: bool) -> f64 {
        let Some(&base) = self.entries.get(lower[i]) else {
            return 0.0;
        };
        let mut valence = base;
        if lower[i] == "no" && i + 1 < words.len() && self.entries.contains_key(lower[i + 1]) {
            valence = 0.0;
        }
        if (i > 0 && lower[i - 1] == "no")
            || (i > 1 && lower[i - 2] == "no")
            || (i > 2 && lower[i - 3] == "no" && matches!(lower[i - 1], "or" | "nor"))
        {
            valence = base * N_SCALAR;
        }
        if cap_diff && is_upper(words[i]) {
            valence += if valence > 0.0 { C_INCR } else { -C_INCR };
        }
        for start in 0..3 {
            if i <= start {
                break;
            }
            let j = i - (start + 1);
            if self.entries.contains_key(lower[j]) {
                continue;
            }
            let mut s = self.scalar_inc_dec(words[j], lower[j], valence, cap_diff);
            if start == 1 {
                s *= 0.95;
            } else if start == 2 {
                s *= 0.9;
            }
            valence += s;
            valence = self.negation_check(valence, lower, start, i);
            if start == 2 {
                valence = self.special_idioms(valence, lower, i);
            }
        }
        least_check(valence, lower, i, |w| self.entries.contains_key(w))
    }

    fn negation_check(&self, valence: f64, lower: &[&str], start: usize, i: usize) -> f64 {
        match start {
            0 if self.negated(lower[i - 1]) => valence * N_SCALAR,
            1 => {
                if lower[i - 2] == "never" && matches!(lower[i - 1], "so" | "this") {
                    valence * 1.25
                } else if lower[i - 2] == "without" && lower[i - 1] == "doubt" {
                    valence
                } else if self.negated(lower[i - 2]) {
                    valence * N_SCALAR
                } else {
                    valence
                }
            }
            2 => {
                if (lower[i - 3] == "never" && matches!(lower[i - 2], "so" | "this"))
                    || matches!(lower[i - 1], "so" | "this")
                {
                    valence * 1.25
                } else if lower[i - 3] == "without"
                    && (lower[i - 2] == "doubt" || lower[i - 1] == "doubt")
                {
                    valence
                } else if self.negated(lower[i - 3]) {
                    valence * N_SCALAR
                } else {
                    valence
                }
            }
            _ => valence,
        }
    }

    fn special_idioms(&self, mut valence: f64, lower: &[&str], i: usize) -> f64 {
        let special = |seq: &str| {
            SPECIAL_CASES
                .iter()
                .find(|(k, _)| *k == seq)
                .map(|&(_, v)| v)
        };
        let one_zero = format!("{} {}", lower[i - 1], lower[i]);
        let two_one_zero = format!("{} {} {}", lower[i - 2], lower[i - 1], lower[i]);
        let two_one = format!("{} {}", lower[i - 2], lower[i - 1]);
        let three_two_one = format!("{} {} {}", lower[i - 3], lower[i - 2], lower[i - 1]);
        let three_two = format!("{} {}", lower[i - 3], lower[i - 2]);
        if let Some(v) = [
            &one_zero,
            &two_one_zero,
            &two_one,
            &three_two_one,
            &three_two,
        ]
        .iter()
        .find_map(|s| special(s))
        {
            valence = v;
        }
        if i + 1 < lower.len() {
            if let Some(v) = special(&format!("{} {}", lower[i], lower[i + 1])) {
                valence = v;
            }
        }
        if i + 2 < lower.len() {
            if let Some(v) = special(&format!("{} {} {}", lower[i], lower[i + 1], lower[i + 2])) {
                valence = v;
            }
        }
        for n_gram in [&three_two_one, &three_two, &two_one] {
            if let Some(b) = self.boosters.get(n_gram.as_str()) {
                valence += b;
            }
        }
        valence
    }
}

fn least_check(valence: f64, lower: &[&str], i: usize, known: impl Fn(&str) -> bool) -> f64 {
    if i > 1 && !known(lower[i - 1]) && lower[i - 1] == "least" {
        if lower[i - 2] != "at" && lower[i - 2] != "very" {
            return valence * N_SCALAR;
        }
    } else if i > 0 && !known(lower[i - 1]) && lower[i - 1] == "least" {
        return valence * N_SCALAR;
    }
    valence
}

fn punctuation_emphasis(exclamations: usize, questions: usize) -> f64 {
    let ep = exclamations.min(MAX_EXCLAMATIONS) as f64 * EXCLAMATION_GAIN;
    let qm = match questions {
        0 | 1 => 0.0,
        2 | 3 => questions as f64 * 0.18,
        _ => 0.96,
    };
    ep + qm
}

/// Rounds half-to-even on the exact binary value, like Python's `round`.
fn round4(x: f64) -> f64 {
    format!("{x:.4}").parse().expect("formatted float parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> &'static SentimentLexicon {
        SentimentLexicon::shipped()
    }

    #[test]
    fn shipped_lexicon_loads() {
        assert!(lex().len() > 7000);
        assert_eq!(lex().valence("good"), Some(1.9));
        assert_eq!(lex().valence("GOOD"), Some(1.9));
    }

    #[test]
    fn examples() {
        assert_eq!(lex().compound(""), 0.0);
        assert_eq!(
            lex().compound("VADER is smart, handsome, and funny."),
            0.8316
        );
        assert_eq!(lex().compound("Let's meet at seven."), 0.0);
    }

    #[test]
    fn negation_flips_and_caps_emphasize() {
        let good = lex().compound("The food is good");
        assert!(lex().compound("The food is not good") < good);
        assert!(lex().compound("The food is GOOD") > good);
        assert!(lex().compound("The food is very good") > good);
        assert!(lex().compound("The food is good!!") > good);
        assert_eq!(
            lex().compound("The food is good!!!!!!"),
            lex().compound("The food is good!!!!")
        );
    }

    #[test]
    fn but_shifts_weight_to_the_second_clause() {
        let s = lex().compound("The food is good, but the service is bad.");
        assert!(s < 0.0, "{s}");
    }

    #[test]
    fn custom_lexicon_parsing() {
        let l = SentimentLexicon::parse("# comment\nyay\t2.5\nboo\t-1\t0.5\t[1]\n", "t").unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.compound("yay") > 0.0);
        assert!(l.compound("boo") < 0.0);
        assert!(matches!(
            SentimentLexicon::parse("yay\tlots\n", "t"),
            Err(AffectError::Lexicon { line: 1, .. })
        ));
    }

    #[test]
    fn rounding_is_half_even_on_binary_value() {
        assert_eq!(round4(0.12345), 0.1235);
        assert_eq!(round4(-0.00004), -0.0);
        assert_eq!(round4(0.71564), 0.7156);
    }
}
