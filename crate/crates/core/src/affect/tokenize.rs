#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Case preserved, for the capitalization check.
    pub text: String,
    pub lower: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tokenized {
    pub tokens: Vec<Token>,
    pub exclamations: usize,
    pub questions: usize,
}

impl Tokenized {
    pub fn words(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }
}

/// Splits on whitespace and trims ASCII punctuation from each word, unless
/// that would leave two characters or fewer (emoticons like `:)` survive).
pub fn tokenize(text: &str) -> Tokenized {
    let tokens = text
        .split_whitespace()
        .map(|w| {
            let stripped = w.trim_matches(|c: char| c.is_ascii_punctuation());
            let text = if stripped.chars().count() <= 2 {
                w
            } else {
                stripped
            };
            Token {
                text: text.to_string(),
                lower: text.to_lowercase(),
            }
        })
        .collect();
    Tokenized {
        tokens,
        exclamations: text.matches('!').count(),
        questions: text.matches('?').count(),
    }
}

/// Python's `str.isupper`: at least one cased character and no lowercase ones.
pub(crate) fn is_upper(s: &str) -> bool {
    s.chars().any(|c| c.is_uppercase()) && !s.chars().any(|c| c.is_lowercase())
}
