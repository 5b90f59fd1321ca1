use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::tokenize::tokenize;
use super::{lexicon_entries, read_lexicon, AffectError};

const SHIPPED: &str = include_str!("../../data/emotion_lexicon.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Happy,
    Surprise,
    Angry,
    Sad,
    Fear,
}

impl Emotion {
    pub const ALL: [Emotion; 5] = [
        Emotion::Happy,
        Emotion::Surprise,
        Emotion::Angry,
        Emotion::Sad,
        Emotion::Fear,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Happy => "happy",
            Emotion::Surprise => "surprise",
            Emotion::Angry => "angry",
            Emotion::Sad => "sad",
            Emotion::Fear => "fear",
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Emotion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Emotion::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown emotion `{s}`"))
    }
}

/// Share of each emotion among the emotion words of a text.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EmotionVector {
    pub happy: f64,
    pub surprise: f64,
    pub angry: f64,
    pub sad: f64,
    pub fear: f64,
}

impl EmotionVector {
    pub fn new(happy: f64, surprise: f64, angry: f64, sad: f64, fear: f64) -> Self {
        Self {
            happy,
            surprise,
            angry,
            sad,
            fear,
        }
    }

    pub fn get(&self, e: Emotion) -> f64 {
        match e {
            Emotion::Happy => self.happy,
            Emotion::Surprise => self.surprise,
            Emotion::Angry => self.angry,
            Emotion::Sad => self.sad,
            Emotion::Fear => self.fear,
        }
    }

    fn slot(&mut self, e: Emotion) -> &mut f64 {
        match e {
            Emotion::Happy => &mut self.happy,
            Emotion::Surprise => &mut self.surprise,
            Emotion::Angry => &mut self.angry,
            Emotion::Sad => &mut self.sad,
            Emotion::Fear => &mut self.fear,
        }
    }
}

/// `max(happy, surprise) - max(angry, sad, fear)`.
pub fn emotion_score(v: &EmotionVector) -> f64 {
    v.happy.max(v.surprise) - v.angry.max(v.sad).max(v.fear)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmotionLexicon {
    entries: HashMap<String, Emotion>,
}

impl EmotionLexicon {
    pub fn shipped() -> &'static Self {
        static LEX: OnceLock<EmotionLexicon> = OnceLock::new();
        LEX.get_or_init(|| {
            Self::parse(SHIPPED, "emotion_lexicon.tsv").expect("bundled lexicon parses")
        })
    }

    pub fn load(path: &Path) -> Result<Self, AffectError> {
        Self::parse(&read_lexicon(path)?, &path.display().to_string())
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self, AffectError> {
        let mut entries = HashMap::new();
        for entry in lexicon_entries(text, source_name) {
            let (line, token, label) = entry?;
            let emotion = label.parse().map_err(|reason| AffectError::Lexicon {
                source_name: source_name.to_string(),
                line,
                reason,
            })?;
            entries.insert(token.to_lowercase(), emotion);
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, token: &str) -> Option<Emotion> {
        self.entries.get(&token.to_lowercase()).copied()
    }

    pub fn vector(&self, text: &str) -> EmotionVector {
        let mut v = EmotionVector::default();
        let mut hits = 0usize;
        for t in tokenize(text).tokens {
            let word = t.lower.trim_matches(|c: char| c.is_ascii_punctuation());
            if let Some(e) = self.entries.get(word) {
                *v.slot(*e) += 1.0;
                hits += 1;
            }
        }
        if hits > 0 {
            for e in Emotion::ALL {
                *v.slot(e) /= hits as f64;
            }
        }
        v
    }
}
