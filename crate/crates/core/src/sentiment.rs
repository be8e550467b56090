//! Rule-based valence scoring and dataset sentiment profiles.
//!
//! Scoring sums per-token valences over whitespace tokens, adjusted by three
//! rules, and squashes the sum into `[-1, 1]` with `S / sqrt(S^2 + 15)`:
//!
//! * a booster immediately before a word adds its increment in the
//!   direction of the word's valence;
//! * a negator among the three preceding tokens scales the word by `-0.74`;
//! * each trailing `!` on the word (at most three) adds `0.292` in the
//!   direction of its valence.
//!
//! Cleaned text carries no `!`, so the last rule only matters when scoring
//! raw text.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::Dataset;
use crate::lexicon::{lexicon_error, tsv_lines};
use crate::{Error, Result};

pub const NEGATION_SCALAR: f64 = -0.74;
pub const EXCLAMATION_INCREMENT: f64 = 0.292;
pub const MAX_EXCLAMATIONS: usize = 3;
pub const NORMALIZATION_ALPHA: f64 = 15.0;
pub const NEGATION_SCOPE: usize = 3;
pub const DEFAULT_BOOSTER_INCREMENT: f64 = 0.293;

#[derive(Debug, Clone, PartialEq)]
pub struct ValenceLexicon {
    entries: HashMap<String, f64>,
    boosters: HashMap<String, f64>,
    negators: HashSet<String>,
}

impl ValenceLexicon {
    pub fn new(
        entries: HashMap<String, f64>,
        boosters: HashMap<String, f64>,
        negators: HashSet<String>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(lexicon_error("valence", 0, "lexicon has no entries"));
        }
        if let Some((w, v)) = entries.iter().find(|(_, v)| !v.is_finite()) {
            return Err(lexicon_error(
                "valence",
                0,
                format!("non-finite valence {v} for {w:?}"),
            ));
        }
        if let Some((w, v)) = boosters.iter().find(|(_, v)| !v.is_finite()) {
            return Err(lexicon_error(
                "boosters",
                0,
                format!("non-finite increment {v} for {w:?}"),
            ));
        }
        Ok(ValenceLexicon {
            entries,
            boosters,
            negators,
        })
    }

    /// Parses the three lexicon files from their contents.
    pub fn parse(valence: &str, boosters: &str, negators: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (line, fields) in tsv_lines(valence) {
            let [token, value, ..] = fields[..] else {
                return Err(lexicon_error("valence", line, "expected token<TAB>valence"));
            };
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| lexicon_error("valence", line, format!("bad valence {value:?}")))?;
            if !v.is_finite() {
                return Err(lexicon_error(
                    "valence",
                    line,
                    format!("non-finite valence {value:?}"),
                ));
            }
            entries.insert(token.trim().to_lowercase(), v);
        }

        let mut booster_map = HashMap::new();
        for (line, fields) in tsv_lines(boosters) {
            let inc = match fields.get(1) {
                Some(raw) => raw
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        lexicon_error("boosters", line, format!("bad increment {raw:?}"))
                    })?,
                None => DEFAULT_BOOSTER_INCREMENT,
            };
            booster_map.insert(fields[0].trim().to_lowercase(), inc);
        }

        let negator_set = tsv_lines(negators)
            .map(|(_, f)| f[0].trim().to_lowercase())
            .collect();

        ValenceLexicon::new(entries, booster_map, negator_set)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn valence(&self, word: &str) -> Option<f64> {
        self.entries.get(word).copied()
    }

    pub fn booster(&self, word: &str) -> Option<f64> {
        self.boosters.get(word).copied()
    }

    pub fn is_negator(&self, word: &str) -> bool {
        self.negators.contains(word)
    }
}

/// Splits a token into its lookup key and its trailing `!` count.
fn split_token(token: &str) -> (String, usize) {
    let stem = token.trim_end_matches('!');
    let bangs = token.len() - stem.len();
    (stem.to_lowercase(), bangs)
}

/// Looks up `key`, retrying with surrounding punctuation removed.
fn lookup<T>(key: &str, get: impl Fn(&str) -> Option<T>) -> Option<T> {
    get(key).or_else(|| {
        let trimmed = key.trim_matches(|c: char| c.is_ascii_punctuation());
        (trimmed != key && !trimmed.is_empty())
            .then(|| get(trimmed))
            .flatten()
    })
}

/// The adjusted valence sum `S` before normalisation.
pub fn valence_sum(text: &str, lex: &ValenceLexicon) -> f64 {
    let tokens: Vec<(String, usize)> = text.split_whitespace().map(split_token).collect();
    let is_negator = |k: &str| lookup(k, |w| lex.is_negator(w).then_some(())).is_some();
    let booster = |k: &str| lookup(k, |w| lex.booster(w));

    let mut sum = 0.0;
    for (i, (key, bangs)) in tokens.iter().enumerate() {
        if key.is_empty() || is_negator(key) || booster(key).is_some() {
            continue;
        }
        let Some(mut v) = lookup(key, |w| lex.valence(w)) else {
            continue;
        };
        if i > 0 {
            if let Some(inc) = booster(&tokens[i - 1].0) {
                v += inc * v.signum();
            }
        }
        if tokens[i.saturating_sub(NEGATION_SCOPE)..i]
            .iter()
            .any(|(k, _)| is_negator(k))
        {
            v *= NEGATION_SCALAR;
        }
        let bangs = (*bangs).min(MAX_EXCLAMATIONS);
        if bangs > 0 {
            v += v.signum() * EXCLAMATION_INCREMENT * bangs as f64;
        }
        sum += v;
    }
    sum
}

/// Squashes an adjusted sum into `[-1, 1]`.
pub fn normalize(sum: f64) -> f64 {
    if sum == 0.0 || sum.is_nan() {
        return 0.0;
    }
    if sum.is_infinite() {
        return sum.signum();
    }
    (sum / (sum * sum + NORMALIZATION_ALPHA).sqrt()).clamp(-1.0, 1.0)
}

/// Compound valence score of `text` in `[-1, 1]`; 0.0 when nothing matches.
pub fn score_valence(text: &str, lex: &ValenceLexicon) -> f64 {
    normalize(valence_sum(text, lex))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentimentClass {
    Negative,
    Neutral,
    Positive,
}

impl SentimentClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentClass::Negative => "negative",
            SentimentClass::Neutral => "neutral",
            SentimentClass::Positive => "positive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawThresholds")]
pub struct SentimentThresholds {
    delta_p: f64,
    delta_n: f64,
}

#[derive(Deserialize)]
struct RawThresholds {
    delta_p: f64,
    delta_n: f64,
}

impl TryFrom<RawThresholds> for SentimentThresholds {
    type Error = Error;

    fn try_from(raw: RawThresholds) -> Result<Self> {
        SentimentThresholds::new(raw.delta_p, raw.delta_n)
    }
}

impl Default for SentimentThresholds {
    fn default() -> Self {
        SentimentThresholds {
            delta_p: 0.0,
            delta_n: 0.0,
        }
    }
}

impl SentimentThresholds {
    pub fn new(delta_p: f64, delta_n: f64) -> Result<Self> {
        if delta_n > delta_p || !delta_p.is_finite() || !delta_n.is_finite() {
            return Err(Error::InvalidThresholds { delta_n, delta_p });
        }
        Ok(SentimentThresholds { delta_p, delta_n })
    }

    pub fn delta_p(&self) -> f64 {
        self.delta_p
    }

    pub fn delta_n(&self) -> f64 {
        self.delta_n
    }
}

/// Positive strictly above `delta_p`, negative strictly below `delta_n`,
/// neutral otherwise. With both thresholds at zero a score of exactly 0 is
/// neutral.
pub fn classify(score: f64, th: &SentimentThresholds) -> Result<SentimentClass> {
    if !(-1.0..=1.0).contains(&score) {
        return Err(Error::ScoreOutOfRange(score));
    }
    Ok(if score > th.delta_p {
        SentimentClass::Positive
    } else if score < th.delta_n {
        SentimentClass::Negative
    } else {
        SentimentClass::Neutral
    })
}

pub fn classify_text(text: &str, lex: &ValenceLexicon, th: &SentimentThresholds) -> SentimentClass {
    classify(score_valence(text, lex), th).expect("compound scores lie in [-1, 1]")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub negative: u64,
    pub neutral: u64,
    pub positive: u64,
}

impl ClassCounts {
    pub fn add(&mut self, class: SentimentClass) {
        match class {
            SentimentClass::Negative => self.negative += 1,
            SentimentClass::Neutral => self.neutral += 1,
            SentimentClass::Positive => self.positive += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.negative + self.neutral + self.positive
    }

    pub fn get(&self, class: SentimentClass) -> u64 {
        match class {
            SentimentClass::Negative => self.negative,
            SentimentClass::Neutral => self.neutral,
            SentimentClass::Positive => self.positive,
        }
    }
}

/// Percentages of negative, neutral and positive units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentProfile {
    pub negative: f64,
    pub neutral: f64,
    pub positive: f64,
    pub n: u64,
    pub counts: ClassCounts,
}

impl SentimentProfile {
    pub fn from_counts(counts: ClassCounts) -> Option<Self> {
        let n = counts.total();
        if n == 0 {
            return None;
        }
        let pct = |c: u64| c as f64 * 100.0 / n as f64;
        Some(SentimentProfile {
            negative: pct(counts.negative),
            neutral: pct(counts.neutral),
            positive: pct(counts.positive),
            n,
            counts,
        })
    }

    pub fn get(&self, class: SentimentClass) -> f64 {
        match class {
            SentimentClass::Negative => self.negative,
            SentimentClass::Neutral => self.neutral,
            SentimentClass::Positive => self.positive,
        }
    }
}

pub fn sentiment_profile(
    d: &Dataset,
    lex: &ValenceLexicon,
    th: &SentimentThresholds,
) -> Result<SentimentProfile> {
    let mut counts = ClassCounts::default();
    for text in d.texts() {
        counts.add(classify_text(text, lex, th));
    }
    SentimentProfile::from_counts(counts).ok_or_else(|| Error::empty("sentiment profile"))
}
