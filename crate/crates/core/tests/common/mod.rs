#![allow(dead_code)]

use chrono::{Duration, NaiveDate};
use pow51_core::corpus::{parse_timestamp, DataUnit, Dataset, DatasetKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn date(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
}

pub fn unit(
    id: impl Into<String>,
    author: impl Into<String>,
    ts: &str,
    text: impl Into<String>,
) -> DataUnit {
    DataUnit {
        id: id.into(),
        timestamp: parse_timestamp(ts).unwrap(),
        author: author.into(),
        text: text.into(),
        lang: Some("en".into()),
    }
}

/// A unit at `secs` seconds past midnight of `day`, with id and author
/// derived from `n`.
pub fn unit_on(day: NaiveDate, secs: u32, n: usize, text: impl Into<String>) -> DataUnit {
    let ts = day.and_hms_opt(0, 0, 0).unwrap() + Duration::seconds(i64::from(secs % 86_400));
    DataUnit {
        id: n.to_string(),
        timestamp: ts.and_utc(),
        author: format!("u{n}"),
        text: text.into(),
        lang: Some("en".into()),
    }
}

pub fn dataset(units: Vec<DataUnit>) -> Dataset {
    Dataset::new(DatasetKind::Whole, units)
}

/// Words with known entries in the bundled lexicons, plus modifiers and
/// filler.
pub const VOCAB: &[&str] = &[
    "good",
    "great",
    "love",
    "happy",
    "win",
    "bad",
    "terrible",
    "awful",
    "scared",
    "panic",
    "worried",
    "angry",
    "hate",
    "sad",
    "lost",
    "crash",
    "surprise",
    "shocked",
    "wow",
    "fear",
    "hope",
    "trust",
    "very",
    "extremely",
    "slightly",
    "not",
    "never",
    "no",
    "btg",
    "coin",
    "miner",
    "exchange",
    "price",
    "today",
    "the",
    "a",
    "of",
    "attack",
    "51",
    "double",
    "spend",
    "wallet",
    "is",
    "was",
];

pub fn random_text(rng: &mut ChaCha8Rng, max_tokens: usize) -> String {
    let n = rng.gen_range(0..=max_tokens);
    let mut words: Vec<String> = (0..n)
        .map(|_| VOCAB.choose(rng).unwrap().to_string())
        .collect();
    if let Some(last) = words.last_mut() {
        for _ in 0..rng.gen_range(0..5) {
            last.push('!');
        }
    }
    words.join(" ")
}

pub fn random_dataset(rng: &mut ChaCha8Rng, max_units: usize, day: NaiveDate) -> Dataset {
    let n = rng.gen_range(1..=max_units);
    let units = (0..n)
        .map(|i| unit_on(day, rng.gen_range(0..86_400), i, random_text(rng, 12)))
        .collect();
    dataset(units)
}

/// Bundled lexicons, parsed once per test binary.
pub fn bundled() -> &'static pow51_core::lexicon::Lexicons {
    static LEX: std::sync::OnceLock<pow51_core::lexicon::Lexicons> = std::sync::OnceLock::new();
    LEX.get_or_init(pow51_core::lexicon::Lexicons::bundled)
}
