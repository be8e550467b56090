//! Lexicon files and the bundled defaults.
//!
//! A lexicon directory holds four UTF-8 files:
//!
//! | file           | line format                     |
//! |----------------|---------------------------------|
//! | `valence.tsv`  | `token<TAB>valence`             |
//! | `boosters.tsv` | `token` or `token<TAB>increment`|
//! | `negators.txt` | `token`                         |
//! | `emotion.tsv`  | `token<TAB>emotion`             |
//!
//! Blank lines and lines starting with `#` are ignored.

use std::path::Path;

use crate::emotion::EmotionLexicon;
use crate::sentiment::ValenceLexicon;
use crate::{Error, Result};

pub const VALENCE_FILE: &str = "valence.tsv";
pub const BOOSTERS_FILE: &str = "boosters.tsv";
pub const NEGATORS_FILE: &str = "negators.txt";
pub const EMOTION_FILE: &str = "emotion.tsv";

const BUNDLED_VALENCE: &str = include_str!("../data/lexicons/valence.tsv");
const BUNDLED_BOOSTERS: &str = include_str!("../data/lexicons/boosters.tsv");
const BUNDLED_NEGATORS: &str = include_str!("../data/lexicons/negators.txt");
const BUNDLED_EMOTION: &str = include_str!("../data/lexicons/emotion.tsv");

const TEST_VALENCE: &str = include_str!("../data/lexicons/test/valence.tsv");
const TEST_BOOSTERS: &str = include_str!("../data/lexicons/test/boosters.tsv");
const TEST_NEGATORS: &str = include_str!("../data/lexicons/test/negators.txt");
const TEST_EMOTION: &str = include_str!("../data/lexicons/test/emotion.tsv");

/// Valence and emotion lexicons used together by the pipeline.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub valence: ValenceLexicon,
    pub emotion: EmotionLexicon,
}

impl Lexicons {
    /// Full-size defaults shipped with the crate.
    pub fn bundled() -> Lexicons {
        Lexicons {
            valence: ValenceLexicon::parse(BUNDLED_VALENCE, BUNDLED_BOOSTERS, BUNDLED_NEGATORS)
                .expect("bundled valence lexicon is valid"),
            emotion: EmotionLexicon::parse(BUNDLED_EMOTION)
                .expect("bundled emotion lexicon is valid"),
        }
    }

    /// Five-word lexicons with fixed values, for deterministic tests.
    ///
    /// Valence: good 1.9, bad -2.5, great 3.1, hate -2.7, okay 0.9.
    /// Boosters: very +0.293, slightly -0.293. Negators: not, never.
    /// Emotions: calm happy, rage angry, wow surprise, gloom sad, panic fear.
    pub fn test() -> Lexicons {
        Lexicons {
            valence: ValenceLexicon::parse(TEST_VALENCE, TEST_BOOSTERS, TEST_NEGATORS)
                .expect("test valence lexicon is valid"),
            emotion: EmotionLexicon::parse(TEST_EMOTION).expect("test emotion lexicon is valid"),
        }
    }

    /// Loads a lexicon directory. Missing files fall back to the bundled
    /// defaults so a directory may override only some of them.
    pub fn load_dir(dir: &Path) -> Result<Lexicons> {
        let read = |name: &str, fallback: &'static str| -> Result<String> {
            let path = dir.join(name);
            if path.exists() {
                std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
            } else {
                Ok(fallback.to_owned())
            }
        };
        if !dir.is_dir() {
            return Err(Error::io(
                dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
            ));
        }
        Ok(Lexicons {
            valence: ValenceLexicon::parse(
                &read(VALENCE_FILE, BUNDLED_VALENCE)?,
                &read(BOOSTERS_FILE, BUNDLED_BOOSTERS)?,
                &read(NEGATORS_FILE, BUNDLED_NEGATORS)?,
            )?,
            emotion: EmotionLexicon::parse(&read(EMOTION_FILE, BUNDLED_EMOTION)?)?,
        })
    }
}

/// Yields `(line_number, fields)` for non-blank, non-comment lines.
pub(crate) fn tsv_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

pub(crate) fn lexicon_error(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Lexicon {
        source_name: source_name.to_owned(),
        line,
        message: message.into(),
    }
}
