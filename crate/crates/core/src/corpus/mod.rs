//! Message corpora: ingestion, cleaning, keyword filters and date windows.

mod clean;
mod ingest;
mod window;

use std::fmt;

use chrono::{DateTime, NaiveDate, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

pub use clean::{
    clean_dataset, clean_dataset_with, clean_text, extract_attack_subset, filter_topic, is_english,
    mentions_attack, CleanOptions, Deduplicator, TopicFilter, ATTACK_KEYWORDS, TOPIC_KEYWORDS,
};
pub use ingest::{load_corpus, parse_csv, parse_jsonl, CorpusFormat, LoadedCorpus, RecordError};
pub use window::{slice_window, DateWindow};

/// One social-media message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataUnit {
    pub id: String,
    #[serde(rename = "created_at", with = "utc_seconds")]
    pub timestamp: DateTime<Utc>,
    pub author: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
}

impl DataUnit {
    pub fn date(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    Whole,
    Attack,
    Benchmark,
}

impl DatasetKind {
    pub const ALL: [DatasetKind; 3] = [
        DatasetKind::Whole,
        DatasetKind::Attack,
        DatasetKind::Benchmark,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetKind::Whole => "whole",
            DatasetKind::Attack => "attack",
            DatasetKind::Benchmark => "benchmark",
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An immutable, labelled collection of units in timestamp order.
///
/// Every transformation returns a new dataset and appends a step name to
/// [`Dataset::provenance`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    kind: DatasetKind,
    event_id: Option<String>,
    window: Option<DateWindow>,
    units: Vec<DataUnit>,
    provenance: Vec<String>,
}

impl Dataset {
    /// Builds a dataset, sorting units by timestamp. Ties keep input order.
    pub fn new(kind: DatasetKind, mut units: Vec<DataUnit>) -> Self {
        units.sort_by_key(|u| u.timestamp);
        Dataset {
            kind,
            event_id: None,
            window: None,
            units,
            provenance: Vec::new(),
        }
    }

    pub fn with_event(mut self, event_id: impl Into<String>) -> Self {
        self.event_id = Some(event_id.into());
        self
    }

    pub fn with_kind(mut self, kind: DatasetKind) -> Self {
        self.kind = kind;
        self
    }

    /// Attaches window metadata without filtering. Use [`slice_window`] to
    /// also drop units outside the window.
    pub fn with_window(mut self, window: DateWindow) -> Self {
        self.window = Some(window);
        self
    }

    pub fn kind(&self) -> DatasetKind {
        self.kind
    }

    pub fn event_id(&self) -> Option<&str> {
        self.event_id.as_deref()
    }

    pub fn window(&self) -> Option<DateWindow> {
        self.window
    }

    pub fn units(&self) -> &[DataUnit] {
        &self.units
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.units.iter().map(|u| u.text.as_str())
    }

    /// Concatenates two datasets, keeping `self`'s labels.
    pub fn merge(&self, other: &Dataset) -> Dataset {
        let mut units = self.units.clone();
        units.extend(other.units.iter().cloned());
        let mut merged = Dataset::new(self.kind, units);
        merged.event_id = self.event_id.clone();
        merged.window = self.window;
        merged.provenance = self.provenance.clone();
        merged.provenance.push("merge".into());
        merged
    }

    /// Derives a dataset from `self` holding `units` (already in order).
    pub(crate) fn derive(&self, units: Vec<DataUnit>, step: impl Into<String>) -> Dataset {
        let mut provenance = self.provenance.clone();
        provenance.push(step.into());
        Dataset {
            kind: self.kind,
            event_id: self.event_id.clone(),
            window: self.window,
            units,
            provenance,
        }
    }
}

mod utc_seconds {
    use super::*;
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&ts.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_timestamp(&raw).map_err(de::Error::custom)
    }
}

/// Parses an RFC 3339 / ISO-8601 timestamp with offset, normalises it to UTC
/// and truncates it to whole seconds.
pub fn parse_timestamp(raw: &str) -> Result<DateTime<Utc>, String> {
    let parsed = DateTime::parse_from_rfc3339(raw.trim())
        .map_err(|e| format!("unparseable timestamp {raw:?}: {e}"))?;
    let utc = parsed.with_timezone(&Utc);
    Ok(DateTime::from_timestamp(utc.timestamp(), 0).expect("in range"))
}
