//! The attack timeline and data-window resolution.
//!
//! An event's attack data window runs from one day before the attack
//! started to six days after it ended. Its benchmark window is the attack
//! window shifted by one calendar month, normally backwards. Windows
//! recorded in the timeline file override both rules.

use std::collections::BTreeMap;
use std::path::Path;

use chrono::{Days, Months, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::corpus::DateWindow;
use crate::{Error, Result};

const BUNDLED_TIMELINE: &str = include_str!("../data/timeline.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Actual,
    ThreatOrAverted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkDirection {
    #[default]
    MonthBefore,
    MonthAfter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedSizes {
    pub whole: u64,
    pub attack: u64,
    pub benchmark: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEvent")]
pub struct Event {
    pub serial: u32,
    pub event_id: String,
    /// Part of the comparative analysis (carries recorded windows).
    pub analyzed: bool,
    pub currency: String,
    pub ticker: String,
    pub attack_start: NaiveDate,
    pub attack_end: NaiveDate,
    pub kind: EventKind,
    pub benchmark_direction: BenchmarkDirection,
    pub extra_keywords: Vec<String>,
    pub recorded_attack_window: Option<DateWindow>,
    pub recorded_benchmark_window: Option<DateWindow>,
    pub recorded_sizes: Option<RecordedSizes>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    serial: u32,
    event_id: String,
    #[serde(default)]
    analyzed: bool,
    currency: String,
    ticker: String,
    attack_start: NaiveDate,
    attack_end: NaiveDate,
    kind: EventKind,
    #[serde(default)]
    benchmark_direction: BenchmarkDirection,
    #[serde(default)]
    extra_keywords: Vec<String>,
    recorded_attack_window: Option<[NaiveDate; 2]>,
    recorded_benchmark_window: Option<[NaiveDate; 2]>,
    recorded_sizes: Option<RecordedSizes>,
}

impl TryFrom<RawEvent> for Event {
    type Error = String;

    fn try_from(raw: RawEvent) -> std::result::Result<Self, String> {
        if raw.event_id.trim().is_empty() {
            return Err("event_id must not be empty".into());
        }
        if raw.attack_start > raw.attack_end {
            return Err(format!(
                "{}: attack_start {} is after attack_end {}",
                raw.event_id, raw.attack_start, raw.attack_end
            ));
        }
        let window = |pair: Option<[NaiveDate; 2]>, name: &str| {
            pair.map(|[s, e]| DateWindow::new(s, e))
                .transpose()
                .map_err(|err| format!("{}: {name}: {err}", raw.event_id))
        };
        Ok(Event {
            recorded_attack_window: window(raw.recorded_attack_window, "recorded_attack_window")?,
            recorded_benchmark_window: window(
                raw.recorded_benchmark_window,
                "recorded_benchmark_window",
            )?,
            serial: raw.serial,
            event_id: raw.event_id,
            analyzed: raw.analyzed,
            currency: raw.currency,
            ticker: raw.ticker,
            attack_start: raw.attack_start,
            attack_end: raw.attack_end,
            kind: raw.kind,
            benchmark_direction: raw.benchmark_direction,
            extra_keywords: raw.extra_keywords,
            recorded_sizes: raw.recorded_sizes,
        })
    }
}

impl Event {
    /// The attack period `(t^s, t^e)` as a window.
    pub fn period(&self) -> DateWindow {
        DateWindow::new(self.attack_start, self.attack_end).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventWindows {
    pub attack: DateWindow,
    pub benchmark: DateWindow,
}

/// Resolves the attack and benchmark windows, preferring recorded windows.
pub fn compute_windows(e: &Event) -> EventWindows {
    let rule = rule_windows(e);
    EventWindows {
        attack: e.recorded_attack_window.unwrap_or(rule.attack),
        benchmark: e.recorded_benchmark_window.unwrap_or(rule.benchmark),
    }
}

/// Windows from the rules alone, ignoring any recorded override.
pub fn rule_windows(e: &Event) -> EventWindows {
    let attack = DateWindow::new(e.attack_start - Days::new(1), e.attack_end + Days::new(6))
        .expect("start <= end");
    let shift = |d: NaiveDate| {
        match e.benchmark_direction {
            BenchmarkDirection::MonthBefore => d.checked_sub_months(Months::new(1)),
            BenchmarkDirection::MonthAfter => d.checked_add_months(Months::new(1)),
        }
        .expect("date in range")
    };
    let benchmark =
        DateWindow::new(shift(attack.start()), shift(attack.end())).expect("shift is monotone");
    EventWindows { attack, benchmark }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    #[serde(rename = "event")]
    events: Vec<Event>,
}

impl Timeline {
    /// The timeline shipped with the crate: 31 events, E1..E17 analysed.
    pub fn bundled() -> Timeline {
        Timeline::from_toml_str(BUNDLED_TIMELINE).expect("bundled timeline is valid")
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED_TIMELINE
    }

    pub fn load(path: &Path) -> Result<Timeline> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Timeline::from_toml_str(&text).map_err(|e| match e {
            Error::Timeline(msg) => Error::Timeline(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Timeline> {
        let timeline: Timeline =
            toml::from_str(text).map_err(|e| Error::Timeline(e.to_string()))?;
        let mut ids = std::collections::HashSet::new();
        for e in &timeline.events {
            if !ids.insert(e.event_id.as_str()) {
                return Err(Error::Timeline(format!(
                    "duplicate event_id {:?}",
                    e.event_id
                )));
            }
        }
        Ok(timeline)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn analyzed(&self) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(|e| e.analyzed)
    }

    pub fn get(&self, id: &str) -> Result<&Event> {
        self.events
            .iter()
            .find(|e| e.event_id.eq_ignore_ascii_case(id))
            .ok_or_else(|| Error::UnknownEvent {
                id: id.to_owned(),
                known: self.events.iter().map(|e| e.event_id.clone()).collect(),
            })
    }

    /// Number of events per currency, in first-appearance order.
    pub fn attack_counts(&self) -> Vec<(String, usize)> {
        let mut order: Vec<String> = Vec::new();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.events {
            let c = counts.entry(e.currency.as_str()).or_insert(0);
            if *c == 0 {
                order.push(e.currency.clone());
            }
            *c += 1;
        }
        order
            .into_iter()
            .map(|cur| {
                let n = counts[cur.as_str()];
                (cur, n)
            })
            .collect()
    }

    /// Events of currencies that appear more than once.
    pub fn multi_attack(&self) -> Vec<&Event> {
        let counts: BTreeMap<String, usize> = self.attack_counts().into_iter().collect();
        self.events
            .iter()
            .filter(|e| counts[&e.currency] > 1)
            .collect()
    }
}
