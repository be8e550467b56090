//! Deviation-based attack flagging.
//!
//! A [`Baseline`] summarises a benchmark period. Each live window is compared
//! against it and an [`Alert`] lists every condition that holds:
//!
//! | reason            | condition                                         |
//! |-------------------|---------------------------------------------------|
//! | `negative_spike`  | negative share rises by more than `negative_jump` |
//! | `fear_spike`      | mean fear intensity rises by more than `fear_jump`|
//! | `volume_spike`    | per-day rate exceeds `volume_ratio` × baseline    |
//! | `attack_keywords` | more than half the window mentions the attack     |
//!
//! Windows with fewer than `min_units` units never alert.

use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    mentions_attack, CleanOptions, DataUnit, Dataset, DatasetKind, DateWindow, Deduplicator,
    TopicFilter,
};
use crate::emotion::{emotion_intensity, Emotion};
use crate::lexicon::Lexicons;
use crate::sentiment::{sentiment_profile, SentimentProfile, SentimentThresholds};
use crate::timeline::Event;
use crate::{Error, Result};

/// Share of attack-keyword units above which a window alerts.
pub const ATTACK_KEYWORD_SHARE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlertPolicy {
    /// Percentage points.
    pub negative_jump: f64,
    /// Absolute mean-intensity difference.
    pub fear_jump: f64,
    /// Multiplier on the baseline per-day rate.
    pub volume_ratio: f64,
    pub min_units: usize,
    pub window_days: u32,
}

impl Default for AlertPolicy {
    fn default() -> Self {
        AlertPolicy {
            negative_jump: 20.0,
            fear_jump: 0.1,
            volume_ratio: 2.0,
            min_units: 10,
            window_days: 1,
        }
    }
}

impl AlertPolicy {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("negative_jump", self.negative_jump),
            ("fear_jump", self.fear_jump),
            ("volume_ratio", self.volume_ratio),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::InvalidPolicy(format!(
                    "{name} must be a positive number, got {v}"
                )));
            }
        }
        if self.min_units < 1 {
            return Err(Error::InvalidPolicy("min_units must be at least 1".into()));
        }
        if self.window_days < 1 {
            return Err(Error::InvalidPolicy(
                "window_days must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Reads a TOML policy file; omitted keys keep their defaults.
    pub fn load(path: &Path) -> Result<AlertPolicy> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let policy: AlertPolicy = toml::from_str(&text)
            .map_err(|e| Error::InvalidPolicy(format!("{}: {e}", path.display())))?;
        policy.validate()?;
        Ok(policy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Baseline {
    pub sentiment: SentimentProfile,
    pub fear_mean: f64,
    pub per_day_rate: f64,
    pub window: DateWindow,
}

pub fn build_baseline(
    benchmark: &Dataset,
    lexicons: &Lexicons,
    thresholds: &SentimentThresholds,
    window: DateWindow,
    policy: &AlertPolicy,
) -> Result<Baseline> {
    if benchmark.len() < policy.min_units {
        return Err(Error::InsufficientBaseline {
            required: policy.min_units,
            actual: benchmark.len(),
        });
    }
    Ok(Baseline {
        sentiment: sentiment_profile(benchmark, &lexicons.valence, thresholds)?,
        fear_mean: emotion_intensity(benchmark, &lexicons.emotion)?.get(Emotion::Fear),
        per_day_rate: benchmark.len() as f64 / window.len_days() as f64,
        window,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonKind {
    NegativeSpike,
    FearSpike,
    VolumeSpike,
    AttackKeywords,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlertReason {
    pub reason: ReasonKind,
    pub observed: f64,
    /// Baseline value; absent for the keyword-share rule, which has none.
    pub baseline: Option<f64>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Alert {
    pub date: NaiveDate,
    pub window: DateWindow,
    pub units: usize,
    pub reasons: Vec<AlertReason>,
}

impl Alert {
    pub fn has(&self, kind: ReasonKind) -> bool {
        self.reasons.iter().any(|r| r.reason == kind)
    }
}

/// Outcome of evaluating one window.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Assessment {
    Alert(Alert),
    Quiet {
        window: DateWindow,
        units: usize,
    },
    Insufficient {
        window: DateWindow,
        units: usize,
        required: usize,
    },
}

impl Assessment {
    pub fn alert(&self) -> Option<&Alert> {
        match self {
            Assessment::Alert(a) => Some(a),
            _ => None,
        }
    }

    pub fn into_alert(self) -> Option<Alert> {
        match self {
            Assessment::Alert(a) => Some(a),
            _ => None,
        }
    }
}

/// Evaluates a window. The window length comes from `w`'s window metadata,
/// falling back to `policy.window_days` starting at its first unit.
pub fn assess_window(
    baseline: &Baseline,
    w: &Dataset,
    lexicons: &Lexicons,
    thresholds: &SentimentThresholds,
    policy: &AlertPolicy,
) -> Assessment {
    let window = w.window().unwrap_or_else(|| {
        let start = w
            .units()
            .first()
            .map(DataUnit::date)
            .unwrap_or(baseline.window.end());
        DateWindow::new(
            start,
            start + chrono::Days::new(policy.window_days as u64 - 1),
        )
        .expect("window_days >= 1")
    });
    if w.len() < policy.min_units {
        return Assessment::Insufficient {
            window,
            units: w.len(),
            required: policy.min_units,
        };
    }

    let sentiment = sentiment_profile(w, &lexicons.valence, thresholds).expect("non-empty");
    let fear = emotion_intensity(w, &lexicons.emotion)
        .expect("non-empty")
        .get(Emotion::Fear);
    let rate = w.len() as f64 / window.len_days() as f64;
    let rate_ratio = if baseline.per_day_rate > 0.0 {
        rate / baseline.per_day_rate
    } else {
        f64::INFINITY
    };
    let keyword_share = w.texts().filter(|t| mentions_attack(t)).count() as f64 / w.len() as f64;

    let mut reasons = Vec::new();
    if sentiment.negative - baseline.sentiment.negative > policy.negative_jump {
        reasons.push(AlertReason {
            reason: ReasonKind::NegativeSpike,
            observed: sentiment.negative,
            baseline: Some(baseline.sentiment.negative),
            threshold: policy.negative_jump,
        });
    }
    if fear - baseline.fear_mean > policy.fear_jump {
        reasons.push(AlertReason {
            reason: ReasonKind::FearSpike,
            observed: fear,
            baseline: Some(baseline.fear_mean),
            threshold: policy.fear_jump,
        });
    }
    if rate_ratio > policy.volume_ratio {
        reasons.push(AlertReason {
            reason: ReasonKind::VolumeSpike,
            observed: rate,
            baseline: Some(baseline.per_day_rate),
            threshold: policy.volume_ratio,
        });
    }
    if keyword_share > ATTACK_KEYWORD_SHARE {
        reasons.push(AlertReason {
            reason: ReasonKind::AttackKeywords,
            observed: keyword_share,
            baseline: None,
            threshold: ATTACK_KEYWORD_SHARE,
        });
    }

    if reasons.is_empty() {
        Assessment::Quiet {
            window,
            units: w.len(),
        }
    } else {
        Assessment::Alert(Alert {
            date: window.start(),
            window,
            units: w.len(),
            reasons,
        })
    }
}

pub fn evaluate_window(
    baseline: &Baseline,
    w: &Dataset,
    lexicons: &Lexicons,
    thresholds: &SentimentThresholds,
    policy: &AlertPolicy,
) -> Option<Alert> {
    assess_window(baseline, w, lexicons, thresholds, policy).into_alert()
}

/// Groups a time-ordered unit stream into consecutive `window_days` windows
/// anchored at the first unit's date, and assesses each window as soon as a
/// later unit closes it.
///
/// Units are cleaned and de-duplicated on the way in. Units dated before the
/// open window are counted in [`Watcher::late_units`] and dropped.
#[derive(Debug)]
pub struct Watcher<'a> {
    baseline: Baseline,
    lexicons: &'a Lexicons,
    thresholds: SentimentThresholds,
    policy: AlertPolicy,
    topic: Option<TopicFilter>,
    dedup: Deduplicator,
    anchor: Option<NaiveDate>,
    open: Option<(DateWindow, Vec<DataUnit>)>,
    late: usize,
}

impl<'a> Watcher<'a> {
    pub fn new(
        baseline: Baseline,
        lexicons: &'a Lexicons,
        thresholds: SentimentThresholds,
        policy: AlertPolicy,
    ) -> Self {
        Watcher {
            baseline,
            lexicons,
            thresholds,
            policy,
            topic: None,
            dedup: Deduplicator::default(),
            anchor: None,
            open: None,
            late: 0,
        }
    }

    /// Applies the event's keyword filter to incoming units.
    pub fn with_topic(mut self, event: &Event) -> Self {
        self.topic = TopicFilter::for_event(event);
        self
    }

    pub fn late_units(&self) -> usize {
        self.late
    }

    fn window_for(&self, date: NaiveDate) -> DateWindow {
        let anchor = self.anchor.expect("anchored");
        let span = self.policy.window_days as i64;
        let idx = (date - anchor).num_days().div_euclid(span);
        let start = anchor + chrono::Duration::days(idx * span);
        DateWindow::new(start, start + chrono::Duration::days(span - 1)).expect("span >= 1")
    }

    /// Feeds one unit; returns the assessment of the window it closed, if any.
    pub fn push(&mut self, unit: &DataUnit) -> Option<Assessment> {
        let unit = self.dedup.admit(unit, CleanOptions::default())?;
        if self.topic.as_ref().is_some_and(|t| !t.matches(&unit.text)) {
            return None;
        }
        let date = unit.date();
        self.anchor.get_or_insert(date);
        let mut closed = None;
        match &mut self.open {
            Some((w, units)) if w.contains(date) => {
                units.push(unit);
                return None;
            }
            Some((w, _)) if date < w.start() => {
                self.late += 1;
                return None;
            }
            Some(_) => closed = self.close(),
            None => {}
        }
        self.open = Some((self.window_for(date), vec![unit]));
        closed
    }

    /// Assesses the window still open at end of input.
    pub fn finish(&mut self) -> Option<Assessment> {
        self.close()
    }

    fn close(&mut self) -> Option<Assessment> {
        let (window, units) = self.open.take()?;
        let d = Dataset::new(DatasetKind::Whole, units).with_window(window);
        Some(assess_window(
            &self.baseline,
            &d,
            self.lexicons,
            &self.thresholds,
            &self.policy,
        ))
    }
}

/// Runs a whole dataset through a [`Watcher`].
pub fn assess_stream(
    baseline: &Baseline,
    stream: &Dataset,
    lexicons: &Lexicons,
    thresholds: &SentimentThresholds,
    policy: &AlertPolicy,
) -> Vec<Assessment> {
    let mut watcher = Watcher::new(*baseline, lexicons, *thresholds, *policy);
    let mut out: Vec<Assessment> = stream
        .units()
        .iter()
        .filter_map(|u| watcher.push(u))
        .collect();
    out.extend(watcher.finish());
    out
}
