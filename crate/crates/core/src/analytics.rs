//! Volumetrics, daily sentiment series, peak days, heat maps and
//! per-emotion intensity tables.
//!
//! Everything here emits plain data plus CSV/JSON renderings; plotting is
//! left to downstream tools.

use std::collections::{BTreeMap, HashSet};

use chrono::NaiveDate;
use serde::{Serialize, Serializer};

use crate::corpus::{Dataset, DatasetKind, DateWindow};
use crate::emotion::{
    combination_partition, emotion_intensity, Emotion, EmotionIntensity, EmotionLexicon,
    EmotionMask,
};
use crate::sentiment::{
    classify_text, ClassCounts, SentimentClass, SentimentThresholds, ValenceLexicon,
};
use crate::timeline::Event;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DailyRow {
    pub date: NaiveDate,
    pub negative: u64,
    pub neutral: u64,
    pub positive: u64,
    pub total: u64,
}

impl DailyRow {
    fn counts(&self) -> ClassCounts {
        ClassCounts {
            negative: self.negative,
            neutral: self.neutral,
            positive: self.positive,
        }
    }
}

/// Per-day sentiment counts over a whole window, zero days included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DailySeries {
    pub event_id: Option<String>,
    pub window: DateWindow,
    pub rows: Vec<DailyRow>,
}

impl DailySeries {
    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.total).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("date,negative,neutral,positive,total\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.date, r.negative, r.neutral, r.positive, r.total
            ));
        }
        out
    }
}

/// Counts classified units per calendar day of the dataset's window.
pub fn daily_series(
    d: &Dataset,
    lex: &ValenceLexicon,
    th: &SentimentThresholds,
) -> Result<DailySeries> {
    if d.is_empty() {
        return Err(Error::empty("daily series"));
    }
    let window = d.window().ok_or(Error::MissingWindow)?;
    let mut per_day: BTreeMap<NaiveDate, ClassCounts> = window
        .days()
        .map(|day| (day, ClassCounts::default()))
        .collect();
    for u in d.units() {
        let counts = per_day
            .get_mut(&u.date())
            .ok_or_else(|| Error::OutsideWindow {
                id: u.id.clone(),
                date: u.date(),
                start: window.start(),
                end: window.end(),
            })?;
        counts.add(classify_text(&u.text, lex, th));
    }
    let rows = per_day
        .into_iter()
        .map(|(date, c)| DailyRow {
            date,
            negative: c.negative,
            neutral: c.neutral,
            positive: c.positive,
            total: c.total(),
        })
        .collect();
    Ok(DailySeries {
        event_id: d.event_id().map(str::to_owned),
        window,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeakReport {
    pub event_id: String,
    pub peak_date: NaiveDate,
    /// Calendar days from the attack's last day (day 0) to the peak.
    pub delay_days: i64,
    pub dominant: SentimentClass,
    pub peak_total: u64,
}

/// Finds the busiest day. Ties go to the earliest date; the dominant class
/// on that day breaks ties as negative, then neutral, then positive.
pub fn peak_day(series: &DailySeries, e: &Event) -> Result<PeakReport> {
    let peak = series
        .rows
        .iter()
        .filter(|r| r.total > 0)
        .fold(None::<&DailyRow>, |best, r| match best {
            Some(b) if b.total >= r.total => Some(b),
            _ => Some(r),
        })
        .ok_or(Error::AllZeroSeries)?;
    let counts = peak.counts();
    let dominant = [
        SentimentClass::Negative,
        SentimentClass::Neutral,
        SentimentClass::Positive,
    ]
    .into_iter()
    .fold(SentimentClass::Negative, |best, c| {
        if counts.get(c) > counts.get(best) {
            c
        } else {
            best
        }
    });
    Ok(PeakReport {
        event_id: series
            .event_id
            .clone()
            .unwrap_or_else(|| e.event_id.clone()),
        peak_date: peak.date,
        delay_days: (peak.date - e.attack_end).num_days(),
        dominant,
        peak_total: peak.total,
    })
}

/// Dataset sizes and per-day attention for one event.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumetricReport {
    pub event_id: String,
    pub n_whole: u64,
    pub n_attack: u64,
    pub n_benchmark: u64,
    /// `n_attack / n_whole`.
    pub attack_share: f64,
    pub whole_days: u32,
    pub benchmark_days: u32,
    pub whole_per_day: f64,
    pub benchmark_per_day: f64,
    /// Whole per-day rate over benchmark per-day rate. Infinite when the
    /// benchmark is empty.
    #[serde(serialize_with = "serialize_ratio")]
    pub attention_ratio: f64,
    pub warnings: Vec<String>,
}

fn serialize_ratio<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "+inf" } else { "-inf" })
    } else if v.is_nan() {
        s.serialize_none()
    } else {
        s.serialize_f64(*v)
    }
}

pub fn volumetrics(
    event_id: &str,
    whole: &Dataset,
    attack: &Dataset,
    benchmark: &Dataset,
    attack_window: DateWindow,
    benchmark_window: DateWindow,
) -> Result<VolumetricReport> {
    let whole_ids: HashSet<&str> = whole.units().iter().map(|u| u.id.as_str()).collect();
    if let Some(u) = attack
        .units()
        .iter()
        .find(|u| !whole_ids.contains(u.id.as_str()))
    {
        return Err(Error::NotSubset(u.id.clone()));
    }
    let mut warnings = Vec::new();
    let (n_whole, n_attack, n_benchmark) = (
        whole.len() as u64,
        attack.len() as u64,
        benchmark.len() as u64,
    );
    let attack_share = if n_whole == 0 {
        warnings.push("whole dataset is empty; attack_share set to 0".to_owned());
        0.0
    } else {
        n_attack as f64 / n_whole as f64
    };
    let (whole_days, benchmark_days) = (attack_window.len_days(), benchmark_window.len_days());
    let whole_per_day = n_whole as f64 / whole_days as f64;
    let benchmark_per_day = n_benchmark as f64 / benchmark_days as f64;
    let attention_ratio = if n_benchmark == 0 {
        warnings.push("benchmark dataset is empty; attention_ratio is +inf".to_owned());
        f64::INFINITY
    } else {
        whole_per_day / benchmark_per_day
    };
    Ok(VolumetricReport {
        event_id: event_id.to_owned(),
        n_whole,
        n_attack,
        n_benchmark,
        attack_share,
        whole_days,
        benchmark_days,
        whole_per_day,
        benchmark_per_day,
        attention_ratio,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapRow {
    pub event_id: String,
    pub n: u64,
    pub counts: Vec<u64>,
    pub percent: Vec<f64>,
}

/// One row per event, 32 combination-cell percentages ordered by mask value
/// (`-----` first, `HASDF` last).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapMatrix {
    pub rows: Vec<HeatmapRow>,
}

impl HeatmapMatrix {
    pub fn columns() -> Vec<String> {
        EmotionMask::all().map(|m| m.to_string()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("event_id");
        for c in Self::columns() {
            out.push(',');
            out.push_str(&c);
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.event_id);
            for p in &r.percent {
                out.push_str(&format!(",{p}"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn heatmap_matrix(
    datasets: &[(&str, &Dataset)],
    lex: &EmotionLexicon,
) -> Result<HeatmapMatrix> {
    let rows = datasets
        .iter()
        .map(|(event_id, d)| {
            let cells = combination_partition(d, lex)
                .map_err(|_| Error::empty(format!("event {event_id}")))?;
            Ok(HeatmapRow {
                event_id: event_id.to_string(),
                n: cells.n(),
                counts: cells.counts().to_vec(),
                percent: cells.percentages().to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HeatmapMatrix { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntensityRow {
    pub event_id: String,
    pub kind: DatasetKind,
    pub intensity: EmotionIntensity,
}

/// Mean emotion intensities per event and dataset kind.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntensityTable {
    pub rows: Vec<IntensityRow>,
}

impl IntensityTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("event_id,dataset_kind,H,A,S,D,F\n");
        for r in &self.rows {
            out.push_str(&format!("{},{}", r.event_id, r.kind));
            for e in Emotion::ALL {
                out.push_str(&format!(",{}", r.intensity.get(e)));
            }
            out.push('\n');
        }
        out
    }

    /// Values for one emotion across events, in row order: the series behind
    /// a "mean intensity of fear across datasets" style chart.
    pub fn series(&self, emotion: Emotion, kind: DatasetKind) -> Vec<(String, f64)> {
        self.rows
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| (r.event_id.clone(), r.intensity.get(emotion)))
            .collect()
    }
}

/// Rows ordered by input event order, then whole, attack, benchmark.
pub fn intensity_series(
    events: &[(&str, &Dataset, &Dataset, &Dataset)],
    lex: &EmotionLexicon,
) -> Result<IntensityTable> {
    let mut rows = Vec::with_capacity(events.len() * 3);
    for (event_id, whole, attack, benchmark) in events {
        for (kind, d) in [
            (DatasetKind::Whole, whole),
            (DatasetKind::Attack, attack),
            (DatasetKind::Benchmark, benchmark),
        ] {
            let intensity = emotion_intensity(d, lex)
                .map_err(|_| Error::empty(format!("event {event_id} ({kind})")))?;
            rows.push(IntensityRow {
                event_id: event_id.to_string(),
                kind,
                intensity,
            });
        }
    }
    Ok(IntensityTable { rows })
}
