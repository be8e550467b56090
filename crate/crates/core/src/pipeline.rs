//! Builds the whole / attack / benchmark datasets of an event from a raw
//! corpus.

use serde::Serialize;

use crate::corpus::{
    clean_dataset_with, extract_attack_subset, filter_topic, slice_window, CleanOptions, Dataset,
    DatasetKind,
};
use crate::timeline::{compute_windows, Event, EventWindows};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventDatasets {
    pub event_id: String,
    pub windows: EventWindows,
    pub whole: Dataset,
    pub attack: Dataset,
    pub benchmark: Dataset,
}

impl EventDatasets {
    pub fn get(&self, kind: DatasetKind) -> &Dataset {
        match kind {
            DatasetKind::Whole => &self.whole,
            DatasetKind::Attack => &self.attack,
            DatasetKind::Benchmark => &self.benchmark,
        }
    }
}

/// Cleans `raw`, applies the event's topic filter, and cuts the attack and
/// benchmark windows. The attack dataset is the keyword subset of the whole
/// dataset.
pub fn build_event_datasets(raw: &Dataset, event: &Event, opts: CleanOptions) -> EventDatasets {
    let windows = compute_windows(event);
    let topical = filter_topic(&clean_dataset_with(raw, opts), event);
    let whole = slice_window(&topical, windows.attack)
        .with_kind(DatasetKind::Whole)
        .with_event(&event.event_id);
    let attack = extract_attack_subset(&whole);
    let benchmark = slice_window(&topical, windows.benchmark)
        .with_kind(DatasetKind::Benchmark)
        .with_event(&event.event_id);
    EventDatasets {
        event_id: event.event_id.clone(),
        windows,
        whole,
        attack,
        benchmark,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_timestamp, DataUnit};
    use crate::timeline::Timeline;

    #[test]
    fn splits_raw_corpus_by_window_and_keywords() {
        let t = Timeline::bundled();
        let e3 = t.get("E3").unwrap();
        let mk = |id: &str, ts: &str, text: &str| DataUnit {
            id: id.into(),
            timestamp: parse_timestamp(ts).unwrap(),
            author: id.into(),
            text: text.into(),
            lang: None,
        };
        let raw = Dataset::new(
            DatasetKind::Whole,
            vec![
                mk("b1", "2018-03-05T10:00:00Z", "XVG coin looking good"),
                mk("b2", "2018-03-05T11:00:00Z", "on the verge of tears"),
                mk("w1", "2018-04-05T10:00:00Z", "Verge XVG hit by 51% attack!"),
                mk("w2", "2018-04-06T10:00:00Z", "xvg mining pools are fine"),
                mk("w3", "2018-04-06T11:00:00Z", "verge of a breakthrough"),
                mk("x1", "2018-04-20T10:00:00Z", "xvg attack recap"),
            ],
        );
        let ds = build_event_datasets(&raw, e3, CleanOptions::default());
        let ids = |d: &Dataset| d.units().iter().map(|u| u.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&ds.whole), ["w1", "w2"]);
        assert_eq!(ids(&ds.attack), ["w1"]);
        assert_eq!(ids(&ds.benchmark), ["b1"]);
        assert_eq!(ds.attack.kind(), DatasetKind::Attack);
        assert_eq!(ds.benchmark.window(), Some(ds.windows.benchmark));
        assert_eq!(ds.get(DatasetKind::Whole).event_id(), Some("E3"));
        assert_eq!(ds.whole.units()[0].text, "verge xvg hit by 51% attack");
    }
}
