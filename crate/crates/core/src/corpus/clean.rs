use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;

use super::{DataUnit, Dataset, DatasetKind};
use crate::timeline::Event;

/// Generic crypto vocabulary used to disambiguate currency names that are
/// also ordinary words.
pub const TOPIC_KEYWORDS: [&str; 5] = ["crypto", "coin", "currency", "miner", "mining"];

/// Substrings marking a message as discussing the attack itself.
/// "double spend" also covers "double spending".
pub const ATTACK_KEYWORDS: [&str; 3] = ["51", "attack", "double spend"];

fn url_pattern() -> &'static Regex {
    static URL: OnceLock<Regex> = OnceLock::new();
    URL.get_or_init(|| Regex::new(r"(?i)(?:https?://|www\.)\S*").expect("valid regex"))
}

/// Normalises message text: strips URLs, lowercases, replaces everything
/// except letters, digits, `#`, `@` and `%` by a space, and collapses
/// whitespace. Idempotent.
pub fn clean_text(raw: &str) -> String {
    let without_urls = url_pattern().replace_all(raw, " ");
    let lowered = without_urls.to_lowercase();
    let mut out = String::with_capacity(lowered.len());
    let mut pending_space = false;
    for c in lowered.chars() {
        // Characters with no lowercase mapping (e.g. mathematical capitals)
        // are still uppercase here and get dropped.
        let keep = (c.is_alphanumeric() && !c.is_uppercase()) || matches!(c, '#' | '@' | '%');
        if keep {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

/// BCP-47 English check: `en` or `en-*`, case-insensitive.
pub fn is_english(tag: &str) -> bool {
    let tag = tag.trim();
    tag.eq_ignore_ascii_case("en") || (tag.len() > 3 && tag[..3].eq_ignore_ascii_case("en-"))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CleanOptions {
    /// Keep the original text on retained units instead of the cleaned form.
    /// Filtering and deduplication still use the cleaned form.
    pub keep_raw_text: bool,
}

/// Drops non-English units (units without a language tag are kept), removes
/// repeats of the same cleaned text by the same author keeping the earliest,
/// and replaces text by its cleaned form. Units whose cleaned text is empty
/// are dropped.
pub fn clean_dataset(d: &Dataset) -> Dataset {
    clean_dataset_with(d, CleanOptions::default())
}

pub fn clean_dataset_with(d: &Dataset, opts: CleanOptions) -> Dataset {
    let mut dedup = Deduplicator::default();
    let units = d
        .units()
        .iter()
        .filter_map(|u| dedup.admit(u, opts))
        .collect();
    d.derive(units, "clean")
}

/// Unit-at-a-time form of [`clean_dataset_with`] for streams. Feed units in
/// timestamp order.
#[derive(Debug, Default, Clone)]
pub struct Deduplicator {
    seen: HashSet<(String, String)>,
}

impl Deduplicator {
    /// Returns the cleaned unit, or `None` if it is non-English, empty after
    /// cleaning, or a repeat.
    pub fn admit(&mut self, u: &DataUnit, opts: CleanOptions) -> Option<DataUnit> {
        if u.lang.as_deref().is_some_and(|l| !is_english(l)) {
            return None;
        }
        let cleaned = clean_text(&u.text);
        if cleaned.is_empty() || !self.seen.insert((u.author.clone(), cleaned.clone())) {
            return None;
        }
        Some(DataUnit {
            text: if opts.keep_raw_text {
                u.text.clone()
            } else {
                cleaned
            },
            ..u.clone()
        })
    }
}

/// Applies the extra-keyword relevance filter for events whose currency
/// name is ambiguous. Events without extra keywords pass `d` through.
pub fn filter_topic(d: &Dataset, event: &Event) -> Dataset {
    let Some(filter) = TopicFilter::for_event(event) else {
        return d.clone();
    };
    let units = d
        .units()
        .iter()
        .filter(|u| filter.matches(&u.text))
        .cloned()
        .collect();
    d.derive(units, format!("filter_topic {}", event.event_id))
}

/// Keyword set of an event with an ambiguous currency name.
#[derive(Debug, Clone)]
pub struct TopicFilter {
    keywords: Vec<String>,
}

impl TopicFilter {
    /// `None` when the event needs no filtering.
    pub fn for_event(event: &Event) -> Option<TopicFilter> {
        if event.extra_keywords.is_empty() {
            return None;
        }
        let mut keywords: Vec<String> = TOPIC_KEYWORDS.iter().map(|k| k.to_string()).collect();
        keywords.push(clean_text(&event.ticker));
        keywords.extend(event.extra_keywords.iter().map(|k| clean_text(k)));
        keywords.retain(|k| !k.is_empty());
        Some(TopicFilter { keywords })
    }

    pub fn matches(&self, text: &str) -> bool {
        let text = clean_text(text);
        self.keywords.iter().any(|k| text.contains(k.as_str()))
    }
}

/// Returns the units that mention the attack explicitly and labels the
/// result as an attack dataset.
pub fn extract_attack_subset(d: &Dataset) -> Dataset {
    let units = d
        .units()
        .iter()
        .filter(|u| mentions_attack(&u.text))
        .cloned()
        .collect();
    d.derive(units, "extract_attack_subset")
        .with_kind(DatasetKind::Attack)
}

pub fn mentions_attack(text: &str) -> bool {
    let text = clean_text(text);
    ATTACK_KEYWORDS.iter().any(|k| text.contains(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_timestamp;
    use crate::timeline::Timeline;
    use proptest::prelude::*;

    fn unit(id: &str, author: &str, ts: &str, text: &str, lang: Option<&str>) -> DataUnit {
        DataUnit {
            id: id.into(),
            timestamp: parse_timestamp(ts).unwrap(),
            author: author.into(),
            text: text.into(),
            lang: lang.map(Into::into),
        }
    }

    #[test]
    fn clean_text_examples() {
        assert_eq!(clean_text("Check https://t.co/xyz NOW!!!"), "check now");
        assert_eq!(clean_text(""), "");
        assert_eq!(
            clean_text("  $BTG   51% #Attack @user... "),
            "btg 51% #attack @user"
        );
        assert_eq!(clean_text("see www.example.com/x?y=1 ok"), "see ok");
        assert_eq!(clean_text("Ünïcödé ÇAFÉ"), "ünïcödé çafé");
    }

    #[test]
    fn english_tags() {
        assert!(is_english("en"));
        assert!(is_english("EN-gb"));
        assert!(!is_english("es"));
        assert!(!is_english("eng"));
    }

    #[test]
    fn dedup_keeps_earliest_per_author() {
        let d = Dataset::new(
            DatasetKind::Whole,
            vec![
                unit("late", "alice", "2020-01-02T00:00:00Z", "Same TEXT!", None),
                unit("early", "alice", "2020-01-01T00:00:00Z", "same text", None),
                unit("other", "bob", "2020-01-03T00:00:00Z", "same text", None),
            ],
        );
        let c = clean_dataset(&d);
        let ids: Vec<_> = c.units().iter().map(|u| u.id.as_str()).collect();
        assert_eq!(ids, ["early", "other"]);
        assert_eq!(c.provenance().last().map(String::as_str), Some("clean"));
    }

    #[test]
    fn non_english_dropped_untagged_kept() {
        let d = Dataset::new(
            DatasetKind::Whole,
            vec![
                unit("es", "a", "2020-01-01T00:00:00Z", "hola", Some("es")),
                unit("none", "a", "2020-01-01T00:00:01Z", "hello", None),
                unit("en", "b", "2020-01-01T00:00:02Z", "Hi!", Some("en")),
                unit(
                    "empty",
                    "c",
                    "2020-01-01T00:00:03Z",
                    "!!! https://x.y",
                    Some("en"),
                ),
            ],
        );
        let c = clean_dataset(&d);
        let texts: Vec<_> = c.texts().collect();
        assert_eq!(texts, ["hello", "hi"]);
    }

    #[test]
    fn raw_text_option_keeps_original() {
        let d = Dataset::new(
            DatasetKind::Whole,
            vec![
                unit("1", "a", "2020-01-01T00:00:00Z", "GREAT news!!", None),
                unit("2", "a", "2020-01-01T00:00:01Z", "great NEWS", None),
            ],
        );
        let c = clean_dataset_with(
            &d,
            CleanOptions {
                keep_raw_text: true,
            },
        );
        assert_eq!(c.texts().collect::<Vec<_>>(), ["GREAT news!!"]);
    }

    #[test]
    fn verge_filter() {
        let timeline = Timeline::bundled();
        let e3 = timeline.get("E3").unwrap();
        let d = Dataset::new(
            DatasetKind::Whole,
            vec![
                unit(
                    "1",
                    "a",
                    "2018-04-04T00:00:00Z",
                    "verge of collapse in politics",
                    None,
                ),
                unit(
                    "2",
                    "b",
                    "2018-04-04T00:00:01Z",
                    "xvg miners on alert",
                    None,
                ),
                unit(
                    "3",
                    "c",
                    "2018-04-04T00:00:02Z",
                    "Verge CRYPTO hit again",
                    None,
                ),
            ],
        );
        let f = filter_topic(&d, e3);
        assert_eq!(
            f.units().iter().map(|u| u.id.as_str()).collect::<Vec<_>>(),
            ["2", "3"]
        );

        // Unambiguous names are not filtered.
        let e4 = timeline.get("E4").unwrap();
        assert_eq!(filter_topic(&d, e4), d);
    }

    #[test]
    fn attack_subset_examples() {
        let d = Dataset::new(
            DatasetKind::Whole,
            vec![
                unit(
                    "1",
                    "a",
                    "2019-01-05T00:00:00Z",
                    "51 attack confirmed on etc chain",
                    None,
                ),
                unit(
                    "2",
                    "b",
                    "2019-01-05T00:00:01Z",
                    "price is mooning today",
                    None,
                ),
                unit(
                    "3",
                    "c",
                    "2019-01-05T00:00:02Z",
                    "exchanges report double spending",
                    None,
                ),
            ],
        );
        let a = extract_attack_subset(&d);
        assert_eq!(a.kind(), DatasetKind::Attack);
        assert_eq!(
            a.units().iter().map(|u| u.id.as_str()).collect::<Vec<_>>(),
            ["1", "3"]
        );
    }

    proptest! {
        #[test]
        fn clean_text_is_idempotent(s in "\\PC{0,80}") {
            let once = clean_text(&s);
            prop_assert_eq!(clean_text(&once), once.clone());
            prop_assert!(!url_pattern().is_match(&once));
            prop_assert!(!once.chars().any(char::is_uppercase));
            prop_assert!(!once.starts_with(' ') && !once.ends_with(' ') && !once.contains("  "));
        }

        #[test]
        fn clean_dataset_never_grows(texts in proptest::collection::vec("[a-c !]{0,6}", 0..40)) {
            let units: Vec<_> = texts.iter().enumerate().map(|(i, t)| DataUnit {
                id: i.to_string(),
                timestamp: parse_timestamp("2020-01-01T00:00:00Z").unwrap() + chrono::Duration::seconds(i as i64),
                author: format!("u{}", i % 3),
                text: t.clone(),
                lang: None,
            }).collect();
            let d = Dataset::new(DatasetKind::Whole, units);
            let c = clean_dataset(&d);
            prop_assert!(c.len() <= d.len());
            let keys: HashSet<_> = c.units().iter().map(|u| (u.author.clone(), u.text.clone())).collect();
            prop_assert_eq!(keys.len(), c.len());
            let a = extract_attack_subset(&c);
            let ids: HashSet<_> = c.units().iter().map(|u| &u.id).collect();
            prop_assert!(a.units().iter().all(|u| ids.contains(&u.id)));
        }
    }
}
