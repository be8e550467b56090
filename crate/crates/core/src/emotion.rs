//! Five-emotion scoring, dataset intensity/volume and the 32 presence
//! combinations.
//!
//! A unit's intensity is its normalised hit count per emotion, so the five
//! components sum to 1 when any emotion word occurs and to 0 otherwise.
//! A unit contributes 1 to an emotion's volume when its intensity for that
//! emotion is positive.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::corpus::Dataset;
use crate::lexicon::{lexicon_error, tsv_lines};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emotion {
    Happy,
    Angry,
    Surprise,
    Sad,
    Fear,
}

impl Emotion {
    pub const ALL: [Emotion; 5] = [
        Emotion::Happy,
        Emotion::Angry,
        Emotion::Surprise,
        Emotion::Sad,
        Emotion::Fear,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Bit in an [`EmotionMask`]; happy is the most significant.
    pub fn bit(self) -> u8 {
        1 << (4 - self.index())
    }

    pub fn letter(self) -> char {
        ['H', 'A', 'S', 'D', 'F'][self.index()]
    }

    pub fn as_str(self) -> &'static str {
        ["happy", "angry", "surprise", "sad", "fear"][self.index()]
    }
}

impl FromStr for Emotion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "happy" => Ok(Emotion::Happy),
            "angry" => Ok(Emotion::Angry),
            "surprise" => Ok(Emotion::Surprise),
            "sad" => Ok(Emotion::Sad),
            "fear" => Ok(Emotion::Fear),
            other => Err(format!("unknown emotion {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmotionLexicon {
    entries: HashMap<String, Emotion>,
}

impl EmotionLexicon {
    pub fn new(entries: HashMap<String, Emotion>) -> Result<Self> {
        if entries.is_empty() {
            return Err(lexicon_error("emotion", 0, "lexicon has no entries"));
        }
        Ok(EmotionLexicon { entries })
    }

    /// Parses `token<TAB>emotion` lines. A token listed twice must carry the
    /// same emotion both times.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (line, fields) in tsv_lines(text) {
            let [token, tag, ..] = fields[..] else {
                return Err(lexicon_error("emotion", line, "expected token<TAB>emotion"));
            };
            let emotion: Emotion = tag.parse().map_err(|e| lexicon_error("emotion", line, e))?;
            let token = token.trim().to_lowercase();
            if let Some(prev) = entries.insert(token.clone(), emotion) {
                if prev != emotion {
                    return Err(lexicon_error(
                        "emotion",
                        line,
                        format!(
                            "{token:?} tagged both {} and {}",
                            prev.as_str(),
                            emotion.as_str()
                        ),
                    ));
                }
            }
        }
        EmotionLexicon::new(entries)
    }

    pub fn get(&self, word: &str) -> Option<Emotion> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Per-unit (or mean) intensities in happy, angry, surprise, sad, fear order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EmotionIntensity(pub [f64; 5]);

impl EmotionIntensity {
    pub fn get(&self, e: Emotion) -> f64 {
        self.0[e.index()]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Presence pattern: bit set for every positive component.
    pub fn mask(&self) -> EmotionMask {
        let bits = Emotion::ALL
            .iter()
            .filter(|e| self.get(**e) > 0.0)
            .fold(0u8, |m, e| m | e.bit());
        EmotionMask(bits)
    }
}

impl Serialize for EmotionIntensity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(5))?;
        for e in Emotion::ALL {
            map.serialize_entry(e.as_str(), &self.get(e))?;
        }
        map.end()
    }
}

/// Per-emotion counts of units carrying that emotion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmotionVolume(pub [u64; 5]);

impl EmotionVolume {
    pub fn get(&self, e: Emotion) -> u64 {
        self.0[e.index()]
    }
}

impl Serialize for EmotionVolume {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(5))?;
        for e in Emotion::ALL {
            map.serialize_entry(e.as_str(), &self.get(e))?;
        }
        map.end()
    }
}

/// A 5-bit presence pattern, `H A S D F` from most to least significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmotionMask(u8);

impl EmotionMask {
    pub const COUNT: usize = 32;
    pub const NONE: EmotionMask = EmotionMask(0);

    pub fn new(bits: u8) -> Option<Self> {
        (bits < 32).then_some(EmotionMask(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, e: Emotion) -> bool {
        self.0 & e.bit() != 0
    }

    pub fn all() -> impl Iterator<Item = EmotionMask> {
        (0..32u8).map(EmotionMask)
    }
}

/// Column label such as `H----`, `---DF`, or `-----` for no emotion.
impl fmt::Display for EmotionMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in Emotion::ALL {
            let c = if self.contains(e) { e.letter() } else { '-' };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for EmotionMask {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 5 {
            return Err(format!("mask label {s:?} must have 5 characters"));
        }
        let mut bits = 0;
        for (c, e) in chars.iter().zip(Emotion::ALL) {
            match *c {
                '-' => {}
                c if c == e.letter() => bits |= e.bit(),
                _ => return Err(format!("invalid mask label {s:?}")),
            }
        }
        Ok(EmotionMask(bits))
    }
}

impl Serialize for EmotionMask {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn score_emotions(text: &str, lex: &EmotionLexicon) -> EmotionIntensity {
    let mut hits = [0u32; 5];
    for token in text.split_whitespace() {
        let hit = lex.get(token).or_else(|| lex.get(&token.to_lowercase()));
        if let Some(e) = hit {
            hits[e.index()] += 1;
        }
    }
    let total: u32 = hits.iter().sum();
    if total == 0 {
        return EmotionIntensity::default();
    }
    EmotionIntensity(hits.map(|h| h as f64 / total as f64))
}

fn require_units(d: &Dataset, what: &str) -> Result<()> {
    if d.is_empty() {
        Err(Error::empty(what))
    } else {
        Ok(())
    }
}

/// Component-wise mean of unit intensities.
pub fn emotion_intensity(d: &Dataset, lex: &EmotionLexicon) -> Result<EmotionIntensity> {
    require_units(d, "emotion intensity")?;
    let mut sums = [0.0; 5];
    for text in d.texts() {
        let ei = score_emotions(text, lex);
        for (s, v) in sums.iter_mut().zip(ei.0) {
            *s += v;
        }
    }
    let n = d.len() as f64;
    Ok(EmotionIntensity(sums.map(|s| s / n)))
}

pub fn emotion_volume(d: &Dataset, lex: &EmotionLexicon) -> Result<EmotionVolume> {
    require_units(d, "emotion volume")?;
    let mut vol = [0u64; 5];
    for text in d.texts() {
        let mask = score_emotions(text, lex).mask();
        for e in Emotion::ALL {
            vol[e.index()] += mask.contains(e) as u64;
        }
    }
    Ok(EmotionVolume(vol))
}

/// Unit counts for each of the 32 presence patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationPartition {
    counts: [u64; 32],
    n: u64,
}

impl CombinationPartition {
    pub fn from_masks(masks: impl IntoIterator<Item = EmotionMask>) -> Self {
        let mut counts = [0u64; 32];
        for m in masks {
            counts[m.bits() as usize] += 1;
        }
        CombinationPartition {
            n: counts.iter().sum(),
            counts,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn count(&self, mask: EmotionMask) -> u64 {
        self.counts[mask.bits() as usize]
    }

    pub fn counts(&self) -> &[u64; 32] {
        &self.counts
    }

    pub fn percent(&self, mask: EmotionMask) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.count(mask) as f64 * 100.0 / self.n as f64
        }
    }

    /// Percentages ordered by mask value.
    pub fn percentages(&self) -> [f64; 32] {
        let mut out = [0.0; 32];
        for m in EmotionMask::all() {
            out[m.bits() as usize] = self.percent(m);
        }
        out
    }

    /// Emotion volume recovered from the cells: the sum over every mask
    /// containing the emotion.
    pub fn volume(&self) -> EmotionVolume {
        let mut vol = [0u64; 5];
        for m in EmotionMask::all() {
            for e in Emotion::ALL {
                if m.contains(e) {
                    vol[e.index()] += self.count(m);
                }
            }
        }
        EmotionVolume(vol)
    }

    /// CSV with header `mask,count,percent`, one row per mask.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mask,count,percent\n");
        for m in EmotionMask::all() {
            out.push_str(&format!("{m},{},{}\n", self.count(m), self.percent(m)));
        }
        out
    }
}

#[derive(Serialize)]
struct CellEntry {
    mask: EmotionMask,
    count: u64,
    percent: f64,
}

impl Serialize for CombinationPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(EmotionMask::all().map(|m| CellEntry {
            mask: m,
            count: self.count(m),
            percent: self.percent(m),
        }))
    }
}

pub fn combination_partition(d: &Dataset, lex: &EmotionLexicon) -> Result<CombinationPartition> {
    require_units(d, "combination partition")?;
    Ok(CombinationPartition::from_masks(
        d.texts().map(|t| score_emotions(t, lex).mask()),
    ))
}

/// Intensity, volume and combination cells of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmotionProfile {
    pub n: u64,
    pub intensity: EmotionIntensity,
    pub volume: EmotionVolume,
    pub cells: CombinationPartition,
}

/// Computes the whole profile in one scoring pass.
pub fn emotion_profile(d: &Dataset, lex: &EmotionLexicon) -> Result<EmotionProfile> {
    require_units(d, "emotion profile")?;
    let scores: Vec<EmotionIntensity> = d.texts().map(|t| score_emotions(t, lex)).collect();
    let n = scores.len() as f64;
    let mut sums = [0.0; 5];
    for s in &scores {
        for (acc, v) in sums.iter_mut().zip(s.0) {
            *acc += v;
        }
    }
    let cells = CombinationPartition::from_masks(scores.iter().map(EmotionIntensity::mask));
    Ok(EmotionProfile {
        n: cells.n(),
        intensity: EmotionIntensity(sums.map(|s| s / n)),
        volume: cells.volume(),
        cells,
    })
}
