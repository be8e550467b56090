use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pow51_core::corpus::DatasetKind;

#[derive(Debug, Parser)]
#[command(
    name = "pow51",
    version,
    about = "Profile social-media reaction to 51% attacks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Timeline file (TOML). Defaults to the bundled 31-event timeline.
    #[arg(long, global = true)]
    pub timeline: Option<PathBuf>,

    /// Lexicon directory (valence.tsv, boosters.tsv, negators.txt,
    /// emotion.tsv). Missing files fall back to the bundled ones.
    #[arg(long, global = true)]
    pub lexicons: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Output format for listings and reports.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Whole,
    Attack,
    Benchmark,
}

impl From<KindArg> for DatasetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Whole => DatasetKind::Whole,
            KindArg::Attack => DatasetKind::Attack,
            KindArg::Benchmark => DatasetKind::Benchmark,
        }
    }
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Raw corpus file (.jsonl or .csv). Prefix with `EVENT=` to bind it to
    /// one event; unprefixed files feed every selected event. Repeatable.
    #[arg(long = "corpus", value_name = "[EVENT=]PATH", required = true)]
    pub corpus: Vec<String>,

    /// Score sentiment and emotion on the original text instead of the
    /// cleaned text.
    #[arg(long)]
    pub raw_text: bool,

    /// Positive threshold on the compound score.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_p: f64,

    /// Negative threshold on the compound score.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_n: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the attack timeline.
    Timeline {
        /// Only events carrying analysis windows.
        #[arg(long)]
        analyzed: bool,
        /// Only currencies attacked more than once.
        #[arg(long)]
        multi_attack: bool,
        /// Only this currency (case-insensitive).
        #[arg(long)]
        currency: Option<String>,
    },
    /// Clean a corpus and write it back out as JSONL (or CSV).
    Clean {
        #[arg(long = "corpus", value_name = "PATH", required = true)]
        corpus: Vec<PathBuf>,
        /// Also apply this event's keyword filter.
        #[arg(long)]
        event: Option<String>,
        #[arg(long)]
        raw_text: bool,
    },
    /// Sentiment and emotion profiles for the whole, attack and benchmark
    /// datasets of one event.
    Profile {
        #[arg(long)]
        event: String,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Daily sentiment series and peak day per event.
    Peaks {
        #[arg(long = "event", required = true)]
        events: Vec<String>,
        /// Dataset to analyse.
        #[arg(long, value_enum, default_value = "attack")]
        kind: KindArg,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Emotion-combination heat maps and mean-intensity table across events.
    Heatmap {
        #[arg(long = "event", required = true)]
        events: Vec<String>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Dataset sizes, attack share and attention ratio per event.
    Volumetrics {
        #[arg(long = "event", required = true)]
        events: Vec<String>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Compare a message stream against a benchmark baseline and emit alerts.
    Watch(WatchArgs),
}

#[derive(Debug, Args)]
pub struct WatchArgs {
    /// Benchmark corpus the baseline is built from.
    #[arg(long)]
    pub baseline: PathBuf,

    /// Event whose benchmark window and keyword filter apply.
    #[arg(long)]
    pub event: Option<String>,

    /// JSONL stream to read; `-` or absent reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Keep reading the input file as it grows.
    #[arg(long, requires = "input")]
    pub follow: bool,

    /// TOML policy file.
    #[arg(long)]
    pub policy: Option<PathBuf>,

    #[arg(long)]
    pub negative_jump: Option<f64>,
    #[arg(long)]
    pub fear_jump: Option<f64>,
    #[arg(long)]
    pub volume_ratio: Option<f64>,
    #[arg(long)]
    pub min_units: Option<usize>,
    #[arg(long)]
    pub window_days: Option<u32>,
}
