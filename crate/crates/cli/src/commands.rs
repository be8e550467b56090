use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use pow51_core::analytics::{
    daily_series, heatmap_matrix, intensity_series, peak_day, volumetrics,
};
use pow51_core::corpus::{
    clean_dataset_with, filter_topic, load_corpus, parse_jsonl, slice_window, CleanOptions,
    CorpusFormat, DataUnit, Dataset, DatasetKind, DateWindow,
};
use pow51_core::emotion::{emotion_profile, EmotionIntensity, EmotionVolume};
use pow51_core::lexicon::Lexicons;
use pow51_core::pipeline::{build_event_datasets, EventDatasets};
use pow51_core::sentiment::{sentiment_profile, SentimentProfile, SentimentThresholds};
use pow51_core::timeline::{compute_windows, Event, Timeline};
use pow51_core::trigger::{build_baseline, AlertPolicy, Assessment, Watcher};

use crate::args::{CorpusArgs, Format, GlobalArgs, WatchArgs};

/// Resolved global configuration shared by all subcommands.
pub struct RunConfig {
    pub timeline: Timeline,
    pub lexicons: Lexicons,
    pub out: PathBuf,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<RunConfig> {
        let timeline = match &g.timeline {
            Some(p) => Timeline::load(p)?,
            None => Timeline::bundled(),
        };
        let lexicons = match &g.lexicons {
            Some(dir) => Lexicons::load_dir(dir)?,
            None => Lexicons::bundled(),
        };
        Ok(RunConfig {
            timeline,
            lexicons,
            out: g.out.clone(),
            format: g.format,
        })
    }

    fn write(&self, rel: impl AsRef<Path>, contents: &str) -> Result<PathBuf> {
        let path = self.out.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn load_files(paths: &[PathBuf]) -> Result<Dataset> {
    let mut merged: Option<Dataset> = None;
    for path in paths {
        let loaded = load_corpus(path, CorpusFormat::from_path(path))?;
        for r in &loaded.rejected {
            eprintln!("warning: {}:{}: {}", path.display(), r.line, r.reason);
        }
        merged = Some(match merged {
            Some(m) => m.merge(&loaded.dataset),
            None => loaded.dataset,
        });
    }
    merged.context("no corpus files given")
}

/// Splits `EVENT=PATH` bindings; plain paths apply to every event.
fn corpus_paths(specs: &[String], event_id: &str, timeline: &Timeline) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for spec in specs {
        match spec.split_once('=') {
            Some((id, path)) if !id.is_empty() && !id.contains('/') => {
                timeline.get(id)?;
                if id.eq_ignore_ascii_case(event_id) {
                    out.push(PathBuf::from(path));
                }
            }
            _ => out.push(PathBuf::from(spec)),
        }
    }
    if out.is_empty() {
        bail!("missing corpus for event {event_id}; pass --corpus {event_id}=PATH");
    }
    Ok(out)
}

fn thresholds(c: &CorpusArgs) -> Result<SentimentThresholds> {
    Ok(SentimentThresholds::new(c.delta_p, c.delta_n)?)
}

fn event_datasets(cfg: &RunConfig, event: &Event, c: &CorpusArgs) -> Result<EventDatasets> {
    let raw = load_files(&corpus_paths(&c.corpus, &event.event_id, &cfg.timeline)?)?;
    Ok(build_event_datasets(
        &raw,
        event,
        CleanOptions {
            keep_raw_text: c.raw_text,
        },
    ))
}

#[derive(Serialize)]
struct TimelineRow<'a> {
    serial: u32,
    event_id: &'a str,
    currency: &'a str,
    ticker: &'a str,
    kind: pow51_core::timeline::EventKind,
    analyzed: bool,
    period: DateWindow,
    attack_window: Option<DateWindow>,
    benchmark_window: Option<DateWindow>,
}

pub fn timeline(
    cfg: &RunConfig,
    analyzed: bool,
    multi_attack: bool,
    currency: Option<&str>,
) -> Result<()> {
    let multi: Vec<&str> = cfg
        .timeline
        .multi_attack()
        .iter()
        .map(|e| e.event_id.as_str())
        .collect();
    let rows: Vec<TimelineRow> = cfg
        .timeline
        .events()
        .iter()
        .filter(|e| !analyzed || e.analyzed)
        .filter(|e| !multi_attack || multi.contains(&e.event_id.as_str()))
        .filter(|e| {
            currency.is_none_or(|c| {
                e.currency.eq_ignore_ascii_case(c) || e.ticker.eq_ignore_ascii_case(c)
            })
        })
        .map(|e| {
            let w = e.analyzed.then(|| compute_windows(e));
            TimelineRow {
                serial: e.serial,
                event_id: &e.event_id,
                currency: &e.currency,
                ticker: &e.ticker,
                kind: e.kind,
                analyzed: e.analyzed,
                period: e.period(),
                attack_window: w.map(|w| w.attack),
                benchmark_window: w.map(|w| w.benchmark),
            }
        })
        .collect();

    let mut stdout = io::stdout().lock();
    match cfg.format {
        Some(Format::Json) => stdout.write_all(to_json(&rows).as_bytes())?,
        Some(Format::Csv) => {
            writeln!(stdout, "serial,event_id,currency,ticker,kind,attack_start,attack_end,attack_window,benchmark_window")?;
            for r in &rows {
                writeln!(
                    stdout,
                    "{},{},{},{},{},{},{},\"{}\",\"{}\"",
                    r.serial,
                    r.event_id,
                    r.currency,
                    r.ticker,
                    kind_label(r.kind),
                    r.period.start(),
                    r.period.end(),
                    r.attack_window.map(|w| w.to_string()).unwrap_or_default(),
                    r.benchmark_window
                        .map(|w| w.to_string())
                        .unwrap_or_default(),
                )?;
            }
        }
        None => {
            writeln!(
                stdout,
                "{:<3} {:<5} {:<18} {:<18} {:<28} {:<28} BENCHMARK WINDOW",
                "#", "EVENT", "CURRENCY", "KIND", "PERIOD", "ATTACK WINDOW"
            )?;
            for r in &rows {
                writeln!(
                    stdout,
                    "{:<3} {:<5} {:<18} {:<18} {:<28} {:<28} {}",
                    r.serial,
                    r.event_id,
                    r.currency,
                    kind_label(r.kind),
                    r.period.to_string(),
                    r.attack_window
                        .map(|w| w.to_string())
                        .unwrap_or_else(|| "-".into()),
                    r.benchmark_window
                        .map(|w| w.to_string())
                        .unwrap_or_else(|| "-".into()),
                )?;
            }
        }
    }
    Ok(())
}

fn kind_label(k: pow51_core::timeline::EventKind) -> &'static str {
    match k {
        pow51_core::timeline::EventKind::Actual => "actual",
        pow51_core::timeline::EventKind::ThreatOrAverted => "threat_or_averted",
    }
}

pub fn clean(
    cfg: &RunConfig,
    corpus: &[PathBuf],
    event: Option<&str>,
    raw_text: bool,
) -> Result<()> {
    let raw = load_files(corpus)?;
    let mut cleaned = clean_dataset_with(
        &raw,
        CleanOptions {
            keep_raw_text: raw_text,
        },
    );
    if let Some(id) = event {
        cleaned = filter_topic(&cleaned, cfg.timeline.get(id)?);
    }
    let (name, body) = match cfg.format {
        Some(Format::Csv) => ("cleaned.csv", units_csv(cleaned.units())?),
        _ => {
            let mut s = String::new();
            for u in cleaned.units() {
                s.push_str(&serde_json::to_string(u)?);
                s.push('\n');
            }
            ("cleaned.jsonl", s)
        }
    };
    let path = cfg.write(name, &body)?;
    eprintln!(
        "{} of {} units kept -> {}",
        cleaned.len(),
        raw.len(),
        path.display()
    );
    Ok(())
}

fn units_csv(units: &[DataUnit]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "created_at", "author", "text", "lang"])?;
    for u in units {
        let ts = serde_json::to_value(u)?["created_at"]
            .as_str()
            .unwrap_or_default()
            .to_owned();
        w.write_record([
            u.id.as_str(),
            &ts,
            &u.author,
            &u.text,
            u.lang.as_deref().unwrap_or(""),
        ])?;
    }
    Ok(String::from_utf8(
        w.into_inner().map_err(|e| e.into_error())?,
    )?)
}

#[derive(Serialize)]
struct EmotionSummary {
    intensity: EmotionIntensity,
    volume: EmotionVolume,
}

#[derive(Serialize)]
struct ProfileReport<'a> {
    event_id: &'a str,
    kind: DatasetKind,
    window: Option<DateWindow>,
    n: usize,
    sentiment: Option<SentimentProfile>,
    emotion: Option<EmotionSummary>,
}

pub fn profile(cfg: &RunConfig, event_id: &str, c: &CorpusArgs) -> Result<()> {
    let event = cfg.timeline.get(event_id)?;
    let th = thresholds(c)?;
    let ds = event_datasets(cfg, event, c)?;
    for kind in DatasetKind::ALL {
        let d = ds.get(kind);
        let sentiment = sentiment_profile(d, &cfg.lexicons.valence, &th).ok();
        let emotion = emotion_profile(d, &cfg.lexicons.emotion).ok();
        if d.is_empty() {
            eprintln!("warning: {} {kind} dataset is empty", event.event_id);
        }
        let report = ProfileReport {
            event_id: &event.event_id,
            kind,
            window: d.window(),
            n: d.len(),
            sentiment,
            emotion: emotion.as_ref().map(|e| EmotionSummary {
                intensity: e.intensity,
                volume: e.volume,
            }),
        };
        let dir = PathBuf::from(&event.event_id);
        cfg.write(dir.join(format!("profile_{kind}.json")), &to_json(&report))?;
        let csv = emotion
            .map(|e| e.cells.to_csv())
            .unwrap_or_else(|| pow51_core::emotion::CombinationPartition::from_masks([]).to_csv());
        cfg.write(dir.join(format!("combinations_{kind}.csv")), &csv)?;
    }
    eprintln!(
        "{}: whole {}, attack {}, benchmark {} -> {}",
        event.event_id,
        ds.whole.len(),
        ds.attack.len(),
        ds.benchmark.len(),
        cfg.out.join(&event.event_id).display()
    );
    Ok(())
}

pub fn peaks(cfg: &RunConfig, events: &[String], kind: DatasetKind, c: &CorpusArgs) -> Result<()> {
    let th = thresholds(c)?;
    let mut reports = Vec::new();
    for id in events {
        let event = cfg.timeline.get(id)?;
        let ds = event_datasets(cfg, event, c)?;
        let series = daily_series(ds.get(kind), &cfg.lexicons.valence, &th)
            .with_context(|| format!("{} {kind} dataset", event.event_id))?;
        let report =
            peak_day(&series, event).with_context(|| format!("peak day for {}", event.event_id))?;
        let dir = PathBuf::from(&event.event_id);
        cfg.write(dir.join(format!("daily_{kind}.csv")), &series.to_csv())?;
        match cfg.format {
            Some(Format::Csv) => cfg.write(
                dir.join("peak.csv"),
                &format!(
                    "event_id,peak_date,delay_days,dominant,peak_total\n{},{},{},{},{}\n",
                    report.event_id,
                    report.peak_date,
                    report.delay_days,
                    report.dominant.as_str(),
                    report.peak_total
                ),
            )?,
            _ => cfg.write(dir.join("peak.json"), &to_json(&report))?,
        };
        reports.push(report);
    }
    print!("{}", to_json(&reports));
    Ok(())
}

pub fn heatmap(cfg: &RunConfig, events: &[String], c: &CorpusArgs) -> Result<()> {
    let mut all = Vec::new();
    for id in events {
        let event = cfg.timeline.get(id)?;
        all.push(event_datasets(cfg, event, c)?);
    }
    for kind in DatasetKind::ALL {
        let rows: Vec<(&str, &Dataset)> = all
            .iter()
            .map(|d| (d.event_id.as_str(), d.get(kind)))
            .collect();
        let matrix = heatmap_matrix(&rows, &cfg.lexicons.emotion)
            .with_context(|| format!("{kind} heat map"))?;
        let path = match cfg.format {
            Some(Format::Json) => cfg.write(format!("heatmap_{kind}.json"), &to_json(&matrix))?,
            _ => cfg.write(format!("heatmap_{kind}.csv"), &matrix.to_csv())?,
        };
        eprintln!("{} rows -> {}", matrix.rows.len(), path.display());
    }
    let inputs: Vec<_> = all
        .iter()
        .map(|d| (d.event_id.as_str(), &d.whole, &d.attack, &d.benchmark))
        .collect();
    let table = intensity_series(&inputs, &cfg.lexicons.emotion)?;
    match cfg.format {
        Some(Format::Json) => cfg.write("intensity.json", &to_json(&table))?,
        _ => cfg.write("intensity.csv", &table.to_csv())?,
    };
    Ok(())
}

pub fn volumetrics_cmd(cfg: &RunConfig, events: &[String], c: &CorpusArgs) -> Result<()> {
    let mut reports = Vec::new();
    for id in events {
        let event = cfg.timeline.get(id)?;
        let ds = event_datasets(cfg, event, c)?;
        let r = volumetrics(
            &event.event_id,
            &ds.whole,
            &ds.attack,
            &ds.benchmark,
            ds.windows.attack,
            ds.windows.benchmark,
        )?;
        for w in &r.warnings {
            eprintln!("warning: {}: {w}", event.event_id);
        }
        cfg.write(
            PathBuf::from(&event.event_id).join("volumetrics.json"),
            &to_json(&r),
        )?;
        reports.push(r);
    }
    match cfg.format {
        Some(Format::Csv) => {
            let mut s = String::from("event_id,n_whole,n_attack,n_benchmark,attack_share,whole_per_day,benchmark_per_day,attention_ratio\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.event_id,
                    r.n_whole,
                    r.n_attack,
                    r.n_benchmark,
                    r.attack_share,
                    r.whole_per_day,
                    r.benchmark_per_day,
                    r.attention_ratio
                ));
            }
            cfg.write("volumetrics.csv", &s)?;
            print!("{s}");
        }
        _ => print!("{}", to_json(&reports)),
    }
    Ok(())
}

/// Runs the watch loop. Returns the number of alerts raised.
pub fn watch(cfg: &RunConfig, args: &WatchArgs) -> Result<usize> {
    let mut policy = match &args.policy {
        Some(p) => AlertPolicy::load(p)?,
        None => AlertPolicy::default(),
    };
    if let Some(v) = args.negative_jump {
        policy.negative_jump = v;
    }
    if let Some(v) = args.fear_jump {
        policy.fear_jump = v;
    }
    if let Some(v) = args.volume_ratio {
        policy.volume_ratio = v;
    }
    if let Some(v) = args.min_units {
        policy.min_units = v;
    }
    if let Some(v) = args.window_days {
        policy.window_days = v;
    }
    policy.validate()?;

    let event = args
        .event
        .as_deref()
        .map(|id| cfg.timeline.get(id))
        .transpose()?;
    let th = SentimentThresholds::default();
    let mut bench = clean_dataset_with(
        &load_files(std::slice::from_ref(&args.baseline))?,
        CleanOptions::default(),
    );
    if let Some(e) = event {
        bench = filter_topic(&bench, e);
    }
    let window = match event {
        Some(e) => compute_windows(e).benchmark,
        None => {
            let (first, last) = match (bench.units().first(), bench.units().last()) {
                (Some(f), Some(l)) => (f.date(), l.date()),
                _ => bail!("baseline corpus has no usable units"),
            };
            DateWindow::new(first, last)?
        }
    };
    let bench = slice_window(&bench, window);
    let baseline = build_baseline(&bench, &cfg.lexicons, &th, window, &policy)?;
    eprintln!(
        "baseline {}: {} units, negative {:.2}%, fear {:.4}, {:.2}/day",
        window,
        bench.len(),
        baseline.sentiment.negative,
        baseline.fear_mean,
        baseline.per_day_rate
    );

    let mut watcher = Watcher::new(baseline, &cfg.lexicons, th, policy);
    if let Some(e) = event {
        watcher = watcher.with_topic(e);
    }
    let mut alerts = 0usize;
    let mut stdout = io::stdout().lock();
    let mut emit = |a: Assessment, out: &mut dyn Write| -> Result<()> {
        match a {
            Assessment::Alert(alert) => {
                alerts += 1;
                writeln!(out, "{}", serde_json::to_string(&alert)?)?;
                out.flush()?;
            }
            Assessment::Quiet { window, units } => eprintln!("{window}: {units} units, no alert"),
            Assessment::Insufficient {
                window,
                units,
                required,
            } => {
                eprintln!("{window}: {units} units (< {required}), not evaluated")
            }
        }
        Ok(())
    };

    let reader: Box<dyn BufRead> = match &args.input {
        Some(p) if p.as_os_str() != "-" => Box::new(BufReader::new(
            fs::File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
        _ => Box::new(BufReader::new(io::stdin())),
    };
    let mut reader = reader;
    let mut line = String::new();
    let mut lineno = 0u64;
    loop {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            if args.follow {
                std::thread::sleep(Duration::from_millis(500));
                continue;
            }
            break;
        }
        lineno += 1;
        let (units, rejected) = parse_jsonl(line.as_bytes())?;
        for r in rejected {
            eprintln!("warning: input line {lineno}: {}", r.reason);
        }
        for u in &units {
            if let Some(a) = watcher.push(u) {
                emit(a, &mut stdout)?;
            }
        }
    }
    if let Some(a) = watcher.finish() {
        emit(a, &mut stdout)?;
    }
    if watcher.late_units() > 0 {
        eprintln!(
            "warning: {} out-of-order units dropped",
            watcher.late_units()
        );
    }
    Ok(alerts)
}
