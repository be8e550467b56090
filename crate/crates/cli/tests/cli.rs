use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn pow51(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pow51"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/samples")
}

fn sample(name: &str) -> String {
    samples().join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn timeline_lists_all_events() {
    let o = pow51(&["timeline", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 31);
    assert_eq!(rows.iter().filter(|r| r["analyzed"] == true).count(), 17);

    let text = stdout(&pow51(&["timeline"]));
    let e4 = text
        .lines()
        .find(|l| l.split_whitespace().nth(1) == Some("E4"))
        .unwrap();
    assert!(e4.contains("(16 May 2018, 19 May 2018)"), "{e4}");
}

#[test]
fn multi_attack_filter_lists_etc_four_times() {
    let o = pow51(&["timeline", "--multi-attack", "--format", "csv"]);
    let etc = stdout(&o)
        .lines()
        .filter(|l| l.contains("Ethereum Classic"))
        .count();
    assert_eq!(etc, 4);
}

#[test]
fn empty_filter_is_not_an_error() {
    let o = pow51(&["timeline", "--currency", "dogecoin", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "[]");
}

#[test]
fn malformed_timeline_reports_line() {
    let dir = scratch("bad_timeline");
    let path = dir.join("t.toml");
    fs::write(
        &path,
        "[[event]]\nserial = 1\nevent_id = \"E1\"\nanalyzed = maybe\n",
    )
    .unwrap();
    let o = pow51(&["--timeline", path.to_str().unwrap(), "timeline"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(pow51(&["timeline", "--bogus"]).status.code(), Some(1));
    assert_eq!(pow51(&[]).status.code(), Some(1));
    assert_eq!(pow51(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_event_lists_known_ids() {
    let out = scratch("unknown_event");
    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "profile",
        "--event",
        "E99",
        "--corpus",
        &sample("e11.jsonl"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(
        err.contains("E99") && err.contains("E1,") && err.contains("E17"),
        "{err}"
    );
}

#[test]
fn missing_corpus_file_is_an_input_error() {
    let out = scratch("missing_corpus");
    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "profile",
        "--event",
        "E11",
        "--corpus",
        "/nonexistent.jsonl",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn corpus_bound_to_other_event_is_missing() {
    let out = scratch("bound_corpus");
    let binding = format!("E4={}", sample("e11.jsonl"));
    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "profile",
        "--event",
        "E11",
        "--corpus",
        &binding,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing corpus"), "{}", stderr(&o));
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn profile_writes_three_json_and_three_csv_deterministically() {
    let a = scratch("profile_a");
    let b = scratch("profile_b");
    for out in [&a, &b] {
        let o = pow51(&[
            "--out",
            out.to_str().unwrap(),
            "profile",
            "--event",
            "E11",
            "--corpus",
            &sample("e11.jsonl"),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let fa = read_dir_sorted(&a.join("E11"));
    let fb = read_dir_sorted(&b.join("E11"));
    assert_eq!(fa, fb);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/profile_E11");
    if std::env::var_os("POW51_BLESS").is_some() {
        let _ = fs::remove_dir_all(&golden);
        fs::create_dir_all(&golden).unwrap();
        for (name, bytes) in &fa {
            fs::write(golden.join(name), bytes).unwrap();
        }
    }
    assert_eq!(
        fa,
        read_dir_sorted(&golden),
        "outputs differ from {}",
        golden.display()
    );
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        [
            "combinations_attack.csv",
            "combinations_benchmark.csv",
            "combinations_whole.csv",
            "profile_attack.json",
            "profile_benchmark.json",
            "profile_whole.json"
        ]
    );

    for kind in ["whole", "attack", "benchmark"] {
        let json: serde_json::Value =
            serde_json::from_slice(&fs::read(a.join(format!("E11/profile_{kind}.json"))).unwrap())
                .unwrap();
        assert_eq!(json["kind"], kind);
        let n = json["n"].as_u64().unwrap();
        assert!(n > 0);
        let s = &json["sentiment"];
        let total = s["negative"].as_f64().unwrap()
            + s["neutral"].as_f64().unwrap()
            + s["positive"].as_f64().unwrap();
        assert!((total - 100.0).abs() < 1e-9);
        for e in ["happy", "angry", "surprise", "sad", "fear"] {
            assert!(json["emotion"]["intensity"][e].is_number());
            assert!(json["emotion"]["volume"][e].is_u64());
        }
        let csv = fs::read_to_string(a.join(format!("E11/combinations_{kind}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("mask,count,percent"));
        let counts: u64 = lines
            .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
            .sum();
        assert_eq!(counts, n);
    }
}

#[test]
fn peaks_reports_e11_delay() {
    let out = scratch("peaks");
    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "peaks",
        "--event",
        "E11",
        "--corpus",
        &sample("e11.jsonl"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("E11/peak.json")).unwrap()).unwrap();
    assert_eq!(report["peak_date"], "2020-01-27");
    assert_eq!(report["delay_days"], 3);
    let daily = fs::read_to_string(out.join("E11/daily_attack.csv")).unwrap();
    assert_eq!(daily.lines().count(), 1 + 9);
}

fn write_event_corpus(path: &Path, dates: &[&str], texts: &[&str]) {
    let mut body = String::new();
    let mut id = 0;
    for d in dates {
        for t in texts {
            id += 1;
            body.push_str(&format!(
                "{{\"id\":\"{id}\",\"created_at\":\"{d}T12:00:00Z\",\"author\":\"a{id}\",\"text\":\"{t}\",\"lang\":\"en\"}}\n"
            ));
        }
    }
    fs::write(path, body).unwrap();
}

#[test]
fn heatmap_three_events_rows_sum_to_100() {
    let dir = scratch("heatmap");
    let e4 = dir.join("e4.jsonl");
    let e8 = dir.join("e8.jsonl");
    write_event_corpus(
        &e4,
        &["2018-04-20", "2018-05-17"],
        &[
            "btg 51 attack, scared and angry",
            "btg coin looks great",
            "btg miner notes",
            "sad btg attack day",
        ],
    );
    write_event_corpus(
        &e8,
        &["2018-12-10", "2019-01-06"],
        &[
            "etc double spend attack, panic",
            "etc coin holders happy",
            "etc mining stats",
        ],
    );
    let out = dir.join("out");
    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "heatmap",
        "--event",
        "E4",
        "--event",
        "E8",
        "--event",
        "E11",
        "--corpus",
        &format!("E4={}", e4.display()),
        "--corpus",
        &format!("E8={}", e8.display()),
        "--corpus",
        &format!("E11={}", sample("e11.jsonl")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for kind in ["whole", "attack", "benchmark"] {
        let csv = fs::read_to_string(out.join(format!("heatmap_{kind}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap().split(',').count(), 1 + 32);
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3);
        for row in rows {
            let sum: f64 = row
                .split(',')
                .skip(1)
                .map(|v| v.parse::<f64>().unwrap())
                .sum();
            assert!((sum - 100.0).abs() < 1e-6, "{kind}: {row}");
        }
    }
    let intensity = fs::read_to_string(out.join("intensity.csv")).unwrap();
    assert_eq!(intensity.lines().count(), 1 + 9);
}

#[test]
fn volumetrics_json_and_csv() {
    let out = scratch("volumetrics");
    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "volumetrics",
        "--event",
        "E11",
        "--corpus",
        &sample("e11.jsonl"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v[0];
    let share = r["n_attack"].as_f64().unwrap() / r["n_whole"].as_f64().unwrap();
    assert!((r["attack_share"].as_f64().unwrap() - share).abs() < 1e-12);
    assert!(out.join("E11/volumetrics.json").exists());

    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
        "volumetrics",
        "--event",
        "E11",
        "--corpus",
        &sample("e11.jsonl"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("event_id,n_whole,"));
}

#[test]
fn clean_drops_noise() {
    let out = scratch("clean");
    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "clean",
        "--corpus",
        &sample("e11.jsonl"),
        "--event",
        "E11",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cleaned = fs::read_to_string(out.join("cleaned.jsonl")).unwrap();
    let raw = fs::read_to_string(samples().join("e11.jsonl")).unwrap();
    let n = cleaned.lines().count();
    assert!(n < raw.lines().count());
    assert!(!cleaned.contains("https://"));
    assert!(!cleaned.contains("ataque"));
    // E11's currency name is unambiguous, so no keyword filter applies.
    assert!(cleaned.contains("nice weather"));

    let o = pow51(&[
        "--out",
        out.to_str().unwrap(),
        "clean",
        "--corpus",
        &sample("e11.jsonl"),
        "--event",
        "E3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let filtered = fs::read_to_string(out.join("cleaned.jsonl")).unwrap();
    assert!(!filtered.contains("nice weather"));
    assert!(filtered.contains("btg coin"));
}

#[test]
fn watch_bundled_stream_raises_exactly_one_alert() {
    let o = pow51(&[
        "watch",
        "--event",
        "E11",
        "--baseline",
        &sample("watch_baseline.jsonl"),
        "--input",
        &sample("watch_stream.jsonl"),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let alerts: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(alerts.len(), 1);
    assert_eq!(alerts[0]["date"], "2020-01-23");
    assert!(alerts[0]["reasons"].as_array().unwrap().len() >= 2);
}

#[test]
fn watch_quiet_stream_exits_zero() {
    let dir = scratch("watch_quiet");
    let stream = fs::read_to_string(samples().join("watch_stream.jsonl")).unwrap();
    let quiet: String = stream
        .lines()
        .filter(|l| !l.contains("2020-01-23"))
        .map(|l| format!("{l}\n"))
        .collect();
    let path = dir.join("quiet.jsonl");
    fs::write(&path, quiet).unwrap();
    let o = pow51(&[
        "watch",
        "--event",
        "E11",
        "--baseline",
        &sample("watch_baseline.jsonl"),
        "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn watch_threshold_overrides_apply() {
    let o = pow51(&[
        "watch",
        "--event",
        "E11",
        "--baseline",
        &sample("watch_baseline.jsonl"),
        "--input",
        &sample("watch_stream.jsonl"),
        "--negative-jump",
        "90",
        "--fear-jump",
        "5",
        "--volume-ratio",
        "10",
        "--min-units",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("not evaluated"));
}
