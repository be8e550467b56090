use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{parse_timestamp, DataUnit, Dataset, DatasetKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// Guesses the format from the file extension; anything but `.csv` is JSONL.
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

/// A record that could not be turned into a [`DataUnit`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordError {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub dataset: Dataset,
    pub rejected: Vec<RecordError>,
}

/// Reads a corpus file. Malformed records are collected in
/// [`LoadedCorpus::rejected`]; the call fails only when the file cannot be
/// read or when no record survives.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<LoadedCorpus> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let (units, rejected) = match format {
        CorpusFormat::Jsonl => parse_jsonl(BufReader::new(file)).map_err(|e| Error::io(path, e))?,
        CorpusFormat::Csv => parse_csv(file).map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?,
    };
    if units.is_empty() {
        return Err(Error::NoValidRecords {
            path: path.to_path_buf(),
            rejected: rejected.len(),
        });
    }
    let mut dataset = Dataset::new(DatasetKind::Whole, units);
    dataset.provenance.push("load".into());
    Ok(LoadedCorpus { dataset, rejected })
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<Value>,
    created_at: Option<String>,
    author: Option<String>,
    text: Option<String>,
    lang: Option<String>,
}

/// Parses JSONL records. Blank lines are skipped; line numbers are 1-based.
pub fn parse_jsonl<R: BufRead>(reader: R) -> std::io::Result<(Vec<DataUnit>, Vec<RecordError>)> {
    let mut units = Vec::new();
    let mut rejected = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let outcome = serde_json::from_str::<RawRecord>(&line)
            .map_err(|e| format!("invalid JSON: {e}"))
            .and_then(|raw| {
                let id = match raw.id {
                    Some(Value::String(s)) => Some(s),
                    Some(Value::Number(n)) => Some(n.to_string()),
                    Some(_) => return Err("field \"id\" must be a string or number".into()),
                    None => None,
                };
                build_unit(id, raw.created_at, raw.author, raw.text, raw.lang)
            });
        match outcome {
            Ok(u) => units.push(u),
            Err(reason) => rejected.push(RecordError {
                line: lineno,
                reason,
            }),
        }
    }
    Ok((units, rejected))
}

/// Parses CSV with a header row naming `id,created_at,author,text[,lang]`.
pub fn parse_csv<R: Read>(reader: R) -> csv::Result<(Vec<DataUnit>, Vec<RecordError>)> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (id, created_at, author, text, lang) = (
        col("id"),
        col("created_at"),
        col("author"),
        col("text"),
        col("lang"),
    );

    let mut units = Vec::new();
    let mut rejected = Vec::new();
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                rejected.push(RecordError {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let get = |c: Option<usize>| c.and_then(|i| record.get(i)).map(str::to_owned);
        let lang = get(lang).filter(|l| !l.trim().is_empty());
        match build_unit(get(id), get(created_at), get(author), get(text), lang) {
            Ok(u) => units.push(u),
            Err(reason) => rejected.push(RecordError { line, reason }),
        }
    }
    Ok((units, rejected))
}

fn build_unit(
    id: Option<String>,
    created_at: Option<String>,
    author: Option<String>,
    text: Option<String>,
    lang: Option<String>,
) -> std::result::Result<DataUnit, String> {
    let missing = |f: &str| format!("missing field {f:?}");
    let id = id.filter(|s| !s.is_empty()).ok_or_else(|| missing("id"))?;
    let created_at = created_at.ok_or_else(|| missing("created_at"))?;
    let author = author.ok_or_else(|| missing("author"))?;
    let text = text
        .filter(|t| !t.is_empty())
        .ok_or_else(|| missing("text"))?;
    let timestamp = parse_timestamp(&created_at)?;
    Ok(DataUnit {
        id,
        timestamp,
        author,
        text,
        lang: lang.map(|l| l.trim().to_owned()),
    })
}
