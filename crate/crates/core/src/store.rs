//! Output records and their JSONL / CSV encodings.
//!
//! Every JSONL line is a self-contained envelope:
//!
//! ```text
//! {"schema_version":1,"produced_by":"rds 0.1.0","config":{..},"kind":"triplet","payload":{"alpha":3,"beta":4,"gamma":5}}
//! ```
//!
//! CSV output carries only the payload columns, under a fixed header per kind.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::number::{format_list, Rat};
use crate::pythagorean::Triplet;
use crate::solver::Solution;

pub const SCHEMA_VERSION: u32 = 1;
pub const PRODUCED_BY: &str = concat!("rds ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("record of kind {got} written to a {expected} stream")]
    KindMismatch { expected: PayloadKind, got: PayloadKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?} (expected jsonl or csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    Triplet,
    Ratio,
    Solution,
    Count,
    Erratum,
}

impl PayloadKind {
    pub fn csv_header(self) -> &'static [&'static str] {
        match self {
            PayloadKind::Triplet => &["alpha", "beta", "gamma"],
            PayloadKind::Ratio => &["psi", "gamma", "class"],
            PayloadKind::Solution => &["n", "x", "psi", "distances", "general_position"],
            PayloadKind::Count => &["gamma", "theta_gp", "theta_all"],
            PayloadKind::Erratum => &["row", "entry", "printed", "recomputed", "detail"],
        }
    }
}

impl fmt::Display for PayloadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PayloadKind::Triplet => "triplet",
            PayloadKind::Ratio => "ratio",
            PayloadKind::Solution => "solution",
            PayloadKind::Count => "count",
            PayloadKind::Erratum => "erratum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRecord {
    pub psi: Rat,
    /// Hypotenuse of the generating primitive triplet; absent for zero.
    pub gamma: Option<u64>,
    pub class: String,
}

/// One count row in the layout of the published count table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub gamma: u64,
    pub theta_gp: Option<u64>,
    pub theta_all: u64,
}

/// A published value that disagrees with recomputation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErratumNote {
    pub row: String,
    pub entry: String,
    pub printed: String,
    pub recomputed: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Payload {
    Triplet(Triplet),
    Ratio(RatioRecord),
    Solution(Solution),
    Count(CountRow),
    Erratum(ErratumNote),
}

impl Payload {
    pub fn kind(&self) -> PayloadKind {
        match self {
            Payload::Triplet(_) => PayloadKind::Triplet,
            Payload::Ratio(_) => PayloadKind::Ratio,
            Payload::Solution(_) => PayloadKind::Solution,
            Payload::Count(_) => PayloadKind::Count,
            Payload::Erratum(_) => PayloadKind::Erratum,
        }
    }

    fn csv_row(&self) -> Vec<String> {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(ToString::to_string).unwrap_or_default()
        }
        match self {
            Payload::Triplet(t) => vec![t.alpha.to_string(), t.beta.to_string(), t.gamma.to_string()],
            Payload::Ratio(r) => vec![r.psi.to_string(), opt(&r.gamma), r.class.clone()],
            Payload::Solution(s) => vec![
                s.n.to_string(),
                format_list(&s.x),
                format_list(&s.psi),
                format_list(&s.distances),
                opt(&s.general_position),
            ],
            Payload::Count(c) => vec![c.gamma.to_string(), opt(&c.theta_gp), c.theta_all.to_string()],
            Payload::Erratum(e) => {
                vec![e.row.clone(), e.entry.clone(), e.printed.clone(), e.recomputed.clone(), e.detail.clone()]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordEnvelope {
    pub schema_version: u32,
    pub produced_by: String,
    pub config: Map<String, Value>,
    #[serde(flatten)]
    pub payload: Payload,
}

impl RecordEnvelope {
    pub fn new(config: &Map<String, Value>, payload: Payload) -> Self {
        RecordEnvelope {
            schema_version: SCHEMA_VERSION,
            produced_by: PRODUCED_BY.to_string(),
            config: config.clone(),
            payload,
        }
    }
}

/// Serializes any config struct into the echo map.
pub fn config_echo<T: Serialize>(config: &T) -> Map<String, Value> {
    match serde_json::to_value(config).expect("config serializes") {
        Value::Object(map) => map,
        other => panic!("config must serialize to an object, got {other}"),
    }
}

/// Streams records of one kind, flushing after every line.
pub struct RecordWriter<W: Write> {
    format: Format,
    kind: PayloadKind,
    label: PathBuf,
    inner: WriterInner<W>,
    written: usize,
}

enum WriterInner<W: Write> {
    Jsonl(W),
    Csv(Box<csv::Writer<W>>),
}

impl<W: Write> RecordWriter<W> {
    /// `label` names the destination in error messages.
    pub fn new(out: W, format: Format, kind: PayloadKind, label: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let label = label.into();
        let inner = match format {
            Format::Jsonl => WriterInner::Jsonl(out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(kind.csv_header()).map_err(|source| StoreError::Csv { path: label.clone(), source })?;
                w.flush().map_err(|source| StoreError::Io { path: label.clone(), source })?;
                WriterInner::Csv(Box::new(w))
            }
        };
        Ok(RecordWriter { format, kind, label, inner, written: 0 })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn write(&mut self, record: &RecordEnvelope) -> Result<(), StoreError> {
        let got = record.payload.kind();
        if got != self.kind {
            return Err(StoreError::KindMismatch { expected: self.kind, got });
        }
        let io = |source| StoreError::Io { path: self.label.clone(), source };
        match &mut self.inner {
            WriterInner::Jsonl(w) => {
                let line = serde_json::to_string(record).expect("record serializes");
                writeln!(w, "{line}").map_err(io)?;
                w.flush().map_err(io)?;
            }
            WriterInner::Csv(w) => {
                w.write_record(record.payload.csv_row())
                    .map_err(|source| StoreError::Csv { path: self.label.clone(), source })?;
                w.flush().map_err(io)?;
            }
        }
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> usize {
        self.written
    }
}

/// Writes `records` to `path` and returns how many were written.
pub fn write_records<I>(records: I, path: &Path, format: Format, kind: PayloadKind) -> Result<usize, StoreError>
where
    I: IntoIterator<Item = RecordEnvelope>,
{
    let file = File::create(path).map_err(|source| StoreError::Io { path: path.to_path_buf(), source })?;
    let mut w = RecordWriter::new(BufWriter::new(file), format, kind, path)?;
    for r in records {
        w.write(&r)?;
    }
    Ok(w.written())
}
