//! Review corpora: the record type, the substantive-content filter, and the
//! on-disk JSONL format with its sidecar manifest.
//!
//! A corpus on disk is two files:
//!
//! * `name.jsonl`: one [`RawReview`] per line, fields in a fixed order;
//! * `name.manifest.json`: a single [`CorpusManifest`] document.
//!
//! Loading checks that the manifest's validated count matches the number of
//! records and that review ids are unique.

mod fetch;
mod ratelimit;

pub use fetch::{
    fetch_reviews, steam_language_name, FetchConfig, FetchError, HttpResponse, HttpTransport, PageTransport,
    TransportError, DEFAULT_ENDPOINT,
};
pub use ratelimit::{RateLimiter, RATE_LIMIT_ENV};

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Default threshold for [`filter_substantive`].
pub const DEFAULT_MIN_CHARS: usize = 50;

/// One review as returned by the review endpoint, reduced to the fields the
/// pipeline uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawReview {
    pub review_id: String,
    pub app_id: u32,
    pub text: String,
    /// UNIX seconds.
    pub created_at: i64,
    /// ISO 639-1 code.
    pub language: String,
    pub votes_up: u64,
}

/// Inclusive `[start, end]` range of UNIX timestamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionWindow {
    pub start: i64,
    pub end: i64,
}

impl CollectionWindow {
    pub fn new(start: i64, end: i64) -> Self {
        Self { start, end }
    }

    /// A window that admits every timestamp.
    pub fn unbounded() -> Self {
        Self {
            start: i64::MIN,
            end: i64::MAX,
        }
    }

    pub fn contains(&self, ts: i64) -> bool {
        self.start <= ts && ts <= self.end
    }
}

/// Free-form run metadata stored alongside the counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub settings: Vec<(String, String)>,
}

impl Provenance {
    pub fn current() -> Self {
        Self {
            tool: "semnet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            settings: Vec::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.settings.push((key.into(), value.to_string()));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub app_id: u32,
    pub collection_window: CollectionWindow,
    pub filter_min_chars: usize,
    pub review_count_raw: usize,
    pub review_count_validated: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record at {path}:{line}: {source}")]
    Record {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("malformed manifest {path}: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("corrupt corpus {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
}

/// True iff the review text has strictly more than `min_chars` Unicode
/// scalar values (whitespace included).
pub fn filter_substantive(review: &RawReview, min_chars: usize) -> bool {
    review.text.chars().count() > min_chars
}

/// Path of the manifest sidecar for a corpus file: `x.jsonl` -> `x.manifest.json`.
pub fn manifest_path(corpus: &Path) -> PathBuf {
    let stem = corpus
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    corpus.with_file_name(format!("{stem}.manifest.json"))
}

pub fn persist_corpus(
    reviews: &[RawReview],
    manifest: &CorpusManifest,
    path: &Path,
) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    for review in reviews {
        // Serializing a plain struct of strings and integers cannot fail.
        let line = serde_json::to_string(review).expect("review serializes");
        out.write_all(line.as_bytes()).map_err(io_err)?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;

    let mpath = manifest_path(path);
    let mut body = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    body.push('\n');
    std::fs::write(&mpath, body).map_err(|source| CorpusError::Io { path: mpath, source })
}

pub fn load_corpus(path: &Path) -> Result<(CorpusManifest, Vec<RawReview>), CorpusError> {
    let mpath = manifest_path(path);
    let mbytes = std::fs::read(&mpath).map_err(|source| CorpusError::Io {
        path: mpath.clone(),
        source,
    })?;
    let manifest: CorpusManifest =
        serde_json::from_slice(&mbytes).map_err(|source| CorpusError::Manifest {
            path: mpath.clone(),
            source,
        })?;
    let reviews = load_reviews(path)?;

    let corrupt = |reason: String| CorpusError::Corrupt {
        path: path.to_path_buf(),
        reason,
    };
    if manifest.review_count_validated > manifest.review_count_raw {
        return Err(corrupt(format!(
            "manifest claims {} validated of {} raw reviews",
            manifest.review_count_validated, manifest.review_count_raw
        )));
    }
    if reviews.len() != manifest.review_count_validated {
        return Err(corrupt(format!(
            "manifest records {} reviews, file holds {}",
            manifest.review_count_validated,
            reviews.len()
        )));
    }
    Ok((manifest, reviews))
}

/// Reads only the JSONL records, without a manifest.
pub fn load_reviews(path: &Path) -> Result<Vec<RawReview>, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reviews = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let review: RawReview =
            serde_json::from_str(&line).map_err(|source| CorpusError::Record {
                path: path.to_path_buf(),
                line: idx + 1,
                source,
            })?;
        if review.review_id.is_empty() {
            return Err(CorpusError::Corrupt {
                path: path.to_path_buf(),
                reason: format!("empty review_id on line {}", idx + 1),
            });
        }
        if !seen.insert(review.review_id.clone()) {
            return Err(CorpusError::Corrupt {
                path: path.to_path_buf(),
                reason: format!("duplicate review_id {:?} on line {}", review.review_id, idx + 1),
            });
        }
        reviews.push(review);
    }
    Ok(reviews)
}
