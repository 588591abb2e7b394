//! On-disk formats for intermediate stages: cleaned documents and graphs.
//!
//! Both are single JSON objects carrying a schema version, a provenance
//! block and the settings that produced them, so a later stage can echo
//! the full chain of settings into its report.

use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::cooccur::GraphBuildConfig;
use crate::corpus::Provenance;
use crate::graph::SemanticGraph;
use crate::report::{CorpusSummary, PipelineEcho, SCHEMA_VERSION};
use crate::text::Document;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {path}: {detail}")]
    Malformed { path: PathBuf, detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentStore {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub corpus: CorpusSummary,
    pub pipeline: PipelineEcho,
    pub documents: Vec<Document>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub corpus: CorpusSummary,
    pub pipeline: PipelineEcho,
    pub build: GraphBuildConfig,
    pub graph: SemanticGraph,
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), StoreError> {
    let mut body = serde_json::to_string_pretty(value).map_err(|e| StoreError::Malformed {
        path: path.to_owned(),
        detail: e.to_string(),
    })?;
    body.push('\n');
    std::fs::write(path, body).map_err(|source| StoreError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Reads a stage file and checks its schema version.
pub fn read_json<T: DeserializeOwned + Versioned>(path: &Path) -> Result<T, StoreError> {
    let text = std::fs::read_to_string(path).map_err(|source| StoreError::Io {
        path: path.to_owned(),
        source,
    })?;
    let value: T = serde_json::from_str(&text).map_err(|e| StoreError::Malformed {
        path: path.to_owned(),
        detail: e.to_string(),
    })?;
    if value.schema_version() != SCHEMA_VERSION {
        return Err(StoreError::Malformed {
            path: path.to_owned(),
            detail: format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                value.schema_version()
            ),
        });
    }
    Ok(value)
}

pub trait Versioned {
    fn schema_version(&self) -> u32;
}

impl Versioned for DocumentStore {
    fn schema_version(&self) -> u32 {
        self.schema_version
    }
}

impl Versioned for GraphFile {
    fn schema_version(&self) -> u32 {
        self.schema_version
    }
}

impl Versioned for crate::report::NetworkReport {
    fn schema_version(&self) -> u32 {
        self.schema_version
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::ResourceSources;
    use crate::text::PipelineConfig;

    #[test]
    fn graph_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        let file = GraphFile {
            schema_version: SCHEMA_VERSION,
            provenance: Provenance::current().with("seed", 0),
            corpus: CorpusSummary {
                app_id: Some(7),
                collection_window: None,
                review_count_raw: None,
                reviews_in: 2,
                reviews_substantive: 2,
                documents_non_empty: 2,
            },
            pipeline: PipelineEcho::of(&PipelineConfig::default(), 50, &ResourceSources::default()),
            build: GraphBuildConfig::default(),
            graph: SemanticGraph::from_edges(&[("a", "b", 3)]).unwrap(),
        };
        write_json(&file, &path).unwrap();
        let back: GraphFile = read_json(&path).unwrap();
        assert_eq!(back, file);

        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replace("\"schema_version\": 1", "\"schema_version\": 2")).unwrap();
        assert!(matches!(read_json::<GraphFile>(&path), Err(StoreError::Malformed { .. })));
    }
}
