use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{NetworkReport, ReportError};
use crate::corpus::Provenance;
use crate::graph::SemanticGraph;
use crate::metrics::{CentralityTable, CommunityPartition};

/// A graph with its per-node metrics, as needed by the exporters.
#[derive(Debug, Clone, Copy)]
pub struct GraphView<'a> {
    pub graph: &'a SemanticGraph,
    pub partition: &'a CommunityPartition,
    pub degree: &'a CentralityTable,
    pub betweenness: &'a CentralityTable,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_owned(),
        source,
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// GEXF 1.3 document with node attributes `frequency`, `community`,
/// `degree`, `betweenness` and weighted undirected edges. Provenance
/// settings go into the `<meta>` description.
pub fn write_gexf(view: GraphView<'_>, provenance: &Provenance) -> String {
    let g = view.graph;
    let mut x = String::new();
    x.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    x.push_str(
        "<gexf xmlns=\"http://gexf.net/1.3\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://gexf.net/1.3 http://gexf.net/1.3/gexf.xsd\" \
         version=\"1.3\">\n",
    );
    let settings: Vec<String> = provenance
        .settings
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    let _ = writeln!(
        x,
        "  <meta>\n    <creator>{} {}</creator>\n    <description>{}</description>\n  </meta>",
        xml_escape(&provenance.tool),
        xml_escape(&provenance.version),
        xml_escape(&settings.join("; "))
    );
    x.push_str("  <graph mode=\"static\" defaultedgetype=\"undirected\">\n");
    x.push_str("    <attributes class=\"node\">\n");
    for (id, title, ty) in [
        (0, "frequency", "long"),
        (1, "community", "integer"),
        (2, "degree", "integer"),
        (3, "betweenness", "double"),
    ] {
        let _ = writeln!(x, "      <attribute id=\"{id}\" title=\"{title}\" type=\"{ty}\"/>");
    }
    x.push_str("    </attributes>\n    <nodes>\n");
    for v in g.node_ids() {
        let _ = writeln!(
            x,
            "      <node id=\"{v}\" label=\"{}\">\n        <attvalues>\n          \
             <attvalue for=\"0\" value=\"{}\"/>\n          \
             <attvalue for=\"1\" value=\"{}\"/>\n          \
             <attvalue for=\"2\" value=\"{}\"/>\n          \
             <attvalue for=\"3\" value=\"{}\"/>\n        </attvalues>\n      </node>",
            xml_escape(g.lemma(v)),
            g.frequency(v),
            view.partition.community_of(v),
            g.degree(v),
            view.betweenness.score(v),
        );
    }
    x.push_str("    </nodes>\n    <edges>\n");
    for (i, e) in g.edges().iter().enumerate() {
        let _ = writeln!(
            x,
            "      <edge id=\"{i}\" source=\"{}\" target=\"{}\" weight=\"{}\"/>",
            e.source, e.target, e.weight
        );
    }
    x.push_str("    </edges>\n  </graph>\n</gexf>\n");
    x
}

pub fn export_gexf(
    view: GraphView<'_>,
    provenance: &Provenance,
    path: &Path,
) -> Result<(), ReportError> {
    fs::write(path, write_gexf(view, provenance)).map_err(io_err(path))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct NodeRow<'a> {
    lemma: &'a str,
    id: u32,
    frequency: u64,
    community: u32,
    degree: usize,
    betweenness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EdgeRow {
    source: String,
    target: String,
    weight: u64,
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> ReportError + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(source) => ReportError::Io {
            path: path.to_owned(),
            source,
        },
        other => ReportError::Malformed {
            what: path.display().to_string(),
            detail: format!("{other:?}"),
        },
    }
}

/// Writes `nodes.csv` and `edges.csv` into `dir` and returns their paths.
/// Edge endpoints are lemmas, so the edge table stands on its own.
pub fn export_csv_tables(view: GraphView<'_>, dir: &Path) -> Result<(PathBuf, PathBuf), ReportError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let g = view.graph;
    let nodes_path = dir.join("nodes.csv");
    let mut w = csv::Writer::from_path(&nodes_path).map_err(csv_err(&nodes_path))?;
    for v in g.node_ids() {
        w.serialize(NodeRow {
            lemma: g.lemma(v),
            id: v,
            frequency: g.frequency(v),
            community: view.partition.community_of(v),
            degree: g.degree(v),
            betweenness: view.betweenness.score(v),
        })
        .map_err(csv_err(&nodes_path))?;
    }
    w.flush().map_err(io_err(&nodes_path))?;

    let edges_path = dir.join("edges.csv");
    let mut w = csv::Writer::from_path(&edges_path).map_err(csv_err(&edges_path))?;
    for e in g.edges() {
        w.serialize(EdgeRow {
            source: g.lemma(e.source).to_owned(),
            target: g.lemma(e.target).to_owned(),
            weight: e.weight,
        })
        .map_err(csv_err(&edges_path))?;
    }
    w.flush().map_err(io_err(&edges_path))?;
    Ok((nodes_path, edges_path))
}

/// Reads an `edges.csv` written by [`export_csv_tables`] back into a graph.
/// Node frequencies are not part of the edge table and come back as 1.
pub fn read_edges_csv(path: &Path) -> Result<SemanticGraph, ReportError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let rows: Vec<EdgeRow> = r
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(csv_err(path))?;
    let edges: Vec<(&str, &str, u64)> = rows
        .iter()
        .map(|e| (e.source.as_str(), e.target.as_str(), e.weight))
        .collect();
    SemanticGraph::from_edges(&edges).map_err(|e| ReportError::Malformed {
        what: path.display().to_string(),
        detail: e.to_string(),
    })
}

pub fn export_json(report: &NetworkReport, path: &Path) -> Result<(), ReportError> {
    fs::write(path, report.to_json()).map_err(io_err(path))
}
