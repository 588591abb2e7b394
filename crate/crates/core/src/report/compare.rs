use serde::{Deserialize, Serialize};

use super::{MetricValue, NetworkReport, SCHEMA_VERSION};
use crate::corpus::Provenance;

pub const INTERCONNECTED: &str = "Highly Interconnected";
pub const COMPARTMENTALIZED: &str = "Compartmentalized";

/// `(density_a - density_b) / density_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeDensity {
    pub fraction: f64,
    pub percent_rounded: i64,
}

/// Interpretive labels. A network is "Highly Interconnected" when it is both
/// denser and shorter-pathed than the other, and "Compartmentalized" when its
/// modularity is higher. Ties and undefined metrics assign nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkTypeLabels {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub density: MetricValue,
    pub average_path_length: MetricValue,
    pub modularity: MetricValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparativeReport {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub a: NetworkReport,
    pub b: NetworkReport,
    /// `a - b` for each headline metric.
    pub deltas: Deltas,
    pub relative_density: Option<RelativeDensity>,
    pub labels: NetworkTypeLabels,
}

fn delta(a: &MetricValue, b: &MetricValue) -> MetricValue {
    match (a.value(), b.value()) {
        (Some(x), Some(y)) => MetricValue::defined(x - y),
        _ => MetricValue::undefined("metric undefined in at least one report"),
    }
}

fn labels_for(a: &NetworkReport, b: &NetworkReport) -> Vec<String> {
    let (ta, tb) = (&a.topology, &b.topology);
    let mut out = Vec::new();
    if let (Some(da), Some(db), Some(pa), Some(pb)) = (
        ta.density.value(),
        tb.density.value(),
        ta.average_path_length.value(),
        tb.average_path_length.value(),
    ) {
        if da > db && pa < pb {
            out.push(INTERCONNECTED.to_owned());
        }
    }
    if let (Some(qa), Some(qb)) = (ta.modularity.value(), tb.modularity.value()) {
        if qa > qb {
            out.push(COMPARTMENTALIZED.to_owned());
        }
    }
    out
}

pub fn compare(a: &NetworkReport, b: &NetworkReport) -> ComparativeReport {
    let (ta, tb) = (&a.topology, &b.topology);
    let relative_density = match (ta.density.value(), tb.density.value()) {
        (Some(da), Some(db)) if db > 0.0 => {
            let fraction = (da - db) / db;
            Some(RelativeDensity {
                fraction,
                percent_rounded: (fraction * 100.0).round() as i64,
            })
        }
        _ => None,
    };
    ComparativeReport {
        schema_version: SCHEMA_VERSION,
        provenance: Provenance::current(),
        deltas: Deltas {
            density: delta(&ta.density, &tb.density),
            average_path_length: delta(&ta.average_path_length, &tb.average_path_length),
            modularity: delta(&ta.modularity, &tb.modularity),
        },
        relative_density,
        labels: NetworkTypeLabels {
            a: labels_for(a, b),
            b: labels_for(b, a),
        },
        a: a.clone(),
        b: b.clone(),
    }
}

fn cell(v: &MetricValue, precision: usize, signed: bool) -> String {
    match v.value() {
        Some(x) if signed => format!("{x:+.precision$}"),
        Some(x) => format!("{x:.precision$}"),
        None => "undefined".into(),
    }
}

/// Plain-text comparison table followed by the relative-density headline.
pub fn render_comparison(c: &ComparativeReport) -> String {
    let (ta, tb) = (&c.a.topology, &c.b.topology);
    let label = |l: &[String]| if l.is_empty() { "-".to_owned() } else { l.join(", ") };
    let rows = [
        (
            "Graph density".to_owned(),
            cell(&ta.density, 3, false),
            cell(&tb.density, 3, false),
            cell(&c.deltas.density, 3, true),
        ),
        (
            "Average path length".to_owned(),
            cell(&ta.average_path_length, 2, false),
            cell(&tb.average_path_length, 2, false),
            cell(&c.deltas.average_path_length, 2, true),
        ),
        (
            "Modularity (Q)".to_owned(),
            cell(&ta.modularity, 2, false),
            cell(&tb.modularity, 2, false),
            cell(&c.deltas.modularity, 2, true),
        ),
        (
            "Network type".to_owned(),
            label(&c.labels.a),
            label(&c.labels.b),
            String::new(),
        ),
    ];
    let header = ("Metric".to_owned(), c.a.label.clone(), c.b.label.clone(), "Delta".to_owned());
    let width = |f: fn(&(String, String, String, String)) -> &String| {
        rows.iter()
            .chain(std::iter::once(&header))
            .map(|r| f(r).chars().count())
            .max()
            .unwrap_or(0)
    };
    let w = [width(|r| &r.0), width(|r| &r.1), width(|r| &r.2)];
    let mut out = String::new();
    for r in std::iter::once(&header).chain(&rows) {
        let line = format!(
            "{:<w0$}  {:<w1$}  {:<w2$}  {}",
            r.0,
            r.1,
            r.2,
            r.3,
            w0 = w[0],
            w1 = w[1],
            w2 = w[2]
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    match c.relative_density {
        Some(rd) => {
            let dir = if rd.percent_rounded >= 0 { "higher" } else { "lower" };
            out.push_str(&format!(
                "{} density is ≈{}% {dir} than {}\n",
                c.a.label,
                rd.percent_rounded.abs(),
                c.b.label
            ));
        }
        None => out.push_str("relative density: undefined\n"),
    }
    out
}
