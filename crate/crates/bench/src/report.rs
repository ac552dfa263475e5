//! Metric tables, JSON documents and provenance.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use commbench_core::{Embedding64, MetricReport64};

use crate::config::RunConfig;
use crate::format::sig6;

pub const METRIC_HEADER: &str =
    "algorithm,communities,modularity,normalized_cut,silhouette,compactness,calinski_harabasz,separability,seconds";

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One table row. `report` is `None` when the algorithm failed.
#[derive(Debug, Clone)]
pub struct Row {
    pub algorithm: String,
    pub report: Option<MetricReport64>,
    pub error: Option<String>,
}

fn seconds(report: &MetricReport64, record_timings: bool) -> Option<f64> {
    record_timings.then_some(report.wall_time.as_secs_f64())
}

pub fn write_metric_csv<W: Write>(rows: &[Row], record_timings: bool, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{METRIC_HEADER}")?;
    for row in rows {
        match &row.report {
            Some(r) => writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                row.algorithm,
                r.community_count,
                sig6(r.modularity),
                sig6(r.normalized_cut),
                sig6(r.silhouette),
                sig6(r.compactness),
                sig6(r.calinski_harabasz),
                sig6(r.separability),
                sig6(seconds(r, record_timings)),
            )?,
            None => writeln!(out, "{},NA,NA,NA,NA,NA,NA,NA,NA", row.algorithm)?,
        }
    }
    Ok(())
}

/// JSON has no infinity, so `+inf` is written as the string `"inf"`;
/// missing values are `null`.
fn metric_value(x: Option<f64>) -> Value {
    match x {
        Some(v) if v.is_finite() => Value::from(v),
        Some(v) if v == f64::INFINITY => Value::from("inf"),
        Some(v) if v == f64::NEG_INFINITY => Value::from("-inf"),
        _ => Value::Null,
    }
}

#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub algorithm: String,
    pub status: &'static str,
    pub error: Option<String>,
    pub seed: Option<u64>,
    pub communities: Option<usize>,
    pub modularity: Value,
    pub normalized_cut: Value,
    pub silhouette: Value,
    pub compactness: Value,
    pub calinski_harabasz: Value,
    pub separability: Value,
    pub seconds: Value,
}

impl JsonReport {
    pub fn from_row(row: &Row, record_timings: bool) -> Self {
        let r = row.report.as_ref();
        let field = |f: fn(&MetricReport64) -> Option<f64>| metric_value(r.and_then(f));
        JsonReport {
            algorithm: row.algorithm.clone(),
            status: if r.is_some() { "ok" } else { "failed" },
            error: row.error.clone(),
            seed: r.map(|r| r.seed),
            communities: r.map(|r| r.community_count),
            modularity: field(|r| r.modularity),
            normalized_cut: field(|r| r.normalized_cut),
            silhouette: field(|r| r.silhouette),
            compactness: field(|r| r.compactness),
            calinski_harabasz: field(|r| r.calinski_harabasz),
            separability: field(|r| r.separability),
            seconds: metric_value(r.and_then(|r| seconds(r, record_timings))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmSeed {
    pub algorithm: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    pub algorithms: Vec<String>,
    pub seed: u64,
    pub algorithm_seeds: Vec<AlgorithmSeed>,
    pub k_kmeans: usize,
    pub k_spectral: usize,
    pub embed_dim: usize,
    pub silhouette_sample: Option<usize>,
    pub formats: Vec<&'static str>,
    pub record_timings: bool,
}

impl ConfigEcho {
    pub fn new(config: &RunConfig) -> Self {
        ConfigEcho {
            // The file name only, so moving the dataset does not change output.
            input: config
                .input
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| config.input.display().to_string()),
            algorithms: config.algorithms.iter().map(|a| a.name().to_string()).collect(),
            seed: config.seed,
            algorithm_seeds: config
                .algorithms
                .iter()
                .map(|&a| AlgorithmSeed { algorithm: a.name().to_string(), seed: config.algorithm_seed(a) })
                .collect(),
            k_kmeans: config.k_kmeans,
            k_spectral: config.k_spectral,
            embed_dim: config.embed_dim,
            silhouette_sample: config.silhouette_sample,
            formats: config.formats.names(),
            record_timings: config.record_timings,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub toolkit_version: &'static str,
    pub dataset_sha256: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub embedding_dim: usize,
    pub embedding_sha256: String,
    pub config: ConfigEcho,
}

#[derive(Debug, Serialize)]
pub struct ComparisonDocument<'a> {
    pub reports: Vec<JsonReport>,
    pub provenance: &'a Provenance,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of the little-endian bytes of every coordinate, row-major.
pub fn embedding_checksum(e: &Embedding64) -> String {
    let mut hasher = Sha256::new();
    hasher.update((e.len() as u64).to_le_bytes());
    hasher.update((e.dim() as u64).to_le_bytes());
    for x in e.as_slice() {
        hasher.update(x.to_le_bytes());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn to_json_pretty<S: Serialize>(value: &S) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn report(name: &str) -> MetricReport64 {
        MetricReport64 {
            algorithm_name: name.into(),
            modularity: Some(5.0 / 14.0),
            normalized_cut: Some(1.0 / 7.0),
            silhouette: None,
            compactness: Some(0.0),
            calinski_harabasz: Some(f64::INFINITY),
            separability: Some(2.5),
            community_count: 2,
            wall_time: Duration::from_millis(1500),
            seed: 42,
        }
    }

    #[test]
    fn csv_rows() {
        let rows = vec![
            Row { algorithm: "louvain".into(), report: Some(report("louvain")), error: None },
            Row { algorithm: "spectral".into(), report: None, error: Some("boom".into()) },
        ];
        let mut out = Vec::new();
        write_metric_csv(&rows, false, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], METRIC_HEADER);
        assert_eq!(lines[1], "louvain,2,0.357143,0.142857,NA,0,inf,2.5,NA");
        assert_eq!(lines[2], "spectral,NA,NA,NA,NA,NA,NA,NA,NA");

        let mut timed = Vec::new();
        write_metric_csv(&rows[..1], true, &mut timed).unwrap();
        assert!(String::from_utf8(timed).unwrap().lines().nth(1).unwrap().ends_with(",1.5"));
    }

    #[test]
    fn json_keeps_full_precision_and_key_order() {
        let row = Row { algorithm: "louvain".into(), report: Some(report("louvain")), error: None };
        let text = serde_json::to_string(&JsonReport::from_row(&row, false)).unwrap();
        assert!(text.starts_with(r#"{"algorithm":"louvain","status":"ok""#));
        assert!(text.contains(r#""modularity":0.35714285714285715"#));
        assert!(text.contains(r#""calinski_harabasz":"inf""#));
        assert!(text.contains(r#""silhouette":null"#));
    }

    #[test]
    fn sha_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
