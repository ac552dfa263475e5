//! The `analyze`, `detect` and `compare` commands.

use std::fs;
use std::path::{Path, PathBuf};

use commbench_core::detect::{self, shared_embedding, Algorithm};
use commbench_core::graph::ParseReport;
use commbench_core::metrics::{evaluate_all, EvaluateOptions};
use commbench_core::network::{
    degree_centrality, degree_summary, top_hubs, write_cdf_csv, write_centrality_csv, DegreeSummary,
};
use commbench_core::{DetectOutcome64, DetectParams64, Embedding64, Error as CoreError, Graph64, MetricReport64};

use crate::config::RunConfig;
use crate::error::{BenchError, BenchResult};
use crate::report::{
    embedding_checksum, sha256_hex, to_json_pretty, write_metric_csv, ComparisonDocument, ConfigEcho, JsonReport,
    Provenance, Row,
};
use crate::svg;

/// Communities drawn in color on scatter plots.
pub const SCATTER_TOP: usize = 15;

/// Metrics drawn as radar charts, as `(file stem, title)`.
pub const RADAR_METRICS: [(&str, &str); 5] = [
    ("modularity", "Modularity"),
    ("normalized_cut", "Normalized cut"),
    ("compactness", "Compactness"),
    ("calinski_harabasz", "Calinski-Harabasz score"),
    ("separability", "Separability"),
];

pub struct Dataset {
    pub graph: Graph64,
    pub parse_report: ParseReport,
    pub sha256: String,
}

pub fn load_dataset(path: &Path) -> BenchResult<Dataset> {
    let bytes = fs::read(path).map_err(|e| BenchError::Io(format!("cannot read {}: {e}", path.display())))?;
    let parse_error = |source| BenchError::Parse { path: path.display().to_string(), source };
    let (graph, parse_report) = Graph64::parse_edge_list(bytes.as_slice()).map_err(|e| match e {
        CoreError::EmptyInput => {
            let lines = bytes.split(|&b| b == b'\n').filter(|l| !l.is_empty()).count();
            parse_error(CoreError::Parse {
                line: lines.max(1),
                message: format!("no edges found ({lines} non-empty lines, all comments or blank)"),
            })
        }
        other => parse_error(other),
    })?;
    if parse_report.self_loops_ignored > 0 {
        eprintln!("warning: {}: ignored {} self-loop line(s)", path.display(), parse_report.self_loops_ignored);
    }
    Ok(Dataset { graph, parse_report, sha256: sha256_hex(&bytes) })
}

/// Collects output files and writes them in one sequential pass.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Outputs { dir: dir.to_path_buf(), files: Vec::new() }
    }

    fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    fn add_with<F>(&mut self, name: impl Into<String>, write: F)
    where
        F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    {
        let mut buf = Vec::new();
        write(&mut buf).expect("writing to memory cannot fail");
        self.add(name, buf);
    }

    fn flush(self) -> BenchResult<Vec<PathBuf>> {
        fs::create_dir_all(&self.dir)
            .map_err(|e| BenchError::Io(format!("cannot create {}: {e}", self.dir.display())))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, bytes) in self.files {
            let path = self.dir.join(name);
            fs::write(&path, bytes).map_err(|e| BenchError::Io(format!("cannot write {}: {e}", path.display())))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn shortest<W: std::io::Write>(
    out: &mut W,
    header: &str,
    values: impl Iterator<Item = (String, f64)>,
) -> std::io::Result<()> {
    writeln!(out, "{header}")?;
    for (key, v) in values {
        writeln!(out, "{key},{v:?}")?;
    }
    Ok(())
}

pub struct AnalyzeSummary {
    pub node_count: usize,
    pub edge_count: usize,
    pub components: usize,
    pub degrees: DegreeSummary,
    pub hubs: Vec<(u64, f64)>,
    pub written: Vec<PathBuf>,
}

impl AnalyzeSummary {
    pub fn render(&self) -> String {
        let mut s = format!(
            "nodes: {}\nedges: {}\nconnected components: {}\nmax degree: {}\nfraction with degree <= 200: {:.6}\n",
            self.node_count,
            self.edge_count,
            self.components,
            self.degrees.max_degree,
            self.degrees.fraction_leq(200)
        );
        s.push_str("top hubs (label, centrality):");
        for (label, c) in &self.hubs {
            s.push_str(&format!(" {label}:{c:.6}"));
        }
        s.push('\n');
        s
    }
}

pub fn cmd_analyze(config: &RunConfig) -> BenchResult<AnalyzeSummary> {
    config.validate()?;
    let data = load_dataset(&config.input)?;
    let g = &data.graph;
    let degrees = degree_summary(g);
    let centrality = degree_centrality(g).map_err(BenchError::from_core)?;
    let hubs = top_hubs(g, 10).map_err(BenchError::from_core)?;
    let components = g.connected_components().component_count;

    let mut out = Outputs::new(&config.out);
    if config.formats.csv {
        out.add_with("degree_histogram.csv", |w| degrees.write_histogram_csv(w));
        out.add_with("degree_cdf.csv", |w| write_cdf_csv(&degrees, w));
        out.add_with("centrality.csv", |w| write_centrality_csv(g.labels(), &centrality, w));
    }
    if config.formats.json {
        let doc = serde_json::json!({
            "dataset_sha256": data.sha256,
            "node_count": g.node_count(),
            "edge_count": g.edge_count(),
            "connected_components": components,
            "max_degree": degrees.max_degree,
            "fraction_degree_leq_200": degrees.fraction_leq(200),
            "duplicate_edges": data.parse_report.duplicate_edges,
            "self_loops_ignored": data.parse_report.self_loops_ignored,
            "top_hubs": hubs.iter().map(|(l, c)| serde_json::json!({"node": l, "centrality": c})).collect::<Vec<_>>(),
        });
        out.add("analysis.json", to_json_pretty(&doc));
    }
    if config.formats.svg {
        out.add("degree_histogram.svg", svg::degree_histogram_plot(&degrees));
        out.add("degree_cdf.svg", svg::degree_cdf_plot(&degrees));
        out.add("centrality.svg", svg::centrality_plot(&centrality));
    }
    let written = out.flush()?;
    Ok(AnalyzeSummary { node_count: g.node_count(), edge_count: g.edge_count(), components, degrees, hubs, written })
}

pub fn detect_params(config: &RunConfig, algorithm: Algorithm) -> DetectParams64 {
    DetectParams64 {
        seed: config.algorithm_seed(algorithm),
        k: config.k_for(algorithm),
        embed_dim: config.embed_dim,
        ..DetectParams64::default()
    }
}

/// The embedding shared by k-means detection, the geometric metrics and the
/// scatter plots, seeded by the master seed.
pub fn compute_embedding(config: &RunConfig, g: &Graph64) -> BenchResult<Embedding64> {
    let params = DetectParams64 { seed: config.seed, embed_dim: config.embed_dim, ..DetectParams64::default() };
    shared_embedding(g, &params).map_err(BenchError::from_core)
}

fn plane(e: &Embedding64) -> Vec<(f64, f64)> {
    e.rows().map(|r| (r[0], r.get(1).copied().unwrap_or(0.0))).collect()
}

pub struct DetectSummary {
    pub algorithm: Algorithm,
    pub outcome: DetectOutcome64,
    pub modularity: Option<f64>,
    pub written: Vec<PathBuf>,
}

impl DetectSummary {
    pub fn render(&self) -> String {
        let sizes = self.outcome.partition.size_summary(5);
        format!(
            "algorithm: {}\nseed: {}\ncommunities: {}\nsizes (min/median/max): {}/{}/{}\nlargest: {:?}\nmodularity: {}\n",
            self.algorithm,
            self.outcome.seed,
            sizes.count,
            sizes.min,
            sizes.median,
            sizes.max,
            sizes.top_sizes,
            crate::format::sig6(self.modularity),
        )
    }
}

pub fn cmd_detect(config: &RunConfig) -> BenchResult<DetectSummary> {
    config.validate()?;
    let &[algorithm] = config.algorithms.as_slice() else {
        return Err(BenchError::Usage("detect runs exactly one algorithm".into()));
    };
    let data = load_dataset(&config.input)?;
    let g = &data.graph;
    let params = detect_params(config, algorithm);
    let embedding =
        if config.formats.svg || algorithm == Algorithm::KMeans { Some(compute_embedding(config, g)?) } else { None };
    let outcome = detect::run(algorithm, g, embedding.as_ref(), &params).map_err(BenchError::from_core)?;
    let modularity = commbench_core::metrics::modularity(g, &outcome.partition).ok();
    let name = algorithm.name();

    let mut out = Outputs::new(&config.out);
    if config.formats.csv {
        out.add_with(format!("{name}_membership.csv"), |w| outcome.partition.write_csv(g.labels(), w));
        out.add_with(format!("{name}_trace.csv"), |w| {
            shortest(w, "pass,objective", outcome.objective_trace.iter().enumerate().map(|(i, &v)| (i.to_string(), v)))
        });
    }
    if config.formats.json {
        let sizes = outcome.partition.size_summary(SCATTER_TOP);
        let doc = serde_json::json!({
            "algorithm": name,
            "seed": outcome.seed,
            "dataset_sha256": data.sha256,
            "communities": sizes.count,
            "modularity": modularity,
            "largest_sizes": sizes.top_sizes,
            "objective_trace": outcome.objective_trace,
            "membership": outcome.partition.assignment(),
        });
        out.add(format!("{name}_detect.json"), to_json_pretty(&doc));
    }
    if let (true, Some(e)) = (config.formats.svg, embedding.as_ref()) {
        let title = format!("Communities detected by {name} (top {SCATTER_TOP} colored)");
        out.add(
            format!("{name}_communities.svg"),
            svg::community_scatter(&title, &plane(e), &outcome.partition, SCATTER_TOP),
        );
    }
    let written = out.flush()?;
    Ok(DetectSummary { algorithm, outcome, modularity, written })
}

pub struct CompareSummary {
    pub rows: Vec<Row>,
    pub provenance: Provenance,
    pub written: Vec<PathBuf>,
}

impl CompareSummary {
    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        write_metric_csv(&self.rows, self.provenance.config.record_timings, &mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }
}

type AlgorithmResult = Result<(DetectOutcome64, MetricReport64), CoreError>;

fn run_and_score(config: &RunConfig, g: &Graph64, e: &Embedding64, algorithm: Algorithm) -> AlgorithmResult {
    let params = detect_params(config, algorithm);
    let outcome = detect::run(algorithm, g, Some(e), &params)?;
    let opts = EvaluateOptions { silhouette_sample: config.silhouette_sample, seed: params.seed };
    let report = evaluate_all(g, e, &outcome, &opts);
    Ok((outcome, report))
}

pub fn cmd_compare(config: &RunConfig) -> BenchResult<CompareSummary> {
    config.validate()?;
    let data = load_dataset(&config.input)?;
    let g = &data.graph;
    let embedding = compute_embedding(config, g)?;

    let results: Vec<AlgorithmResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .algorithms
            .iter()
            .map(|&a| {
                let e = &embedding;
                scope.spawn(move || run_and_score(config, g, e, a))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("algorithm thread panicked")).collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut outcomes = Vec::new();
    let mut first_error = None;
    for (&algorithm, result) in config.algorithms.iter().zip(results) {
        match result {
            Ok((outcome, report)) => {
                rows.push(Row { algorithm: algorithm.name().into(), report: Some(report), error: None });
                outcomes.push((algorithm, outcome));
            }
            Err(err) => {
                eprintln!("warning: {algorithm} failed: {err}");
                rows.push(Row { algorithm: algorithm.name().into(), report: None, error: Some(err.to_string()) });
                first_error.get_or_insert(err);
            }
        }
    }
    if outcomes.is_empty() {
        return Err(BenchError::from_core(first_error.expect("at least one algorithm ran")));
    }

    let provenance = Provenance {
        toolkit_version: crate::report::TOOLKIT_VERSION,
        dataset_sha256: data.sha256.clone(),
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        embedding_dim: embedding.dim(),
        embedding_sha256: embedding_checksum(&embedding),
        config: ConfigEcho::new(config),
    };

    let mut out = Outputs::new(&config.out);
    if config.formats.csv {
        out.add_with("metrics.csv", |w| write_metric_csv(&rows, config.record_timings, w));
        out.add_with("embedding.csv", |w| embedding.write_csv(g.labels(), w));
        for (algorithm, outcome) in &outcomes {
            let name = algorithm.name();
            out.add_with(format!("{name}_membership.csv"), |w| outcome.partition.write_csv(g.labels(), w));
            out.add_with(format!("{name}_trace.csv"), |w| {
                shortest(
                    w,
                    "pass,objective",
                    outcome.objective_trace.iter().enumerate().map(|(i, &v)| (i.to_string(), v)),
                )
            });
        }
    }
    if config.formats.json {
        let doc = ComparisonDocument {
            reports: rows.iter().map(|r| JsonReport::from_row(r, config.record_timings)).collect(),
            provenance: &provenance,
        };
        out.add("comparison.json", to_json_pretty(&doc));
    }
    if config.formats.svg {
        for (stem, title) in RADAR_METRICS {
            let entries: Vec<(String, Option<f64>)> =
                rows.iter().map(|r| (r.algorithm.clone(), r.report.as_ref().and_then(|m| metric(m, stem)))).collect();
            out.add(format!("radar_{stem}.svg"), svg::radar_chart(title, &entries));
        }
        let silhouettes: Vec<(String, Option<f64>)> =
            rows.iter().map(|r| (r.algorithm.clone(), r.report.as_ref().and_then(|m| m.silhouette))).collect();
        out.add("silhouette_bar.svg", svg::bar_chart("Silhouette score", "silhouette", &silhouettes, -1.0, 1.0));
        let points = plane(&embedding);
        for (algorithm, outcome) in &outcomes {
            let title = format!("Communities detected by {algorithm} (top {SCATTER_TOP} colored)");
            out.add(
                format!("{}_communities.svg", algorithm.name()),
                svg::community_scatter(&title, &points, &outcome.partition, SCATTER_TOP),
            );
        }
    }
    out.add("provenance.json", to_json_pretty(&provenance));
    let written = out.flush()?;
    Ok(CompareSummary { rows, provenance, written })
}

fn metric(report: &MetricReport64, stem: &str) -> Option<f64> {
    match stem {
        "modularity" => report.modularity,
        "normalized_cut" => report.normalized_cut,
        "silhouette" => report.silhouette,
        "compactness" => report.compactness,
        "calinski_harabasz" => report.calinski_harabasz,
        "separability" => report.separability,
        _ => None,
    }
}
