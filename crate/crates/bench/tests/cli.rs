use std::fs;
use std::path::Path;
use std::process::Command;

const B6: &str = "0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n";

fn commbench() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_commbench"));
    cmd.env_remove("COMMBENCH_SEED");
    cmd
}

fn write_input(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn exit_code(cmd: &mut Command) -> i32 {
    cmd.output().unwrap().status.code().unwrap()
}

#[test]
fn analyze_b6_writes_exact_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "b6.txt", B6);
    let out = dir.path().join("out");
    let output = commbench().args(["analyze", "--input", &input, "--out"]).arg(&out).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("nodes: 6") && stdout.contains("edges: 7"), "{stdout}");
    assert_eq!(fs::read_to_string(out.join("degree_histogram.csv")).unwrap(), "degree,count\n2,4\n3,2\n");
    let cdf = fs::read_to_string(out.join("degree_cdf.csv")).unwrap();
    assert!(cdf.starts_with("degree,cumulative_fraction\n2,0.666") && cdf.ends_with("3,1\n"), "{cdf}");
    let centrality = fs::read_to_string(out.join("centrality.csv")).unwrap();
    assert!(centrality.contains("\n2,0.6\n"), "{centrality}");
    for svg in ["degree_histogram.svg", "degree_cdf.svg", "centrality.svg"] {
        assert!(fs::read_to_string(out.join(svg)).unwrap().trim_end().ends_with("</svg>"));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let b6 = write_input(dir.path(), "b6.txt", B6);
    let empty = write_input(dir.path(), "empty.txt", "");
    let comments = write_input(dir.path(), "comments.txt", "# nothing here\n\n");
    let bad = write_input(dir.path(), "bad.txt", "0 1\n1 x\n");
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();

    assert_eq!(exit_code(commbench().args(["analyze", "--input", &b6, "--out", out])), 0);
    assert_eq!(exit_code(commbench().arg("analyze")), 1);
    assert_eq!(exit_code(commbench().args(["frobnicate"])), 1);
    assert_eq!(exit_code(commbench().args(["detect", "--input", &b6, "--algo", "girvan_newman"])), 1);
    assert_eq!(exit_code(commbench().args(["detect", "--input", &b6, "--algo", "louvain", "--formats", "png"])), 1);
    assert_eq!(exit_code(commbench().args(["analyze", "--input", "/nonexistent/graph.txt"])), 1);
    assert_eq!(exit_code(commbench().args(["analyze", "--input", &comments, "--out", out])), 2);

    let output = commbench().args(["analyze", "--input", &empty, "--out", out]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8(output.stderr).unwrap().contains("line 1"));

    let output = commbench().args(["analyze", "--input", &bad, "--out", out]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8(output.stderr).unwrap().contains("line 2"));

    assert_eq!(exit_code(commbench().arg("--help")), 0);
}

#[test]
fn detect_louvain_on_b6() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "b6.txt", B6);
    let out = dir.path().join("out");
    let status = commbench()
        .args(["detect", "--algo", "louvain", "--seed", "42", "--input", &input, "--out"])
        .arg(&out)
        .output()
        .map(|o| o.status);
    assert_eq!(status.unwrap().code(), Some(0));
    assert_eq!(
        fs::read_to_string(out.join("louvain_membership.csv")).unwrap(),
        "node,community\n0,0\n1,0\n2,0\n3,1\n4,1\n5,1\n"
    );
    let trace = fs::read_to_string(out.join("louvain_trace.csv")).unwrap();
    assert!(trace.starts_with("pass,objective\n0,"));
    assert!(out.join("louvain_communities.svg").exists());
}

#[test]
fn detect_infomap_on_disconnected_graph() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "two.txt", "0 1\n1 2\n2 0\n10 11\n11 12\n12 10\n");
    let out = dir.path().join("out");
    let status = commbench()
        .args(["detect", "--algo", "infomap", "--input", &input, "--out"])
        .arg(&out)
        .output()
        .map(|o| o.status);
    assert_eq!(status.unwrap().code(), Some(0));
    assert_eq!(
        fs::read_to_string(out.join("infomap_membership.csv")).unwrap(),
        "node,community\n0,0\n1,0\n2,0\n10,1\n11,1\n12,1\n"
    );
}

#[test]
fn seed_flag_beats_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "b6.txt", B6);
    let run = |env: Option<&str>, flag: Option<&str>| {
        let out = dir.path().join(format!("out-{env:?}-{flag:?}"));
        let mut cmd = commbench();
        cmd.args(["compare", "--algos", "louvain", "--formats", "json", "--input", &input, "--out"]).arg(&out);
        if let Some(e) = env {
            cmd.env("COMMBENCH_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        assert_eq!(cmd.output().unwrap().status.code(), Some(0));
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("comparison.json")).unwrap()).unwrap();
        doc["provenance"]["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 42);
    assert_eq!(run(Some("7"), None), 7);
    assert_eq!(run(Some("7"), Some("9")), 9);
    assert_eq!(exit_code(commbench().env("COMMBENCH_SEED", "seven").args(["analyze", "--input", &input])), 1);
}

#[test]
fn compare_json_is_a_single_document() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "b6.txt", B6);
    let out = dir.path().join("out");
    let status = commbench()
        .args(["compare", "--k", "2", "--formats", "json", "--input", &input, "--out"])
        .arg(&out)
        .output()
        .map(|o| o.status);
    assert_eq!(status.unwrap().code(), Some(0));
    let text = fs::read_to_string(out.join("comparison.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["provenance", "reports"]);
    assert!(text.find("\"reports\"").unwrap() < text.find("\"provenance\"").unwrap());
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    for r in reports {
        assert!((r["modularity"].as_f64().unwrap() - 5.0 / 14.0).abs() < 1e-12);
    }
    assert!(!out.join("metrics.csv").exists());
}

#[test]
fn compare_marks_failed_algorithms_na() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(dir.path(), "b6.txt", B6);
    let out = dir.path().join("out");
    let output =
        commbench().args(["compare", "--formats", "csv", "--input", &input, "--out"]).arg(&out).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8(output.stderr).unwrap().contains("spectral failed"));
    let table = fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert!(table.contains("\nspectral,NA,NA,NA,NA,NA,NA,NA,NA\n"), "{table}");
    assert!(table.contains("\nlouvain,2,0.357143,0.142857,"), "{table}");

    let only_failing = commbench()
        .args(["compare", "--algos", "spectral", "--input", &input, "--out"])
        .arg(dir.path().join("none"))
        .output()
        .unwrap();
    assert_eq!(only_failing.status.code(), Some(1));
}
