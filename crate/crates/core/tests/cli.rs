// Copyright 2026 The cooccur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! End-to-end checks of the `cooccur` command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use cooccur::cli::run;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cooccur(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["cooccur"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn analyze_fixture_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.tsv");
    let chart = dir.path().join("chart.csv");
    let (code, out, err) = cooccur(&[
        "analyze",
        "--input",
        p(&fixture("fixture4.tsv")),
        "--output",
        p(&report),
        "--chart-out",
        p(&chart),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        fs::read_to_string(&report).unwrap(),
        "base\tco_label\tpair_count\tbase_count\tcond_prob\tsupport\n\
         dog\tperson\t2\t3\t0.6667\t0.5000\n\
         person\tcar\t2\t3\t0.6667\t0.5000\n\
         person\tdog\t2\t3\t0.6667\t0.5000\n"
    );
    assert_eq!(fs::read_to_string(&chart).unwrap(), "base,co_class_count\ndog,1\nperson,2\n");
    assert!(out.starts_with("n_images=4 K=3 bases=2 rows=3 "), "{out}");
}

#[test]
fn default_run_prints_report_then_summary() {
    let (code, out, _) = cooccur(&["analyze", "--input", p(&fixture("fixture4.tsv"))]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("n_images=4"));
}

#[test]
fn top_k_ten_selects_every_label() {
    let (code, out, _) = cooccur(&["analyze", "--input", p(&fixture("fixture4.tsv")), "--base-top-k", "10"]);
    assert_eq!(code, 0);
    // car joins as a base: car->person (2/2), car->dog (1/2)
    assert!(out.contains("car\tperson\t2\t2\t1.0000\t0.5000\n"));
    assert!(out.contains("car\tdog\t1\t2\t0.5000\t0.2500\n"));
    assert!(out.contains("bases=3 rows=5"));
}

#[test]
fn missing_input_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.tsv");
    let (code, out, err) = cooccur(&["analyze", "--input", "/definitely/not/here.tsv", "--output", p(&report)]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("not/here.tsv"));
    assert!(!report.exists());
}

#[test]
fn parse_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "a\tdog\nb\tdog,,cat\n").unwrap();
    let (code, _, err) = cooccur(&["analyze", "--input", p(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"images\": [\n{\"id\": 1},\n]}").unwrap();
    let (code, _, err) = cooccur(&["stats", "--input", p(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn coco_fixture_reports_80_classes() {
    let (code, out, err) = cooccur(&["analyze", "--input", p(&fixture("coco_100.json")), "--expect-classes", "80"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().last().unwrap().starts_with("n_images=100 K=80 "));
    let (code, _, err) = cooccur(&["analyze", "--input", p(&fixture("coco_100.json")), "--expect-classes", "20"]);
    assert_eq!(code, 5);
    assert!(err.contains("expected 20 classes, found 80"));
}

#[test]
fn convert_voc_and_tsv_idempotence() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("voc.tsv");
    let (code, _, err) = cooccur(&["convert", "--input", p(&fixture("voc")), "--output", p(&out1)]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&out1).unwrap();
    assert_eq!(text, "2008_000001\tcat\n2008_000002\tcat,sofa\n");

    let out2 = dir.path().join("again.tsv");
    let (code, _, _) = cooccur(&["convert", "--input", p(&out1), "--output", p(&out2)]);
    assert_eq!(code, 0);
    assert_eq!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());

    // explicit file list behaves like the directory
    let (code, stdout, _) = cooccur(&[
        "convert",
        "--input",
        p(&fixture("voc/2008_000001.xml")),
        p(&fixture("voc/2008_000002.xml")),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, text);
}

#[test]
fn coco_to_tsv_then_analyze_commutes() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("coco.tsv");
    assert_eq!(cooccur(&["convert", "--input", p(&fixture("coco_100.json")), "--output", p(&tsv)]).0, 0);
    let coco = fixture("coco_100.json");
    for extra in [&[][..], &["--base-top-k", "6", "--cooccur-threshold", "0.3"]] {
        let direct = dir.path().join("direct.tsv");
        let via = dir.path().join("via.tsv");
        let mut a = vec!["analyze", "--input", p(&coco), "--output", p(&direct)];
        a.extend_from_slice(extra);
        let mut b = vec!["analyze", "--input", p(&tsv), "--output", p(&via)];
        b.extend_from_slice(extra);
        assert_eq!(cooccur(&a).0, 0);
        assert_eq!(cooccur(&b).0, 0);
        assert_eq!(fs::read_to_string(&direct).unwrap(), fs::read_to_string(&via).unwrap());
    }
}

#[test]
fn stats_on_fixture_and_empty_input() {
    let (code, out, _) = cooccur(&["stats", "--input", p(&fixture("fixture4.tsv"))]);
    assert_eq!(code, 0);
    assert_eq!(out, "dog\t3\nperson\t3\ncar\t2\n4 images\n");
    assert_eq!(cooccur(&["stats", "--input", p(&fixture("fixture4.tsv"))]).1, out);

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.tsv");
    fs::write(&empty, "").unwrap();
    let (code, out, _) = cooccur(&["stats", "--input", p(&empty)]);
    assert_eq!(code, 3);
    assert_eq!(out, "0 images\n");
    let (code, _, _) = cooccur(&["analyze", "--input", p(&empty)]);
    assert_eq!(code, 3);
}

#[test]
fn detections_input() {
    let (code, out, err) = cooccur(&[
        "convert",
        "--input",
        p(&fixture("detections.jsonl")),
        "--vocabulary",
        "coco",
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "img1\tperson\nimg2\tdog\n");
    let (_, out, _) = cooccur(&["convert", "--input", p(&fixture("detections.jsonl")), "--score-threshold", "0"]);
    assert_eq!(out, "img1\tperson,dog\nimg2\tdog\n");

    let dir = tempfile::tempdir().unwrap();
    let vocab = dir.path().join("labels.txt");
    fs::write(&vocab, "person\n").unwrap();
    let (code, _, err) = cooccur(&["stats", "--input", p(&fixture("detections.jsonl")), "--vocabulary", p(&vocab)]);
    assert_eq!(code, 2);
    assert!(err.contains("'dog' is not in the vocabulary"), "{err}");
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let config = dir.path().join("run.json");
    let body = serde_json::json!({
        "input": fixture("fixture4.tsv"),
        "output": report,
        "output_format": "json",
        "base_top_k": 1,
        "dataset_name": "tiny",
    });
    fs::write(&config, body.to_string()).unwrap();
    let (code, _, err) = cooccur(&["analyze", "--config", p(&config)]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["meta"]["dataset"], "tiny");
    assert_eq!(v["meta"]["config"]["base_policy"], "top_k=1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);

    let (code, _, _) = cooccur(&["analyze", "--config", p(&config), "--cooccur-threshold", "1.0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["rows"].as_array().unwrap().is_empty());

    fs::write(&config, "{\"input\": 3}").unwrap();
    assert_eq!(cooccur(&["analyze", "--config", p(&config)]).0, 4);
}

#[test]
fn rules_and_itemsets_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("rules.tsv");
    let itemsets = dir.path().join("itemsets.tsv");
    let (code, _, _) = cooccur(&[
        "analyze",
        "--input",
        p(&fixture("fixture4.tsv")),
        "--min-support",
        "0.5",
        "--rules-out",
        p(&rules),
        "--itemsets-out",
        p(&itemsets),
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        fs::read_to_string(&itemsets).unwrap(),
        "items\tsupport_count\ncar\t2\ndog\t3\nperson\t3\ncar,person\t2\ndog,person\t2\n"
    );
    assert_eq!(
        fs::read_to_string(&rules).unwrap(),
        "antecedent\tconsequent\tsupport_count\tantecedent_support\tconfidence\n\
         dog\tperson\t2\t3\t0.6667\n\
         person\tcar\t2\t3\t0.6667\n\
         person\tdog\t2\t3\t0.6667\n"
    );
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2", "4"] {
        let report = dir.path().join(format!("r{threads}.json"));
        let itemsets = dir.path().join(format!("i{threads}.tsv"));
        let (code, out, _) = cooccur(&[
            "analyze",
            "--input",
            p(&fixture("coco_100.json")),
            "--base-top-k",
            "10",
            "--min-support",
            "0.03",
            "--threads",
            threads,
            "--output-format",
            "json",
            "--output",
            p(&report),
            "--itemsets-out",
            p(&itemsets),
        ]);
        assert_eq!(code, 0);
        outputs.push((out, fs::read(&report).unwrap(), fs::read(&itemsets).unwrap()));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cooccur");
    let ok = Command::new(bin)
        .args(["analyze", "--input", p(&fixture("fixture4.tsv"))])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("rows=3"));
    let missing = Command::new(bin).args(["stats", "--input", "/nope.tsv"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    assert!(!missing.stderr.is_empty());
    let usage = Command::new(bin).args(["analyze", "--bogus"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(4));
}
