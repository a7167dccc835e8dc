//! End-to-end checks of the command line: schema round-trips, exit codes,
//! and deterministic output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn thh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thh"))
        .args(args)
        .output()
        .expect("spawn thh")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

#[test]
fn compute_thh_z_table() {
    let out = thh(&[
        "compute",
        "--model",
        "thh-z",
        "--prime",
        "2",
        "--max-degree",
        "8",
    ]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0]["free_rank"], 1);
    assert_eq!(rows[3]["torsion_exponents"], serde_json::json!([1]));
    assert_eq!(rows[7]["torsion_exponents"], serde_json::json!([2]));
    // empty window: a single degree-0 row
    let out = thh(&["compute", "--model", "thh-z", "--max-degree", "0"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["degree"], 0);
}

#[test]
fn compute_round_trips_to_direct_realization() {
    let out = thh(&[
        "compute",
        "--model",
        "thh-ell",
        "--prime",
        "2",
        "--max-degree",
        "30",
    ]);
    assert!(out.status.success());
    let rows: Vec<thh_core::DegreeRecord> = serde_json::from_str(&stdout(&out)).unwrap();
    let pres = thh_core::catalog::thh_ell(thh_core::Prime::new(2).unwrap());
    for r in rows {
        assert_eq!(r.group(), pres.realize(r.degree), "degree {}", r.degree);
    }
}

#[test]
fn compute_csv_format() {
    let out = thh(&[
        "compute",
        "--model",
        "thh-ell-z",
        "--max-degree",
        "10",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("degree,free_rank,torsion_exponents"));
    assert_eq!(lines.next(), Some("0,1,"));
    assert!(text.lines().any(|l| l == "7,0,1"));
}

#[test]
fn brun_emits_schema_plus_extensions() {
    let out = thh(&["brun", "--n", "2", "--prime", "2", "--max-degree", "24"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["height"], 2);
    assert_eq!(doc["degrees"].as_array().unwrap().len(), 25);
    let exts = doc["extensions"].as_array().unwrap();
    assert!(!exts.is_empty());
    for e in exts {
        assert!(e["source"].is_string());
        assert!(e["target"].is_string());
        assert_eq!(e["p_power"], 1);
        assert_eq!(e.as_object().unwrap().len(), 3);
    }
    // the first hidden extension: p b_1 = lambda_1 sigma v_2
    assert_eq!(exts[0]["source"], "b_1");
    assert_eq!(exts[0]["target"], "lambda_1 sigma_v2");
}

#[test]
fn series_rational_example() {
    let out = thh(&[
        "series",
        "--model",
        "rational",
        "--n",
        "2",
        "--m",
        "1",
        "--prime",
        "2",
        "--max-degree",
        "7",
    ]);
    assert!(out.status.success());
    let dims: Vec<u64> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 1, 2]);
}

#[test]
fn usage_errors_exit_2() {
    let out = thh(&["compute", "--model", "no-such-model", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // thh-fp without --n is a usage error as well
    let out = thh(&["compute", "--model", "thh-fp", "--max-degree", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = thh(&[
        "compute",
        "--model",
        "thh-z",
        "--prime",
        "9",
        "--max-degree",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_errors_exit_3() {
    let out = thh(&[
        "chart",
        "--model",
        "thh-z",
        "--max-degree",
        "4",
        "--output",
        "/nonexistent-dir/chart.svg",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = thh(&[
        "compute",
        "--model",
        "thh-z",
        "--max-degree",
        "4",
        "--output",
        "/nonexistent-dir/out.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_small_window_passes() {
    let out = thh(&[
        "verify",
        "--suite",
        "ku",
        "--prime",
        "2",
        "--max-degree",
        "20",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let reports: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports[0]["status"], "pass");
}

#[test]
fn chart_is_deterministic_and_counts_dots() {
    let dir = std::env::temp_dir();
    let p1: PathBuf = dir.join("thh-chart-a.svg");
    let p2: PathBuf = dir.join("thh-chart-b.svg");
    for path in [&p1, &p2] {
        let out = thh(&[
            "chart",
            "--model",
            "thh-ell",
            "--prime",
            "2",
            "--max-degree",
            "20",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert_eq!(a, b, "chart output must be byte-for-byte reproducible");
    // dot count per degree = free rank + torsion summand count
    let text = String::from_utf8(a).unwrap();
    let pres = thh_core::catalog::thh_ell(thh_core::Prime::new(2).unwrap());
    for d in 0..=20 {
        let g = pres.realize(d);
        let needle = format!("data-degree=\"{d}\" data-slot");
        let count = text.matches(&needle).count();
        assert_eq!(count, g.free_rank + g.torsion.len(), "degree {d}");
    }
    // v1-struts exist along the unit tower
    assert!(text.contains("class=\"strut\""));
}

#[test]
fn chart_zero_window_has_axes_only() {
    let path = std::env::temp_dir().join("thh-chart-zero.svg");
    let out = thh(&[
        "chart",
        "--model",
        "thh-bp2-z",
        "--prime",
        "2",
        "--max-degree",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    // degrees 1, 2 are zero; only the unit dot appears
    assert_eq!(text.matches("class=\"dot\"").count(), 1);
    assert!(text.contains("<svg"));
}

#[test]
fn chart_bp2_bp1_shows_extension_edge() {
    let path = std::env::temp_dir().join("thh-chart-ext.svg");
    let out = thh(&[
        "chart",
        "--model",
        "thh-bp2-bp1",
        "--prime",
        "2",
        "--max-degree",
        "14",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(
        text.contains(r#"class="ext" data-degree="10""#),
        "dashed extension edge at degree 10 expected"
    );
}
