//! `bench` runs alone in this target so that its timings are not disturbed
//! by other tests.

use std::fs;
use std::process::Command;

use serde_json::Value;

#[test]
fn bench_columns_accuracy_and_l1_cost() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_thetafrac"))
        .args(["--out", "b", "bench", "--sizes", "8,256,512,1024,2048"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("b/bench.json")).unwrap())
            .unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for key in [
        "nx",
        "nt",
        "representation_seconds",
        "representation_wright_evaluations",
        "representation_error",
        "l1_seconds",
        "l1_seconds_per_step",
        "l1_error",
        "spectral_seconds",
    ] {
        assert!(rows.iter().all(|r| r.get(key).is_some()), "{key}");
    }
    for r in rows {
        assert!(r["representation_error"].as_f64().unwrap() <= 1e-4);
    }
    assert_eq!(report["l1_step_cost_ratio"].as_array().unwrap().len(), 4);
    // the L1 history sum makes the cost per step linear in the step count:
    // doubling nt should double it, within 50%. A least-squares slope of
    // log time against log nt over the larger sizes smooths timer noise.
    let pts: Vec<(f64, f64)> = rows[1..]
        .iter()
        .map(|r| {
            let nt = r["nt"].as_f64().unwrap();
            (nt.ln(), r["l1_seconds"].as_f64().unwrap().ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let per_step_ratio = 2f64.powf(sxy / sxx - 1.0);
    assert!(
        (1.0..=3.0).contains(&per_step_ratio),
        "per-step cost ratio {per_step_ratio}"
    );
}
