use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bucketsched"));
    c.env_remove("BUCKETSCHED_OUT_DIR");
    c
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["solve", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--method", "nope", "--n", "3"]).status.code(), Some(1));
    assert_eq!(run(&["gen", "--n", "0", "--m", "2"]).status.code(), Some(1));
    let small = golden("small.json");
    let o = run(&["export", "-i", small.to_str().unwrap(), "--form", "bucket"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_instance_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n":2,"m":1,"T":5,"jobs":[{"id":0,"p":1,"r":0}]}"#).unwrap();
    assert_eq!(run(&["solve", "-i", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn missing_file_exits_three() {
    let o = run(&["solve", "-i", "/nonexistent/instance.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn brute_force_refuses_large_instances() {
    let o = run(&["solve", "--method", "brute", "--n", "12", "--m", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_instance_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("i.json");
    let o = run(&["gen", "--n", "5", "--m", "2", "--seed", "7", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(read(&out), read(&golden("gen_n5_m2_s7.json")));
    assert_eq!(stdout(&o).trim().len(), 64);
}

#[test]
fn lp_exports_match_golden() {
    let small = golden("small.json");
    let s = small.to_str().unwrap();
    let time = run(&["export", "-i", s, "--form", "time"]);
    assert!(time.status.success());
    assert_eq!(stdout(&time), read(&golden("small_time.lp")));
    let bucket = run(&["export", "-i", s, "--form", "bucket", "--delta", "2", "--kappa", "1"]);
    assert!(bucket.status.success());
    assert_eq!(stdout(&bucket), read(&golden("small_bucket.lp")));
}

#[test]
fn exact_schedule_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let small = golden("small.json");
    let o = run(&["solve", "-i", small.to_str().unwrap(), "--method", "exact", "--schedule", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(read(&csv), read(&golden("small_exact.csv")));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["metrics"]["cmax"], 5.0);
    assert_eq!(report["proved_optimal"], true);
}

#[test]
fn solve_reports_are_deterministic() {
    for method in ["spt", "ga", "bucket", "exact"] {
        let args = ["solve", "--method", method, "--n", "8", "--m", "3", "--seed", "11", "--oracle"];
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{method}");
        assert_eq!(a.stdout, b.stdout, "{method}");
        let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        assert!(report.get("elapsed_s").is_none());
        assert_eq!(report["feasible"], true);
    }
}

#[test]
fn timings_are_opt_in() {
    let o = run(&["solve", "--method", "spt", "--n", "4", "--m", "2", "--timings"]);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report["elapsed_s"].is_number());
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("BUCKETSCHED_OUT_DIR", dir.path())
        .args(["solve", "--method", "spt", "--n", "4", "--m", "2", "-o", "r.json", "--gantt", "g.svg"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("r.json").exists());
    let svg = read(&dir.path().join("g.svg"));
    assert_eq!(svg.matches("<rect class=\"job\"").count(), 4);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[gen]\np_min = 5.0\np_max = 6.0\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "gen", "--n", "6", "--m", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let inst: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for job in inst["jobs"].as_array().unwrap() {
        let p = job["p"].as_f64().unwrap();
        assert!((5.0..=6.0).contains(&p));
    }

    std::fs::write(&cfg, "[gen]\nbogus = 1\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "gen"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bench_resumes_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["bench", "--suite", "delta", "--seeds", "2", "--n", "5", "--m", "2", "--out-dir", d];
    assert!(run(&args).status.success());
    let first = read(&dir.path().join("delta.csv"));
    assert!(first.starts_with("seed,delta,buckets,vars,cmax,gap_pct,utilization,proved,delta_opt,time_s,status\n"));
    assert!(dir.path().join("rows/delta/seed0.json").exists());

    // A tampered cached unit with a matching digest is reused verbatim.
    let unit = dir.path().join("rows/delta/seed1.json");
    let mut v: serde_json::Value = serde_json::from_str(&read(&unit)).unwrap();
    v["data"]["rows"][0]["buckets"] = serde_json::json!(999);
    std::fs::write(&unit, serde_json::to_string(&v).unwrap()).unwrap();
    assert!(run(&args).status.success());
    let second = read(&dir.path().join("delta.csv"));
    assert!(second.contains(",999,"));
    assert_ne!(first, second);
}

#[test]
fn bench_scale_writes_fixed_header() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = run(&["bench", "--suite", "scale", "--seeds", "2", "--tiers", "6x2", "--out-dir", d]);
    assert!(o.status.success());
    let csv = read(&dir.path().join("scale.csv"));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,m,runs,mean_gap_pct,gap_runs,mean_utilization,mean_log10_speedup,success_rate,time_s,errors"
    );
    assert!(lines.next().unwrap().starts_with("6,2,2,"));
}
