use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rigepi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigepi")).args(args).output().unwrap()
}

fn rigepi_out(args: &[&str], out: &Path) -> Output {
    let mut all = args.to_vec();
    let out = out.to_str().unwrap();
    all.extend(["--out", out]);
    rigepi(&all)
}

#[test]
fn theory_at_full_transmission() {
    let o = rigepi(&["theory", "--c", "0.5", "--mu", "4", "--p", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["beta", "gamma", "p", "mu", "c", "R0", "rho", "pi", "K", "residual", "iterations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!((v["R0"].as_f64().unwrap() - 4.0).abs() < 1e-10);
    assert!((v["pi"].as_f64().unwrap() - 0.5967009727881162).abs() < 1e-9);
}

#[test]
fn sweep_writes_three_series() {
    let dir = tempfile::tempdir().unwrap();
    let o = rigepi_out(&["sweep", "--mu", "4", "--p", "0.2,0.3,0.5"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("c,p,mu,beta,gamma,R0,pi,K,near_critical"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 150);
    for p in ["0.2", "0.3", "0.5"] {
        assert_eq!(rows.iter().filter(|r| r[1] == p).count(), 50);
    }
    let first: f64 = rows[100][5].parse().unwrap();
    assert!((first - 2.0).abs() < 0.05, "R0 at c=0.001, p=0.5: {first}");
    assert!(dir.path().join("thresholds.csv").exists());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn simulate_without_transmission() {
    let dir = tempfile::tempdir().unwrap();
    let o = rigepi_out(
        &["simulate", "--c", "0.5", "--mu", "4", "--p", "0", "--n", "1000", "--trials", "10"],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("1")));
}

#[test]
fn exit_codes_and_reasons() {
    let o = rigepi(&["theory", "--c", "0.5", "--beta", "0.25", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rigepi(&["theory", "--c", "0.5", "--mu=-4", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("rigepi: error kind=domain:"), "{err}");
    let o = rigepi(&["theory", "--c", "0.999", "--mu", "4", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kind=capacity"));
}

#[test]
fn replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = rigepi_out(
        &["census", "--beta", "0.25", "--gamma", "4", "--p", "0.5", "--n", "400,800", "--replicates", "3", "--seed", "9"],
        &a,
    );
    assert!(o.status.success());
    let manifest = a.join("manifest.json");
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["command"], "census");
    assert_eq!(m["master_seed"], 9);
    let o = rigepi_out(&["replay", "--manifest", manifest.to_str().unwrap()], &b);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["census.csv", "census_means.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
    }
    let header = fs::read_to_string(a.join("census.csv")).unwrap();
    assert!(header.starts_with("n,beta,gamma,p,replicate,k4,k4prime\n"));
}

#[test]
fn generate_then_stats_on_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    assert!(rigepi_out(&["generate", "--beta", "0.25", "--gamma", "4", "--n", "2000", "--seed", "3"], &g)
        .status
        .success());
    let s = dir.path().join("s");
    let edges = g.join("edges.txt");
    let o = rigepi_out(
        &["stats", "--edges", edges.to_str().unwrap(), "--beta", "0.25", "--gamma", "4"],
        &s,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(s.join("stats.json")).unwrap()).unwrap();
    assert_eq!(v["n"], 2000);
    assert!((v["transitivity"].as_f64().unwrap() - 0.5).abs() < 0.1);
    // Same graph sampled directly gives the same histogram.
    let s2 = dir.path().join("s2");
    assert!(rigepi_out(&["stats", "--beta", "0.25", "--gamma", "4", "--n", "2000", "--seed", "3"], &s2)
        .status
        .success());
    assert_eq!(
        fs::read(s.join("degree_histogram.csv")).unwrap(),
        fs::read(s2.join("degree_histogram.csv")).unwrap()
    );
}
