//! End-to-end checks of the command-line surfaces.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levelset"))
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary should run");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn hecke_degree_and_listing() {
    let out = run_ok(bin().args(["hecke", "--n", "2", "--m", "12"]));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "28"); // sigma_1(12)

    let out = run_ok(bin().args(["hecke", "--n", "2", "--m", "4", "--list"]));
    let rows: Vec<String> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(str::to_string)
        .collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.contains(&"1,0,0,4".to_string()));
    assert!(rows.contains(&"2,1,0,2".to_string()));
    assert!(rows.contains(&"4,0,0,1".to_string()));
}

#[test]
fn enumerate_to_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let window = write(dir.path(), "w.txt", &"-1.5 1.5\n".repeat(4));
    let out_path = dir.path().join("points.csv");
    let cache = dir.path().join("cache");

    run_ok(bin().args([
        "enumerate",
        "--family",
        "det",
        "--n",
        "2",
        "--m",
        "1",
        "--window",
        window.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--cache-dir",
        cache.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# family=det(n=2) m=1 window-hash="));
    assert!(header.contains("version=1"));
    assert_eq!(lines.clone().count(), 20);
    assert!(lines.all(|l| l.split(',').count() == 4));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);

    // Warm pass produces identical bytes.
    let out2 = dir.path().join("points2.csv");
    run_ok(bin().args([
        "enumerate",
        "--family",
        "det",
        "--n",
        "2",
        "--m",
        "1",
        "--window",
        window.to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
        "--cache-dir",
        cache.to_str().unwrap(),
    ]));
    assert_eq!(
        std::fs::read(&out_path).unwrap(),
        std::fs::read(out2).unwrap()
    );

    // Brute force agrees on stdout.
    let out = run_ok(bin().args([
        "enumerate",
        "--family",
        "det",
        "--n",
        "2",
        "--m",
        "1",
        "--window",
        window.to_str().unwrap(),
        "--brute-force",
    ]));
    let body: Vec<&str> = std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .collect();
    let expect: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(body, expect);
}

#[test]
fn quad_family_flags() {
    let dir = tempfile::tempdir().unwrap();
    let window = write(dir.path(), "w.txt", &"-2.5 2.5\n".repeat(4));
    let qfile = write(dir.path(), "q.txt", "1 1 1\n2 2 1\n3 3 -1\n4 4 -1\n");
    let via_file = run_ok(bin().args([
        "enumerate",
        "--family",
        "quad",
        "--signature",
        "2,2",
        "--qcoeffs",
        qfile.to_str().unwrap(),
        "--m",
        "4",
        "--window",
        window.to_str().unwrap(),
    ]));
    let via_diag = run_ok(bin().args([
        "enumerate",
        "--family",
        "quad",
        "--signature",
        "2,2",
        "--qdiag",
        "1,1,-1,-1",
        "--m",
        "4",
        "--window",
        window.to_str().unwrap(),
    ]));
    assert_eq!(via_file.stdout, via_diag.stdout);

    // Signature mismatch is rejected.
    let out = bin()
        .args([
            "enumerate",
            "--family",
            "quad",
            "--signature",
            "3,1",
            "--qdiag",
            "1,1,-1,-1",
            "--m",
            "4",
            "--window",
            window.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn measure_prints_one_csv_row() {
    let dir = tempfile::tempdir().unwrap();
    let window = write(dir.path(), "w.txt", &"-1.5 1.5\n".repeat(4));
    let out = run_ok(bin().args([
        "measure",
        "--family",
        "det",
        "--n",
        "2",
        "--window",
        window.to_str().unwrap(),
        "--epsilon",
        "0.02",
        "--samples",
        "50000",
        "--seed",
        "7",
    ]));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.trim().lines().collect();
    assert_eq!(rows.len(), 1);
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields.len(), 3);
    let value: f64 = fields[0].parse().unwrap();
    let hits: u64 = fields[2].parse().unwrap();
    assert!(value > 0.0 && hits > 0);

    // Same seed → identical row.
    let again = run_ok(bin().args([
        "measure",
        "--family",
        "det",
        "--n",
        "2",
        "--window",
        window.to_str().unwrap(),
        "--epsilon",
        "0.02",
        "--samples",
        "50000",
        "--seed",
        "7",
    ]));
    assert_eq!(text, String::from_utf8(again.stdout).unwrap());
}

#[test]
fn orbits_prints_chain_count_rows() {
    let dir = tempfile::tempdir().unwrap();
    let window = write(dir.path(), "w.txt", &"-2.5 2.5\n".repeat(4));
    let out = run_ok(bin().args([
        "orbits",
        "--family",
        "det",
        "--n",
        "2",
        "--m",
        "4",
        "--window",
        window.to_str().unwrap(),
    ]));
    let text = String::from_utf8(out.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
    assert!(data[0].starts_with("1|4;"));
    assert!(data[1].starts_with("2|2;"));
    let total: u64 = data
        .iter()
        .map(|l| l.split(';').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert!(total > 0);
}

#[test]
fn fundamental_lists_discriminants() {
    let out = run_ok(bin().args(["fundamental", "--max", "30"]));
    let got: Vec<u64> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(got, vec![1, 5, 8, 12, 13, 17, 21, 24, 28, 29]);
}

#[test]
fn report_writes_outputs_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w.txt", &"-1.5 1.5\n".repeat(4));
    write(
        dir.path(),
        "exp.cfg",
        "experiment = omega\nfamily = det\nn = 2\nwindow = w.txt\n\
         levels = 1,2,3,4\nsamples = 10000\nseed = 3\n",
    );
    let out_path = dir.path().join("out").join("report.json");
    run_ok(bin().args([
        "report",
        "--config",
        dir.path().join("exp.cfg").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["experiment"], "omega");
    assert_eq!(report["omega"]["rows"][3]["hecke_degree"], 7);
    assert!(dir.path().join("out").join("omega.csv").exists());
    assert!(dir.path().join("out").join("timings.csv").exists());

    // A level that blows the budget must flip the exit code to 1 and
    // still leave a partial report.
    write(
        dir.path(),
        "bad.cfg",
        "experiment = omega\nfamily = det\nn = 2\nwindow = w.txt\n\
         levels = 1,2,600\nsamples = 10000\nseed = 3\nenum_budget = 50000\n",
    );
    let out2 = dir.path().join("out2").join("report.json");
    let status = bin()
        .args([
            "report",
            "--config",
            dir.path().join("bad.cfg").to_str().unwrap(),
            "--out",
            out2.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out2).unwrap()).unwrap();
    assert_eq!(report["errors"][0]["m"], 600);
    assert_eq!(report["omega"]["rows"].as_array().unwrap().len(), 2);
}
