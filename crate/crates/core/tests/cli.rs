use std::process::{Command, Output};

use hf_correlations::sweep::CSV_HEADER;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hf-correlations"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn point_prints_header_and_one_row() {
    let o = run(&["point", "--r", "1.25", "--b", "0", "--kt", "0.2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER);
    let fields: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields.len(), 11);
    assert!((fields[4] - 0.68086).abs() < 1e-3);
    assert!((fields[5] - 0.52877).abs() < 1e-3);
}

#[test]
fn point_accepts_negative_field_and_gibbs_mode() {
    let o = run(&[
        "point",
        "--r",
        "1.25",
        "--b",
        "-0.5",
        "--kt",
        "0.2",
        "--mode",
        "gibbs",
        "--convention",
        "eq3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn death_radius_and_critical_kt() {
    let o = run(&["death-radius", "--kt", "0.2", "--b", "0"]);
    assert!(o.status.success());
    let r: f64 = stdout(&o).trim().parse().unwrap();
    assert!((r - 2.924).abs() < 0.01);

    let o = run(&["critical-kt", "--b", "0"]);
    assert!(o.status.success());
    let kt: f64 = stdout(&o).trim().parse().unwrap();
    assert!((kt - 0.6794).abs() < 1e-3);

    let o = run(&["critical-kt", "--b", "0", "--mode", "gibbs"]);
    let kt: f64 = stdout(&o).trim().parse().unwrap();
    assert!((kt - 0.4286).abs() < 1e-3);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["point", "--r", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["point", "--r", "1", "--b", "0", "--kt", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["death-radius", "--kt", "0.7", "--b", "0"])
            .status
            .code(),
        Some(3)
    );
    let o = run(&[
        "sweep",
        "--kt",
        "0.2",
        "--b",
        "0",
        "--r-min",
        "0",
        "--r-max",
        "1",
        "--r-steps",
        "3",
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&[
        "sweep",
        "--kt",
        "0.2",
        "--b",
        "0",
        "--r-min",
        "2",
        "--r-max",
        "1",
        "--r-steps",
        "3",
        "--out",
        "/tmp/never-written.csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_expected_rows_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, workers) in ["1", "4"].iter().enumerate() {
        let path = dir.path().join(format!("run{i}.csv"));
        let o = bin()
            .env("HF_CORRELATIONS_WORKERS", workers)
            .args([
                "sweep",
                "--kt",
                "0.4,0.2",
                "--b",
                "0,1",
                "--r-min",
                "0",
                "--r-max",
                "3",
                "--r-steps",
                "7",
                "--grid-theta",
                "31",
            ])
            .arg("--out")
            .arg(&path)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7 * 2 * 2 + 1);
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines[1].starts_with("0,0,0.2,"));
    assert!(lines.last().unwrap().starts_with("3,1,0.4,"));
}

#[test]
fn bad_worker_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("HF_CORRELATIONS_WORKERS", "zero")
        .args([
            "sweep",
            "--kt",
            "0.2",
            "--b",
            "0",
            "--r-min",
            "0",
            "--r-max",
            "1",
            "--r-steps",
            "2",
        ])
        .arg("--out")
        .arg(dir.path().join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
