use std::fs;
use std::path::Path;
use std::process::Command;

use scldpc::code::CodeRealization;
use scldpc::sim::{jsonl_path, read_csv, CSV_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scldpc"))
}

const TINY: &str = "\
[code]
lifting = 64
coupling_len = 14

[channel]
snr_db = 8, 30

[decoders]
row = fbd
row = vn 12 target

[run]
trials = 3
seed = 5
";

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("tiny.ini");
    fs::write(&path, TINY).unwrap();
    path
}

#[test]
fn table_matches_and_exits_zero() {
    let out = bin().arg("table").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains("194460") && text.contains("189900"));
}

#[test]
fn codegen_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let dump = dir.path().join("code.txt");
    let status = bin()
        .args(["codegen", "--seed", "3", "--out"])
        .arg(&dump)
        .arg("--config")
        .arg(&cfg)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&dump).unwrap();
    assert!(text.starts_with("2 1 4 3 64 14\n"));
    let code = CodeRealization::from_dump(&text).unwrap();
    assert!(!code.has_four_cycle());
    assert_eq!(code.to_dump(), text);
}

#[test]
fn simulate_writes_csv_and_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = dir.path().join("res/r.csv");
    let status = bin()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .args([
            "--snr",
            "30",
            "--trials",
            "2",
            "--seed",
            "9",
            "--workers",
            "2",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let rows = read_csv(&out).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| r.trials == 2 && r.seed == 9 && r.snr_db == 30.0 && r.bler == 0.0));
    assert_eq!(
        fs::read_to_string(jsonl_path(&out))
            .unwrap()
            .lines()
            .count(),
        2
    );
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let run = |name: &str| {
        let out = dir.path().join(name);
        assert!(bin()
            .args(["simulate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap()
            .status
            .success());
        fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn bad_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ini");
    fs::write(&bad, "[code]\nlifting = 64\ncolour = blue\n").unwrap();
    let out = bin()
        .args(["simulate", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let missing = bin()
        .args(["simulate", "--config"])
        .arg(dir.path().join("none.ini"))
        .output()
        .unwrap()
        .status;
    assert!(!missing.success());
    assert!(!bin().arg("frobnicate").output().unwrap().status.success());
}
