use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tverberg(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tverberg"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SQUARE: &str = r#"{"d": 2, "r": 2, "points": [["0","0"],["2","0"],["2","2"],["0","2"]], "colors": [0,1,2,3]}"#;
const MOMENT6: &str = r#"{"d": 2, "r": 3, "points": [[1,1],[2,4],[3,9],[4,16],[5,25],[6,36]], "colors": [0,1,2,3,4,5]}"#;

#[test]
fn gen_is_deterministic_and_writes_file() {
    let dir = TempDir::new().unwrap();
    for name in ["a.json", "b.json"] {
        let out = tverberg(&["gen", "--d", "2", "--r", "3", "--profile", "special", "--seed", "9", "-o", name], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());
    let to_stdout = tverberg(&["gen", "--d", "2", "--r", "3", "--profile", "special", "--seed", "9"], dir.path());
    assert_eq!(to_stdout.stdout, a);
}

#[test]
fn gen_rejects_unknown_profile() {
    let dir = TempDir::new().unwrap();
    let out = tverberg(&["gen", "--d", "2", "--r", "3", "--profile", "rainbow", "-o", "x.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn solve_then_verify_square() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.json"), SQUARE).unwrap();
    let out = tverberg(&["solve", "sq.json", "-o", "w.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let witness = fs::read_to_string(dir.path().join("w.json")).unwrap();
    assert!(witness.contains("\"1\""), "{witness}");
    let out = tverberg(&["verify", "sq.json", "w.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "valid");
}

#[test]
fn tampered_witness_is_invalid() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.json"), SQUARE).unwrap();
    tverberg(&["solve", "sq.json", "-o", "w.json"], dir.path());
    let witness = fs::read_to_string(dir.path().join("w.json")).unwrap();
    let tampered = witness.replacen("\"1/2\"", "\"500000001/1000000000\"", 1);
    assert_ne!(tampered, witness);
    fs::write(dir.path().join("t.json"), tampered).unwrap();
    let out = tverberg(&["verify", "sq.json", "t.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn no_witness_exits_one_and_writes_nothing() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("m.json"), MOMENT6).unwrap();
    let out = tverberg(&["solve", "m.json", "-o", "w.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("w.json").exists());
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("float.json"), SQUARE.replace("\"2\",\"0\"", "2.5,0")).unwrap();
    let out = tverberg(&["solve", "float.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("points[1][0]"), "{}", stderr(&out));
    let out = tverberg(&["solve", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("sq.json"), SQUARE).unwrap();
    let out = tverberg(&["verify", "sq.json", "sq.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_all_lists_every_radon_partition() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.json"), SQUARE).unwrap();
    let out = tverberg(&["solve-all", "sq.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let list: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(list.as_array().unwrap().len(), 1);
}

#[test]
fn lift_solve_pullback_verify_chain() {
    let dir = TempDir::new().unwrap();
    let run = |args: &[&str]| {
        let out = tverberg(args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
        out
    };
    run(&["gen", "--d", "1", "--r", "3", "--profile", "singletons", "--seed", "4", "-o", "i.json"]);
    let lift = run(&["lift", "i.json", "-o", "l.json"]);
    assert!(stderr(&lift).contains("3 layer(s)"), "{}", stderr(&lift));
    run(&["solve", "l.json", "-o", "lw.json"]);
    let pb = run(&["pullback", "i.json", "lw.json", "-o", "w.json"]);
    assert_eq!(stderr(&pb).matches("untouched faces").count(), 3);
    run(&["verify", "i.json", "w.json"]);
}

#[test]
fn roundtrip_reports_verdict() {
    let dir = TempDir::new().unwrap();
    tverberg(&["gen", "--d", "1", "--r", "3", "--profile", "singletons", "--seed", "1", "-o", "i.json"], dir.path());
    let out = tverberg(&["roundtrip", "i.json", "-o", "w.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout(&out);
    assert!(report.contains("verdict: VERIFIED"), "{report}");
    assert!(report.contains("layers peeled: 3"), "{report}");
    assert!(dir.path().join("w.json").exists());

    let bad = r#"{"d":1,"r":3,"points":[["0"],["1"],["2"],["3"]],"colors":[0,0,0,1]}"#;
    fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = tverberg(&["roundtrip", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds"));
}

#[test]
fn plot_writes_svg_and_refuses_d1() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("sq.json"), SQUARE).unwrap();
    tverberg(&["solve", "sq.json", "-o", "w.json"], dir.path());
    let out = tverberg(&["plot", "sq.json", "w.json", "-o", "sq.svg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let svg = fs::read_to_string(dir.path().join("sq.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("common-point"));

    tverberg(&["gen", "--d", "1", "--r", "2", "--profile", "special", "-o", "line.json"], dir.path());
    let out = tverberg(&["plot", "line.json", "-o", "line.svg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("line.svg").exists());
}

#[test]
fn selftest_passes() {
    let dir = TempDir::new().unwrap();
    let out = tverberg(&["selftest"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}
