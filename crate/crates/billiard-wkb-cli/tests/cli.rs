use std::process::{Command, Output};

use billiard_wkb::io::{parse_spectrum_json, read_field_binary};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_billiard-wkb"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["field", "circle", "--r", "1"]).status.code(), Some(1));
    assert_eq!(
        run(&["validate", "--suite", "nonsense"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["spectrum", "rectangle", "--a", "-1", "--b", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn validation_suite_passes() {
    let o = run(&["validate", "--suite", "circle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 5);
}

#[test]
fn spectrum_csv_is_byte_identical_across_runs() {
    let args = ["spectrum", "circle", "--m-max", "2", "--r-max", "4"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&args).stdout);
    assert!(stdout(&a).starts_with("m,r,alpha,E0,E1,E,degenerate\n"));
}

#[test]
fn json_spectrum_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let p = path.to_str().unwrap();
    let o = run(&[
        "spectrum",
        "rectangle",
        "--a",
        "1",
        "--b",
        "1.5",
        "--n-max",
        "3",
        "--m-max",
        "3",
        "--format",
        "json",
        "--out",
        p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let levels = parse_spectrum_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(levels.len(), 9);
}

#[test]
fn billiard_file_supplies_the_sides() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("b.json");
    std::fs::write(&spec, r#"{"kind": "rectangle", "a": 2, "b": 1}"#).unwrap();
    let from_file = run(&[
        "spectrum",
        "rectangle",
        "--billiard",
        spec.to_str().unwrap(),
        "--n-max",
        "2",
        "--m-max",
        "2",
    ]);
    let from_flags = run(&[
        "spectrum",
        "rectangle",
        "--a",
        "2",
        "--b",
        "1",
        "--n-max",
        "2",
        "--m-max",
        "2",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn binary_field_comes_with_a_csv_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.bin");
    let o = run(&[
        "field",
        "circle",
        "--m",
        "-2",
        "--r",
        "1",
        "--grid",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let (spec, values) = read_field_binary(&mut std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!((spec.nx, spec.ny), (11, 11));
    let csv = std::fs::read_to_string(path.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + values.len());
    for (line, v) in csv.lines().skip(1).zip(&values) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!((cols[2], cols[3]), (v.re, v.im));
    }
}

#[test]
fn oracle_and_scar_commands_run() {
    let z = run(&["oracle", "bessel-zeros", "--m", "0", "--r-max", "2"]);
    assert!(stdout(&z).starts_with("m,r,zero\n0,1,2.40482555"));
    let s = run(&["scar", "--lambda-p", "5", "--samples", "10"]);
    assert_eq!(
        s.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&s.stderr)
    );
    assert!(stdout(&s).lines().count() >= 9);
}
