use std::fs;

use phip_grover::cli::{run, EXIT_CONFIG, EXIT_OK, EXIT_PARSE, EXIT_USAGE, EXIT_VERIFY};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("phip-grover").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn parse_records_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("seq.pp");
    fs::write(&file, "# echo\n[1/(4J)] 90-x 90y  180x\nacquire\n").unwrap();
    let (code, out, _) = invoke(&["parse", file.to_str().unwrap(), "--format", "records"]);
    assert_eq!(code, EXIT_OK);
    let expected = "\
index,element,duration_s
1,[1/(4J)],0.0520833333333
2,90-x,0.00000000000
3,90y,0.00000000000
4,180x,0.00000000000
5,acquire,0.00000000000
total,,0.0520833333333
";
    assert_eq!(out, expected);
    let (_, again, _) = invoke(&["parse", file.to_str().unwrap(), "--format", "records"]);
    assert_eq!(out, again);
}

#[test]
fn parse_error_is_positioned() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.pp");
    fs::write(&file, "90x 90q").unwrap();
    let (code, _, err) = invoke(&["parse", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("token 2 `90q`"), "{err}");
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = invoke(&["verify"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 5);

    let (code, out, _) = invoke(&["verify", "--flip-h"]);
    assert_eq!(code, EXIT_VERIFY);
    assert!(out.lines().any(|l| l.starts_with("FAIL P_00")), "{out}");

    let (code, out, _) = invoke(&["verify", "--isotropic"]);
    assert_eq!(code, EXIT_VERIFY);
    assert!(out.contains("degradation"), "{out}");
}

#[test]
fn run_all_writes_panels() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = invoke(&["run", "all", "--out", dir.path().to_str().unwrap(), "--format", "records"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out.lines().count(), 6);
    let manifest = fs::read_to_string(dir.path().join("manifest.csv")).unwrap();
    for f in ["00", "01", "10", "11"] {
        assert!(manifest.contains(&format!("grover_{f},grover_{f}.csv,{f},{f}")), "{manifest}");
    }
    let spectrum = fs::read_to_string(dir.path().join("grover_01.csv")).unwrap();
    assert_eq!(
        spectrum,
        "qubit,partner,frequency_hz,amplitude\n\
         1,0,-82.4000000000,0.250000000000\n\
         1,1,-77.6000000000,0.250000000000\n\
         2,0,77.6000000000,-0.250000000000\n\
         2,1,82.4000000000,-0.250000000000\n"
    );
    let report: toml::Table = fs::read_to_string(dir.path().join("report.toml")).unwrap().parse().unwrap();
    assert_eq!(report["run"].as_array().unwrap().len(), 5);
}

#[test]
fn epsilon_above_one() {
    let (code, _, err) = invoke(&["run", "00", "--epsilon", "1.06"]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("positive semidefinite"), "{err}");
    let (code, out, _) = invoke(&["run", "00", "--epsilon", "1.06", "--clamp-epsilon", "--format", "records"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("grover_00,00,00"), "{out}");
}

#[test]
fn config_overrides_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sys.toml");
    fs::write(&file, "delta_hz = 200\nj_hz = 5\n").unwrap();
    let (code, out, _) = invoke(&["run", "11", "--system", file.to_str().unwrap(), "--set", "j_hz=6", "--format", "records"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("grover_11,11,11"), "{out}");

    let (code, _, _) = invoke(&["run", "11", "--set", "bogus=1"]);
    assert_eq!(code, EXIT_CONFIG);
    fs::write(&file, "delta_hz = -3\n").unwrap();
    let (code, _, _) = invoke(&["verify", "--system", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn trajectory_is_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.jsonl");
    let (code, _, _) = invoke(&["run", "10", "--trajectory", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() > 20);
    assert_eq!(lines[0]["state"].as_array().unwrap().len(), 16);
}

#[test]
fn library_and_gates() {
    let (code, out, _) = invoke(&["library", "P_01"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "[1/(4J)] 180x [1/(4J)] [1/(2d)] 180x");
    let (code, out, _) = invoke(&["gates", "grover", "10"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("U_f(10)"));
    let (code, _, _) = invoke(&["library", "nope"]);
    assert_ne!(code, EXIT_OK);
    let (code, _, _) = invoke(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}
