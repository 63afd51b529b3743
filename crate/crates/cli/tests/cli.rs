use std::path::{Path, PathBuf};
use std::process::Command;

use num_bigint::BigUint;
use serde_json::Value;
use symdyn::spectra::{CountKind, CountTable};
use symdyn_cli::{emit_growth_csv, run_args};

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../presentations")
        .join(name)
        .display()
        .to_string()
}

fn results(args: &[&str]) -> Value {
    let report = run_args(std::iter::once("symdyn").chain(args.iter().copied()))
        .unwrap_or_else(|e| panic!("{args:?}: {e}"));
    serde_json::to_value(&report).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

fn exit_status(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_symdyn"))
        .args(args)
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

#[test]
fn entropy_of_golden_mean_encloses_log_phi() {
    let r = results(&["entropy", &corpus("golden_mean.json"), "--tol", "1e-6"]);
    let e = &r["results"]["enclosure"];
    let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!(e["lo"].as_f64().unwrap() <= log_phi && log_phi <= e["hi"].as_f64().unwrap());
    assert!(e["width"].as_f64().unwrap() <= 1e-6);
    assert!((log_phi - 0.481212).abs() < 1e-6);
}

#[test]
fn mixing_report_labels_horizons() {
    let r = results(&[
        "mixing",
        &corpus("even_shift.json"),
        "--alpha",
        "0",
        "--horizon",
        "9",
    ]);
    assert_eq!(r["results"]["verdict"], "mixing");
    assert_eq!(r["results"]["gcd"], 1);
    let w = r["warnings"].as_array().unwrap();
    let bounded = w.iter().find(|w| w["code"] == "horizon-bounded").unwrap();
    assert!(bounded["message"]
        .as_str()
        .unwrap()
        .contains("horizon-bounded generator list"));
    assert_eq!(bounded["horizon"], 9);
    assert!(w
        .iter()
        .all(|w| w.get("horizon").is_some() || w["code"] == "reducible"));
}

#[test]
fn zeta_of_golden_mean() {
    let r = results(&["zeta", &corpus("golden_mean.json"), "--order", "6"]);
    assert_eq!(
        strings(&r["results"]["coefficients"]),
        ["1", "1", "2", "3", "5", "8", "13"]
    );
}

#[test]
fn zeta_tower_matches_brute_force() {
    let r = results(&[
        "zeta",
        &corpus("even_shift.json"),
        "--order",
        "8",
        "--tower",
        &corpus("even_tower_f1.json"),
        &corpus("even_tower_f2.json"),
    ]);
    assert_eq!(r["results"]["tower"]["matches"], true);
}

#[test]
fn dyck_reports() {
    let r = results(&[
        "dyck-count",
        &corpus("dyck.json"),
        "--n",
        "3",
        "--mode",
        "enumerate",
    ]);
    assert_eq!(strings(&r["results"]["block_counts"])[..2], ["4", "14"]);
    assert_eq!(strings(&r["results"]["c_counts"])[0], "2");
    let r = results(&[
        "dyck-entropy",
        &corpus("dyck_no_nested_pair.json"),
        "--n",
        "10",
        "--window",
        "5",
    ]);
    assert_eq!(r["results"]["b3_flag"], true);
    assert!(r["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w["code"] == "b3-discrepancy"));
}

#[test]
fn every_command_runs_on_the_corpus() {
    let cases: &[&[&str]] = &[
        &["analyze", "even_shift.json"],
        &["analyze", "loop_fibonacci.json"],
        &["hsyn", "golden_mean.json", "--alpha", "0"],
        &["period", "cycle3.json", "--alpha", "a"],
        &["fischer", "even_shift.json"],
        &["sync-words", "even_shift.json"],
        &["loop-zeta", "loop_fibonacci.json", "--order", "5"],
        &["recurrence", "even_tower_f1.json"],
        &["svgl", "full_shift.json"],
        &["gap", "even_shift.json", "--extend-len", "2"],
        &["mixing", "generators_0_110.json"],
    ];
    for case in cases {
        let path = corpus(case[1]);
        let mut args = vec![case[0], path.as_str()];
        args.extend_from_slice(&case[2..]);
        let r = results(&args);
        assert_eq!(r["command"], case[0]);
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["symdyn", "analyze", &corpus("even_shift.json")];
    let a = run_args(args).unwrap().to_json();
    let b = run_args(args).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn exit_codes_follow_the_error_class() {
    assert_eq!(exit_status(&["entropy", &corpus("golden_mean.json")]), 0);
    assert_eq!(
        exit_status(&["entropy", "/nonexistent/presentation.json"]),
        1
    );
    assert_eq!(exit_status(&["no-such-command"]), 1);
    assert_eq!(exit_status(&["zeta", &corpus("dyck.json")]), 2);
    assert_eq!(
        exit_status(&["entropy", &corpus("golden_mean.json"), "--tol", "1e-30"]),
        3
    );
    // p_1 = 0, p_2 = 1 cannot come from a shift space
    assert_eq!(
        exit_status(&["zeta", &corpus("golden_mean.json"), "--periodic", "0,1"]),
        4
    );
    assert_eq!(
        exit_status(&["zeta", &corpus("golden_mean.json"), "--periodic", "1,3,4,7"]),
        0
    );
    assert_eq!(
        exit_status(&["dyck-count", &corpus("dyck.json"), "--n", "30"]),
        3
    );
}

#[test]
fn growth_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path: PathBuf = dir.path().join("golden.csv");
    let r = results(&[
        "entropy",
        &corpus("golden_mean.json"),
        "--n",
        "12",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert!(r["results"]["enclosure"].is_object());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,count,log_count,ratio_to_previous");
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("1,2,"));
    assert!(lines[1].ends_with(','));
    assert!(text.ends_with('\n'));
    let ratio: f64 = lines[12].rsplit(',').next().unwrap().parse().unwrap();
    assert!((ratio - 377.0 / 233.0).abs() < 1e-12);

    let dyck_path = dir.path().join("dyck.csv");
    results(&[
        "dyck-count",
        &corpus("dyck_no_pair.json"),
        "--n",
        "8",
        "--csv",
        dyck_path.to_str().unwrap(),
    ]);
    let dyck_text = std::fs::read_to_string(&dyck_path).unwrap();
    assert_eq!(dyck_text.lines().next().unwrap(), lines[0]);
    assert_eq!(dyck_text.lines().count(), 9);

    let empty = dir.path().join("empty.csv");
    assert!(emit_growth_csv(
        &CountTable::new(CountKind::Block, Vec::<BigUint>::new()),
        &empty
    )
    .is_err());
    assert!(!empty.exists());
}
