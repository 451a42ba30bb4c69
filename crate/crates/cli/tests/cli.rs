use std::process::{Command, Output};

use kappa_lab::ExactQ;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa-lab"))
        .args(args)
        .env_remove("KAPPA_LAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn rational(v: &Value) -> ExactQ {
    v.as_str().expect("rationals are strings").parse().unwrap()
}

#[test]
fn compute_plain_row() {
    let o = run(&["--N", "60", "compute", "--quantity", "kappa_alt", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let fields: Vec<&str> = line.trim_end().split('\t').collect();
    assert_eq!(fields[..3], ["4", "kappa_alt", "7/24"]);
    assert!(fields[3].starts_with("0.291666"));
    assert_eq!(fields[4], "enumeration");
}

#[test]
fn compute_json_round_trips_rationals() {
    let o = run(&["--N", "60", "compute", "--quantity", "kappa_alt", "--n", "3..4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    assert_eq!(rational(&rows[0]["value"]), ExactQ::ratio(1, 3));
    assert_eq!(rational(&rows[1]["value"]), ExactQ::ratio(7, 24));
    assert_eq!(rows[1]["decimal"]["places"], 50);
}

#[test]
fn compute_partial_sums() {
    let o = run(&[
        "--N", "60", "compute", "--quantity", "q_split", "--n", "0..15", "--sum", "odd", "--format", "json",
    ]);
    assert_eq!(rational(&json(&o)[0]["value"]), ExactQ::ratio(4429844723, 3652293645));
    assert_eq!(json(&o)[0]["n"], "0..15");
    let o = run(&["--N", "60", "compute", "--quantity", "q_split", "--n", "0..15", "--sum", "even"]);
    assert!(stdout(&o).contains("630468719/521756235"));
}

#[test]
fn compute_scaled_short_cycles() {
    let o = run(&[
        "--N", "60", "compute", "--quantity", "s_below", "--k", "15", "--n", "60", "--scale", "n", "--format", "csv",
    ]);
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "n*s_below(15)");
    assert_eq!(row[3], "833175235266670978029768442202788608000");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["--N", "60", "compute", "--quantity", "kappa_sym", "--n", "61"][..],
        &["--N", "3", "compute", "--quantity", "kappa_sym", "--n", "2"],
        &["compute", "--quantity", "nope", "--n", "2"],
        &["--N", "60", "compute", "--quantity", "s_below", "--n", "5"],
        &["--N", "60", "compute", "--quantity", "kappa_sym", "--n", "5..2"],
        &["verify"],
        &["verify", "--claim", "no_such_claim"],
        &["simulate", "--quantity", "kappa_odd", "--n", "1", "--samples", "10"],
        &["simulate", "--quantity", "kappa_sym", "--n", "5", "--samples", "0"],
        &["--workers", "0", "simulate", "--quantity", "kappa_sym", "--n", "5"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn passing_claims_exit_zero() {
    let o = run(&["verify", "--claim", "q_uniform_bound", "--max-n", "300"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS q_uniform_bound"));
    let o = run(&["verify", "--claim", "s15_monotone", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)[0]["holds"], true);
}

#[test]
fn failing_claim_exits_one_and_writes_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["--N", "60", "verify", "--claim", "prop_even_upper", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cells: Vec<(u64, u64)> = report[0]["counterexamples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["n"].as_u64().unwrap(), c["k"].as_u64().unwrap()))
        .collect();
    assert_eq!(cells, [(2, 2), (3, 2), (5, 3)]);
    let first = &report[0]["counterexamples"][0];
    assert_eq!(rational(&first["lhs"]), ExactQ::one());
    assert_eq!(rational(&first["rhs"]), ExactQ::ratio(1, 4));
}

#[test]
fn verify_all_reports_every_claim() {
    let o = run(&["verify", "--all", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failing: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1) == Some("false"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(text.lines().count(), 14);
    assert_eq!(failing, ["golden_values", "prop_even_upper"]);
}

#[test]
fn simulation_is_reproducible() {
    let args = ["--seed", "42", "--workers", "3", "simulate", "--quantity", "kappa_alt", "--n", "8", "--samples", "30000"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let from_env = Command::new(env!("CARGO_BIN_EXE_kappa-lab"))
        .args(["--seed", "42", "simulate", "--quantity", "kappa_alt", "--n", "8", "--samples", "30000"])
        .env("KAPPA_LAB_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a.stdout);
    assert!(stdout(&a).contains("workers=3"));
}

#[test]
fn simulation_batches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("batches.csv");
    let o = run(&[
        "--workers", "2", "--format", "json", "simulate", "--quantity", "kappa_sym", "--n", "6", "--samples", "70000",
        "--batches", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let est = json(&o);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("worker,batch,samples,hits"));
    let (mut samples, mut hits) = (0, 0);
    for line in lines {
        let f: Vec<u64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        samples += f[2];
        hits += f[3];
    }
    assert_eq!(samples, 70000);
    assert_eq!(est["hits"], hits);
    assert_eq!(rational(&est["point"]), ExactQ::ratio(hits as i64, 70000));
}

#[test]
fn split_half_simulation() {
    let o = run(&["--workers", "2", "--format", "json", "simulate", "--split-half", "--n", "7", "--samples", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let rate = rational(&r["rate"]).to_f64();
    assert!((rate - 0.5).abs() <= 4.0 * r["std_error"].as_f64().unwrap());
}

#[test]
fn convergence_table_csv() {
    let o = run(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 60);
    assert!(lines[0].starts_with("n,parity,n2_kappa_e,n2_q,n2_kappa_alt,mid_distance"));
    assert!(lines[1].starts_with("2,even,4,0,4,"));
    assert!(lines[59].starts_with("60,even,"));
}

#[test]
fn limits_json_rows() {
    let o = run(&["--N", "60", "--format", "json", "limits", "--D", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let names: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["constant"].as_str().unwrap()).collect();
    assert_eq!(names, ["A1", "A2", "B1", "B2", "A1-2B1", "A2-2B2"]);
    for r in rows.as_array().unwrap() {
        let (lo, hi) = (rational(&r["lo"]), rational(&r["hi"]));
        assert_eq!(rational(&r["width"]), &hi - &lo);
        assert_eq!(r["D"], 40);
    }
}
