use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

fn gdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdet"))
        .args(args)
        .env("GDET_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn value(out: &Output) -> BigInt {
    json(out)["value"].as_str().unwrap().parse().unwrap()
}

#[test]
fn measure_examples() {
    let out = gdet(&["measure", "dihedral:5", "1,1;1"]);
    assert!(out.status.success());
    assert_eq!(value(&out), BigInt::from(3));
    assert_eq!(value(&gdet(&["measure", "cyclic:4", "2"])), BigInt::from(16));
    assert_eq!(value(&gdet(&["measure", "dihedral:3", "0,1,1;1,1,1"])), BigInt::from(-5));
}

#[test]
fn term_form_matches_block_form() {
    let blocks = gdet(&["measure", "dihedral:4", "1,0,2;0,-1"]);
    let terms = gdet(&["measure", "dihedral:4", "1:1,2:x^2,-1:x^-1*y"]);
    assert_eq!(value(&blocks), value(&terms));
}

#[test]
fn zero_measure_has_null_log() {
    let out = gdet(&["measure", "cyclic:2", "1,1"]);
    let v = json(&out);
    assert_eq!(v["value"], "0");
    assert!(v["log_measure"].is_null());
}

#[test]
fn abelian_and_table_groups() {
    let out = gdet(&["measure", "abelian:2x2", "1,1,1,0"]);
    assert_eq!(value(&out), BigInt::from(-3));

    let dir = std::env::temp_dir().join(format!("gdet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z3.json");
    std::fs::write(&path, r#"{"order":3,"identity":0,"table":[[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let p = path.to_str().unwrap();
    let from_table = gdet(&["measure", &format!("table:@{p}"), "1,1"]);
    assert_eq!(value(&from_table), BigInt::from(2));
    assert_eq!(value(&gdet(&["det", p, "1,1"])), BigInt::from(2));
}

#[test]
fn input_errors_exit_two() {
    for args in [
        &["measure", "cyclic:4", "1,2,3,4,5"][..],
        &["measure", "cyclic:4", "1,a"],
        &["measure", "quaternion:2", "1"],
        &["measure", "cyclic:3", "1;1"],
        &["measure", "table:@/nonexistent/table.json", "1"],
        &["lambda", "12x"],
        &["cyclores", "--n", "6", "--m", "3"],
        &["witness", "d2p2", "--p", "11"],
    ] {
        let out = gdet(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn lambda_certificates() {
    for (n, want) in [("6", 5), ("2310", 13), ("2^1*3^1*5^1*7^1*11^1*13^1", 16)] {
        let out = gdet(&["lambda", n]);
        assert_eq!(out.status.code(), Some(0), "{n}");
        let v = json(&out);
        assert_eq!(v["lambda"], want, "{n}");
        assert_eq!(v["status"], "exact");
        let achieved: BigInt = v["achieved"].as_str().unwrap().parse().unwrap();
        assert_eq!(achieved.magnitude(), &num_bigint::BigUint::from(want as u32));
    }
}

#[test]
fn bounded_certificate_exits_three() {
    let n = "2^2*3^2*5*7*11*13*17*19*23*29*31*37*41*43*47*53*59*61*67*71*73*79*83*89*97*101*103*107*109*113";
    let out = gdet(&["lambda", n]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["status"], "bounded");
    assert!(v["lambda"].is_null());
}

#[test]
fn witness_d4p_delta() {
    let out = gdet(&["witness", "d4p", "--p", "3", "--variant", "delta", "--k", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["claimed"], "-27");
    assert_eq!(v["verified"], true);
}

#[test]
fn witness_families_verify() {
    for args in [
        &["witness", "odd", "--m", "7", "--n", "10"][..],
        &["witness", "two-power", "--n", "12"],
        &["witness", "prime-power", "--p", "3", "--n", "18"],
        &["witness", "d2pk", "--p", "3", "--k", "1", "--l", "2"],
        &["witness", "d2powk", "--k", "3", "--variant", "d8", "--c", "0", "--negative"],
        &["witness", "d2p2", "--p", "5"],
    ] {
        let v = json(&gdet(args));
        assert_eq!(v["verified"], true, "{args:?}");
    }
}

#[test]
fn cyclotomic_commands() {
    let out = gdet(&["cyclo", "--m", "12"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1,0,-1,0,1");
    let out = gdet(&["cyclores", "--n", "1", "--m", "9"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "3");
}

#[test]
fn scan_csv_rows_remeasure() {
    let out = gdet(&["scan", "dihedral:4", "--window", "-2..2", "--max-abs", "300"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["value", "a", "b"]);
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let v: BigInt = rec[0].parse().unwrap();
        assert!(v.magnitude() <= &num_bigint::BigUint::from(300u32));
        let poly = format!("{};{}", rec[1].replace(' ', ","), rec[2].replace(' ', ","));
        assert_eq!(value(&gdet(&["measure", "dihedral:4", &poly])), v);
        rows += 1;
    }
    assert!(rows > 10);
}

#[test]
fn scan_overflow_exits_three() {
    let out = gdet(&["scan", "dihedral:8", "--window", "-2..2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scan_json_is_thread_independent() {
    let run = |t: &str| {
        Command::new(env!("CARGO_BIN_EXE_gdet"))
            .args(["scan", "dihedral:3", "--window", "-1..1", "--emit", "json"])
            .env("GDET_THREADS", t)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn verify_suites() {
    let out = gdet(&["verify", "cyclo"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("PASS"));
    assert_eq!(gdet(&["verify", "nope"]).status.code(), Some(2));
}
