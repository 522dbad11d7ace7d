use std::f64::consts::PI;
use std::fs;
use std::process::Command;

use mlf::commands::{classify_with_retries, CONTOUR_RETRIES};
use mlf_core::zeros::Rect;
use mlf_core::{Complex64, Params};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mlf").chain(args.iter().copied());
    let code = mlf::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn eval_examples() {
    let v = json(&["eval", "--alpha", "1", "--beta", "1", "--re", "1", "--im", "0"]);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "eval");
    assert!((num(&v["rows"][0]["re"]) - std::f64::consts::E).abs() < 1e-15 * std::f64::consts::E);

    let v = json(&["eval", "--alpha", "2", "--beta", "3", "--re", "4", "--im", "0"]);
    let want = (2f64.cosh() - 1.0) / 4.0;
    assert!((num(&v["rows"][0]["re"]) - want).abs() < 2e-16 * 4.0);

    // extended-precision series
    let v = json(&["eval", "--alpha", "0.6", "--beta", "0.8", "--re", "1.3", "--im", "0"]);
    let want = 8.499622993183191946226073941062939981719;
    assert!((num(&v["rows"][0]["re"]) - want).abs() < 1e-14 * want);
    assert_eq!(v["rows"][0]["method"], "series");
}

#[test]
fn eval_round_trip_is_exact() {
    for &(a, b, re, im) in &[(0.6, 0.8, 1.3, 0.0), (1.5, -0.7, -40.0, 13.0), (2.5, 2.0, 3.0e3, -1.0e3), (0.3, 1.1, 0.01, 0.02)] {
        let args = ["eval", "--alpha", &a.to_string(), "--beta", &b.to_string(), "--re", &re.to_string(), "--im", &im.to_string()];
        let v = json(&args);
        let r = mlf_core::eval(&Params::new(a, b).unwrap(), Complex64::new(re, im), 1e-15).unwrap();
        let row = &v["rows"][0];
        assert_eq!(num(&row["re"]).to_bits(), r.value.re.to_bits());
        assert_eq!(num(&row["im"]).to_bits(), r.value.im.to_bits());
        assert_eq!(num(&row["abs_err_est"]).to_bits(), r.abs_err_est.to_bits());
        assert_eq!(row["method"], r.method.as_str());
    }
}

#[test]
fn csv_output() {
    let (code, out, _) = run(&["eval", "--alpha", "2", "--beta", "2", "--re", "-9", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["re", "im", "abs_err_est", "method"]);
    let rec = rd.records().next().unwrap().unwrap();
    let want = 3f64.sin() / 3.0;
    assert!((rec[0].parse::<f64>().unwrap() - want).abs() < 1e-15);
}

#[test]
fn h_command() {
    let v = json(&["h", "--x", "2"]);
    assert!((num(&v["rows"][0]["h"]) - 4.37228).abs() < 5e-5);
    let v = json(&["h", "--x", "0,1"]);
    assert!(v["rows"][0]["h_prime"].is_null());
    assert!((num(&v["rows"][1]["h"]) - 1.0).abs() < 1e-10);
    assert!((num(&v["rows"][1]["h_prime"]) - 2.0).abs() < 1e-6);
}

#[test]
fn zeros_command() {
    let v = json(&["zeros", "--alpha", "2", "--beta", "2", "--xmin", "-50"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let mut got: Vec<f64> = rows.iter().map(|r| num(&r["re"])).collect();
    got.sort_by(|a, b| b.total_cmp(a));
    for (g, n) in got.iter().zip([1.0, 2.0]) {
        assert!((g + n * n * PI * PI).abs() < 1e-8 * n * n * PI * PI);
    }

    let v = json(&["zeros", "--alpha", "2", "--beta", "4", "--xmin", "-100", "--rect", "-120,-1,-60,60", "--locate", "0.5"]);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["kind"] == "located"));
    assert_eq!(v["summary"]["rect_count"], 2);
    assert_eq!(v["summary"]["nonreal_count"], 2);
    let ims: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| num(&r["im"])).collect();
    assert!((ims[0] + ims[1]).abs() < 1e-9);
}

#[test]
fn contour_retries() {
    let p = Params::new(2.0, 2.0).unwrap();
    // right edge on the zero −π²
    let r = Rect::new(-30.0, -PI * PI, -1.0, 1.0).unwrap();
    let e = classify_with_retries(&p, &r, 64, 0).unwrap_err();
    assert_eq!(e.code, 4);
    let (rep, used, tries) = classify_with_retries(&p, &r, 64, CONTOUR_RETRIES).unwrap();
    assert!(tries >= 1);
    assert!(used.re_max > -PI * PI && used.re_min > -4.0 * PI * PI);
    assert_eq!(rep.rect_count, 1);
    assert_eq!(rep.nonreal_count, 0);
}

#[test]
fn cm_command() {
    let v = json(&["cm", "--alpha", "1.5", "--beta", "1.2", "--target", "reciprocal"]);
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5 * 13);
    let v = json(&["cm", "--alpha", "2", "--beta", "4", "--target", "reciprocal", "--points", "1", "--order", "16"]);
    assert_eq!(v["summary"]["pass"], false);
    assert_eq!(v["summary"]["first_failure_point"], 1.0);
    let v = json(&["cm", "--alpha", "1", "--beta", "1", "--target", "e-of-minus-x"]);
    assert_eq!(v["summary"]["pass"], true);
    assert!(v["summary"]["first_failure_order"].is_null());
}

#[test]
fn check_command() {
    let v = json(&["check", "--alpha", "0.5", "--beta", "1", "--ineq", "LE", "--points", "41"]);
    assert_eq!(v["summary"]["violations"], 0);
    assert_eq!(v["summary"]["points"], 41 * 41);
    let v = json(&["check", "--alpha", "1.5", "--beta", "1", "--ineq", "LE", "--grid", "25,35,0.2,1", "--points", "11,5"]);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["bound"] == "upper" && num(&r["margin"]) > num(&r["budget"])));
    // lattice order: row by row in Im, Re increasing within a row
    let keys: Vec<(f64, f64)> = rows.iter().map(|r| (num(&r["im"]), num(&r["re"]))).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    let v = json(&["check", "--alpha", "2", "--beta", "2", "--ineq", "two-sided", "--grid", "-30,30,-30,30", "--points", "40"]);
    assert_eq!(v["summary"]["violations"], 0);
    let (code, _, _) = run(&["check", "--alpha", "0.5", "--beta", "1", "--ineq", "two-sided"]);
    assert_eq!(code, 2);
}

#[test]
fn parallel_check_matches_sequential() {
    let p = Params::new(1.5, 3.0).unwrap();
    let g = mlf_core::inequal::GridSpec::new((-30.0, -20.0), (-0.5, 0.5), 21, 17).unwrap();
    let seq = mlf_core::inequal::check_ge(&p, &g, 1e-14).unwrap();
    let par = mlf::commands::parallel_check(&p, mlf_core::inequal::Inequality::Ge, &g, 1e-14).unwrap();
    assert!(!seq.is_empty());
    assert_eq!(seq, par);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--alpha", "0", "--beta", "1", "--re", "1"]).0, 2);
    assert_eq!(run(&["eval", "--alpha", "-1", "--beta", "1", "--re", "1"]).0, 2);
    assert_eq!(run(&["eval", "--alpha", "1", "--beta", "1"]).0, 2);
    assert_eq!(run(&["eval", "--alpha", "1", "--beta", "1", "--re", "1", "--tol", "0"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["figure", "--which", "3", "--out", "x"]).0, 2);
    assert_eq!(run(&["zeros", "--alpha", "2", "--beta", "2", "--rect", "1,2,3"]).0, 2);
    assert_eq!(run(&["cm", "--alpha", "1", "--beta", "1", "--target", "reciprocal", "--order", "25"]).0, 2);
    let (code, _, err) = run(&["eval", "--alpha", "1", "--beta", "1", "--re", "1000"]);
    assert_eq!(code, 3, "{err}");
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("MLF_THREADS"));
}

#[test]
fn binary_and_thread_cap() {
    let bin = env!("CARGO_BIN_EXE_mlf");
    let out = Command::new(bin).args(["eval", "--alpha", "1", "--beta", "1", "--re", "1"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], "1");

    let args = ["check", "--alpha", "1", "--beta", "0.5", "--ineq", "GE", "--grid", "-30,30,-30,30", "--points", "30", "--format", "csv"];
    let one = Command::new(bin).env("MLF_THREADS", "1").args(args).output().unwrap();
    let four = Command::new(bin).env("MLF_THREADS", "4").args(args).output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let bad = Command::new(bin).env("MLF_THREADS", "zero").args(args).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let bad = Command::new(bin).args(["eval", "--alpha", "0", "--beta", "1", "--re", "1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
}

#[test]
fn figures_are_deterministic_and_complete() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for which in ["1", "2"] {
        for d in [&d1, &d2] {
            let v = json(&["figure", "--which", which, "--resolution", "50", "--out", d.path().to_str().unwrap()]);
            assert_eq!(v["summary"]["cells"], 2500);
        }
        for ext in ["svg", "csv"] {
            let name = format!("figure{which}.{ext}");
            let a = fs::read(d1.path().join(&name)).unwrap();
            let b = fs::read(d2.path().join(&name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }
    let names: Vec<String> = fs::read_dir(d1.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(names.len(), 4, "{names:?}");
    assert!(names.iter().all(|n| !n.starts_with('.')));

    let mut rd = csv::Reader::from_path(d1.path().join("figure2.csv")).unwrap();
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["alpha", "beta", "ineq_label", "additivity_label", "h_of_alpha"]);
    assert_eq!(rd.records().count(), 2500);

    let svg = fs::read_to_string(d1.path().join("figure2.svg")).unwrap();
    assert!(svg.contains(r#"version="1.1""#));
    assert!(svg.contains(r#"<g id="GE_holds" class="proved""#));
    assert!(svg.contains(r#"<g id="GE_conjectured" class="conjectured""#));
    assert!(svg.contains(r#"<g id="neither_conjectured" class="conjectured""#));
    assert!(svg.contains(r#"<g id="h_curve""#));
    let svg = fs::read_to_string(d1.path().join("figure1.svg")).unwrap();
    for id in ["super", "sub", "neither"] {
        assert!(svg.contains(&format!(r#"<g id="{id}" class="proved""#)));
    }
    assert!(!svg.contains("conjectured"));
}

#[test]
fn failed_figure_leaves_nothing() {
    let d = tempfile::tempdir().unwrap();
    // the output "directory" is an existing file
    let f = d.path().join("occupied");
    fs::write(&f, b"x").unwrap();
    let (code, _, _) = run(&["figure", "--which", "1", "--resolution", "50", "--out", f.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(fs::read_dir(d.path()).unwrap().count(), 1);
}
