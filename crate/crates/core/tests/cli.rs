use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use padic_balls::balls::{enumerate_balls, Ball};
use padic_balls::padic::SessionParams;
use padic_balls::quotient::{class_function, is_coadjoint_stable, QuotientContext};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-balls")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("padic-balls-{}-{name}", std::process::id()))
}

#[test]
fn census_gl1() {
    let out = bin(&["census", "--size", "1", "--level", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_out(&out);
    let tags: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["nilpotency"].as_str().unwrap()).collect();
    assert_eq!(tags, ["nilpotent", "non-nilpotent", "non-nilpotent"]);
}

#[test]
fn census_gl2_round_trips() {
    let out = bin(&["census", "--p", "3", "--size", "2", "--level", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_out(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 161);
    assert_eq!(rows.iter().map(|r| r["rank"].as_u64().unwrap()).sum::<u64>(), 6561);
    let sp = SessionParams::new(3, 2, 1, 2).unwrap();
    let parsed: Vec<Ball> = rows.iter().map(|r| Ball::from_json(&sp, r).unwrap()).collect();
    assert_eq!(parsed, enumerate_balls(&sp, 2));
}

#[test]
fn census_level_zero_is_the_base_ball() {
    let rows = json_out(&bin(&["census", "--level", "0"]));
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["r_exp"], 0);
}

#[test]
fn spectrum_of_idempotent_and_delta() {
    let one = json_out(&bin(&["spectrum", "--size", "1", "--level", "1", "--input", &data("idempotent_gl1_p3_m1.json")]));
    assert_eq!(one.as_array().unwrap().len(), 1);
    assert_eq!(one[0]["center"]["mat"][0][0], 1);
    let all = json_out(&bin(&["spectrum", "--input", &data("delta_gl2_p3_m2.json")]));
    assert_eq!(all.as_array().unwrap().len(), 161);
}

#[test]
fn spectrum_of_class_function_is_coadjoint_stable() {
    let sp = SessionParams::new(3, 2, 1, 2).unwrap();
    let ctx = QuotientContext::new(sp).unwrap();
    let xi = class_function(&ctx, &[(5, 1), (300, -2), (4001, 3)]).unwrap();
    let path = scratch("class.json");
    std::fs::write(&path, serde_json::to_string(&xi.to_json(&ctx).unwrap()).unwrap()).unwrap();
    let out = bin(&["spectrum", "--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let set: Vec<Ball> = json_out(&out).as_array().unwrap().iter().map(|r| Ball::from_json(&sp, r).unwrap()).collect();
    assert!(!set.is_empty());
    let gs: Vec<usize> = (0..ctx.size()).step_by(97).collect();
    assert!(is_coadjoint_stable(&ctx, &set, &gs).unwrap());
}

#[test]
fn bad_inputs_exit_65() {
    let broken = bin(&["spectrum", "--input", &data("broken.json")]);
    assert_eq!(broken.status.code(), Some(65));
    let mismatch = bin(&["spectrum", "--p", "5", "--size", "1", "--level", "1", "--input", &data("idempotent_gl1_p3_m1.json")]);
    assert_eq!(mismatch.status.code(), Some(65));
    let missing = bin(&["spectrum", "--input", &data("absent.json")]);
    assert_eq!(missing.status.code(), Some(65));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(bin(&["verify", "--p", "2", "--size", "1", "--depth", "1"]).status.code(), Some(64));
    assert_eq!(bin(&["verify", "--p", "4"]).status.code(), Some(64));
    assert_eq!(bin(&["verify", "--suite", "nope"]).status.code(), Some(64));
    assert_eq!(bin(&["verify", "--samples", "adjoint"]).status.code(), Some(64));
    assert_eq!(bin(&["verify", "--frobnicate"]).status.code(), Some(64));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_report_schema() {
    let path = scratch("report.json");
    let out = bin(&["verify", "--size", "1", "--level", "2", "--seed", "3", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(report["config"]["seed"], 3);
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 9);
    for s in suites {
        assert!(s["checks"].as_u64().unwrap() > 0, "{}", s["name"]);
        assert_eq!(s["failures"], Value::Array(vec![]));
        assert!(s["runtime_ms"].is_null());
    }
}
