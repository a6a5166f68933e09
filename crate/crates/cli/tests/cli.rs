use std::process::{Command, Output};

use lorenz_core::lorenz_map::LorenzMap;
use lorenz_core::numerics::Scalar;
use lorenz_core::periods::minimal_period;
use serde_json::Value;

fn lorenz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lorenz")).args(args).output().expect("binary runs")
}

fn lorenz_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lorenz"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const SYM: [&str; 3] = ["--family", "symmetric", "--a"];

fn analyze_sym(a: &str) -> Output {
    lorenz(&["analyze", SYM[0], SYM[1], SYM[2], a])
}

#[test]
fn analyze_six_fifths() {
    let out = analyze_sym("6/5");
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["period"]["kappa"], 2);
    assert_eq!(r["minimal_orbit"]["p_left"]["x"], "3/11");
    assert_eq!(r["tower"]["length"], 1);
    assert_eq!(r["trichotomy"], "periodic-minimal-renorm");
    assert_eq!(r["omega"]["omega_parts"][0]["points"], serde_json::json!(["3/11", "8/11"]));
    assert_eq!(r["omega"]["attractor"]["components"].as_array().unwrap().len(), 3);
    assert_eq!(r["tower"]["levels"][0]["inner_slopes"], serde_json::json!(["36/25", "36/25"]));
    assert_eq!(r["config"]["precision_bits"], 4096);
}

#[test]
fn analyze_three_halves_is_prime_up_to_bound() {
    let r = json(&analyze_sym("3/2"));
    assert_eq!(r["tower"]["length"], 0);
    assert_eq!(r["trichotomy"], "prime-up-to-bound");
    assert!(r["omega"]["omega_parts"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_beta_map() {
    let out = lorenz(&["analyze", "--family", "beta", "--beta", "6/5", "--alpha", "1/10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["period"]["kappa"], 5);
    assert_eq!(r["period"]["backward_chain"][3], "193/864");
}

#[test]
fn analyze_map_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/cantor.toml");
    let out = lorenz(&["analyze", "--map-file", path]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["trichotomy"], "cantor-minimal-renorm");
    assert_eq!(r["tower"]["levels"][0]["ell"], 2);
    assert_eq!(r["tower"]["levels"][0]["r"], 3);
    assert_eq!(r["tower"]["levels"][0]["periodic"], false);
    assert_eq!(r["depth_tags"][0]["kind"], "cantor");
    assert_eq!(r["omega"]["omega_parts"][0]["kind"], "cantor");
}

#[test]
fn invalid_maps_exit_with_two() {
    let out = lorenz(&["analyze", "--family", "beta", "--beta", "19/10", "--alpha", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["status"], "invalid_map");
    assert_eq!(r["validation"]["violations"][0]["kind"], "image_out_of_range");

    let out = lorenz(&["analyze", "--family", "symmetric"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "invalid_map");

    let out = analyze_sym("9/10");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn undecidable_validation_exits_with_three() {
    let out = lorenz(&["analyze", "--family", "symmetric", "--a", "sqrt(2)", "--precision-bits", "128"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "precision_exhausted");
}

#[test]
fn level_cap_exits_with_four_and_a_partial_report() {
    let out = lorenz(&["analyze", "--family", "symmetric", "--a", "11/10", "--level-cap", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let r = json(&out);
    assert_eq!(r["status"], "cap_exceeded");
    assert_eq!(r["tower"]["length"], 1);
    assert_eq!(r["tower"]["terminal"]["kind"], "level_cap_reached");
}

#[test]
fn flags_override_environment() {
    let args = ["analyze", "--family", "symmetric", "--a", "6/5"];
    let r = json(&lorenz_env(&args, &[("LORENZ_L_MAX", "8")]));
    assert_eq!(r["config"]["l_max"], 8);
    let with_flag: Vec<&str> = args.iter().copied().chain(["--l-max", "12"]).collect();
    let r = json(&lorenz_env(&with_flag, &[("LORENZ_L_MAX", "8")]));
    assert_eq!(r["config"]["l_max"], 12);
    let r = json(&lorenz_env(&["analyze"], &[("LORENZ_FAMILY", "symmetric"), ("LORENZ_A", "11/10")]));
    assert_eq!(r["tower"]["length"], 2);
}

#[test]
fn classify_points() {
    for (a, x, class) in [("6/5", "1/4", "E_1"), ("6/5", "9/20", "I"), ("6/5", "23/25", "I"), ("3/2", "1/3", "I")] {
        let out = lorenz(&["classify", "--family", "symmetric", "--a", a, "--x", x]);
        assert_eq!(out.status.code(), Some(0));
        let r = json(&out);
        assert_eq!(r["class"], class, "a={a} x={x}");
    }
    let r = json(&lorenz(&["classify", "--family", "symmetric", "--a", "6/5", "--x", "9/20"]));
    assert_eq!(r["witness"]["lo"], "2/5");
    assert_eq!(r["witness"]["hi"], "3/5");
    let out = lorenz(&["classify", "--family", "symmetric", "--a", "6/5", "--x", "3/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn symmetric_sweep_bands() {
    let out = lorenz(&["sweep", "--family", "symmetric", "--from", "105/100", "--to", "199/100", "--step", "1/100"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["parameter", "kappa", "tower_length", "periodic_flags", "trichotomy", "terminal", "status"]);
    assert_eq!(rows.len(), 96);
    let mut changes = Vec::new();
    for w in rows[1..].windows(2) {
        if w[0][2] != w[1][2] {
            changes.push((w[1][0].clone(), w[1][2].clone()));
        }
    }
    assert_eq!(rows[1][2], "3");
    assert_eq!(
        changes,
        [("11/10".to_string(), "2".to_string()), ("119/100".into(), "1".into()), ("71/50".into(), "0".into())]
    );
    assert!(rows[1..].iter().all(|r| r[6] == "ok" && r[1] == "2"));
}

#[test]
fn single_point_sweep_matches_analyze_row() {
    let sweep = lorenz(&["sweep", "--family", "symmetric", "--from", "6/5", "--to", "6/5", "--steps", "1"]);
    let analyze = lorenz(&["analyze", "--family", "symmetric", "--a", "6/5", "--format", "csv"]);
    assert_eq!(sweep.stdout, analyze.stdout);
}

#[test]
fn beta_sweep_matches_the_period_oracle() {
    let out =
        lorenz(&["sweep", "--family", "beta", "--alpha", "1/10", "--from", "11/10", "--to", "19/10", "--step", "1/10"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 10);
    for row in &rows[1..] {
        let beta: Scalar = row[0].parse().unwrap();
        let map = LorenzMap::beta(beta, Scalar::ratio(1, 10)).unwrap();
        let kappa = minimal_period(&map, 10_000).unwrap().kappa.unwrap();
        assert_eq!(row[1], kappa.to_string(), "beta={}", row[0]);
        assert!(!row[3].contains('C'));
    }
}

#[test]
fn sweep_rows_report_invalid_parameters() {
    let out =
        lorenz(&["sweep", "--family", "beta", "--alpha", "1/2", "--from", "3/2", "--to", "19/10", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[1][6], "ok");
    assert_eq!(rows[3][6], "invalid_map");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "sweep",
        "--family",
        "symmetric",
        "--from",
        "105/100",
        "--to",
        "125/100",
        "--step",
        "1/100",
        "--format",
        "json",
    ];
    assert_eq!(lorenz(&args).stdout, lorenz(&args).stdout);
    assert_eq!(analyze_sym("107/100").stdout, analyze_sym("107/100").stdout);
}
