//! End-to-end tests of the binary: wire formats, determinism, and the
//! documented error behavior.

use std::process::{Command, Output};

fn bcsmeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcsmeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

const REFERENCE: &[&str] = &["--epsilon", "0.25", "--beta-ratio", "2"];

#[test]
fn gap_solve_emits_parseable_json_with_the_solved_gap() {
    let out = bcsmeta(&[&["gap-solve"], REFERENCE, &["--format", "json"]].concat());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["superconducting"], serde_json::Value::Bool(true));
    assert!(v["lambda"].as_f64().unwrap() > 0.4);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    assert!((v["beta_critical"].as_f64().unwrap() - 2.1972245773362196).abs() < 1e-15);
    // keys are lower_snake_case
    for key in v.as_object().unwrap().keys() {
        assert!(key.chars().all(|c| c.is_ascii_lowercase() || c == '_'));
    }
}

#[test]
fn gap_solve_csv_has_a_stable_header() {
    let out = bcsmeta(&[&["gap-solve"], REFERENCE].concat());
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "epsilon,beta,beta_ratio,beta_critical,lambda,k,superconducting,residual,c,d,\
         invariant_exit_time"
    );
    assert_eq!(lines.count(), 1);
}

#[test]
fn runs_are_deterministic() {
    let args: Vec<&str> = [
        &["evolve"],
        REFERENCE,
        &["--seed", "11", "--t-count", "20", "--format", "json"],
    ]
    .concat();
    let first = bcsmeta(&args);
    let second = bcsmeta(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sigma_z_scenario_places_the_extremum_at_the_exit_time() {
    let out = bcsmeta(
        &[
            &["evolve"],
            REFERENCE,
            &[
                "--observable",
                "sigma-z",
                "--t-count",
                "400",
                "--t-scale",
                "linear",
                "--t-min",
                "0",
                "--t-max",
                "1.0",
                "--format",
                "json",
            ],
        ]
        .concat(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["classification"], "metastable");
    let t_star = v["report"]["exit_time"].as_f64().unwrap();

    let trajectory = v["trajectory"].as_array().unwrap();
    assert_eq!(trajectory.len(), 400);
    let f0 = trajectory[0]["closed_form"].as_f64().unwrap();
    let (mut arg, mut best) = (0.0f64, -1.0f64);
    let mut worst_diff = 0.0f64;
    for point in trajectory {
        let t = point["t"].as_f64().unwrap();
        let f = point["closed_form"].as_f64().unwrap();
        worst_diff = worst_diff.max(point["abs_diff"].as_f64().unwrap());
        if (f - f0).abs() > best {
            best = (f - f0).abs();
            arg = t;
        }
    }
    let step = 1.0 / 399.0;
    assert!(
        (arg - t_star).abs() <= step,
        "extremum at {arg}, exit time {t_star}"
    );
    assert!(worst_diff < 1e-10, "oracle deviates by {worst_diff:e}");

    // EEB audit attached at t*/2, t*, 2t*: asymmetric verdicts
    let eeb = v["report"]["eeb"].as_array().unwrap();
    assert_eq!(eeb.len(), 3);
    for row in eeb {
        assert_eq!(row["creation_satisfied"], true);
        assert_eq!(row["annihilation_satisfied"], false);
        assert!(row["witness_modulus"].as_f64().unwrap() > 1e-6);
    }
}

#[test]
fn x_quadrature_scenario_is_monotone_and_matches_the_oracle() {
    let out = bcsmeta(
        &[
            &["evolve"],
            REFERENCE,
            &["--observable", "x-quad", "--t-count", "50"],
        ]
        .concat(),
    );
    assert!(out.status.success());
    let table = stdout(&out);
    let mut lines = table.lines();
    assert_eq!(lines.next().unwrap(), "t,closed_form,oracle,abs_diff");
    let mut previous = f64::NEG_INFINITY;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 4);
        let value: f64 = cells[1].parse().unwrap();
        let diff: f64 = cells[3].parse().unwrap();
        assert!(value >= previous, "x-quadrature must rise monotonically");
        assert!(diff < 1e-10);
        previous = value;
    }
    // the report rides on stderr in CSV mode
    let report: serde_json::Value =
        serde_json::from_str(stderr(&out).lines().last().unwrap()).unwrap();
    assert_eq!(report["classification"], "monotone");
    assert!(report.get("exit_time").is_none());
}

#[test]
fn aligned_phases_give_a_constant_scenario_without_an_exit_time() {
    let out = bcsmeta(&[
        "classify",
        "--epsilon",
        "0.25",
        "--beta-ratio",
        "2",
        "--phi",
        "0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classification"], "constant");
    assert!(
        v.get("exit_time").is_none(),
        "constant scenarios carry no exit time"
    );
    assert!(v.get("eeb").is_none());
}

#[test]
fn exit_time_agrees_with_the_invariant_value_for_sigma_z() {
    let out = bcsmeta(
        &[
            &["exit-time"],
            REFERENCE,
            &["--observable", "sigma-z", "--format", "json"],
        ]
        .concat(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let own = v["exit_time"].as_f64().unwrap();
    let shared = v["gap"]["invariant_exit_time"].as_f64().unwrap();
    assert!((own - shared).abs() < 1e-12);
}

#[test]
fn stability_csv_rows_carry_the_audit_asymmetry() {
    let out = bcsmeta(&[&["stability"], REFERENCE].concat());
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "header plus three audit times");
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[1], "true", "quadratures");
        assert_eq!(cells[3], "true", "constants of motion");
        assert_eq!(cells[5], "true", "creation");
        assert_eq!(cells[7], "false", "annihilation");
        let worst: f64 = cells[8].parse().unwrap();
        assert!(worst < -1e-6);
    }
}

#[test]
fn sweep_rows_are_order_stable_and_record_failures_in_row() {
    let args = [
        "sweep",
        "--epsilon",
        "0.25,0.25,0.6",
        "--beta-ratio",
        "1.1,2",
        "--phi",
        "0.7853981633974483",
        "--format",
        "json",
    ];
    let out = bcsmeta(&args);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);

    // duplicate grid points produce identical rows
    assert_eq!(rows[0], rows[2]);
    assert_eq!(rows[1], rows[3]);

    // metastability amplitude shrinks toward the critical line
    let peak_11 = rows[0]["peak_excursion"].as_f64().unwrap();
    let peak_20 = rows[1]["peak_excursion"].as_f64().unwrap();
    assert!(peak_11 < peak_20);

    // epsilon = 0.6 cannot be expressed relative to beta_c: in-row error
    assert!(rows[4]["error"].as_str().unwrap().contains("epsilon"));
    assert!(rows[4].get("t_star").is_none());
}

#[test]
fn json_reports_round_trip_floats_exactly() {
    let args: Vec<&str> = [&["gap-solve"], REFERENCE, &["--format", "json"]].concat();
    let out = bcsmeta(&args);
    let text = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reserialized = serde_json::to_string_pretty(&v).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(v, reparsed);
    // and the solved values survive the trip bit-for-bit
    assert_eq!(v["k"].as_f64().unwrap(), 0.48626124548523453_f64);
    assert_eq!(
        v["invariant_exit_time"].as_f64().unwrap(),
        0.07341395206141102_f64
    );
}

#[test]
fn invalid_configurations_fail_with_one_line_diagnostics() {
    let cases: &[&[&str]] = &[
        &[
            "evolve",
            "--epsilon",
            "0.25",
            "--beta-ratio",
            "2",
            "--t-count",
            "1",
        ],
        &[
            "evolve",
            "--epsilon",
            "0.25",
            "--beta-ratio",
            "2",
            "--t-min",
            "5",
            "--t-max",
            "1",
        ],
        &["evolve", "--epsilon", "0.25"],
        &["gap-solve", "--epsilon=-0.1", "--beta", "2"],
        &[
            "evolve",
            "--epsilon",
            "0.25",
            "--beta",
            "2",
            "--observable",
            "bogus",
        ],
    ];
    for args in cases {
        let out = bcsmeta(args);
        assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
        let diagnostic = stderr(&out);
        assert!(!diagnostic.trim().is_empty(), "{args:?} gave no diagnostic");
    }
}

#[test]
fn out_flag_writes_the_table_to_a_file() {
    let dir = std::env::temp_dir().join("bcsmeta-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trajectory.csv");
    let path_str = path.to_str().unwrap();
    let args: Vec<&str> = [
        &["evolve"],
        REFERENCE,
        &["--t-count", "10", "--out", path_str],
    ]
    .concat();
    let out = bcsmeta(&args);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("t,closed_form,oracle,abs_diff\n"));
    assert_eq!(written.lines().count(), 11);
    std::fs::remove_file(&path).ok();
}
