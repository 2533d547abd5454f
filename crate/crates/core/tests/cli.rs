//! End-to-end checks of the finchar binary: worked values, report shape,
//! determinism, and the exit-code contract.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_finchar"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
        out.status.code().expect("no signal"),
    )
}

fn run_json(args: &[&str]) -> (serde_json::Value, i32) {
    let (stdout, stderr, code) = run(args);
    let value = serde_json::from_str(&stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}) with stderr {stderr:?}: {stdout}"));
    (value, code)
}

#[test]
fn eval_thoma_example() {
    let (v, code) = run_json(&["eval", "--theta", "beta=1/2,1/2", "--g", "(0 1)"]);
    assert_eq!(code, 0);
    assert_eq!(v["route"], "thoma");
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["value_float"], 0.5);
}

#[test]
fn eval_identity_is_one_for_any_parameters() {
    for args in [
        vec!["eval", "--g", "()", "--alpha", "1/2,1/3"],
        vec!["eval", "--g", "()", "--beta", "1/4", "--gamma", "1/4,1/4"],
        vec!["eval", "--g", "()", "--alpha", "1/2,1/2", "--sigma", "10"],
        vec!["eval", "--g", "()", "--alpha", "2/3", "--A", "1"],
    ] {
        let (v, code) = run_json(&args);
        assert_eq!(code, 0, "args {args:?}");
        assert_eq!(v["value"], "1", "args {args:?}");
    }
}

#[test]
fn eval_subgroup_average_example() {
    let (v, code) = run_json(&[
        "eval", "--alpha", "1/2,1/2", "--A", "11", "--g", "(0 1)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["route"], "chi_nu");
    assert_eq!(v["value"], "0");
}

#[test]
fn duality_worked_example() {
    let (v, code) = run_json(&[
        "duality", "--alpha", "1/2,1/2", "--A", "11", "--g", "(0 1)(2 3)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["lhs"], "1/4");
    assert_eq!(v["rhs"], "1/4");
    assert_eq!(v["equal"], true);
}

#[test]
fn duality_full_subgroup_gives_untwisted_character() {
    let (v, code) = run_json(&[
        "duality", "--alpha", "1/2,1/3", "--A", "full", "--g", "(0 1 2)",
    ]);
    assert_eq!(code, 0);
    // Σ α_i^3 = 1/8 + 1/27.
    assert_eq!(v["lhs"], "35/216");
    assert_eq!(v["equal"], true);
}

#[test]
fn duality_fuzz_reports_zero_failures() {
    let (v, code) = run_json(&["duality", "--fuzz", "25", "--seed", "11"]);
    assert_eq!(code, 0);
    assert_eq!(v["runs"], 25);
    assert_eq!(v["failures"], 0);
}

#[test]
fn mc_reports_are_byte_identical_for_fixed_seed() {
    let args = [
        "mc", "--alpha", "1/2,1/3", "--A", "11", "--g", "(0 1)(2 3)",
        "--trials", "20000", "--seed", "42",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first, second);
    assert_eq!(first.2, 0);

    // And independent of the worker count.
    let mut threaded: Vec<&str> = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(run(&threaded).0, first.0);
}

#[test]
fn mc_attaches_exact_value_and_consistency() {
    let (v, code) = run_json(&[
        "mc", "--alpha", "1/2,1/3", "--A", "11", "--g", "(0 1)(2 3)",
        "--trials", "20000", "--seed", "9",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["exact"], "169/1296");
    assert_eq!(v["consistent"], true);
    assert_eq!(v["trials"], 20000);
    assert_eq!(v["seed"], 9);
}

#[test]
fn mc_integral_route_runs() {
    let (v, code) = run_json(&[
        "mc", "--alpha", "1/2,1/2", "--A", "11", "--g", "(0 1)(2 3)",
        "--route", "integral", "--samples", "10000", "--seed", "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["route"], "integral");
    assert_eq!(v["exact"], "1/4");
    assert_eq!(v["consistent"], true);
}

#[test]
fn converge_emits_exact_csv() {
    let (stdout, _, code) = run(&[
        "converge", "--alpha", "1/2,1/2", "--A", "full", "--g", "(0 1)",
        "--n-schedule", "10,100",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "n,ratio,ratio_float,limit,abs_error,abs_error_float");
    assert!(lines[1].starts_with("10,4/9,"), "row {}", lines[1]);
    assert!(lines[1].contains(",1/2,1/18,"), "row {}", lines[1]);
    assert!(lines[2].starts_with("100,49/99,"), "row {}", lines[2]);
    assert!(lines[2].contains(",1/2,1/198,"), "row {}", lines[2]);
}

#[test]
fn brute_grid_all_equal() {
    let (v, code) = run_json(&["brute", "--n", "5", "--reps", "6", "--seed", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_equal"], true);
    assert_eq!(v["cases"], 6);
}

#[test]
fn fuzz_all_suites_pass() {
    let (v, code) = run_json(&["fuzz", "--reps", "8", "--seed", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["by_suite"]["duality"]["runs"], 8);
    assert_eq!(v["by_suite"]["mixture"]["failures"], 0);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = std::env::temp_dir().join("finchar-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("cfg.json");
    std::fs::write(
        &path,
        r#"{"alpha":"1/2,1/3","A":"11","g":"(0 1)(2 3)","seed":9,"trials":5000}"#,
    )
    .expect("write config");
    let path = path.to_str().expect("utf-8 path");

    let (v, code) = run_json(&["mc", "--config", path]);
    assert_eq!(code, 0);
    assert_eq!(v["trials"], 5000);

    let (v, code) = run_json(&["mc", "--config", path, "--trials", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(v["trials"], 1000);
}

#[test]
fn exit_code_2_on_invalid_config() {
    let (_, stderr, code) = run(&["eval", "--alpha", "1/0", "--g", "(0 1)"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("bad rational"), "stderr {stderr:?}");

    let (_, _, code) = run(&["eval", "--alpha", "1/2,1/2", "--A", "101", "--g", "(0 1)"]);
    assert_eq!(code, 2);

    let (_, _, code) = run(&["mc", "--alpha", "1/2", "--A", "1", "--g", "(0 1)"]);
    assert_eq!(code, 2); // sampling without --seed

    let (_, _, code) = run(&["eval", "--g", "(0 1)"]);
    assert_eq!(code, 2); // no parameters at all
}

#[test]
fn exit_code_3_on_resource_cap() {
    let g = "(0 1)(2 3)(4 5)(6 7)(8 9)(10 11)(12 13)(14 15)(16 17)(18 19)(20 21)(22 23)(24 25)";
    let (_, stderr, code) = run(&["eval", "--alpha", "1/2,1/2", "--A", "11", "--g", g]);
    assert_eq!(code, 3);
    assert!(stderr.contains("cap"), "stderr {stderr:?}");
}

#[test]
fn exit_code_4_when_a_configured_check_fails() {
    // With delta = 1 the forbidden band (1, n) contains the two genuine
    // classes of size ≈ n/2, so the dichotomy check must report violations
    // and exit 4. This proves violations are counted, not swallowed.
    let (stdout, stderr, code) = run(&[
        "paintbox", "--alpha", "1/2,1/2", "--n", "10", "--reps", "20",
        "--seed", "1", "--delta", "1",
    ]);
    assert_eq!(code, 4, "stderr {stderr:?}");
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("report precedes failure");
    assert!(v["violations"].as_u64().expect("count") > 0);
}

#[test]
fn paintbox_dichotomy_holds_at_default_delta() {
    let (v, code) = run_json(&[
        "paintbox", "--alpha", "1/2,1/2", "--n", "500", "--reps", "20", "--seed", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["violations"], 0);
}
