use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn lts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lts"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = lts(&all);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("single JSON document")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn leapfrog_epsilon_by_short_name() {
    let o = lts(&["epsilon", "leapfrog", "--n", "2", "--order", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("epsilon = 0.28125000000000000"), "{out}");
    assert!(out.contains("ordering = A<B"));

    let o = lts(&["epsilon", "leapfrog", "--n", "2", "--exact"]);
    assert!(stdout(&o).contains("epsilon exact = 9/32"));
}

#[test]
fn ambiguous_or_unknown_names_are_usage_errors() {
    let o = lts(&["epsilon", "leapfrog"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n3-p2-sl-m5-leapfrog"));
    assert_eq!(lts(&["show", "no-such-scheme"]).status.code(), Some(1));
    assert_eq!(lts(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        lts(&["verify", "n2-p4-sl-m7-yoshida", "--exact", "--tol", "1e-3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(lts(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_short_decimal_entry() {
    let o = lts(&["verify", "n2-p6-sl-m19-opt", "--order", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("tolerance 1e-6"), "{out}");
    assert!(out.trim_end().ends_with("PASS"));

    let v = json(&["verify", "n2-p6-sl-m19-opt", "--order", "6"]);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(v["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r.as_f64().unwrap() <= 1e-6));

    let o = lts(&["verify", "n2-p6-sl-m19-opt", "--order", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn exact_verification_of_rational_scheme() {
    let o = lts(&["verify", "n3-p2-sl-m5-leapfrog", "--exact"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("degree  2  residual 0"));
}

#[test]
fn scheme_files_round_trip_through_show() {
    let o = lts(&["show", "n2-p4-s-m9-opt", "--toml"]);
    assert!(o.status.success());
    let path = scratch("s9.toml");
    std::fs::write(&path, &o.stdout).unwrap();
    let file = path.to_str().unwrap();
    let from_file = json(&["epsilon", file]);
    let from_name = json(&["epsilon", "n2-p4-s-m9-opt"]);
    assert_eq!(
        from_file["report"]["epsilon"],
        from_name["report"]["epsilon"]
    );
    assert!(lts(&["verify", file]).status.success());
}

#[test]
fn show_prints_full_precision() {
    let v = json(&["show", "n2-p4-sl-m7-yoshida"]);
    let slots = v["slots"].as_array().unwrap();
    assert_eq!(v["m"], 7);
    assert!(slots[0]["value"].as_str().unwrap().len() > 40);
}

#[test]
fn list_filters_and_reports() {
    let v = json(&["list", "--n", "3", "--order", "6"]);
    let entries = v["entries"].as_array().unwrap();
    assert!(entries.iter().all(|e| e["n"] == 3 && e["p"] == 6));
    assert!(entries.iter().any(|e| e["key"] == "n3-p6-sl-m37-opt"));
    let text = stdout(&lts(&["list", "--n", "2", "--order", "2", "--compute"]));
    assert!(
        text.lines()
            .any(|l| l.starts_with("n2-p2-sl-m3-leapfrog") && l.contains("0.28125")),
        "{text}"
    );
}

#[test]
fn groebner_reports_free_parameter() {
    let out = stdout(&lts(&[
        "groebner", "--n", "2", "--family", "S", "--m", "9", "--order", "4",
    ]));
    assert!(out.contains("free parameters: 1"), "{out}");
    assert!(out.contains("{b1}"));
    let v = json(&[
        "groebner", "--n", "2", "--family", "SL", "--m", "15", "--order", "6",
    ]);
    assert_eq!(v["real_solution_count"], 3);
}

#[test]
fn optimize_is_reproducible() {
    let args = [
        "--json", "optimize", "--n", "2", "--family", "S", "--m", "9", "--order", "4", "--starts",
        "8", "--seed", "3",
    ];
    let a = lts(&args);
    let b = lts(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["free_slots"][0], "b1");
    let best = v["minima"][0]["epsilon"].as_f64().unwrap();
    assert!((best - 0.068161).abs() < 1e-5, "{best}");
}

#[test]
fn optimize_rejects_wrong_free_slot_count() {
    let o = lts(&[
        "optimize",
        "--n",
        "2",
        "--family",
        "S",
        "--m",
        "9",
        "--order",
        "4",
        "--free-slots",
        "a1,b1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chain_partition_uses_two_groups() {
    let out = stdout(&lts(&["partition", "examples/chain8.graph"]));
    assert!(out.contains("n 2"), "{out}");
    assert!(out.contains("A: {0 1} {2 3} {4 5} {6 7}"), "{out}");
    assert!(out.contains("B: {1 2} {3 4} {5 6}"), "{out}");
    assert!(out.contains("valid true"));

    let v = json(&["partition", "examples/chain8.graph"]);
    assert_eq!(v["partition"]["groups"].as_array().unwrap().len(), 2);
    assert_eq!(v["valid"], Value::Bool(true));

    let dot = stdout(&lts(&["partition", "examples/chain8.graph", "--dot"]));
    assert!(dot.starts_with("graph interactions {"));
}

#[test]
fn next_nearest_chain_after_reduction() {
    let out = stdout(&lts(&[
        "partition",
        "examples/chain12_nnn.graph",
        "--reduce",
    ]));
    assert!(out.contains("coarse graining steps: 1"), "{out}");
    assert!(out.contains("n 2"));
    let direct = stdout(&lts(&["partition", "examples/chain12_nnn.graph"]));
    assert!(direct.contains("n 3"), "{direct}");
    assert_eq!(
        lts(&["partition", "examples/missing.graph"]).status.code(),
        Some(1)
    );
}

#[test]
fn bench_csv_and_slope() {
    let o = lts(&[
        "bench", "leapfrog", "--n", "2", "--dim", "8", "--seed", "4", "--tmin", "1e-3", "--tmax",
        "1e-1", "--points", "12",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().nth(1), Some("t,error,in_window"));
    assert_eq!(out.lines().count(), 14);
    let v = json(&[
        "bench", "leapfrog", "--n", "2", "--dim", "8", "--seed", "4", "--points", "20",
    ]);
    assert!((v["report"]["fitted_slope"].as_f64().unwrap() - 3.0).abs() < 0.15);
    let o = lts(&[
        "bench", "leapfrog", "--n", "2", "--tmin", "1", "--tmax", "0.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_at_equal_cost() {
    let out = stdout(&lts(&[
        "compare",
        "n2-p4-sl-m11-suzuki",
        "n2-p4-s-m11-opt",
        "--budget",
        "110",
        "--T",
        "1",
        "--dim",
        "8",
    ]));
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(rows.len(), 2, "{out}");
    assert!(rows[0].starts_with("n2-p4-sl-m11-suzuki,11,10,"));
    let o = lts(&["compare", "n2-p4-s-m11-opt", "--budget", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lts"))
        .args(["epsilon", "n2-p4-sl-m7-yoshida"])
        .env("LTS_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
}
