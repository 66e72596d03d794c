use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqrtforms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn sqrt_of_two_mod_41() {
    let out = run(&["sqrt", "--p", "41", "--a", "2", "--method", "f3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("root: 17"));
    assert!(text.contains("coroot: 24"));

    let v = json(&["sqrt", "--p", "41", "--a", "2", "--format", "json"]);
    assert_eq!((v["root"].as_u64(), v["coroot"].as_u64()), (Some(17), Some(24)));
    assert_eq!(v["method"], "F3");
}

#[test]
fn nonresidue_exits_2() {
    let out = run(&["sqrt", "--p", "41", "--a", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a quadratic residue"));
}

#[test]
fn zero_has_root_zero() {
    let v = json(&["sqrt", "--p", "7", "--a", "0", "--format", "json"]);
    assert_eq!(v["root"], 0);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["sqrt", "--p", "15", "--a", "4"]).status.code(), Some(1));
    assert_eq!(run(&["sqrt", "--p", "41", "--a", "41"]).status.code(), Some(1));
    assert_eq!(run(&["sqrt", "--p", "41"]).status.code(), Some(1));
    assert_eq!(run(&["sqrt", "--p", "41", "--a", "2", "--method", "f2"]).status.code(), Some(1));
    assert_eq!(run(&["synthesize", "--k", "0"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn synthesize_text_and_structured() {
    let out = run(&["synthesize", "--k", "1"]);
    assert_eq!(stdout(&out).trim(), "x^((n+1)/2)");

    let out = run(&["synthesize", "--k", "3"]);
    let text = stdout(&out);
    assert!(text.starts_with("2^-2 * x^((n+1)/2) * ["));
    assert!(text.contains("z^(3n)*(1 - x^(2n))*(1 - x^(n) z^(2n))"));

    let v = json(&["synthesize", "--k", "4", "--format", "structured"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 8);
}

#[test]
fn synthesize_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f5.json");
    let out = run(&["synthesize", "--k", "5", "--format", "structured", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["k"], 5);
}

#[test]
fn verify_exit_codes() {
    let v = json(&["verify", "--pmin", "24", "--pmax", "28"]);
    assert_eq!(v["primes_tested"], 0);
    assert_eq!(v["passed"], true);

    let out = run(&["verify", "--pmax", "200", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(run(&["verify", "--pmin", "10", "--pmax", "5"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--pmax", "100", "--method", "f3", "--k", "2"]).status.code(), Some(1));
}

#[test]
fn verify_k_filter() {
    let v = json(&["verify", "--pmax", "500", "--k", "4"]);
    let ps: Vec<u64> = v["primes"].as_array().unwrap().iter().map(|r| r["p"].as_u64().unwrap()).collect();
    assert_eq!(ps, vec![17, 113, 241, 337, 401, 433]);
}

#[test]
fn verify_sequential_matches_parallel() {
    let a = run(&["verify", "--pmax", "700"]);
    let b = run(&["verify", "--pmax", "700", "--sequential"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let v = json(&["verify", "--pmax", "50"]);
    assert!(v.get("wall_time_ms").is_none());
    let v = json(&["verify", "--pmax", "50", "--timing"]);
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn expand_p13() {
    let out = run(&["expand", "--p", "13"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("3x^5 + 11x^2"));
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn density_p13() {
    let v = json(&["density", "--p", "13", "--format", "json"]);
    assert_eq!(v["qr_count"], 6);
    assert_eq!(v["odd_order_count"], 3);
    assert_eq!(v["exact_2k1_order_count"], 1);

    let text = stdout(&run(&["density", "--p", "13"]));
    assert!(text.contains("1/2 (predicted 1/2)"));
    assert!(text.contains("1/6 (predicted 1/6)"));
}

#[test]
fn density_trend() {
    let v = json(&["density", "--trend-k", "3", "--pmax", "200", "--format", "json"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows[0]["p"], 41);
    assert!(rows.iter().all(|r| r["odd_multiplier_fraction"] == serde_json::json!([1, 2])));
}

#[test]
fn bench_is_reproducible() {
    let args = ["bench", "--p", "41", "--trials", "100", "--seed", "3"];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);

    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let methods: Vec<&str> =
        v["records"].as_array().unwrap().iter().map(|r| r["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["F3", "SYNTH", "TONELLI", "DIRECT"]);
    assert_eq!(v["records"][0]["distinct_mul_counts"], 1);
}

#[test]
fn bench_auto_resolves_per_class() {
    let v = json(&["bench", "--p", "97", "--trials", "20", "--methods", "auto,tonelli"]);
    assert_eq!(v["records"][0]["method"], "SYNTH");
}
