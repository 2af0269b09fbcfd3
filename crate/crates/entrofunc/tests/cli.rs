use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entrofunc")).args(args).output().expect("binary runs")
}

fn run_path(cmd: &str, path: &Path, extra: &[&str]) -> Output {
    let p = path.to_str().expect("utf-8 path");
    let mut args = vec![cmd, p];
    args.extend_from_slice(extra);
    run(&args)
}

fn json_of(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn json_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn tau_on_successor_ray_is_ln_2() {
    let v = json_of(&run_path("entropy", &spec("shift_tau_successor_z2.json"), &[]));
    assert_eq!(v["classification"], "exact");
    assert_eq!(v["value"]["q"], 1);
    assert_eq!(v["value"]["m"], 2);
    assert_eq!(v["c"][1], json!({ "q": 2, "m": 2, "float": 1.386294361120 }));
}

#[test]
fn pakex_star_counts_two() {
    let v = json_of(&run_path("entropy", &spec("selfmap_pakex_star.json"), &[]));
    assert_eq!(v["classification"], "exact");
    assert_eq!(v["value"], json!({ "count": 2, "float": 2.0 }));
}

#[test]
fn bernoulli_trace_rows() {
    let out = run_path("trace", &spec("bernoulli_half.json"), &["--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "witness\tn\tc_n\tc_n/n");
    assert_eq!(lines[3], "cylinders of length 1\t3\t3*ln(2)\t0.693147180560");
    assert_eq!(lines.len(), 4);

    let v = json_of(&run_path("trace", &spec("bernoulli_half.json"), &["--n-max", "2", "--format", "json"]));
    assert_eq!(v[1]["n"], 2);
    assert_eq!(v[1]["c_n"]["q"], 2);
}

#[test]
fn tsv_entropy_report() {
    let out = run_path("entropy", &spec("rho2_log.json"), &["--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("quantity\th_S\nclassification\texact\nvalue\tln(2)\t0.693147180560\n"), "{text}");
}

#[test]
fn n_max_and_window_override_the_spec() {
    let v = json_of(&run_path("entropy", &spec("rho2_log.json"), &["--n-max", "9", "--window", "3"]));
    assert_eq!(v["params"], json!({ "n_max": 9, "window": 3 }));
    assert_eq!(v["c"].as_array().unwrap().len(), 9);
}

#[test]
fn weiss_case_passes() {
    let v = json_of(&run(&["bridge", "run", spec("bridge/weiss_finite.json").to_str().unwrap()]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["lhs"], v["rhs"]);
}

#[test]
fn registry_lists_every_case() {
    let out = run(&["bridge", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.contains("pet_cov_sbt\topen"));
    let v = json_of(&run(&["bridge", "registry", "--n-max", "6"]));
    assert_eq!(v.as_array().unwrap().len(), 10);
    assert!(v.as_array().unwrap().iter().all(|c| c["status"] != "fail"));
}

#[test]
fn log_law_holds_for_rho() {
    let v = json_of(&run_path("props", &spec("rho2_log.json"), &["--law", "log_law", "--k", "2"]));
    assert_eq!(v["status"], "holds");
    assert_eq!(v["holds"], true);
}

#[test]
fn weak_addition_on_a_pair() {
    let other = spec("selfmap_mixed_h.json");
    let v = json_of(&run_path("props", &spec("rho2_log.json"), &["--law", "product_max", "--with", other.to_str().unwrap()]));
    assert_eq!(v["status"], "holds");
}

#[test]
fn malformed_input_exits_2() {
    let dir = std::env::temp_dir().join(format!("entrofunc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("truncated.json", "{"),
        ("unknown_field.json", r#"{"kind": "semigroup", "flow": {"type": "rho", "a": 2, "norm": "log"}, "witnesses": [1], "colour": 1}"#),
        ("bad_witness.json", r#"{"kind": "semigroup", "flow": {"type": "rho", "a": 2, "norm": "log"}, "witnesses": ["x"]}"#),
        ("bad_kind.json", r#"{"kind": "banach"}"#),
    ];
    for (name, text) in cases {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        for cmd in ["entropy", "validate"] {
            let out = run_path(cmd, &p, &[]);
            assert_eq!(out.status.code(), Some(2), "{name} with {cmd}");
            assert!(out.stdout.is_empty());
            assert!(!out.stderr.is_empty());
        }
    }
    assert_eq!(run_path("entropy", &dir.join("missing.json"), &[]).status.code(), Some(2));
    assert_eq!(run(&["props", spec("rho2_log.json").to_str().unwrap(), "--law", "nope"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn caps_exit_3() {
    let out = run_path("entropy", &spec("rho2_log.json"), &["--n-max", "40", "--cap-bits", "16"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());

    let out = Command::new(env!("CARGO_BIN_EXE_entrofunc"))
        .args(["entropy", spec("bernoulli_half.json").to_str().unwrap(), "--n-max", "20"])
        .env("ENTROFUNC_CAP_MB", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let out = Command::new(env!("CARGO_BIN_EXE_entrofunc"))
        .args(["entropy", spec("rho2_log.json").to_str().unwrap()])
        .env("ENTROFUNC_CAP_MB", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_round_trips_the_corpus() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("specs");
    for p in json_files(&root).into_iter().chain(json_files(&root.join("bridge"))) {
        let out = run_path("validate", &p, &[]);
        assert_eq!(out.status.code(), Some(0), "{}", p.display());
        assert_eq!(out.stdout, std::fs::read(&p).unwrap(), "{}", p.display());
    }
}

#[test]
fn repeated_runs_are_identical() {
    for name in ["markov_two_state.json", "shift_sigma_oplus_pakex_z2.json", "space_four_points.json"] {
        let a = run_path("entropy", &spec(name), &[]);
        let b = run_path("entropy", &spec(name), &[]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}
