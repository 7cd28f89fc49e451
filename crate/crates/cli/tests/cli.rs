use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run_in(dir: &Path, args: &[&str], env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_omegaforge"));
    cmd.current_dir(dir).args(args).env_remove("OMEGA_FORGE_CONFIG");
    if let Some(p) = env {
        cmd.env("OMEGA_FORGE_CONFIG", p);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn build(dir: &Path, machine_json: &str) -> PathBuf {
    write(dir, "cfg.json", &format!(r#"{{"machine": {machine_json}}}"#));
    let o = run_in(dir, &["build", "--config", "cfg.json", "--out", "m.json"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    dir.join("m.json")
}

const CLOSURE_OF_ONE: &str =
    r#"{"construction": "tot-from-sigma2", "params": {"v": {"members": ["1"]}}}"#;

#[test]
fn closure_of_one_has_half_totality() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), CLOSURE_OF_ONE);
    let o = run_in(
        dir.path(),
        &["trace", "m.json", "--tag", "TOT", "--depth", "3", "--stage", "10", "--nmax", "0", "--points", "1"],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "depth,stage,n_max,lower_num,lower_exp,upper_num,upper_exp,lower_certified,upper_certified");
    assert_eq!(lines[1], "3,10,0,1,1,1,1,true,true");
}

#[test]
fn kraft_violation_exits_3_naming_the_index() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "cfg.json",
        r#"{"machine": {"construction": "kraft-chaitin", "params": {"requests": [1, 2, 2, 3]}}}"#,
    );
    let o = run_in(dir.path(), &["build", "--config", "cfg.json"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("request 3"), "{}", stderr(&o));
}

#[test]
fn kraft_codewords_are_logged() {
    let dir = TempDir::new().unwrap();
    let m = build(
        dir.path(),
        r#"{"construction": "kraft-chaitin", "params": {"requests": [2, 1, 3]}}"#,
    );
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(v["log"]["codewords"], serde_json::json!(["00", "1", "010"]));
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "TOT"], None);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn builds_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = r#"{"machine": {"construction": "cof-markers", "params": {
        "family": {"generators": [{"t": 1, "prefix": "1", "from": 4}]},
        "oracle": {"kind": "toy", "entries": [[2, 9]]}}}, "seed": 7}"#;
    write(dir.path(), "cfg.json", cfg);
    let a = run_in(dir.path(), &["build", "--config", "cfg.json", "--out", "a.json"], None);
    let b = run_in(dir.path(), &["build", "--config", "cfg.json", "--out", "b.json"], None);
    assert!(a.status.success() && b.status.success(), "{}", stderr(&a));
    let a = fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.json")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("\"markers\"") && text.contains("\"seed\": 7"));
}

#[test]
fn empty_machine_rows_are_constant() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), r#"{"construction": "empty-oracle", "params": {}}"#);
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "TOT", "--depth", "4"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let values: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(3).collect::<Vec<_>>().join(","))
        .collect();
    assert_eq!(values.len(), 10);
    assert!(values.iter().all(|v| v == &values[0]), "{values:?}");
}

#[test]
fn prescribed_half_ends_at_half() {
    let dir = TempDir::new().unwrap();
    build(
        dir.path(),
        r#"{"construction": "prescribed-tot", "params": {"target":
            {"approx": ["3/4", "5/8", "1/2"], "direction": "descending", "c": 3}}}"#,
    );
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "TOT", "--depth", "6", "--stage", "8"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(&last[5..7], &["1", "1"]);
}

#[test]
fn trace_writes_atomically_to_out() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), CLOSURE_OF_ONE);
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "INF-domain", "--jobs", "3", "--out", "t.csv"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let csv = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    assert!(!csv.contains('\r'));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "bad.json", "{ not json");
    let o = run_in(dir.path(), &["trace", "bad.json", "--tag", "TOT"], None);
    assert_eq!(o.status.code(), Some(2));

    write(dir.path(), "cfg.json", r#"{"machine": null, "surprise": 1}"#);
    let o = run_in(dir.path(), &["build", "--config", "cfg.json"], None);
    assert_eq!(o.status.code(), Some(2));

    build(dir.path(), CLOSURE_OF_ONE);
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "NOPE"], None);
    assert_eq!(o.status.code(), Some(2));

    let o = run_in(dir.path(), &["build"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inapplicable_tag_exits_3() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), CLOSURE_OF_ONE);
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "DOM-infsd"], None);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn builder_precondition_exits_3() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "cfg.json",
        r#"{"machine": {"construction": "prescribed-tot", "params": {"target":
            {"approx": ["7/8"], "direction": "descending", "c": 2}}}}"#,
    );
    let o = run_in(dir.path(), &["build", "--config", "cfg.json"], None);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn config_lookup_order() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let cfg = |out: &str| {
        format!(r#"{{"machine": {CLOSURE_OF_ONE}, "outputs": {{"artifact": "{out}"}}}}"#)
    };
    write(p, "omegaforge.json", &cfg("from_default.json"));
    let env_cfg = write(p, "env.json", &cfg("from_env.json"));
    write(p, "flag.json", &cfg("from_flag.json"));

    assert!(run_in(p, &["build"], None).status.success());
    assert!(p.join("from_default.json").is_file());

    assert!(run_in(p, &["build"], Some(&env_cfg)).status.success());
    assert!(p.join("from_env.json").is_file());

    assert!(run_in(p, &["build", "--config", "flag.json"], Some(&env_cfg)).status.success());
    assert!(p.join("from_flag.json").is_file());

    let o = run_in(p, &["build"], Some(&p.join("missing.json")));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn schedule_from_config() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), CLOSURE_OF_ONE);
    write(
        dir.path(),
        "sched.json",
        r#"{"schedule": [{"depth": 1, "stage": 0, "n_max": 0}, {"depth": 3, "stage": 5, "n_max": 0}]}"#,
    );
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "TOT", "--config", "sched.json"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 3);

    write(
        dir.path(),
        "back.json",
        r#"{"schedule": [{"depth": 3, "stage": 5, "n_max": 0}, {"depth": 2, "stage": 5, "n_max": 0}]}"#,
    );
    let o = run_in(dir.path(), &["trace", "m.json", "--tag", "TOT", "--config", "back.json"], None);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn mltest_valid_input_passes_with_slack() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "ml.json",
        r#"{"s": ["00", "01", "100"], "v": ["01", "100"], "levels": 4}"#,
    );
    let o = run_in(dir.path(), &["mltest", "ml.json"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["holds"] == true && r["slack"].is_string()));
}

#[test]
fn mltest_empty_v_measures_are_delta() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "ml.json", r#"{"s": ["0", "1"], "levels": 3, "epsilons": {"1": "1/4"}}"#);
    let o = run_in(dir.path(), &["mltest", "ml.json"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in report["rows"].as_array().unwrap() {
        assert_eq!(r["measure"], r["delta"]);
    }
    assert_eq!(report["rows"][0]["delta"], "1/20");
}

#[test]
fn mltest_doubled_delta_fails_at_one() {
    let dir = TempDir::new().unwrap();
    let input = r#"{
        "s": ["000", "001", "010", "011", "100", "101", "110", "1110", "1111"],
        "v": ["000", "001", "010", "011", "100", "101", "110", "1110", "1111"],
        "levels": 1,
        "epsilons": {"1": "31/256"},
        "delta_scale": {"1": "2"}
    }"#;
    write(dir.path(), "ml.json", input);
    let o = run_in(dir.path(), &["mltest", "ml.json", "--out", "report.json"], None);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("n = 1"), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(report.contains("\"holds\": false"));
}

#[test]
fn mltest_oracle_driven_sub_enumeration() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "ml.json",
        r#"{"s": ["00", "01", "11"], "v_oracle": {"kind": "toy", "entries": [[2, 3], [0, 5]]},
            "horizon": 10, "levels": 2}"#,
    );
    let o = run_in(dir.path(), &["mltest", "ml.json"], None);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn verify_machine_passes_on_constructions() {
    let dir = TempDir::new().unwrap();
    for spec in [
        CLOSURE_OF_ONE,
        r#"{"construction": "monotone-from-tot", "params": {"v": {"members": ["10"]}}}"#,
        r#"{"construction": "infsd-from-sigma2", "params": {"v": {"members": ["1"],
            "events": [{"element": "01", "stage": 2, "kind": "enter"}]}}}"#,
        r#"{"construction": "prescribed-cof", "params": {"target":
            {"approx": ["1/4", "3/8"], "direction": "ascending", "c": 2}}}"#,
        r#"{"construction": "universal-tot", "params": {"target":
            {"approx": ["5/8"], "direction": "descending", "c": 2},
            "family": [{"construction": "empty-oracle", "params": {}}], "gamma": ["0"]}}"#,
    ] {
        build(dir.path(), spec);
        let o = run_in(dir.path(), &["verify-machine", "m.json", "--depth", "5", "--nmax", "10", "--stage", "12"], None);
        assert!(o.status.success(), "{spec}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("0 violation(s)"));
    }
}

#[test]
fn concordance_lists_every_command() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["concordance"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    for cmd in ["build", "trace", "mltest", "verify-machine"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
