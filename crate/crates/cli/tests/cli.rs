use std::process::{Command, Output};

fn deligne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deligne")).args(args).output().expect("binary runs")
}

fn write(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("deligne-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(deligne(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(deligne(&["verify", "lemma9.9"]).status.code(), Some(2));
    assert_eq!(deligne(&["cech"]).status.code(), Some(2));
    assert_eq!(deligne(&["cech", "--instance", "no-such-instance"]).status.code(), Some(2));
    assert_eq!(deligne(&["cech", "--instance", "p1", "--sheaf", "Q(1)"]).status.code(), Some(2));
}

#[test]
fn parse_errors_carry_position() {
    let path = write("bad.toml", "name = \"bad\"\n[ring]\nvars = [\"x\"]\n[[forms]]\nname = \"u\"\nexpr = \"x +\\n * x\"\n");
    let out = deligne(&["relations", "--instance", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2:2") && err.contains("unexpected `*`"), "{err}");
}

#[test]
fn failed_expectation_exits_1_with_witness() {
    let path = write("wrong.toml", "name = \"wrong\"\n[cover]\nkind = \"P1\"\n[checks]\ncech = [{ sheaf = \"O(2)\", dims = [4, 0] }]\n");
    let out = deligne(&["cech", "--instance", &path, "--json", "-"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = &v["checks"][0];
    assert_eq!(c["status"], "fail");
    assert!(c["witnesses"].as_array().unwrap().iter().any(|w| w.as_str().unwrap().contains("expected [4, 0], computed [3, 0]")));
}

#[test]
fn report_shape() {
    let out = deligne(&["tangent-chow", "--instance", "elliptic", "--json", "-", "--no-timing", "--D", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "tangent-chow");
    assert_eq!(v["config"]["D"], 5);
    assert_eq!(v["runtime_ms"], 0);
    assert_eq!(v["checks"][0]["dims"]["dim"], 1);
}

#[test]
fn delta_r_on_a_transcendental_base_lists_kernel_letters() {
    let out = deligne(&["delta-r", "--instance", "elliptic-Qt", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let letters: Vec<_> = v["checks"].as_array().unwrap().iter().filter_map(|c| c["dims"].get("kernel_letters")).collect();
    assert_eq!(letters, vec![&serde_json::json!(["dt"])]);
}

fn report(args: &[&str]) -> (Option<i32>, serde_json::Value) {
    let mut a = args.to_vec();
    a.extend(["--json", "-"]);
    let out = deligne(&a);
    (out.status.code(), serde_json::from_slice(&out.stdout).unwrap())
}

#[test]
fn lemma26_with_seed_runs_fifty_per_family() {
    let (code, v) = report(&["verify", "lemma2.6", "--p", "3", "--seed", "7"]);
    assert_eq!(code, Some(0));
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["dims"]["instances"] == 50 && c["status"] == "pass"));
}

#[test]
fn omega1_on_p2() {
    let (code, v) = report(&["cech", "--instance", "p2", "--sheaf", "omega1", "--D", "4"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["checks"][0]["dims"]["dims"], serde_json::json!([0, 1, 0]));
    assert_eq!(v["checks"][0]["dims"]["stabilized"], true);
}

#[test]
fn composed_on_the_elliptic_curve() {
    let (code, v) = report(&["composed", "--instance", "elliptic", "--p", "1"]);
    assert_eq!(code, Some(0));
    let c = &v["checks"][0];
    assert_eq!(c["dims"]["verdict"], "injective");
    assert_eq!(c["matrix"], serde_json::json!([["1"]]));
}
