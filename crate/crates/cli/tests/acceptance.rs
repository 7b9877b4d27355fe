//! Acceptance run: drives the `deligne` binary through criteria 1 to 11 and
//! prints one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

struct Run {
    code: i32,
    json: Value,
    raw: String,
    elapsed: Duration,
}

fn deligne(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_deligne"))
        .args(args)
        .args(["--json", "-", "--no-timing"])
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let raw = String::from_utf8(out.stdout).expect("utf-8 report");
    let json = serde_json::from_str(&raw).unwrap_or_else(|e| {
        panic!("{args:?}: bad report ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr))
    });
    Run { code: out.status.code().unwrap_or(-1), json, raw, elapsed }
}

fn checks(r: &Run) -> &Vec<Value> {
    r.json["checks"].as_array().expect("checks array")
}

fn all_pass(r: &Run) -> bool {
    r.code == 0 && checks(r).iter().all(|c| c["status"] == "pass")
}

fn failures(r: &Run) -> Vec<String> {
    checks(r)
        .iter()
        .filter(|c| c["status"] != "pass")
        .map(|c| format!("{} [{}] {}", c["name"], c["status"], c["witnesses"]))
        .collect()
}

struct Outcome {
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

fn families(cmd: &str, budget: u64) -> Outcome {
    let r = deligne(&["verify", cmd]);
    let mut missing = Vec::new();
    for tower in ["Q", "Q(sqrt2)", "Q(t)"] {
        for p in 2..=4 {
            let tag = format!("[{tower}, p = {p}]");
            let ok = checks(&r).iter().any(|c| {
                c["name"].as_str().unwrap().ends_with(&tag) && c["dims"]["instances"].as_u64().unwrap_or(0) >= 50
            });
            if !ok {
                missing.push(tag);
            }
        }
    }
    let mut f = failures(&r);
    f.extend(missing.iter().map(|m| format!("missing or short family {m}")));
    Outcome { pass: all_pass(&r) && missing.is_empty() && within(r.elapsed, budget), detail: f.join("; "), elapsed: r.elapsed }
}

fn criterion_4() -> Outcome {
    let r = deligne(&["relations"]);
    let per_map: u64 = checks(&r)
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("dlog "))
        .map(|c| c["dims"]["instances"].as_u64().unwrap())
        .sum();
    Outcome {
        pass: all_pass(&r) && per_map >= 100 && within(r.elapsed, 10),
        detail: [vec![format!("{per_map} instances")], failures(&r)].concat().join("; "),
        elapsed: r.elapsed,
    }
}

fn criterion_5() -> Outcome {
    let r = deligne(&["verify", "alpha-delta"]);
    let covers = (2..=4).all(|p| {
        checks(&r).iter().any(|c| c["name"].as_str().unwrap().starts_with(&format!("alpha/delta diagram, p = {p}:")))
    });
    Outcome { pass: all_pass(&r) && covers && within(r.elapsed, 5), detail: failures(&r).join("; "), elapsed: r.elapsed }
}

/// Runs `cech --sheaf` and returns (dims at D, stabilized against D + 2).
fn cech_dims(instance: &str, sheaf: &str, total: &mut Duration, notes: &mut Vec<String>) -> Option<Vec<u64>> {
    let r = deligne(&["cech", "--instance", instance, "--sheaf", sheaf]);
    *total += r.elapsed;
    let c = &checks(&r)[0];
    let d = &c["dims"];
    if d.is_null() {
        notes.push(format!("{instance} {sheaf}: {}", c["witnesses"]));
        return None;
    }
    if d["delta"] != 2 || d["dims"] != d["dims_high"] || d["stabilized"] != true {
        notes.push(format!("{instance} {sheaf}: not stabilized at D vs D + 2"));
        return None;
    }
    Some(d["dims"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
}

fn criterion_6() -> Outcome {
    let mut total = Duration::ZERO;
    let mut notes = Vec::new();
    let mut expect = |inst: &str, sheaf: String, want: Vec<u64>, notes: &mut Vec<String>| {
        match cech_dims(inst, &sheaf, &mut total, notes) {
            Some(got) if got == want => {}
            Some(got) => notes.push(format!("{inst} {sheaf}: expected {want:?}, computed {got:?}")),
            None => {}
        }
    };
    for d in 0..=5u64 {
        expect("p1", format!("O({d})"), vec![d + 1, 0], &mut notes);
    }
    for d in 2..=5u64 {
        expect("p1", format!("O(-{d})"), vec![0, d - 1], &mut notes);
    }
    for r in 0..=2usize {
        let want = (0..=2).map(|q| u64::from(q == r)).collect();
        expect("p2", format!("omega{r}"), want, &mut notes);
    }
    Outcome { pass: notes.is_empty() && within(total, 60), detail: notes.join("; "), elapsed: total }
}

fn criterion_7() -> Outcome {
    let mut total = Duration::ZERO;
    let mut notes = Vec::new();
    for (inst, p) in [("p1", "1"), ("p2", "1"), ("p2", "2"), ("elliptic", "1")] {
        let r = deligne(&["verify", "lemma2.4", "--instance", inst, "--p", p]);
        total += r.elapsed;
        if !all_pass(&r) || checks(&r).is_empty() {
            notes.push(format!("{inst} p = {p}: {}", failures(&r).join("; ")));
        }
    }
    let r = deligne(&["hypercoh", "--instance", "p2", "--p", "2"]);
    total += r.elapsed;
    let h = checks(&r).iter().find(|c| c["name"].as_str().unwrap().starts_with("H^*")).expect("hypercohomology check");
    let degrees = h["dims"]["degrees"].as_array().unwrap();
    let dim3 = degrees.iter().position(|n| n == 3).map(|i| h["dims"]["dims"][i].clone());
    if dim3 != Some(Value::from(1)) || h["dims"]["stabilized"] != true {
        notes.push(format!("H^3(P2, p = 2) = {dim3:?}"));
    }
    if !all_pass(&r) {
        notes.extend(failures(&r));
    }
    Outcome { pass: notes.is_empty() && within(total, 120), detail: notes.join("; "), elapsed: total }
}

fn criterion_8() -> Outcome {
    let mut total = Duration::ZERO;
    let mut notes = Vec::new();
    match cech_dims("elliptic", "O", &mut total, &mut notes) {
        Some(d) if d.get(1) == Some(&1) => {}
        Some(d) => notes.push(format!("H^*(E, O) = {d:?}")),
        None => {}
    }
    Outcome { pass: notes.is_empty() && within(total, 120), detail: notes.join("; "), elapsed: total }
}

fn criterion_9() -> Outcome {
    let mut total = Duration::ZERO;
    let mut notes = Vec::new();
    let mut notes_ok = Vec::new();
    for inst in ["elliptic", "p2-sqrt2"] {
        let r = deligne(&["composed", "--instance", inst]);
        total += r.elapsed;
        let injective = !checks(&r).is_empty()
            && checks(&r).iter().all(|c| c["dims"]["injective"] == true && c["dims"]["kernel_dim"] == 0);
        if !all_pass(&r) || !injective {
            notes.push(format!("{inst}: {}", failures(&r).join("; ")));
        }
        let verdicts: Vec<String> = checks(&r).iter().map(|c| c["dims"]["verdict"].to_string()).collect();
        notes_ok.push(format!("{inst}: {}", verdicts.join(", ")));
    }
    let pass = notes.is_empty() && within(total, 120);
    let detail = if notes.is_empty() { notes_ok } else { notes };
    Outcome { pass, detail: detail.join("; "), elapsed: total }
}

fn criterion_10() -> Outcome {
    let r = deligne(&["composed", "--instance", "p1-Qs"]);
    let refused = checks(&r)
        .iter()
        .any(|c| c["status"] == "refused" && c["witnesses"][0].as_str().unwrap_or("").contains("not a number field"));
    let letters = checks(&r).iter().find_map(|c| c["dims"].get("kernel_letters")).cloned();
    let ok_letters = letters == Some(serde_json::json!(["ds"]));
    Outcome {
        pass: r.code == 0 && refused && ok_letters && within(r.elapsed, 1),
        detail: format!("refused {refused}, kernel letters {}", letters.map_or("none".into(), |v| v.to_string())),
        elapsed: r.elapsed,
    }
}

fn criterion_11() -> Outcome {
    let runs: &[&[&str]] = &[
        &["verify", "lemma2.6", "--p", "3"],
        &["relations"],
        &["cech", "--instance", "p2"],
        &["composed", "--instance", "elliptic"],
        &["composed", "--instance", "p1-Qs"],
    ];
    let mut total = Duration::ZERO;
    let mut notes = Vec::new();
    for args in runs {
        let (a, b) = (deligne(args), deligne(args));
        total += a.elapsed + b.elapsed;
        if a.raw != b.raw {
            notes.push(format!("{args:?} differs between runs"));
        }
        if a.json["runtime_ms"] != 0 {
            notes.push(format!("{args:?}: runtime_ms not zeroed"));
        }
    }
    Outcome { pass: notes.is_empty(), detail: notes.join("; "), elapsed: total }
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("1  tilde_dlog = (-1)^(p-1) d beta, 50 symbols x p 2..4 x Q, Q(sqrt2), Q(t), < 10 s", || {
            families("lemma2.6", 10)
        }),
        ("2  beta_via_truncation = beta, < 10 s", || families("beta-agreement", 10)),
        ("3  base_change(eps_to_absolute) = beta, < 10 s", || families("diagram2.7", 10)),
        ("4  >= 100 relation instances, < 10 s", criterion_4),
        ("5  alpha/delta diagram p = 2..4, < 5 s", criterion_5),
        ("6  Cech calibrations on P1 and P2, stable at D vs D + 2, < 60 s", criterion_6),
        ("7  splitting on P1, P2, E and H^3(P2, p = 2) = 1, < 120 s", criterion_7),
        ("8  H^1(E, O) = 1, < 120 s", criterion_8),
        ("9  composed map injective on E/Q and P2/Q(sqrt2), < 120 s", criterion_9),
        ("10 Q(s): kernel letters [ds], NotNumberField, < 1 s", criterion_10),
        ("11 byte-identical JSON across runs", criterion_11),
    ];
    let mut failed = Vec::new();
    for (label, f) in criteria {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {label} ({:.2} s)", o.elapsed.as_secs_f64());
        if !o.pass || !o.detail.is_empty() {
            println!("     {}", o.detail);
        }
        if !o.pass {
            failed.push(label);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
