use std::process::{Command, Output};

use serde_json::Value;

fn setqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setqm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = setqm(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

fn circuit(name: &str) -> String {
    format!("{}/../core/circuits/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn double_slit_interferes_unless_observed() {
    let v = json(&["double-slit"]);
    assert_eq!(v["distribution"]["a"], "1/2");
    assert_eq!(v["distribution"]["b"], "0/1");
    assert_eq!(v["distribution"]["c"], "1/2");

    let v = json(&["double-slit", "--measure-at-slits"]);
    assert_eq!(v["distribution"]["a"], "1/4");
    assert_eq!(v["distribution"]["b"], "1/2");
    assert_eq!(v["distribution"]["c"], "1/4");
}

#[test]
fn double_slit_sampling_is_seeded() {
    let a = stdout(&["double-slit", "--trials", "50", "--seed", "9"]);
    let b = stdout(&["double-slit", "--trials", "50", "--seed", "9"]);
    assert_eq!(a, b);
    let v = json(&["double-slit", "--trials", "50", "--seed", "9"]);
    assert_eq!(v["hits"]["b"], 0);
    let total: u64 = v["hits"].as_object().unwrap().values().map(|n| n.as_u64().unwrap()).sum();
    assert_eq!(total, 50);
}

#[test]
fn bell_reports_violation() {
    let text = stdout(&["bell"]);
    assert!(text.contains("1/4 + 0 ≥ 1/2 : VIOLATED"), "{text}");
    assert!(text.contains("Pr(a,a′,a″) = 2/9"), "{text}");

    let v = json(&["bell"]);
    assert_eq!(v["report"]["violated"], true);
    assert_eq!(v["report"]["lhs"], "1/4");
    assert_eq!(v["report"]["rhs"], "1/2");
    assert_eq!(v["counterfactual"]["inequality_holds"], true);
}

#[test]
fn separated_state_does_not_violate() {
    let text = stdout(&["bell", "--state", "{(a,a),(a,b),(b,a),(b,b)}"]);
    assert!(text.contains(": holds"), "{text}");
}

#[test]
fn entropy_of_two_block_partition() {
    let text = stdout(&["entropy", "--partition", "{a,b}|{c}"]);
    assert!(text.contains("h          4/9"), "{text}");
    assert!(text.contains("0.918"), "{text}");
    let v = json(&["entropy", "--partition", "{a,b}|{c}"]);
    assert_eq!(v["dits"], 4);
    assert_eq!(v["logical_entropy"], "4/9");
    assert!((v["shannon_entropy"].as_f64().unwrap() - 0.918_295_834).abs() < 1e-6);
}

#[test]
fn born_accepts_ascii_primes() {
    let v = json(&["born", "{a,b}", "--frame", "U'"]);
    assert_eq!(v["frame"], "U′");
    assert_eq!(v["probabilities"]["a′"], "1/1");
    assert_eq!(v["coordinates"], serde_json::json!(["a′"]));
}

#[test]
fn born_accepts_states_in_other_bases() {
    let v = json(&["born", "{a'}", "--frame", "U"]);
    assert_eq!(v["probabilities"]["a"], "1/2");
    assert_eq!(v["probabilities"]["c"], "0/1");
}

#[test]
fn bracket_counts_overlap() {
    assert_eq!(stdout(&["bracket", "{a,b}", "{b,c}"]), "⟨{a,b}|{b,c}⟩ = 1\n");
}

#[test]
fn forced_measurement_collapses() {
    let v = json(&["measure", "--attr", "a=1,b=2,c=2", "--state", "{a,b,c}", "--outcome", "2"]);
    assert_eq!(v["result"]["probability"], "2/3");
    assert_eq!(v["result"]["post_state"], serde_json::json!(["b", "c"]));
}

#[test]
fn measuring_density_raises_entropy() {
    let v = json(&["measure-density", "--attr", "chi:{b,c}"]);
    assert_eq!(v["before"]["purity"], "1/1");
    assert_eq!(v["after"]["logical_entropy"], "4/9");
    assert_eq!(v["entropy_increase"], "4/9");
}

#[test]
fn teleport_always_succeeds() {
    for (a, b) in [("0", "1"), ("1", "0"), ("1", "1")] {
        for m in ["0", "1"] {
            let v = json(&["teleport", "--alpha", a, "--beta", b, "--outcome", m]);
            assert_eq!(v["success"], true, "{a}{b} outcome {m}");
            assert_eq!(v["probability"], "1/2");
        }
    }
}

#[test]
fn parity_sat_reports_deutsch() {
    let text = stdout(&["parity-sat", "--table", "01"]);
    assert!(text.contains("balanced"), "{text}");
    assert!(text.contains("E_f uses  1"), "{text}");
    let v = json(&["parity-sat", "--table", "1101"]);
    assert_eq!(v["parity"], 1);
    assert_eq!(v["ef_applications"], 1);
}

#[test]
fn run_is_deterministic_per_seed() {
    let file = circuit("teleport.qc2");
    let a = stdout(&["run", &file, "--seed", "5"]);
    let b = stdout(&["run", &file, "--seed", "5"]);
    assert_eq!(a, b);
}

#[test]
fn run_with_forced_outcomes() {
    let file = circuit("teleport.qc2");
    let text = stdout(&["run", &file, "--outcomes", "0"]);
    assert!(text.contains("[read 0, probability 1/2]"), "{text}");
    assert!(text.contains("[skipped]"), "{text}");
}

#[test]
fn domain_errors_exit_one() {
    let out = setqm(&["bracket", "{a,z}", "{a}"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: UnknownLabel:"), "{err}");

    let out = setqm(&["parity-sat", "--table", "011"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = std::env::temp_dir().join(format!("setqm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.qc2");
    std::fs::write(&file, "gate H9 0\n").unwrap();
    let out = setqm(&["run", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: ParseError: 1:6:"), "{err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_file_is_io_error() {
    let out = setqm(&["run", "/nonexistent/x.qc2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: Io:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(setqm(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(setqm(&["density"]).status.code(), Some(2));
    assert_eq!(setqm(&["teleport", "--alpha", "2", "--beta", "0"]).status.code(), Some(2));
}

#[test]
fn ket_table_is_stable() {
    let text = stdout(&["ket-table"]);
    assert!(text.starts_with("U       | U′         | U″"), "{text}");
    assert_eq!(text.lines().count(), 10);
    let bell = stdout(&["ket-table", "--bell"]);
    assert_eq!(bell.lines().count(), 6);
}
