use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn textile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textile")).args(args).output().expect("binary runs")
}

fn textile_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_textile"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn exchange_2_3_report() {
    let path = fixture("exchange_2_3.json");
    let out = textile(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = json(&out);
    assert_eq!(r["system"]["tiles"], 6);
    assert_eq!(r["system"]["omega"], 6);
    assert_eq!(r["checks"]["transitive"]["holds"], true);
    assert_eq!(r["checks"]["h_kappa_condition_i"]["holds"], true);
    assert_eq!(r["kgroups"]["k0"]["text"], "Z/8Z");
    assert_eq!(r["kgroups"]["k0"]["torsion"], serde_json::json!([8]));
    assert_eq!(r["kgroups"]["k1"]["text"], "0");
    assert_eq!(r["closed_form"]["agrees"]["holds"], true);
    assert_eq!(r["structural_ok"], true);
    assert!(r.get("matrices").is_none());
}

#[test]
fn every_check_carries_evidence() {
    for f in ["exchange_2_3.json", "identity2.json", "golden_identity.json"] {
        let r = json(&textile(&["check", fixture(f).to_str().unwrap()]));
        for (name, c) in r["checks"].as_object().unwrap() {
            let evidence = if c["holds"] == true { &c["witness"] } else { &c["counterexample"] };
            assert!(!evidence.is_null(), "{f}: {name}");
        }
    }
}

#[test]
fn identity_system_is_not_transitive() {
    let out = textile(&["check", fixture("identity2.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["checks"]["transitive"]["holds"], false);
    assert_eq!(r["checks"]["transitive"]["counterexample"]["from"]["index"], 1);
    assert_eq!(r["checks"]["h_kappa_irreducible"]["holds"], false);
    assert!(r["closed_form"].is_null());
}

#[test]
fn noncommuting_matrices() {
    let out = textile(&["check", fixture("noncommuting.json").to_str().unwrap()]);
    assert_eq!(code(&out), 5);
    assert!(stderr(&out).contains("AB != BA at (1,1)"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn invalid_specifications() {
    let out = textile(&["check", fixture("bad_kappa.json").to_str().unwrap()]);
    assert_eq!(code(&out), 6);
    assert!(stderr(&out).contains("not injective"), "{}", stderr(&out));

    let unknown = r#"{"A": [[1]], "B": [[1]], "kappa": [{"alpha": "(1,1,2)", "b": "(1,1,1)", "a": "(1,1,1)", "beta": "(1,1,1)"}]}"#;
    let out = textile_stdin(&["check"], unknown);
    assert_eq!(code(&out), 6);
    assert!(stderr(&out).contains("(1,1,2) does not exist"), "{}", stderr(&out));

    let missing = r#"{"A": [[2]], "B": [[1]], "kappa": [{"alpha": "(1,1,1)", "b": "(1,1,1)", "a": "(1,1,1)", "beta": "(1,1,1)"}]}"#;
    let out = textile_stdin(&["check"], missing);
    assert_eq!(code(&out), 6);
    assert!(stderr(&out).contains("not mapped"), "{}", stderr(&out));
}

#[test]
fn explicit_specification_matches_named_exchange() {
    let explicit = json(&textile(&["kgroups", fixture("explicit_exchange_2_2.json").to_str().unwrap()]));
    assert_eq!(explicit["system"]["kappa"], "explicit");
    let named = json(&textile_stdin(&["kgroups"], r#"{"A": [[2]], "B": [[2]], "kappa": "exchange"}"#));
    assert_eq!(explicit["kgroups"], named["kgroups"]);
    assert_eq!(named["kgroups"]["k0"]["text"], "Z/3Z");
}

#[test]
fn input_errors() {
    let cases = [
        (r#"{"A": [[1, 2]], "B": [[1]]}"#, 7, "matrix A"),
        (r#"{"A": [[1]], "B": [[-1]]}"#, 7, "negative entry -1 at (1,1)"),
        (r#"{"A": [[1]], "B": [[1, 0], [0, 1]]}"#, 7, "A is 1x1 but B is 2x2"),
        (r#"{"A": [[1, 0], [0, 1]], "B": [[1, 0], [0, 1]], "kappa": "exchange"}"#, 7, "1x1"),
        (r#"{"A": [[0, 1], [0, 0]], "B": [[0, 1], [0, 0]]}"#, 7, "no tiles"),
        (r#"{"A": [[1]], "B": [[1]], "kappa": "shuffle"}"#, 4, "kappa must be"),
        (r#"{"A": [[1]], "B": [[1]], "kappa": [{"alpha": "1,1,1", "b": "(1,1,1)", "a": "(1,1,1)", "beta": "(1,1,1)"}]}"#, 4, "malformed edge"),
        (r#"{"A": [[1]], "B": [[1]], "C": 0}"#, 4, "unknown field"),
        ("{\"A\":", 4, "parse error"),
    ];
    for (input, expect, message) in cases {
        let out = textile_stdin(&["check", "-"], input);
        assert_eq!(code(&out), expect, "{input}: {}", stderr(&out));
        assert!(stderr(&out).contains(message), "{input}: {}", stderr(&out));
    }
}

#[test]
fn io_and_usage_errors() {
    assert_eq!(code(&textile(&["check", "/definitely/not/here.json"])), 3);
    assert_eq!(code(&textile(&[])), 2);
    assert_eq!(code(&textile(&["check", "--max-steps", "many"])), 2);
    assert_eq!(code(&textile(&["sweep", "3"])), 2);
    assert_eq!(code(&textile(&["--help"])), 0);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let path = fixture("exchange_2_3.json");
    for args in [
        vec!["check", path.to_str().unwrap(), "--emit-matrices"],
        vec!["check", path.to_str().unwrap(), "--pretty"],
        vec!["sweep", "4", "7"],
        vec!["corpus", "--seed", "7", "--count", "4"],
    ] {
        let (a, b) = (textile(&args), textile(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn emitted_matrices() {
    let r = json(&textile(&["check", fixture("exchange_2_3.json").to_str().unwrap(), "--emit-matrices"]));
    let h = r["matrices"]["h_kappa"].as_array().unwrap();
    assert_eq!(h.len(), 12);
    // A_κ = E_2 ⊗ I_3
    assert_eq!(r["matrices"]["a_kappa"][0], serde_json::json!([1, 0, 0, 1, 0, 0]));
    assert_eq!(r["matrices"]["omega"][1], serde_json::json!(["(1,1,1)", "(1,1,2)"]));
}

#[test]
fn two_row_sweep() {
    let out = textile(&["sweep", "2", "20"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 19);
    for row in rows {
        let m = row["m"].as_u64().unwrap();
        assert_eq!(row["snf"], format!("Z/{}Z", m * m - 1));
        assert_eq!(row["agree"], true);
    }
    assert_eq!(rows[1]["closed_form"], "Z/8Z");
    assert_eq!(r["all_agree"]["holds"], true);
}

#[test]
fn sweep_to_ten() {
    let out = textile(&["sweep", "10", "10"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["rows"].as_array().unwrap().len(), 45);
    assert_eq!(r["all_agree"]["holds"], true);
}

#[test]
fn closedform_command() {
    let out = textile(&["closedform", "3", "6"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["formula"]["summands"], serde_json::json!([2, 2, 2, 2, 5, 1, 80]));
    assert_eq!(r["formula"]["g"], 40);
    assert_eq!(r["agrees"]["holds"], true);

    let out = textile(&["closedform", "4", "3"]);
    assert_eq!(code(&out), 7);
    assert!(stderr(&out).contains("N <= M"), "{}", stderr(&out));
}

#[test]
fn witness_command() {
    let path = fixture("exchange_2_3.json");
    let out = textile(&["witness", "1", "(1,1,2),(1,1,3),(1,1,3),(1,1,2)", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = json(&out);
    let w = &r["staircase"]["witness"];
    assert_eq!(w["verified"], true);
    let end = w["end_position"].as_array().unwrap();
    assert!(end[0].as_i64().unwrap() > 0 && end[1].as_i64().unwrap() < 0);
    assert_eq!(r["to"]["index"], 6);

    let out = textile(&["witness", "1", "2", fixture("identity2.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["staircase"]["counterexample"]["no_staircase_within"], 4);

    let out = textile(&["witness", "1", "9", path.to_str().unwrap()]);
    assert_eq!(code(&out), 7);
    let out = textile(&["witness", "1", "(1,1,1),(1,1,2),(1,1,3),(1,1,1)", path.to_str().unwrap()]);
    assert_eq!(code(&out), 7, "{}", stderr(&out));
    let out = textile(&["witness", "1", "(1,1,1)", path.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
}

#[test]
fn transitivity_is_reported_not_required() {
    let path = fixture("exchange_2_3.json");
    let out = textile(&["check", path.to_str().unwrap(), "--max-steps", "1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["checks"]["transitive"]["holds"], false);
    assert_eq!(r["checks"]["transitive"]["counterexample"]["max_steps"], 1);
}

#[test]
fn tiles_command() {
    let r = json(&textile(&["tiles", fixture("golden_identity.json").to_str().unwrap()]));
    assert_eq!(r["tiles"].as_array().unwrap().len(), 3);
    assert_eq!(r["omega"].as_array().unwrap().len(), 3);
    assert_eq!(r["tiles"][0]["index"], 1);
}

#[test]
fn pretty_text() {
    let out = textile(&["check", fixture("exchange_2_3.json").to_str().unwrap(), "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("k0                Z/8Z"), "{text}");
    assert!(text.contains("structural_ok  yes"), "{text}");
    let out = textile(&["sweep", "3", "3", "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Z/2Z + Z/2Z + Z/2Z + Z/10Z"), "{text}");
}

#[test]
fn seeded_corpus() {
    let out = textile(&["corpus", "--seed", "11", "--count", "6"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = json(&out);
    let systems = r["systems"].as_array().unwrap();
    assert_eq!(systems.iter().filter(|s| s["name"].as_str().unwrap().starts_with("seeded-")).count(), 6);
    assert!(systems.iter().all(|s| s["structural_ok"] == true));
    assert!(systems.iter().any(|s| s["transitive"] == false));
    let other = json(&textile(&["corpus", "--seed", "12", "--count", "6"]));
    assert_ne!(r["systems"], other["systems"]);
}
