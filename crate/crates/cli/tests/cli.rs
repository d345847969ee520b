use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value, String) {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_lattice-irr")).args(args).output().expect("binary runs");
    let doc: Value = serde_json::from_slice(&stdout).expect("stdout is one JSON document");
    (status.code().unwrap_or(-1), doc, String::from_utf8(stderr).unwrap())
}

#[test]
fn lattice_hyperbolic_plane() {
    let (code, doc, _) = run(&["lattice", "U"]);
    assert_eq!(code, 0);
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["payload"]["signature"]["positive"], 1);
    assert_eq!(doc["payload"]["signature"]["negative"], 1);
    assert_eq!(doc["payload"]["disc"], -1);
}

#[test]
fn lattice_q_ad() {
    let (code, doc, _) = run(&["lattice", "Q_ad", "--a", "1", "--d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["gram"], serde_json::json!([[2, -1], [-1, 2]]));
}

#[test]
fn lattice_rejects_asymmetric_file() {
    let dir = std::env::temp_dir().join(format!("lattice-irr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{"name": "bad", "rank": 2, "gram": [[2, 1], [0, 2]]}"#).unwrap();
    let (code, doc, stderr) = run(&["lattice", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "error");
    let line: Value = serde_json::from_str(stderr.lines().next().unwrap()).unwrap();
    assert_eq!(line["kind"], "shape_mismatch");
}

#[test]
fn embed_lemmas() {
    let (code, doc, _) = run(&["embed", "qad-e8", "--a", "2", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["verification"]["primitive"], true);
    assert_eq!(doc["payload"]["involution_ok"], true);
    assert!(doc["payload"]["involution"].is_array());

    let (code, doc, _) = run(&["embed", "qad-a1", "--a", "4", "--d", "4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["saturation_index"], 2);

    let (code, doc, _) = run(&["embed", "qad-e8", "--a", "4", "--d", "4"]);
    assert_eq!(code, 1);
    assert_eq!(doc["payload"]["error"], "bad_params");
}

#[test]
fn embed_odd_d_notes_alternate_coset() {
    let (code, doc, _) = run(&["embed", "qad-e8", "--a", "1", "--d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["glue_coset"], "alternate");
    assert_eq!(doc["diagnostics"][0]["message"], "alternate E8 glue coset used");
}

#[test]
fn embed_search() {
    let (code, doc, _) = run(&["embed", "search", "--source", "A1(-1)", "--target", "E8(-1)"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"]["verification"]["gram_ok"], true);
}

#[test]
fn bound_empty_moduli_is_ok() {
    let (code, doc, stderr) = run(&["bound", "--family", "og10", "--d", "7", "--gamma", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"], serde_json::json!([]));
    assert!(stderr.contains("empty_moduli"));
}

#[test]
fn bound_k3n_gamma_two() {
    let (code, doc, _) = run(&["bound", "--family", "k3n", "--n", "3", "--d", "2", "--gamma", "2"]);
    assert_eq!(code, 0);
    let r = &doc["payload"][0];
    assert_eq!(r["final_exp"], "16");
    assert_eq!(r["eps"], false);
    assert_eq!(r["constant"], "C");
}

#[test]
fn bound_abelian_product_form() {
    let (code, doc, _) = run(&["bound", "--family", "ab", "--d", "12"]);
    assert_eq!(code, 0);
    let r = &doc["payload"][0];
    assert_eq!(r["d_exp"], "2+ε");
    assert_eq!(r["k_exp"], "6+ε");
    assert_eq!(r["k"], 3);
}

#[test]
fn bound_report_key_order() {
    let out = Command::new(env!("CARGO_BIN_EXE_lattice-irr"))
        .args(["bound", "--family", "og6", "--d", "7", "--gamma", "2"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = ["\"family\"", "\"n\"", "\"d\"", "\"gamma\"", "\"component\"", "\"m_prime\"", "\"disc\"", "\"ell\"", "\"aut\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
}

#[test]
fn bound_k3_series() {
    let (code, doc, _) = run(&["bound", "--family", "k3", "--d", "7", "--series", "a1^4"]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"][0]["final_exp"], "12");
    assert_eq!(doc["payload"][0]["eps"], true);
    let (code, _, _) = run(&["bound", "--family", "k3", "--d", "7", "--series", "a1^3"]);
    assert_eq!(code, 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["bound", "--family", "kumn", "--n", "2", "--d", "6", "--gamma", "3"];
    let a = Command::new(env!("CARGO_BIN_EXE_lattice-irr")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_lattice-irr")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_counts_passes() {
    let (code, doc, _) = run(&["verify", "counts", "--r-max", "2000"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["payload"]["passed"], true);
}

#[test]
fn verify_parallel_matches_serial() {
    let args = ["verify", "moduli", "--n-max", "4", "--d-max", "12"];
    let serial = Command::new(env!("CARGO_BIN_EXE_lattice-irr")).args(args).output().unwrap();
    let parallel = Command::new(env!("CARGO_BIN_EXE_lattice-irr")).args(args).args(["--parallel", "4"]).output().unwrap();
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn verify_reports_failed_property() {
    // The coprime-case sub-bound has small counterexamples (see the guide).
    let (code, doc, _) = run(&["verify", "discforms", "--disc-max", "40"]);
    assert_eq!(code, 2);
    let props = doc["payload"]["properties"].as_array().unwrap();
    let failed: Vec<&str> = props.iter().filter(|p| p["passed"] == false).map(|p| p["name"].as_str().unwrap()).collect();
    assert_eq!(failed, vec!["aut_coprime_subbound"]);
}

#[test]
fn unknown_suite_is_domain_error() {
    let (code, _, _) = run(&["verify", "nonsense"]);
    assert_eq!(code, 1);
}
