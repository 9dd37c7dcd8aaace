use std::process::{Command, Output};

use serde_json::Value;

fn bblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bblab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn verify_all_passes() {
    let o = bblab(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v = json_stdout(&o);
    let reports = v.as_array().unwrap();
    assert!(reports.len() >= 12);
    let ids: std::collections::BTreeSet<&str> = reports.iter().map(|r| r["check"].as_str().unwrap()).collect();
    for id in [
        "k3-quotient",
        "torus-quotient",
        "nikulin",
        "h4-gram",
        "h4-invariant",
        "k-tilde",
        "adf-parity",
        "h2-primitivity",
        "fujiki-constant",
        "final-lattice",
        "smith-dims",
        "betti-euler",
    ] {
        assert!(ids.contains(id), "missing {id}");
    }
    for r in reports {
        assert_eq!(r["status"], "pass", "{r}");
        assert!(["PAPER", "TRIVIAL", "DERIVED"].contains(&r["provenance"].as_str().unwrap()));
        assert_eq!(r["expected"], r["actual"]);
    }
}

#[test]
fn verify_single_check_and_markdown() {
    let o = bblab(&["verify", "--checks", "final-lattice"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_stdout(&o);
    assert!(v.as_array().unwrap().iter().all(|r| r["check"] == "final-lattice"));
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["anchor"].as_str().unwrap().contains("E8(-1)+U(2)^3+<-2>^2")));

    let md = bblab(&["verify", "--checks", "nikulin,smith-dims", "--format", "md"]);
    assert_eq!(md.status.code(), Some(0));
    let text = String::from_utf8(md.stdout).unwrap();
    assert!(text.starts_with("| check | anchor |"));
    assert!(text.contains("| smith-dims |"));
}

#[test]
fn verify_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = bblab(&["verify", "--checks", "betti-euler", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn unknown_ids_are_usage_errors() {
    assert_eq!(bblab(&["verify", "--checks", "bogus-id"]).status.code(), Some(2));
    assert_eq!(bblab(&["lattice", "show", "D4"]).status.code(), Some(2));
    assert_eq!(bblab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bblab(&["h4", "class", "tau"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = bblab(&["verify", "--checks", "k3-quotient,h4-invariant"]);
    let b = bblab(&["verify", "--checks", "k3-quotient,h4-invariant"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn lattice_show_catalog() {
    let nik = json_stdout(&bblab(&["lattice", "show", "Nikulin"]));
    assert_eq!(nik["det"], 64);
    assert_eq!(nik["presentation"]["generators"].as_array().unwrap().len(), 9);
    assert_eq!(nik["presentation"]["glue"][0][0], "1/2");

    let e8 = json_stdout(&bblab(&["lattice", "show", "E8"]));
    assert_eq!(e8["gram"][0][0], 4);
    assert_eq!(e8["det"], 1);

    for name in ["U", "E8(-1)", "K3", "K3Hilb2"] {
        let o = bblab(&["lattice", "show", name, "--format", "md"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
    }
}

#[test]
fn h4_gram_and_classes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gram.json");
    let o = bblab(&["h4", "gram", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let gram = v["gram"].as_array().unwrap();
    assert_eq!(gram.len(), 276);
    assert_eq!(gram[0][0], 1);
    assert_eq!(v["basis"][0], "pt");

    let sigma = json_stdout(&bblab(&["h4", "class", "sigma"]));
    assert_eq!(sigma["coords"].as_array().unwrap().len(), 276);
    assert_eq!(sigma["nonzero"]["pt"], 1);
    let d2 = json_stdout(&bblab(&["h4", "class", "delta2"]));
    assert_eq!(d2["coords"][0], -1);
}
