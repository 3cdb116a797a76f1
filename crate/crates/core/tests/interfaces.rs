use std::process::Command;
use std::sync::Arc;

use serde_json::Value;
use supercartan::cartan::{build_family, Family};
use supercartan::coeffalg::{build_coeff_algebra, Presentation};
use supercartan::linalg::Scalar;
use supercartan::mapalg::tensor_algebra;
use supercartan::repsuper::{is_irreducible, ModuleSpec};

fn run(bin: &str, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn constant(dump: &Value, i: usize, j: usize, k: usize) -> Option<String> {
    dump["structure_constants"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t[0] == i && t[1] == j && t[2] == k)
        .map(|t| t[3].as_str().unwrap().to_string())
}

#[test]
fn algebra_dump_w2() {
    let (code, out, _) = run(env!("CARGO_BIN_EXE_algebra"), &["dump", "--family", "W", "--n", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let d: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(d["dim"], 8);
    let labels: Vec<&str> = d["labels"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    let at = |l: &str| labels.iter().position(|x| *x == l).unwrap();
    assert_eq!(d["parities"][at("d1")], 1);
    assert_eq!(d["degrees"][at("xi1*xi2*d2")], 1);
    // [∂₁, ξ₁∂₁] = ∂₁ and [ξ₁∂₂, ξ₂∂₁] = ξ₁∂₁ − ξ₂∂₂ by hand
    assert_eq!(constant(&d, at("d1"), at("xi1*d1"), at("d1")).as_deref(), Some("1"));
    assert_eq!(constant(&d, at("xi1*d2"), at("xi2*d1"), at("xi1*d1")).as_deref(), Some("1"));
    assert_eq!(constant(&d, at("xi1*d2"), at("xi2*d1"), at("xi2*d2")).as_deref(), Some("-1"));
    assert_eq!(constant(&d, at("d1"), at("d1"), at("d1")), None);
    for t in d["structure_constants"].as_array().unwrap() {
        let c: Scalar = t[3].as_str().unwrap().parse().unwrap();
        assert!(!c.is_zero());
    }
}

#[test]
fn algebra_dump_rejects_unsupported_n() {
    let (code, _, err) = run(env!("CARGO_BIN_EXE_algebra"), &["dump", "--family", "S", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

/// Natural gl(2)-module with ξᵢ∂ⱼ acting as the matrix unit E_ij.
fn natural_w2_spec(labels: &[String]) -> String {
    let action: Vec<Value> = labels
        .iter()
        .map(|l| {
            let i = l.as_bytes()[2] - b'1';
            let j = l.as_bytes()[l.len() - 1] - b'1';
            serde_json::json!([[i, j, "1"]])
        })
        .collect();
    serde_json::json!({ "dim": 2, "action": action }).to_string()
}

#[test]
fn kac_with_natural_v() {
    let kac = env!("CARGO_BIN_EXE_kac");
    let (code, out, _) = run(kac, &["--family", "W", "--n", "2", "--basis"]);
    assert_eq!(code, 0);
    let labels: Vec<String> = out.lines().map(|l| l.split_whitespace().nth(1).unwrap().to_string()).collect();
    assert_eq!(labels.len(), 4);
    let dir = std::env::temp_dir().join(format!("kac-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    std::fs::write(&spec, natural_w2_spec(&labels)).unwrap();
    let emit = dir.join("module.json");
    let (code, _, err) =
        run(kac, &["--family", "W", "--n", "2", "--v", spec.to_str().unwrap(), "--emit", emit.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let k: Value = serde_json::from_str(&std::fs::read_to_string(&emit).unwrap()).unwrap();
    assert_eq!(k["dim"], 8);
    let grades = k["grades"].as_array().unwrap();
    assert_eq!(grades.iter().filter(|g| **g == 0).count(), 2);

    let (code, _, err) = run(
        kac,
        &["--family", "W", "--n", "2", "--v", spec.to_str().unwrap(), "--emit", emit.to_str().unwrap(), "--quotient"],
    );
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&emit).unwrap();
    let l: ModuleSpec = serde_json::from_str(&text).unwrap();
    let g = build_family(Family::W, 2).unwrap();
    let ga = tensor_algebra(g, Arc::new(build_coeff_algebra(&Presentation::Field).unwrap())).unwrap();
    let m = l.build(ga.flat().clone()).unwrap();
    assert!(is_irreducible(&m).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn kac_rejects_bad_spec() {
    let kac = env!("CARGO_BIN_EXE_kac");
    let dir = std::env::temp_dir().join(format!("kac-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    std::fs::write(&spec, r#"{"dim": 1, "action": [[[0,0,"1"]], [], [], []]}"#).unwrap();
    let (code, _, err) = run(kac, &["--family", "W", "--n", "2", "--v", spec.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("representation law") || err.contains("pair"), "{err}");
    std::fs::remove_dir_all(&dir).ok();
}
