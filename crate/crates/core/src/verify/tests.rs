use super::*;

#[test]
fn suite_table() {
    let names: Vec<&str> = list_suites().iter().map(|s| s.name).collect();
    assert_eq!(names.len(), 7);
    for n in &names {
        assert_eq!(find_suite(n).unwrap().name, *n);
    }
    let err = find_suite("kca").unwrap_err();
    assert!(matches!(err, ConfigError::UnknownSuite { ref nearest, .. } if nearest == "kac"));
    assert!(err.to_string().contains("did you mean"));
}

#[test]
fn coverage_ids_are_declared() {
    for (_, _, suite, check) in COVERAGE {
        let info = find_suite(suite).unwrap();
        assert!(info.checks.contains(check), "{suite}/{check}");
    }
}

#[test]
fn config_validation() {
    let mut cfg = SuiteConfig::new("map-bracket");
    cfg.n = vec![MAX_N + 1];
    assert!(matches!(cfg.validate(), Err(ConfigError::NOutOfRange(_))));
    let mut cfg = SuiteConfig::new("map-bracket");
    cfg.coeffs = vec!["trunc:x".into()];
    assert!(matches!(cfg.validate(), Err(ConfigError::BadCoeff(..))));
    let mut cfg = SuiteConfig::new("twisted");
    cfg.actions = vec![ActionSpec::new("nope", "Z2", "identity")];
    assert!(matches!(cfg.validate(), Err(ConfigError::UnknownAction(_))));
    let parsed: SuiteConfig = serde_json::from_str(r#"{"suite":"kac","families":["W"],"n":[2],"coeffs":["field"]}"#).unwrap();
    assert_eq!(parsed.families, vec![Family::W]);
    assert_eq!(parsed.seed, 7);
    assert!(serde_json::from_str::<SuiteConfig>(r#"{"suite":"kac","bogus":1}"#).is_err());
}

#[test]
fn reports_are_deterministic() {
    let mut cfg = SuiteConfig::new("map-bracket");
    cfg.families = vec![Family::W];
    cfg.n = vec![2];
    cfg.coeffs = vec!["points:2,3".into(), "trunc:2".into()];
    let a = run_suite(&cfg).unwrap();
    let b = run_suite(&cfg).unwrap();
    assert_eq!(a.body_json(), b.body_json());
    assert!(!a.failed(), "{}", a.to_text());
    for id in maps::BRACKET_CHECKS {
        assert!(a.records_for(id).next().is_some(), "{id}");
    }
}

#[test]
fn literal_fixpoint_oracle_on_a_reducible_module() {
    use crate::cartan::build_family;
    use crate::linalg::Subspace;
    use crate::repsuper::{tensor_modules, SuperModule};
    let w2 = build_family(Family::W, 2).unwrap();
    let ad = SuperModule::adjoint(w2.clone()).unwrap();
    let t = tensor_modules(&SuperModule::trivial(w2), &ad).unwrap();
    let full = Subspace::full(t.dim());
    assert!(kac::literal_fixpoint(&t, &full).is_full());
    let line = Subspace::coordinate(t.dim(), [0]);
    assert!(kac::literal_fixpoint(&t, &line).dim() <= 1);
}
