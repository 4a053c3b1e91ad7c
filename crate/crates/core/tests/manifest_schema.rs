mod support;

use cpskg::cps::{check_manifest, CpsManifest};
use cpskg::vocab::Config;
use serde_json::{json, Value};

fn schema() -> jsonschema::Validator {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/manifest.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn shipped() -> Value {
    serde_json::from_str(&std::fs::read_to_string(support::ehsa::manifest_path()).unwrap()).unwrap()
}

fn errors(v: &Value) -> Vec<String> {
    schema().iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect()
}

#[test]
fn shipped_manifest_matches_schema() {
    assert_eq!(errors(&shipped()), Vec::<String>::new());
}

#[test]
fn schema_and_loader_reject_the_same_shapes() {
    let mut unknown_key = shipped();
    unknown_key["processes"][0]["colour"] = json!("red");
    let mut bad_level = shipped();
    bad_level["structure"]["level"] = json!("Subsystem");
    let mut no_base = shipped();
    no_base.as_object_mut().unwrap().remove("instanceBase");
    let mut both_sources = shipped();
    both_sources["processes"][0]["operators"][0]["equations"] = json!([{"infix": "y = x", "openmath": "eq1.xml"}]);
    let mut spaced_id = shipped();
    spaced_id["lifecycleRecord"]["id"] = json!("two words");

    for (name, v) in [
        ("unknown key", unknown_key),
        ("bad level", bad_level),
        ("no base", no_base),
        ("both sources", both_sources),
        ("spaced id", spaced_id),
    ] {
        assert!(!errors(&v).is_empty(), "{name}: schema accepted it");
        let rejected = match CpsManifest::from_json(&v.to_string()) {
            Err(_) => true,
            Ok(m) => check_manifest(&m, &support::ehsa::model_dir(), &Config::default()).is_err(),
        };
        assert!(rejected, "{name}: loader accepted it");
    }
}
