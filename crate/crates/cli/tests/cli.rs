mod common;

use common::{cpskg, ex, model, write};

const RDF_NIL: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#nil>";
const RDF_REST: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#rest>";

fn golden() -> String {
    std::fs::read_to_string(model("golden.nt")).unwrap()
}

#[test]
fn om2rdf_writes_turtle_and_ntriples() {
    let eq1 = model("eq1.xml");
    let ttl = cpskg(["om2rdf", "--in", eq1.to_str().unwrap(), "--id", "eq1"]);
    assert_eq!(ttl.code, 0, "{}", ttl.stderr);
    assert!(ttl.stdout.contains("@prefix om: <http://openmath.org/vocab/math#> ."));
    assert!(ttl.stdout.contains("<http://www.openmath.org/cd/relation1#eq>"));

    let nt = cpskg(["om2rdf", "--in", eq1.to_str().unwrap(), "--format", "ntriples", "--base", "http://e.org/x"]);
    assert_eq!(nt.code, 0);
    assert!(nt.stdout.lines().all(|l| l.ends_with(" .")));
    // the equation id defaults to the file stem
    assert!(nt.stdout.contains("<http://e.org/x/expr/eq1/object>"));
}

#[test]
fn om2rdf_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = cpskg(["om2rdf", "--in", dir.path().join("nope.xml").to_str().unwrap()]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("nope.xml"));

    let bad = write(dir.path(), "bad.xml", "<OMOBJ><OMA><OMS cd=\"arith1\" name=\"plus\"/>");
    let r = cpskg(["om2rdf", "--in", bad.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.is_empty());
}

#[test]
fn om2rdf_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eq.ttl");
    let r = cpskg(["om2rdf", "--in", model("eq1.xml").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().contains("om:Application"));
}

#[test]
fn rdf2om_recovers_the_source_tree() {
    let dir = tempfile::tempdir().unwrap();
    let r = cpskg(["rdf2om", "--in", model("golden.nt").to_str().unwrap(), "--root", &ex("expr/eq1/object")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let back = write(dir.path(), "back.xml", &r.stdout);
    // re-map the recovered XML and compare the expression subgraph
    let a = cpskg(["om2rdf", "--in", model("eq1.xml").to_str().unwrap(), "--format", "ntriples"]);
    let b = cpskg(["om2rdf", "--in", back.to_str().unwrap(), "--id", "eq1", "--format", "ntriples"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn rdf2om_errors() {
    let golden = model("golden.nt");
    let unknown = cpskg(["rdf2om", "--in", golden.to_str().unwrap(), "--root", "http://example.org/nothing"]);
    assert_eq!(unknown.code, 1);
    assert!(unknown.stderr.contains("http://example.org/nothing"));

    // close the argument list of a small equation back onto itself
    let dir = tempfile::tempdir().unwrap();
    let xml = write(dir.path(), "f.xml", "<OMOBJ><OMA><OMS cd=\"transc1\" name=\"sin\"/><OMV name=\"x\"/></OMA></OMOBJ>");
    let nt = cpskg(["om2rdf", "--in", xml.to_str().unwrap(), "--format", "ntriples", "--base", "http://e.org"]).stdout;
    let last = nt.lines().find(|l| l.contains(RDF_REST) && l.contains(RDF_NIL)).unwrap();
    let cell = last.split(' ').next().unwrap();
    let cyclic = nt.replace(last, &last.replace(RDF_NIL, cell));
    let path = write(dir.path(), "cyclic.nt", &cyclic);
    let r = cpskg(["rdf2om", "--in", path.to_str().unwrap(), "--root", "http://e.org/expr/f/object"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("MalformedList"), "{}", r.stderr);

    let broken = write(dir.path(), "broken.nt", "<http://e.org/a> <http://e.org/b> .\n");
    assert_eq!(cpskg(["rdf2om", "--in", broken.to_str().unwrap(), "--root", "http://e.org/a"]).code, 1);
}

#[test]
fn build_reproduces_golden() {
    let r = cpskg(["build", "--manifest", model("manifest.json").to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, golden());

    let ttl = cpskg(["build", "--manifest", model("manifest.json").to_str().unwrap(), "--format", "turtle"]);
    assert_eq!(ttl.stdout, std::fs::read_to_string(model("golden.ttl")).unwrap());
}

#[test]
fn build_check_only_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.nt");
    let r = cpskg([
        "build",
        "--manifest",
        model("manifest.json").to_str().unwrap(),
        "--check-only",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    assert!(!out.exists());
}

#[test]
fn build_reports_dangling_reference_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(model("manifest.json")).unwrap();
    let broken = text.replacen("\"resource\": \"Accumulator\"", "\"resource\": \"Reservoir\"", 1);
    assert_ne!(broken, text, "fixture changed shape");
    // the OpenMath file is resolved relative to the manifest
    std::fs::copy(model("eq1.xml"), dir.path().join("eq1.xml")).unwrap();
    let path = write(dir.path(), "manifest.json", &broken);
    for extra in [&[][..], &["--check-only"][..]] {
        let mut args = vec!["build", "--manifest", path.to_str().unwrap()];
        args.extend_from_slice(extra);
        let r = cpskg(args);
        assert_eq!(r.code, 1);
        assert!(r.stdout.is_empty());
        assert!(r.stderr.contains("processes[") && r.stderr.contains("].resource"), "{}", r.stderr);
        assert!(r.stderr.contains("Reservoir"));
    }
}

#[test]
fn build_missing_manifest_is_io_error() {
    assert_eq!(cpskg(["build", "--manifest", "/nonexistent/manifest.json"]).code, 2);
}

#[test]
fn validate_golden_is_clean() {
    let r = cpskg(["validate", "--in", model("golden.nt").to_str().unwrap(), "--strict"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("0 error(s), 0 warning(s)"));
}

#[test]
fn validate_exit_codes_follow_severity() {
    let dir = tempfile::tempdir().unwrap();
    let g = golden();
    let drop_line = |needle: &[&str]| -> String {
        let hit: Vec<&str> = g.lines().filter(|l| needle.iter().all(|n| l.contains(n))).collect();
        assert_eq!(hit.len(), 1, "{needle:?}");
        g.replace(&format!("{}\n", hit[0]), "")
    };

    // V6 is an error: the data element loses its type description
    let v6 = write(dir.path(), "v6.nt", &drop_line(&["<http://example.org/ehsa/Q1_DE>", "hasTypeDescription"]));
    let r = cpskg(["validate", "--in", v6.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.lines().count(), 1);
    assert!(r.stdout.starts_with("error V6 <http://example.org/ehsa/Q1_DE>"), "{}", r.stdout);

    // V3 is a warning: fine unless strict
    let v3 = write(dir.path(), "v3.nt", &drop_line(&["<http://example.org/ehsa/PressureStabilization>", "isAssignedTo"]));
    let lax = cpskg(["validate", "--in", v3.to_str().unwrap()]);
    assert_eq!(lax.code, 0);
    assert!(lax.stdout.starts_with("warning V3"), "{}", lax.stdout);
    assert_eq!(cpskg(["validate", "--in", v3.to_str().unwrap(), "--strict"]).code, 1);

    let json = cpskg(["validate", "--in", v3.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(json.stdout.trim()).unwrap();
    assert_eq!(v["rule"], "V3");
    assert_eq!(v["severity"], "warning");
}

#[test]
fn validate_rejects_unparseable_graph() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "x.nt", "not a triple\n");
    assert_eq!(cpskg(["validate", "--in", p.to_str().unwrap()]).code, 1);
}

#[test]
fn query_operator_assignments() {
    let r = cpskg(["query", "--in", model("golden.nt").to_str().unwrap(), "--pattern", "?op vdi3682:isAssignedTo ?res"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let want = [
        ("HydraulicControl", "EHSV"),
        ("LinearMotionExecution", "ActuatorMainRam"),
        ("PressureStabilization", "Accumulator"),
    ]
    .iter()
    .map(|(o, res)| format!("{}\t{}\n", ex(o), ex(res)))
    .collect::<String>();
    assert_eq!(r.stdout, want);
}

#[test]
fn query_edge_cases() {
    let golden = model("golden.nt");
    let g = golden.to_str().unwrap();
    let none = cpskg(["query", "--in", g, "--pattern", "?x vdi3682:isAssignedTo ex:Nothing", "--prefix", &format!("ex={}/", common::BASE)]);
    assert_eq!(none.code, 0, "{}", none.stderr);
    assert!(none.stdout.is_empty());

    let malformed = cpskg(["query", "--in", g, "--pattern", "?op vdi3682:isAssignedTo"]);
    assert_eq!(malformed.code, 1);
    let unknown_prefix = cpskg(["query", "--in", g, "--pattern", "?a nope:b ?c"]);
    assert_eq!(unknown_prefix.code, 1);
    assert_eq!(cpskg(["query", "--in", g, "--pattern", "?a ?b ?c", "--prefix", "broken"]).code, 1);

    // literals are printed in N-Triples form
    let lit = cpskg(["query", "--in", g, "--pattern", "?v om:name \"xR\""]);
    assert_eq!(lit.stdout.lines().count(), 2);
}

#[test]
fn export_lists_equations_and_data_elements() {
    let r = cpskg(["export", "--in", model("golden.nt").to_str().unwrap(), "--operator", &ex("LinearMotionExecution")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (equations, table) = r.stdout.split_once("\n\n").unwrap();
    assert_eq!(
        equations.lines().collect::<Vec<_>>(),
        [
            "partialdiff(p1, t) = beta*(Q1 - Qle1 - Qli - (xR_dot - xC_dot)*A)/(V0 + xR*A)",
            "partialdiff(p2, t) = beta*(Q2 - Qle2 + Qli + (xR_dot - xC_dot)*A)/(V0 - xR*A)",
        ]
    );
    let rows: Vec<Vec<&str>> = table.lines().map(|l| l.split('\t').collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 3 && r[1] != "-"));
    let beta = rows.iter().find(|r| r[0] == "beta").unwrap();
    assert_eq!(beta[1], ex("beta_DE"));
}

#[test]
fn export_operator_without_model() {
    let r = cpskg(["export", "--in", model("golden.nt").to_str().unwrap(), "--operator", &ex("HydraulicControl")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("no behavior model"));
}

#[test]
fn eval_continuity_equation() {
    let bindings = model("bindings.json");
    let from_xml = cpskg(["eval", "--in", model("eq1.xml").to_str().unwrap(), "--bindings", bindings.to_str().unwrap(), "--rhs"]);
    assert_eq!(from_xml.code, 0, "{}", from_xml.stderr);
    assert_eq!(from_xml.stdout, "0.15\n");

    let from_graph = cpskg([
        "eval",
        "--in",
        model("golden.nt").to_str().unwrap(),
        "--root",
        &ex("expr/eq1/object"),
        "--bindings",
        bindings.to_str().unwrap(),
        "--rhs",
    ]);
    assert_eq!(from_graph.stdout, "0.15\n");
}

#[test]
fn eval_errors() {
    let dir = tempfile::tempdir().unwrap();
    let partial = write(dir.path(), "b.json", r#"{"beta": 1.0, "Q1": {"value": 2.0, "unit": "m^3/s"}}"#);
    let r = cpskg(["eval", "--in", model("eq1.xml").to_str().unwrap(), "--bindings", partial.to_str().unwrap(), "--rhs"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("UnboundVariable"), "{}", r.stderr);

    // the left-hand side is a derivative
    let whole = cpskg(["eval", "--in", model("eq1.xml").to_str().unwrap(), "--bindings", model("bindings.json").to_str().unwrap()]);
    assert_eq!(whole.code, 1);
    assert!(whole.stderr.contains("UnsupportedOperator: weylalgebra1.partialdiff"), "{}", whole.stderr);

    let diff = write(
        dir.path(),
        "diff.xml",
        "<OMOBJ><OMA><OMS cd=\"calculus1\" name=\"diff\"/><OMV name=\"x\"/></OMA></OMOBJ>",
    );
    let r = cpskg(["eval", "--in", diff.to_str().unwrap(), "--bindings", partial.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("UnsupportedOperator"));

    let bad_json = write(dir.path(), "bad.json", "[1, 2]");
    assert_eq!(cpskg(["eval", "--in", diff.to_str().unwrap(), "--bindings", bad_json.to_str().unwrap()]).code, 1);
    assert_eq!(cpskg(["eval", "--in", diff.to_str().unwrap(), "--bindings", "/nonexistent.json"]).code, 2);
}

#[test]
fn config_overrides_namespaces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"namespaces": {"om": "http://e.org/om#"}}"#);
    let r = cpskg(["--config", cfg.to_str().unwrap(), "om2rdf", "--in", model("eq1.xml").to_str().unwrap(), "--format", "ntriples"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("<http://e.org/om#Application>"));
    assert!(!r.stdout.contains("openmath.org/vocab"));

    let bad = write(dir.path(), "bad.json", r#"{"namespace": {}}"#);
    assert_eq!(cpskg(["--config", bad.to_str().unwrap(), "om2rdf", "--in", model("eq1.xml").to_str().unwrap()]).code, 1);
}
