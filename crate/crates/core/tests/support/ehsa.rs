//! The shipped EHSA model and single-triple mutations of its golden graph.

#![allow(dead_code)]

use std::path::PathBuf;

use cpskg::cps::{compile_manifest, CpsManifest};
use cpskg::rdf::{rdf_rest, Graph, NodeRef, Triple};
use cpskg::validate::Rule;
use cpskg::vocab::{Config, Namespaces};

pub const BASE: &str = "http://example.org/ehsa";

pub fn model_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models/ehsa")
}

pub fn manifest_path() -> PathBuf {
    model_dir().join("manifest.json")
}

pub fn golden_ntriples() -> String {
    std::fs::read_to_string(model_dir().join("golden.nt")).expect("golden.nt")
}

pub fn golden_turtle() -> String {
    std::fs::read_to_string(model_dir().join("golden.ttl")).expect("golden.ttl")
}

pub fn build() -> Graph {
    let text = std::fs::read_to_string(manifest_path()).expect("manifest");
    let manifest = CpsManifest::from_json(&text).expect("manifest parses");
    compile_manifest(&manifest, &model_dir(), &Config::default()).expect("manifest compiles")
}

pub fn ex(local: &str) -> NodeRef {
    NodeRef::iri(format!("{BASE}/{local}"))
}

/// A mutated graph, the rule it should trip and the node it should name.
pub struct Mutation {
    pub rule: Rule,
    pub graph: Graph,
    pub node: NodeRef,
}

fn without(graph: &Graph, t: &Triple) -> Graph {
    let mut g = graph.clone();
    assert!(g.remove(t), "mutation target {t} missing");
    g
}

fn single(graph: &Graph, s: &NodeRef, p: &NodeRef) -> Triple {
    let o = graph.object(s, p).unwrap_or_else(|| panic!("{s} {p} should have one value")).clone();
    Triple::new(s.clone(), p.clone(), o)
}

/// One mutation per rule V1..V7; V7 is a replacement, all others removals.
pub fn mutations(golden: &Graph, ns: &Namespaces) -> Vec<Mutation> {
    let eq1_root = ex("expr/eq1/n0");
    let args = golden.object(&eq1_root, &ns.om("arguments")).expect("eq1 arguments").clone();
    let pressure = ex("PressureStabilization");
    let x_r = golden
        .subjects(&ns.om("name"), &NodeRef::string("xR"))
        .find(|v| v.as_iri().is_some_and(|s| s.contains("/expr/eq1/")))
        .expect("xR in eq1")
        .clone();

    let op = single(golden, &eq1_root, &ns.om("operator"));
    let mut v7 = without(golden, &op);
    v7.insert(Triple::new(eq1_root.clone(), ns.om("operator"), ns.symbol_iri("hydraulics1", "eq"))).unwrap();

    vec![
        Mutation { rule: Rule::V1, graph: without(golden, &single(golden, &args, &rdf_rest())), node: args.clone() },
        Mutation { rule: Rule::V2, graph: without(golden, &op), node: eq1_root.clone() },
        Mutation {
            rule: Rule::V3,
            graph: without(golden, &single(golden, &pressure, &ns.vdi3682("isAssignedTo"))),
            node: pressure.clone(),
        },
        Mutation {
            rule: Rule::V4,
            graph: without(golden, &single(golden, &x_r, &ns.cpsmod("isDataFor"))),
            node: x_r,
        },
        Mutation {
            rule: Rule::V5,
            graph: without(golden, &single(golden, &pressure, &ns.vdi3682("hasInput"))),
            node: pressure,
        },
        Mutation {
            rule: Rule::V6,
            graph: without(golden, &single(golden, &ex("Q1_DE"), &ns.dinen61360("hasTypeDescription"))),
            node: ex("Q1_DE"),
        },
        Mutation { rule: Rule::V7, graph: v7, node: eq1_root },
    ]
}
