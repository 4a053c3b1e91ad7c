use std::collections::BTreeMap;

use super::model::{escape_literal, xsd, Graph, NodeRef};

/// Pretty Turtle. Prefixes sorted by name, subjects and predicates sorted by
/// their N-Triples form, objects of one predicate joined with `,`.
pub fn to_turtle(graph: &Graph) -> String {
    let prefixes = graph.prefixes();
    let mut out = String::new();
    for (prefix, ns) in prefixes {
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }

    let mut subjects: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for t in graph.iter() {
        subjects
            .entry(t.subject.to_ntriples())
            .or_default()
            .entry(t.predicate.to_ntriples())
            .or_default()
            .push(compact(&t.object, prefixes));
    }
    let rdf_type = NodeRef::iri(format!("{}type", super::model::RDF)).to_ntriples();

    for (subject, predicates) in &subjects {
        out.push('\n');
        out.push_str(&compact_term(subject, prefixes));
        let count = predicates.len();
        for (i, (predicate, objects)) in predicates.iter().enumerate() {
            let mut objects = objects.clone();
            objects.sort();
            let pred = if *predicate == rdf_type { "a".to_string() } else { compact_term(predicate, prefixes) };
            let sep = if i == 0 { " " } else { "    " };
            let end = if i + 1 == count { " .\n" } else { " ;\n" };
            out.push_str(&format!("{sep}{pred} {}{end}", objects.join(", ")));
        }
    }
    out
}

fn compact_term(ntriples_iri: &str, prefixes: &BTreeMap<String, String>) -> String {
    let iri = &ntriples_iri[1..ntriples_iri.len() - 1];
    compact_iri(iri, prefixes)
}

fn compact(node: &NodeRef, prefixes: &BTreeMap<String, String>) -> String {
    match node {
        NodeRef::Iri(iri) => compact_iri(iri, prefixes),
        NodeRef::Literal(l) => {
            let mut s = format!("\"{}\"", escape_literal(&l.lexical));
            if let Some(lang) = &l.language {
                s.push('@');
                s.push_str(lang);
            } else if l.datatype != xsd("string") {
                s.push_str("^^");
                s.push_str(&compact_iri(&l.datatype, prefixes));
            }
            s
        }
    }
}

/// Uses the longest matching namespace whose remainder is a safe local name.
fn compact_iri(iri: &str, prefixes: &BTreeMap<String, String>) -> String {
    let best = prefixes
        .iter()
        .filter_map(|(p, ns)| iri.strip_prefix(ns.as_str()).map(|local| (p, ns.len(), local)))
        .filter(|(_, _, local)| is_safe_local(local))
        .max_by_key(|(_, len, _)| *len);
    match best {
        Some((p, _, local)) => format!("{p}:{local}"),
        None => format!("<{iri}>"),
    }
}

fn is_safe_local(local: &str) -> bool {
    !local.is_empty()
        && !local.starts_with('-')
        && local.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}
