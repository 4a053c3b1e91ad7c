//! Independent checker for the tree-to-RDF mapping rules: walks a tree and
//! its RDF fragment side by side and reports the first disagreement.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cpskg::openmath::{parse_float, OmExpr};
use cpskg::rdf::{rdf_first, rdf_nil, rdf_rest, rdf_type, Graph, NodeRef, XSD};
use cpskg::vocab::Namespaces;

pub fn check_fragment(expr: &OmExpr, graph: &Graph, node: &NodeRef, ns: &Namespaces) -> Result<(), String> {
    let mut vars = BTreeMap::new();
    walk(expr, graph, node, ns, &mut vars)
}

fn one<'g>(graph: &'g Graph, s: &NodeRef, p: &NodeRef) -> Result<&'g NodeRef, String> {
    let all: Vec<&NodeRef> = graph.objects(s, p).collect();
    match all.as_slice() {
        [o] => Ok(o),
        _ => Err(format!("{s} has {} values for {p}", all.len())),
    }
}

fn only_type(graph: &Graph, node: &NodeRef, class: &NodeRef) -> Result<(), String> {
    let types: Vec<&NodeRef> = graph.objects(node, &rdf_type()).collect();
    if types == [class] {
        Ok(())
    } else {
        Err(format!("{node} should have the single type {class}, has {types:?}"))
    }
}

fn walk(
    expr: &OmExpr,
    graph: &Graph,
    node: &NodeRef,
    ns: &Namespaces,
    vars: &mut BTreeMap<String, NodeRef>,
) -> Result<(), String> {
    match expr {
        OmExpr::Application { operator, arguments } => {
            only_type(graph, node, &ns.om("Application"))?;
            let props = graph.matching(Some(node), None, None).count();
            if props != 3 {
                return Err(format!("application {node} has {props} triples, expected 3"));
            }
            walk(operator, graph, one(graph, node, &ns.om("operator"))?, ns, vars)?;
            let mut cell = one(graph, node, &ns.om("arguments"))?.clone();
            for arg in arguments {
                if cell == rdf_nil() {
                    return Err(format!("argument list of {node} is too short"));
                }
                if graph.matching(Some(&cell), None, None).count() != 2 {
                    return Err(format!("list cell {cell} must carry exactly rdf:first and rdf:rest"));
                }
                walk(arg, graph, one(graph, &cell, &rdf_first())?, ns, vars)?;
                cell = one(graph, &cell, &rdf_rest())?.clone();
            }
            if cell != rdf_nil() {
                return Err(format!("argument list of {node} does not end in rdf:nil"));
            }
            Ok(())
        }
        OmExpr::Symbol { cd, name } => {
            let expected = format!("{}/{cd}#{name}", ns.cd_base);
            if node.as_iri() != Some(expected.as_str()) {
                return Err(format!("symbol {cd}.{name} mapped to {node}"));
            }
            Ok(())
        }
        OmExpr::Variable(name) => {
            if let Some(prev) = vars.get(name) {
                return if prev == node { Ok(()) } else { Err(format!("variable {name} has two nodes")) };
            }
            only_type(graph, node, &ns.om("Variable"))?;
            if one(graph, node, &ns.om("name"))? != &NodeRef::string(name.clone()) {
                return Err(format!("variable node {node} has the wrong name"));
            }
            if graph.matching(Some(node), None, None).count() != 2 {
                return Err(format!("variable node {node} has extra triples"));
            }
            vars.insert(name.clone(), node.clone());
            Ok(())
        }
        OmExpr::Integer(_) | OmExpr::Float(_) => {
            only_type(graph, node, &ns.om("Literal"))?;
            let value = one(graph, node, &ns.om("value"))?;
            let lit = value.as_literal().ok_or("om:value is not a literal")?;
            let ok = match expr {
                OmExpr::Integer(i) => lit.datatype == format!("{XSD}integer") && lit.lexical == i.to_string(),
                OmExpr::Float(f) => {
                    lit.datatype == format!("{XSD}double")
                        && parse_float(&lit.lexical).is_some_and(|g| g.to_bits() == f.to_bits())
                }
                _ => unreachable!(),
            };
            if !ok {
                return Err(format!("literal node {node} carries {value}"));
            }
            if graph.matching(Some(node), None, None).count() != 2 {
                return Err(format!("literal node {node} has extra triples"));
            }
            Ok(())
        }
    }
}
