//! Reads the behavior models of a process operator back out of a graph.

use std::collections::BTreeSet;

use crate::mapper::{rdf_to_om, MappingError};
use crate::openmath::OmExpr;
use crate::rdf::{rdf_first, rdf_rest, Graph, NodeRef};
use crate::vocab::Namespaces;

#[derive(Debug, Clone, PartialEq)]
pub struct ExportedEquation {
    pub object: NodeRef,
    pub expr: OmExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VariableRow {
    pub variable: String,
    pub data_element: Option<NodeRef>,
    pub type_description: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BehaviorExport {
    /// Equations ordered by their `om:Object` IRI.
    pub equations: Vec<ExportedEquation>,
    /// One row per variable and linked data element, sorted.
    pub variables: Vec<VariableRow>,
}

impl BehaviorExport {
    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }
}

/// Collects every equation attached to `operator` through its behavior
/// models.
pub fn export_operator(graph: &Graph, operator: &NodeRef, ns: &Namespaces, strict: bool) -> Result<BehaviorExport, MappingError> {
    let mut objects = BTreeSet::new();
    for model in graph.objects(operator, &ns.cpsmod("processOperatorBehaviorModel")) {
        objects.extend(graph.objects(model, &ns.cpsmod("hasOMObject")).cloned());
    }
    let mut out = BehaviorExport::default();
    let mut rows = BTreeSet::new();
    for object in objects {
        let expr = rdf_to_om(graph, &object, ns, strict)?;
        for var in variable_nodes(graph, &object, ns) {
            let Some(name) = graph.object(&var, &ns.om("name")).and_then(NodeRef::as_literal) else {
                continue;
            };
            let des: Vec<&NodeRef> = graph.objects(&var, &ns.cpsmod("isDataFor")).collect();
            if des.is_empty() {
                rows.insert(VariableRow { variable: name.lexical.clone(), data_element: None, type_description: None });
            }
            for de in des {
                let definition = graph
                    .object(de, &ns.dinen61360("hasTypeDescription"))
                    .and_then(|td| graph.object(td, &ns.dinen61360("definition")))
                    .and_then(NodeRef::as_literal)
                    .map(|l| l.lexical.clone());
                rows.insert(VariableRow {
                    variable: name.lexical.clone(),
                    data_element: Some(de.clone()),
                    type_description: definition,
                });
            }
        }
        out.equations.push(ExportedEquation { object, expr });
    }
    out.variables = rows.into_iter().collect();
    Ok(out)
}

fn variable_nodes(graph: &Graph, object: &NodeRef, ns: &Namespaces) -> Vec<NodeRef> {
    let follow = [ns.om("root"), ns.om("operator"), ns.om("arguments"), rdf_first(), rdf_rest()];
    let variable = ns.om("Variable");
    let mut seen = BTreeSet::from([object.clone()]);
    let mut stack = vec![object.clone()];
    let mut out = Vec::new();
    while let Some(node) = stack.pop() {
        if graph.has_type(&node, &variable) {
            out.push(node.clone());
        }
        for p in &follow {
            for o in graph.objects(&node, p) {
                if !o.is_literal() && seen.insert(o.clone()) {
                    stack.push(o.clone());
                }
            }
        }
    }
    out
}
