//! OpenMath trees to RDF and back.
//!
//! Forward rules, applied recursively:
//!
//! * application: fresh node typed `om:Application`, `om:operator` to the
//!   mapped first child, `om:arguments` to an RDF collection of the mapped
//!   remaining children;
//! * symbol: the IRI `{cdBase}/{cd}#{name}`, no triples;
//! * variable: node typed `om:Variable` with `om:name`, one node per
//!   distinct name within an equation;
//! * integer or float: fresh node typed `om:Literal` with a typed `om:value`.
//!
//! Fresh nodes are skolem IRIs `{base}/expr/{equation}/n{k}` numbered in
//! the order they are issued, application nodes before their children.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::openmath::{parse_float, OmExpr};
use crate::rdf::{rdf_first, rdf_nil, rdf_rest, rdf_type, skolem_iri, xsd, Graph, NodeRef};
use crate::vocab::Namespaces;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("MalformedList: the rdf:rest chain at {0} is cyclic, branching or not terminated by rdf:nil")]
    MalformedList(String),
    #[error("MalformedNode: {node}: {reason}")]
    MalformedNode { node: String, reason: String },
    #[error("UnknownSymbolIri: {0} is not under the content-dictionary base")]
    UnknownSymbolIri(String),
}

fn malformed(node: &NodeRef, reason: impl Into<String>) -> MappingError {
    MappingError::MalformedNode { node: node.to_string(), reason: reason.into() }
}

/// State for mapping one equation.
pub struct MappingContext<'a> {
    ns: &'a Namespaces,
    instance_base: String,
    equation_id: String,
    variables: BTreeMap<String, NodeRef>,
    issued: usize,
}

impl<'a> MappingContext<'a> {
    pub fn new(ns: &'a Namespaces, instance_base: &str, equation_id: &str) -> Self {
        MappingContext {
            ns,
            instance_base: instance_base.to_string(),
            equation_id: equation_id.to_string(),
            variables: BTreeMap::new(),
            issued: 0,
        }
    }

    fn fresh(&mut self) -> NodeRef {
        let node = skolem_iri(&self.instance_base, "expr", &self.equation_id, &format!("n{}", self.issued));
        self.issued += 1;
        node
    }

    /// Variable nodes created so far, by name.
    pub fn variables(&self) -> &BTreeMap<String, NodeRef> {
        &self.variables
    }

    pub fn process_node(&mut self, expr: &OmExpr, graph: &mut Graph) -> NodeRef {
        let ns = self.ns;
        match expr {
            OmExpr::Application { operator, arguments } => {
                let node = self.fresh();
                let op = self.process_node(operator, graph);
                let args: Vec<NodeRef> = arguments.iter().map(|a| self.process_node(a, graph)).collect();
                let list = self.create_rdf_list(&args, graph);
                graph.add(&node, &rdf_type(), &ns.om("Application"));
                graph.add(&node, &ns.om("operator"), &op);
                graph.add(&node, &ns.om("arguments"), &list);
                node
            }
            OmExpr::Symbol { cd, name } => ns.symbol_iri(cd, name),
            OmExpr::Variable(name) => {
                if let Some(node) = self.variables.get(name) {
                    return node.clone();
                }
                let node = self.fresh();
                graph.add(&node, &rdf_type(), &ns.om("Variable"));
                graph.add(&node, &ns.om("name"), &NodeRef::string(name.clone()));
                self.variables.insert(name.clone(), node.clone());
                node
            }
            OmExpr::Integer(i) => self.literal(NodeRef::integer(i), graph),
            OmExpr::Float(f) => self.literal(NodeRef::double(*f), graph),
        }
    }

    fn literal(&mut self, value: NodeRef, graph: &mut Graph) -> NodeRef {
        let node = self.fresh();
        graph.add(&node, &rdf_type(), &self.ns.om("Literal"));
        graph.add(&node, &self.ns.om("value"), &value);
        node
    }

    /// `rdf:nil` for no elements, otherwise a chain of cons nodes.
    pub fn create_rdf_list(&mut self, elements: &[NodeRef], graph: &mut Graph) -> NodeRef {
        let Some((first, rest)) = elements.split_first() else {
            return rdf_nil();
        };
        let head = self.fresh();
        let tail = self.create_rdf_list(rest, graph);
        graph.add(&head, &rdf_first(), first);
        graph.add(&head, &rdf_rest(), &tail);
        head
    }
}

/// An equation mapped onto RDF.
#[derive(Debug, Clone)]
pub struct MappedExpression {
    pub graph: Graph,
    /// The `om:Object` wrapper node.
    pub object: NodeRef,
    /// The node for the expression itself.
    pub root: NodeRef,
    pub variables: BTreeMap<String, NodeRef>,
}

/// Maps `expr` and wraps it in an `om:Object` linked by `om:root`.
pub fn om_to_rdf(expr: &OmExpr, ns: &Namespaces, instance_base: &str, equation_id: &str) -> MappedExpression {
    let mut graph = Graph::new();
    let mut ctx = MappingContext::new(ns, instance_base, equation_id);
    let root = ctx.process_node(expr, &mut graph);
    let object = skolem_iri(instance_base, "expr", equation_id, "object");
    graph.add(&object, &rdf_type(), &ns.om("Object"));
    graph.add(&object, &ns.om("root"), &root);
    let variables = ctx.variables;
    MappedExpression { graph, object, root, variables }
}

/// Rebuilds an expression from an `om:Object`, `om:Application`,
/// `om:Variable` or `om:Literal` node.
///
/// With `strict`, operator IRIs outside the CD base are rejected; otherwise
/// they are split at `#` into CD and name.
pub fn rdf_to_om(graph: &Graph, root: &NodeRef, ns: &Namespaces, strict: bool) -> Result<OmExpr, MappingError> {
    let reader = Reader { graph, ns, strict };
    // A wrapper may hold a bare symbol; a node given directly must be typed.
    let start = if graph.has_type(root, &ns.om("Object")) {
        single(graph, root, &ns.om("root"), "om:root")?.clone()
    } else if reader.kind(root)?.is_some() {
        root.clone()
    } else {
        return Err(malformed(root, "not an OpenMath node"));
    };
    reader.node(&start, &mut BTreeSet::new())
}

fn single<'g>(graph: &'g Graph, node: &NodeRef, p: &NodeRef, label: &str) -> Result<&'g NodeRef, MappingError> {
    let mut it = graph.objects(node, p);
    match (it.next(), it.next()) {
        (Some(o), None) => Ok(o),
        (None, _) => Err(malformed(node, format!("missing {label}"))),
        (Some(_), Some(_)) => Err(malformed(node, format!("more than one {label}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Application,
    Variable,
    Literal,
}

struct Reader<'a> {
    graph: &'a Graph,
    ns: &'a Namespaces,
    strict: bool,
}

impl Reader<'_> {
    fn kind(&self, node: &NodeRef) -> Result<Option<Kind>, MappingError> {
        let kinds: Vec<Kind> = [
            ("Application", Kind::Application),
            ("Variable", Kind::Variable),
            ("Literal", Kind::Literal),
        ]
        .into_iter()
        .filter(|(local, _)| self.graph.has_type(node, &self.ns.om(local)))
        .map(|(_, k)| k)
        .collect();
        match kinds.as_slice() {
            [] => Ok(None),
            [k] => Ok(Some(*k)),
            _ => Err(malformed(node, "has several OpenMath node types")),
        }
    }

    fn node(&self, node: &NodeRef, path: &mut BTreeSet<NodeRef>) -> Result<OmExpr, MappingError> {
        if node.is_literal() {
            return Err(malformed(node, "RDF literal where an expression node is expected"));
        }
        match self.kind(node)? {
            Some(Kind::Application) => {
                if !path.insert(node.clone()) {
                    return Err(malformed(node, "expression contains itself"));
                }
                let op = single(self.graph, node, &self.ns.om("operator"), "om:operator")?;
                let list = single(self.graph, node, &self.ns.om("arguments"), "om:arguments")?;
                let operator = self.node(op, path)?;
                let arguments = self
                    .list_items(list)?
                    .iter()
                    .map(|item| self.node(item, path))
                    .collect::<Result<Vec<_>, _>>()?;
                path.remove(node);
                Ok(OmExpr::apply(operator, arguments))
            }
            Some(Kind::Variable) => {
                let name = single(self.graph, node, &self.ns.om("name"), "om:name")?;
                match name.as_literal() {
                    Some(l) if !l.lexical.is_empty() && !l.lexical.chars().any(char::is_whitespace) => {
                        Ok(OmExpr::var(l.lexical.clone()))
                    }
                    _ => Err(malformed(node, "om:name must be a non-empty name literal")),
                }
            }
            Some(Kind::Literal) => {
                let value = single(self.graph, node, &self.ns.om("value"), "om:value")?;
                let lit = value.as_literal().ok_or_else(|| malformed(node, "om:value is not a literal"))?;
                if lit.datatype == xsd("integer") {
                    BigInt::from_str(&lit.lexical)
                        .map(OmExpr::Integer)
                        .map_err(|_| malformed(node, format!("bad integer {:?}", lit.lexical)))
                } else if lit.datatype == xsd("double") {
                    parse_float(&lit.lexical)
                        .map(OmExpr::Float)
                        .ok_or_else(|| malformed(node, format!("bad double {:?}", lit.lexical)))
                } else {
                    Err(malformed(node, format!("unsupported literal datatype {}", lit.datatype)))
                }
            }
            None => self.symbol(node),
        }
    }

    fn symbol(&self, node: &NodeRef) -> Result<OmExpr, MappingError> {
        let iri = node.as_iri().unwrap_or_default();
        let base = format!("{}/", self.ns.cd_base.trim_end_matches('/'));
        if let Some((cd, name)) = iri.strip_prefix(&base).and_then(|rest| rest.split_once('#')) {
            if !cd.is_empty() && !name.is_empty() && !cd.contains('/') {
                return Ok(OmExpr::symbol(decode(cd), decode(name)));
            }
        }
        if !self.strict {
            if let Some((path, name)) = iri.rsplit_once('#') {
                let cd = path.rsplit('/').next().unwrap_or_default();
                if !cd.is_empty() && !name.is_empty() {
                    return Ok(OmExpr::symbol(decode(cd), decode(name)));
                }
            }
        }
        Err(MappingError::UnknownSymbolIri(iri.to_string()))
    }

    fn list_items(&self, head: &NodeRef) -> Result<Vec<NodeRef>, MappingError> {
        let nil = rdf_nil();
        let mut items = Vec::new();
        let mut seen = BTreeSet::new();
        let mut cur = head.clone();
        while cur != nil {
            if cur.is_literal() || !seen.insert(cur.clone()) {
                return Err(MappingError::MalformedList(cur.to_string()));
            }
            let mut firsts = self.graph.objects(&cur, &rdf_first());
            let mut rests = self.graph.objects(&cur, &rdf_rest());
            let (Some(first), None, Some(rest), None) = (firsts.next(), firsts.next(), rests.next(), rests.next())
            else {
                return Err(MappingError::MalformedList(cur.to_string()));
            };
            items.push(first.clone());
            cur = rest.clone();
        }
        Ok(items)
    }
}

fn decode(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            if let Some(b) = s.get(i + 1..i + 3).and_then(|h| u8::from_str_radix(h, 16).ok()) {
                out.push(b);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8_lossy(&out).into_owned()
}
