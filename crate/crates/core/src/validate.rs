//! Structural shape checks over a compiled graph.
//!
//! | rule | severity | check |
//! |------|----------|-------|
//! | V1 | error   | every `om:arguments` value is a well-formed, acyclic, nil-terminated RDF list |
//! | V2 | error   | every `om:Application` has exactly one `om:operator` and one `om:arguments` |
//! | V3 | warning | every process operator is assigned to a technical resource |
//! | V4 | warning | every variable of an attached behavior model is linked to a data element |
//! | V5 | warning | every process operator has an input and an output |
//! | V6 | error   | every data element has exactly one type description |
//! | V7 | warning | operator symbols come from a registered content dictionary (strict only) |

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::openmath::SymbolRegistry;
use crate::rdf::{rdf_first, rdf_nil, rdf_rest, Graph, NodeRef};
use crate::vocab::Namespaces;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Rule {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
}

impl Rule {
    pub const ALL: [Rule; 7] = [Rule::V1, Rule::V2, Rule::V3, Rule::V4, Rule::V5, Rule::V6, Rule::V7];

    pub fn severity(self) -> Severity {
        match self {
            Rule::V1 | Rule::V2 | Rule::V6 => Severity::Error,
            Rule::V3 | Rule::V4 | Rule::V5 | Rule::V7 => Severity::Warning,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub rule: Rule,
    pub severity: Severity,
    #[serde(serialize_with = "node_string")]
    pub node: NodeRef,
    pub message: String,
}

fn node_string<S: serde::Serializer>(node: &NodeRef, s: S) -> Result<S::Ok, S::Error> {
    match node.as_iri() {
        Some(iri) => s.serialize_str(iri),
        None => s.serialize_str(&node.to_ntriples()),
    }
}

/// Findings ordered by rule, then node, then message.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn errors(&self) -> usize {
        self.entries.iter().filter(|f| f.severity == Severity::Error).count()
    }

    pub fn warnings(&self) -> usize {
        self.entries.iter().filter(|f| f.severity == Severity::Warning).count()
    }

    pub fn rules(&self) -> BTreeSet<Rule> {
        self.entries.iter().map(|f| f.rule).collect()
    }

    /// One line per finding: `severity rule node message`.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|f| format!("{} {} {} {}\n", f.severity, f.rule, f.node.as_iri().map_or_else(|| f.node.to_ntriples(), |s| format!("<{s}>")), f.message))
            .collect()
    }

    pub fn to_json_lines(&self) -> String {
        self.entries
            .iter()
            .map(|f| serde_json::to_string(f).expect("findings serialize") + "\n")
            .collect()
    }
}

pub struct Validator<'a> {
    ns: &'a Namespaces,
    registry: &'a SymbolRegistry,
    strict: bool,
}

impl<'a> Validator<'a> {
    pub fn new(ns: &'a Namespaces, registry: &'a SymbolRegistry) -> Self {
        Validator { ns, registry, strict: false }
    }

    /// Enables V7.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn validate(&self, graph: &Graph) -> ValidationReport {
        let mut out = Vec::new();
        self.lists(graph, &mut out);
        self.applications(graph, &mut out);
        self.operators(graph, &mut out);
        self.variables(graph, &mut out);
        self.data_elements(graph, &mut out);
        if self.strict {
            self.symbols(graph, &mut out);
        }
        out.sort();
        out.dedup();
        ValidationReport { entries: out }
    }

    fn push(out: &mut Vec<Finding>, rule: Rule, node: &NodeRef, message: impl Into<String>) {
        out.push(Finding { rule, severity: rule.severity(), node: node.clone(), message: message.into() });
    }

    fn lists(&self, graph: &Graph, out: &mut Vec<Finding>) {
        let nil = rdf_nil();
        for t in graph.matching(None, Some(&self.ns.om("arguments")), None) {
            let mut seen = BTreeSet::new();
            let mut cur = t.object.clone();
            while cur != nil {
                if cur.is_literal() {
                    Self::push(out, Rule::V1, &t.subject, format!("argument list contains literal {cur}"));
                    break;
                }
                if !seen.insert(cur.clone()) {
                    Self::push(out, Rule::V1, &cur, "argument list is cyclic");
                    break;
                }
                let firsts = graph.objects(&cur, &rdf_first()).count();
                let rests: Vec<&NodeRef> = graph.objects(&cur, &rdf_rest()).collect();
                if firsts != 1 || rests.len() != 1 {
                    Self::push(
                        out,
                        Rule::V1,
                        &cur,
                        format!("list node has {firsts} rdf:first and {} rdf:rest values; expected one each", rests.len()),
                    );
                    break;
                }
                cur = rests[0].clone();
            }
        }
    }

    fn applications(&self, graph: &Graph, out: &mut Vec<Finding>) {
        let (op, args) = (self.ns.om("operator"), self.ns.om("arguments"));
        for app in graph.instances_of(&self.ns.om("Application")) {
            for (p, label) in [(&op, "om:operator"), (&args, "om:arguments")] {
                let n = graph.objects(app, p).count();
                if n != 1 {
                    Self::push(out, Rule::V2, app, format!("application has {n} {label} values; expected one"));
                }
            }
        }
    }

    fn operators(&self, graph: &Graph, out: &mut Vec<Finding>) {
        for op in graph.instances_of(&self.ns.vdi3682("ProcessOperator")) {
            if graph.objects(op, &self.ns.vdi3682("isAssignedTo")).next().is_none() {
                Self::push(out, Rule::V3, op, "process operator is not assigned to a technical resource");
            }
            for (p, label) in [("hasInput", "input"), ("hasOutput", "output")] {
                if graph.objects(op, &self.ns.vdi3682(p)).next().is_none() {
                    Self::push(out, Rule::V5, op, format!("process operator has no {label}"));
                }
            }
        }
    }

    /// Variables reachable from behavior models through the expression
    /// structure.
    fn variables(&self, graph: &Graph, out: &mut Vec<Finding>) {
        let follow = [
            self.ns.cpsmod("processOperatorBehaviorModel"),
            self.ns.cpsmod("hasOMObject"),
            self.ns.om("root"),
            self.ns.om("operator"),
            self.ns.om("arguments"),
            rdf_first(),
            rdf_rest(),
        ];
        let mut stack: Vec<NodeRef> = graph
            .instances_of(&self.ns.vdi3682("ProcessOperator"))
            .into_iter()
            .cloned()
            .collect();
        let mut seen: BTreeSet<NodeRef> = stack.iter().cloned().collect();
        let variable = self.ns.om("Variable");
        let is_data_for = self.ns.cpsmod("isDataFor");
        while let Some(node) = stack.pop() {
            if graph.has_type(&node, &variable) && graph.objects(&node, &is_data_for).next().is_none() {
                Self::push(out, Rule::V4, &node, "variable is not linked to a data element");
            }
            for p in &follow {
                for o in graph.objects(&node, p) {
                    if !o.is_literal() && seen.insert(o.clone()) {
                        stack.push(o.clone());
                    }
                }
            }
        }
    }

    fn data_elements(&self, graph: &Graph, out: &mut Vec<Finding>) {
        let p = self.ns.dinen61360("hasTypeDescription");
        for de in graph.instances_of(&self.ns.dinen61360("DataElement")) {
            let n = graph.objects(de, &p).count();
            if n != 1 {
                Self::push(out, Rule::V6, de, format!("data element has {n} type descriptions; expected one"));
            }
        }
    }

    fn symbols(&self, graph: &Graph, out: &mut Vec<Finding>) {
        let base = format!("{}/", self.ns.cd_base.trim_end_matches('/'));
        let om_types = [self.ns.om("Application"), self.ns.om("Variable"), self.ns.om("Literal")];
        for t in graph.matching(None, Some(&self.ns.om("operator")), None) {
            let sym = &t.object;
            if om_types.iter().any(|c| graph.has_type(sym, c)) {
                continue;
            }
            let cd = sym
                .as_iri()
                .and_then(|iri| iri.strip_prefix(&base))
                .and_then(|rest| rest.split_once('#'))
                .map(|(cd, _)| cd);
            match cd {
                Some(cd) if self.registry.has_cd(cd) => {}
                Some(cd) => Self::push(out, Rule::V7, &t.subject, format!("operator {sym} is from unregistered content dictionary {cd}")),
                None => Self::push(out, Rule::V7, &t.subject, format!("operator {sym} is not a content-dictionary symbol")),
            }
        }
    }
}

/// Non-strict validation with the standard registry.
pub fn validate(graph: &Graph, ns: &Namespaces) -> ValidationReport {
    Validator::new(ns, &SymbolRegistry::standard()).validate(graph)
}
