//! JSON manifest describing a CPS model and its compilation into a graph.
//!
//! The schema is published in `docs/manifest.schema.json`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::builder::{
    CpsGraphBuilder, DataElementSpec, InstanceDescriptionSpec, Level, OperatorSpec, ProcessSpec, StateKind,
    StateSpec, StructureSpec,
};
use crate::infix::InfixParser;
use crate::mapper::om_to_rdf;
use crate::openmath::{OmExpr, OpenMathReader, SymbolRegistry};
use crate::rdf::{is_absolute_iri, Graph};
use crate::vocab::Config;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CpsManifest {
    pub instance_base: String,
    pub lifecycle_record: LifecycleRecordEntry,
    pub structure: StructureEntry,
    #[serde(default)]
    pub processes: Vec<ProcessEntry>,
    #[serde(default)]
    pub observations: Vec<ObservationEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LifecycleRecordEntry {
    pub id: String,
    #[serde(default)]
    pub information_sets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StructureEntry {
    pub id: String,
    pub level: Level,
    #[serde(default)]
    pub data_elements: Vec<DataElementEntry>,
    #[serde(default)]
    pub children: Vec<StructureEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ProcessEntry {
    pub id: String,
    #[serde(default)]
    pub states: Vec<StateEntry>,
    #[serde(default)]
    pub operators: Vec<OperatorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StateEntry {
    pub id: String,
    pub kind: String,
    #[serde(default)]
    pub data_elements: Vec<DataElementEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DataElementEntry {
    pub id: String,
    #[serde(default)]
    pub type_description: Option<String>,
    #[serde(default)]
    pub instance_descriptions: Vec<InstanceDescriptionEntry>,
    #[serde(default)]
    pub variable_name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceDescriptionEntry {
    #[serde(default)]
    pub value: Option<f64>,
    #[serde(default)]
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct OperatorEntry {
    pub id: String,
    #[serde(default)]
    pub resource: Option<String>,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default)]
    pub equations: Vec<EquationEntry>,
    /// Equation variables allowed without a data element.
    #[serde(default)]
    pub parameters: Vec<String>,
}

/// Either an inline infix string or an object naming the source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EquationEntry {
    Infix(String),
    Source(EquationSource),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EquationSource {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(default)]
    pub infix: Option<String>,
    /// Path to an OpenMath XML file, relative to the manifest.
    #[serde(default)]
    pub openmath: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ObservationEntry {
    pub feature: String,
    pub value: f64,
    #[serde(default)]
    pub unit: Option<String>,
    pub timestamp: String,
}

/// One manifest problem, located by a JSON path such as
/// `processes[0].operators[1].resource`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ManifestIssue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ManifestIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ManifestError {
    Json(String),
    Invalid(Vec<ManifestIssue>),
}

impl fmt::Display for ManifestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifestError::Json(e) => write!(f, "manifest is not valid JSON: {e}"),
            ManifestError::Invalid(issues) => {
                write!(f, "manifest has {} problem(s)", issues.len())?;
                for i in issues {
                    write!(f, "\n  {i}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ManifestError {}

impl CpsManifest {
    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        serde_json::from_str(text).map_err(|e| ManifestError::Json(e.to_string()))
    }
}

/// An equation after parsing, with its variables resolved to data elements.
#[derive(Debug, Clone)]
struct ResolvedEquation {
    operator: String,
    id: String,
    expr: OmExpr,
    links: BTreeMap<String, String>,
}

#[derive(Default)]
struct Checker {
    issues: Vec<ManifestIssue>,
    ids: BTreeMap<String, String>,
}

impl Checker {
    fn issue(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(ManifestIssue { path: path.into(), message: message.into() });
    }

    fn declare(&mut self, id: &str, path: String) {
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            self.issue(format!("{path}.id"), format!("invalid id {id:?}"));
        }
        if let Some(first) = self.ids.get(id) {
            let msg = format!("duplicate id {id:?}, first declared at {first}");
            self.issue(format!("{path}.id"), msg);
        } else {
            self.ids.insert(id.to_string(), path);
        }
    }

    fn data_element(&mut self, de: &DataElementEntry, path: String) {
        self.declare(&de.id, path.clone());
        if de.type_description.is_none() {
            self.issue(format!("{path}.typeDescription"), format!("data element {} has no type description", de.id));
        }
        if let Some(v) = &de.variable_name {
            if v.is_empty() {
                self.issue(format!("{path}.variableName"), "empty variable name");
            }
        }
    }

    fn structure(&mut self, s: &StructureEntry, parent: Option<&StructureEntry>, path: String, ancestors: &mut Vec<String>) {
        if ancestors.contains(&s.id) {
            self.issue(format!("{path}.id"), format!("{} contains itself", s.id));
            return;
        }
        self.declare(&s.id, path.clone());
        if let Some(p) = parent {
            if s.level < p.level {
                self.issue(
                    format!("{path}.level"),
                    format!("{} ({:?}) cannot be part of {} ({:?})", s.id, s.level, p.id, p.level),
                );
            }
        }
        for (k, de) in s.data_elements.iter().enumerate() {
            self.data_element(de, format!("{path}.dataElements[{k}]"));
        }
        ancestors.push(s.id.clone());
        for (k, c) in s.children.iter().enumerate() {
            self.structure(c, Some(s), format!("{path}.children[{k}]"), ancestors);
        }
        ancestors.pop();
    }
}

fn structure_nodes(s: &StructureEntry) -> Vec<&StructureEntry> {
    let mut out = vec![s];
    for c in &s.children {
        out.extend(structure_nodes(c));
    }
    out
}

/// Checks every manifest invariant and parses the equations.
fn check(manifest: &CpsManifest, base_dir: &Path, config: &Config) -> Result<Vec<ResolvedEquation>, Vec<ManifestIssue>> {
    let mut c = Checker::default();
    let base = &manifest.instance_base;
    if !is_absolute_iri(base) || base.contains('#') {
        c.issue("instanceBase", format!("{base:?} must be an absolute IRI without a fragment"));
    }

    c.declare(&manifest.lifecycle_record.id, "lifecycleRecord".into());
    for (k, set) in manifest.lifecycle_record.information_sets.iter().enumerate() {
        c.declare(set, format!("lifecycleRecord.informationSets[{k}]"));
    }
    c.structure(&manifest.structure, None, "structure".into(), &mut Vec::new());

    let resources: BTreeMap<&str, &StructureEntry> =
        structure_nodes(&manifest.structure).into_iter().map(|s| (s.id.as_str(), s)).collect();
    let mut states: BTreeMap<&str, &StateEntry> = BTreeMap::new();
    let mut equations = Vec::new();
    let mut equation_ids = BTreeSet::new();
    let registry = SymbolRegistry::standard();

    for (i, process) in manifest.processes.iter().enumerate() {
        let ppath = format!("processes[{i}]");
        c.declare(&process.id, ppath.clone());
        for (k, s) in process.states.iter().enumerate() {
            let spath = format!("{ppath}.states[{k}]");
            c.declare(&s.id, spath.clone());
            if StateKind::parse(&s.kind).is_none() {
                c.issue(format!("{spath}.kind"), format!("unknown state kind {:?}; expected Product, Energy or Information", s.kind));
            }
            for (d, de) in s.data_elements.iter().enumerate() {
                c.data_element(de, format!("{spath}.dataElements[{d}]"));
            }
            states.insert(&s.id, s);
        }
        for (j, op) in process.operators.iter().enumerate() {
            let opath = format!("{ppath}.operators[{j}]");
            c.declare(&op.id, opath.clone());
            if let Some(r) = &op.resource {
                if !resources.contains_key(r.as_str()) {
                    c.issue(format!("{opath}.resource"), format!("unknown resource {r:?}"));
                }
            }
            for (field, refs) in [("inputs", &op.inputs), ("outputs", &op.outputs)] {
                for (k, r) in refs.iter().enumerate() {
                    if !states.contains_key(r.as_str()) {
                        c.issue(format!("{opath}.{field}[{k}]"), format!("unknown state {r:?}"));
                    }
                }
            }

            // Data elements reachable from this operator, by variable name.
            let mut reachable: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
            let mut owners: Vec<&[DataElementEntry]> = Vec::new();
            for r in op.inputs.iter().chain(&op.outputs) {
                if let Some(s) = states.get(r.as_str()) {
                    owners.push(&s.data_elements);
                }
            }
            if let Some(res) = op.resource.as_deref().and_then(|r| resources.get(r)) {
                owners.push(&res.data_elements);
            }
            for de in owners.into_iter().flatten() {
                if let Some(v) = &de.variable_name {
                    reachable.entry(v).or_default().insert(&de.id);
                }
            }

            for (k, eq) in op.equations.iter().enumerate() {
                let epath = format!("{opath}.equations[{k}]");
                let (id, expr) = match load_equation(eq, base_dir, config, &registry) {
                    Ok((id, expr)) => (id.unwrap_or_else(|| format!("{}-eq{}", op.id, k + 1)), expr),
                    Err(msg) => {
                        c.issue(epath, msg);
                        continue;
                    }
                };
                if !equation_ids.insert(id.clone()) {
                    c.issue(format!("{epath}.id"), format!("duplicate equation id {id:?}"));
                }
                let mut links = BTreeMap::new();
                for v in expr.variables() {
                    match reachable.get(v).map(|s| s.iter().collect::<Vec<_>>()).as_deref() {
                        Some([de]) => {
                            links.insert(v.to_string(), de.to_string());
                        }
                        Some(many) if many.len() > 1 => {
                            let names: Vec<&str> = many.iter().map(|s| **s).collect();
                            c.issue(epath.clone(), format!("variable {v} matches several data elements: {}", names.join(", ")));
                        }
                        _ if op.parameters.iter().any(|p| p == v) => {}
                        _ => c.issue(
                            epath.clone(),
                            format!("variable {v} has no data element on the operator's states or resource"),
                        ),
                    }
                }
                equations.push(ResolvedEquation { operator: op.id.clone(), id, expr, links });
            }
        }
    }

    for (k, obs) in manifest.observations.iter().enumerate() {
        let path = format!("observations[{k}]");
        if !c.ids.contains_key(&obs.feature) {
            c.issue(format!("{path}.feature"), format!("unknown feature {:?}", obs.feature));
        }
        if chrono::DateTime::parse_from_rfc3339(&obs.timestamp).is_err() {
            c.issue(format!("{path}.timestamp"), format!("{:?} is not an RFC 3339 timestamp", obs.timestamp));
        }
    }

    if c.issues.is_empty() {
        Ok(equations)
    } else {
        c.issues.sort();
        Err(c.issues)
    }
}

fn load_equation(
    eq: &EquationEntry,
    base_dir: &Path,
    config: &Config,
    registry: &SymbolRegistry,
) -> Result<(Option<String>, OmExpr), String> {
    let infix = |text: &str| {
        let mut parser = InfixParser::new(registry);
        if !config.strict {
            parser = parser.lenient(config.fallback_cd.clone());
        }
        parser.parse(text).map_err(|e| format!("cannot parse {text:?}: {e}"))
    };
    match eq {
        EquationEntry::Infix(text) => Ok((None, infix(text)?)),
        EquationEntry::Source(src) => {
            let expr = match (&src.infix, &src.openmath) {
                (Some(text), None) => infix(text)?,
                (None, Some(file)) => {
                    let path = base_dir.join(file);
                    let bytes = std::fs::read(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                    let reader = if config.strict { OpenMathReader::strict() } else { OpenMathReader::lenient() };
                    reader.parse(&bytes).map_err(|e| format!("{}: {e}", path.display()))?.expr
                }
                _ => return Err("exactly one of \"infix\" or \"openmath\" is required".into()),
            };
            Ok((src.id.clone(), expr))
        }
    }
}

/// Validates the manifest without building anything.
pub fn check_manifest(manifest: &CpsManifest, base_dir: &Path, config: &Config) -> Result<(), ManifestError> {
    check(manifest, base_dir, config).map(|_| ()).map_err(ManifestError::Invalid)
}

fn to_de_spec(de: &DataElementEntry) -> DataElementSpec {
    DataElementSpec {
        id: de.id.clone(),
        type_description: de.type_description.clone(),
        instance_descriptions: de
            .instance_descriptions
            .iter()
            .map(|i| InstanceDescriptionSpec { value: i.value, unit: i.unit.clone() })
            .collect(),
    }
}

fn to_structure_spec(s: &StructureEntry) -> StructureSpec {
    StructureSpec { id: s.id.clone(), level: s.level, children: s.children.iter().map(to_structure_spec).collect() }
}

/// Builds the graph: lifecycle record, structure, processes with states and
/// their data elements, resource data elements, equations with their
/// behavior models and data-element links, then observations.
///
/// `base_dir` resolves OpenMath file references.
pub fn compile_manifest(manifest: &CpsManifest, base_dir: &Path, config: &Config) -> Result<Graph, ManifestError> {
    let equations = check(manifest, base_dir, config).map_err(ManifestError::Invalid)?;
    let internal = |path: &str, e: super::CpsError| ManifestError::Invalid(vec![ManifestIssue { path: path.into(), message: e.to_string() }]);

    let ns = config.namespaces.clone();
    let mut b = CpsGraphBuilder::new(ns.clone(), &manifest.instance_base);
    let lcr = &manifest.lifecycle_record;
    b.add_lifecycle_record(&lcr.id, &lcr.information_sets).map_err(|e| internal("lifecycleRecord", e))?;
    b.add_structure(&to_structure_spec(&manifest.structure)).map_err(|e| internal("structure", e))?;

    for (i, p) in manifest.processes.iter().enumerate() {
        let spec = ProcessSpec {
            id: p.id.clone(),
            states: p.states.iter().map(|s| StateSpec { id: s.id.clone(), kind: s.kind.clone() }).collect(),
            operators: p
                .operators
                .iter()
                .map(|o| OperatorSpec {
                    id: o.id.clone(),
                    resource: o.resource.clone(),
                    inputs: o.inputs.clone(),
                    outputs: o.outputs.clone(),
                })
                .collect(),
        };
        let path = format!("processes[{i}]");
        b.add_process(&spec).map_err(|e| internal(&path, e))?;
        for s in &p.states {
            let owner = b.node(&s.id);
            for de in &s.data_elements {
                b.add_data_element(&owner, &to_de_spec(de)).map_err(|e| internal(&path, e))?;
            }
        }
    }
    for s in structure_nodes(&manifest.structure) {
        let owner = b.node(&s.id);
        for de in &s.data_elements {
            b.add_data_element(&owner, &to_de_spec(de)).map_err(|e| internal("structure", e))?;
        }
    }

    for eq in &equations {
        let mapped = om_to_rdf(&eq.expr, &ns, b.instance_base(), &eq.id);
        b.graph_mut().extend(mapped.graph);
        let op = b.node(&eq.operator);
        b.attach_behavior_model(&op, &mapped.object).map_err(|e| internal(&eq.id, e))?;
        for (var, de) in &eq.links {
            let de = b.node(de);
            b.link_variable_to_data_element(&mapped.variables[var], &de).map_err(|e| internal(&eq.id, e))?;
        }
    }

    for (k, obs) in manifest.observations.iter().enumerate() {
        let feature = b.node(&obs.feature);
        b.add_observation(&feature, obs.value, obs.unit.as_deref(), &obs.timestamp)
            .map_err(|e| internal(&format!("observations[{k}]"), e))?;
    }

    let base = format!("{}/", b.instance_base());
    let mut graph = b.into_graph();
    ns.bind_prefixes(&mut graph);
    graph.bind_prefix("ex", base);
    Ok(graph)
}
