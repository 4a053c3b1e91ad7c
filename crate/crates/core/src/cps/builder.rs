use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::CpsError;
use crate::rdf::{encode_segment, rdf_type, skolem_iri, xsd, Graph, NodeRef};
use crate::vocab::Namespaces;

/// VDI 2206 structure level, outermost first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    MechatronicSystem,
    Module,
    Component,
}

impl Level {
    pub fn local_name(self) -> &'static str {
        match self {
            Level::MechatronicSystem => "MechatronicSystem",
            Level::Module => "Module",
            Level::Component => "Component",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StateKind {
    Product,
    Energy,
    Information,
}

impl StateKind {
    pub fn parse(kind: &str) -> Option<Self> {
        match kind {
            "Product" => Some(StateKind::Product),
            "Energy" => Some(StateKind::Energy),
            "Information" => Some(StateKind::Information),
            _ => None,
        }
    }

    pub fn local_name(self) -> &'static str {
        match self {
            StateKind::Product => "Product",
            StateKind::Energy => "Energy",
            StateKind::Information => "Information",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureSpec {
    pub id: String,
    pub level: Level,
    pub children: Vec<StructureSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub id: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    pub id: String,
    pub resource: Option<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec {
    pub id: String,
    pub states: Vec<StateSpec>,
    pub operators: Vec<OperatorSpec>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InstanceDescriptionSpec {
    pub value: Option<f64>,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataElementSpec {
    pub id: String,
    pub type_description: Option<String>,
    pub instance_descriptions: Vec<InstanceDescriptionSpec>,
}

/// Emits the CPS model triples. Instance nodes are `{instanceBase}/{id}`;
/// helper nodes are skolem IRIs below the same base.
pub struct CpsGraphBuilder {
    graph: Graph,
    ns: Namespaces,
    base: String,
    ids: BTreeSet<String>,
    models: BTreeMap<NodeRef, NodeRef>,
    observations: BTreeMap<NodeRef, usize>,
}

fn local_name(node: &NodeRef) -> String {
    let iri = node.as_iri().unwrap_or_default();
    iri.rsplit(['/', '#']).next().unwrap_or(iri).to_string()
}

impl CpsGraphBuilder {
    pub fn new(ns: Namespaces, instance_base: &str) -> Self {
        let base = instance_base.trim_end_matches('/').to_string();
        CpsGraphBuilder {
            graph: Graph::new(),
            ns,
            base,
            ids: BTreeSet::new(),
            models: BTreeMap::new(),
            observations: BTreeMap::new(),
        }
    }

    pub fn namespaces(&self) -> &Namespaces {
        &self.ns
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_mut(&mut self) -> &mut Graph {
        &mut self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn instance_base(&self) -> &str {
        &self.base
    }

    pub fn node(&self, id: &str) -> NodeRef {
        NodeRef::Iri(format!("{}/{}", self.base, encode_segment(id)))
    }

    fn declare(&mut self, id: &str) -> Result<NodeRef, CpsError> {
        if !self.ids.insert(id.to_string()) {
            return Err(CpsError::DuplicateId(id.to_string()));
        }
        Ok(self.node(id))
    }

    fn has_any_type(&self, node: &NodeRef, classes: &[NodeRef]) -> bool {
        classes.iter().any(|c| self.graph.has_type(node, c))
    }

    pub fn add_lifecycle_record(&mut self, record_id: &str, information_sets: &[String]) -> Result<NodeRef, CpsError> {
        let mut seen = BTreeSet::new();
        for id in std::iter::once(record_id).chain(information_sets.iter().map(String::as_str)) {
            if self.ids.contains(id) || !seen.insert(id) {
                return Err(CpsError::DuplicateId(id.to_string()));
            }
        }
        let record = self.declare(record_id)?;
        let ty = rdf_type();
        self.graph.add(&record, &ty, &self.ns.din77005("LifeCycleRecord"));
        for (i, set_id) in information_sets.iter().enumerate() {
            let set = self.declare(set_id)?;
            self.graph.add(&set, &ty, &self.ns.din77005("InformationSet"));
            self.graph.add(&record, &self.ns.din77005("hasInformationSet"), &set);
            if i == 0 {
                self.graph.add(&set, &ty, &self.ns.cpsmod("SystemModel"));
            }
        }
        Ok(record)
    }

    pub fn add_structure(&mut self, root: &StructureSpec) -> Result<NodeRef, CpsError> {
        fn check(
            spec: &StructureSpec,
            parent: Option<&StructureSpec>,
            path: &mut Vec<String>,
            seen: &mut BTreeSet<String>,
            declared: &BTreeSet<String>,
        ) -> Result<(), CpsError> {
            if path.contains(&spec.id) {
                return Err(CpsError::CyclicStructure(spec.id.clone()));
            }
            if declared.contains(&spec.id) || !seen.insert(spec.id.clone()) {
                return Err(CpsError::DuplicateId(spec.id.clone()));
            }
            if let Some(parent) = parent {
                if spec.level < parent.level {
                    return Err(CpsError::LevelInversion { parent: parent.id.clone(), child: spec.id.clone() });
                }
            }
            path.push(spec.id.clone());
            for child in &spec.children {
                check(child, Some(spec), path, seen, declared)?;
            }
            path.pop();
            Ok(())
        }
        check(root, None, &mut Vec::new(), &mut BTreeSet::new(), &self.ids)?;
        self.emit_structure(root)
    }

    fn emit_structure(&mut self, spec: &StructureSpec) -> Result<NodeRef, CpsError> {
        let node = self.declare(&spec.id)?;
        self.graph.add(&node, &rdf_type(), &self.ns.vdi2206(spec.level.local_name()));
        for child in &spec.children {
            let c = self.emit_structure(child)?;
            self.graph.add(&node, &self.ns.vdi2206("consistsOf"), &c);
        }
        Ok(node)
    }

    /// States resolve within `process.states` or to states already in the
    /// graph; resources to nodes already in the graph.
    pub fn add_process(&mut self, process: &ProcessSpec) -> Result<NodeRef, CpsError> {
        let state_class = self.ns.vdi3682("State");
        let local: BTreeSet<&str> = process.states.iter().map(|s| s.id.as_str()).collect();
        for s in &process.states {
            if StateKind::parse(&s.kind).is_none() {
                return Err(CpsError::UnresolvedReference(format!("state kind {:?} of {}", s.kind, s.id)));
            }
        }
        for op in &process.operators {
            for r in op.inputs.iter().chain(&op.outputs) {
                if !local.contains(r.as_str()) && !self.graph.has_type(&self.node(r), &state_class) {
                    return Err(CpsError::UnresolvedReference(format!("state {r} of operator {}", op.id)));
                }
            }
            if let Some(res) = &op.resource {
                if !self.ids.contains(res) {
                    return Err(CpsError::UnresolvedReference(format!("resource {res} of operator {}", op.id)));
                }
            }
        }
        let mut ids: Vec<&str> = vec![process.id.as_str()];
        ids.extend(process.states.iter().map(|s| s.id.as_str()));
        ids.extend(process.operators.iter().map(|o| o.id.as_str()));
        let mut seen = BTreeSet::new();
        for id in ids {
            if self.ids.contains(id) || !seen.insert(id) {
                return Err(CpsError::DuplicateId(id.to_string()));
            }
        }

        let ty = rdf_type();
        let node = self.declare(&process.id)?;
        self.graph.add(&node, &ty, &self.ns.vdi3682("Process"));
        for s in &process.states {
            let state = self.declare(&s.id)?;
            let kind = StateKind::parse(&s.kind).expect("checked above");
            self.graph.add(&state, &ty, &state_class);
            self.graph.add(&state, &ty, &self.ns.vdi3682(kind.local_name()));
        }
        for op in &process.operators {
            let o = self.declare(&op.id)?;
            self.graph.add(&o, &ty, &self.ns.vdi3682("ProcessOperator"));
            self.graph.add(&node, &self.ns.vdi3682("consistsOf"), &o);
            for i in &op.inputs {
                self.graph.add(&o, &self.ns.vdi3682("hasInput"), &self.node(i));
            }
            for out in &op.outputs {
                self.graph.add(&o, &self.ns.vdi3682("hasOutput"), &self.node(out));
            }
            if let Some(res) = &op.resource {
                let r = self.node(res);
                self.graph.add(&o, &self.ns.vdi3682("isAssignedTo"), &r);
                self.graph.add(&r, &ty, &self.ns.vdi3682("TechnicalResource"));
            }
        }
        Ok(node)
    }

    /// Owner must be a state, a technical resource or a structure node.
    pub fn add_data_element(&mut self, owner: &NodeRef, spec: &DataElementSpec) -> Result<NodeRef, CpsError> {
        let owners = [
            self.ns.vdi3682("State"),
            self.ns.vdi3682("TechnicalResource"),
            self.ns.vdi2206("MechatronicSystem"),
            self.ns.vdi2206("Module"),
            self.ns.vdi2206("Component"),
        ];
        if !self.has_any_type(owner, &owners) {
            return Err(CpsError::UnresolvedReference(format!("data element owner {owner}")));
        }
        let Some(definition) = &spec.type_description else {
            return Err(CpsError::MissingTypeDescription(spec.id.clone()));
        };
        let de = self.declare(&spec.id)?;
        let ty = rdf_type();
        self.graph.add(&de, &ty, &self.ns.dinen61360("DataElement"));
        self.graph.add(owner, &self.ns.dinen61360("hasDataElement"), &de);
        let td = skolem_iri(&self.base, "de", &spec.id, "type");
        self.graph.add(&de, &self.ns.dinen61360("hasTypeDescription"), &td);
        self.graph.add(&td, &self.ns.dinen61360("definition"), &NodeRef::string(definition.clone()));
        for (k, inst) in spec.instance_descriptions.iter().enumerate() {
            let id = skolem_iri(&self.base, "de", &spec.id, &format!("instance{k}"));
            self.graph.add(&de, &self.ns.dinen61360("hasInstanceDescription"), &id);
            if let Some(v) = inst.value {
                self.graph.add(&id, &self.ns.dinen61360("value"), &NodeRef::double(v));
            }
            if let Some(u) = &inst.unit {
                self.graph.add(&id, &self.ns.dinen61360("unit"), &NodeRef::string(u.clone()));
            }
        }
        Ok(de)
    }

    /// One model node per operator, one `hasOMObject` per attached equation.
    pub fn attach_behavior_model(&mut self, operator: &NodeRef, object: &NodeRef) -> Result<NodeRef, CpsError> {
        if !self.graph.has_type(operator, &self.ns.vdi3682("ProcessOperator")) {
            return Err(CpsError::NotAnOperator(operator.to_string()));
        }
        if !self.graph.has_type(object, &self.ns.om("Object")) {
            return Err(CpsError::NotAnObject(object.to_string()));
        }
        let model = match self.models.get(operator) {
            Some(m) => m.clone(),
            None => {
                let m = NodeRef::Iri(format!("{}/model/{}", self.base, encode_segment(&local_name(operator))));
                self.graph.add(&m, &rdf_type(), &self.ns.vdi2206("MathematicalModel"));
                self.graph.add(operator, &self.ns.cpsmod("processOperatorBehaviorModel"), &m);
                self.models.insert(operator.clone(), m.clone());
                m
            }
        };
        self.graph.add(&model, &self.ns.cpsmod("hasOMObject"), object);
        Ok(model)
    }

    pub fn link_variable_to_data_element(&mut self, variable: &NodeRef, data_element: &NodeRef) -> Result<(), CpsError> {
        if variable.is_literal() || !self.graph.has_type(variable, &self.ns.om("Variable")) {
            return Err(CpsError::TypeMismatch(format!("{variable} is not an om:Variable")));
        }
        if !self.graph.has_type(data_element, &self.ns.dinen61360("DataElement")) {
            return Err(CpsError::TypeMismatch(format!("{data_element} is not a DataElement")));
        }
        self.graph.add(variable, &self.ns.cpsmod("isDataFor"), data_element);
        Ok(())
    }

    /// The unit is carried by the feature's instance description and is not
    /// repeated on the observation.
    pub fn add_observation(
        &mut self,
        feature: &NodeRef,
        value: f64,
        _unit: Option<&str>,
        timestamp: &str,
    ) -> Result<NodeRef, CpsError> {
        if !self.graph.matching(Some(feature), None, None).any(|_| true) {
            return Err(CpsError::UnresolvedReference(format!("feature of interest {feature}")));
        }
        let time = DateTime::parse_from_rfc3339(timestamp)
            .map_err(|e| CpsError::InvalidTimestamp(format!("{timestamp:?}: {e}")))?
            .with_timezone(&Utc)
            .to_rfc3339_opts(SecondsFormat::AutoSi, true);
        let k = self.observations.entry(feature.clone()).or_insert(0);
        let obs = skolem_iri(&self.base, "obs", &local_name(feature), &k.to_string());
        *k += 1;
        self.graph.add(&obs, &rdf_type(), &self.ns.sosa("Observation"));
        self.graph.add(&obs, &self.ns.sosa("hasFeatureOfInterest"), feature);
        self.graph.add(&obs, &self.ns.sosa("hasSimpleResult"), &NodeRef::double(value));
        self.graph.add(&obs, &self.ns.sosa("resultTime"), &NodeRef::typed(time, xsd("dateTime")));
        Ok(obs)
    }
}
