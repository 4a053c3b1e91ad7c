//! Namespace configuration and vocabulary terms.
//!
//! Namespaces of the OpenMath RDF vocabulary and of the ontology design
//! patterns default to the values below and can be overridden through the
//! JSON configuration file (see `docs/namespaces.md`). Local names are fixed.

use serde::{Deserialize, Serialize};

use crate::rdf::{Graph, NodeRef, RDF, RDFS, XSD};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase", deny_unknown_fields)]
pub struct Namespaces {
    pub om: String,
    pub cd_base: String,
    pub cpsmod: String,
    pub din77005: String,
    pub vdi3682: String,
    pub vdi2206: String,
    pub dinen61360: String,
    pub sosa: String,
}

impl Default for Namespaces {
    fn default() -> Self {
        Namespaces {
            om: "http://openmath.org/vocab/math#".into(),
            cd_base: "http://www.openmath.org/cd".into(),
            cpsmod: "http://www.w3id.org/hsu-aut/CPSMod#".into(),
            din77005: "http://www.w3id.org/hsu-aut/DIN77005#".into(),
            vdi3682: "http://www.w3id.org/hsu-aut/VDI3682#".into(),
            vdi2206: "http://www.w3id.org/hsu-aut/VDI2206#".into(),
            dinen61360: "http://www.w3id.org/hsu-aut/DINEN61360#".into(),
            sosa: "http://www.w3.org/ns/sosa/".into(),
        }
    }
}

fn term(ns: &str, local: &str) -> NodeRef {
    NodeRef::Iri(format!("{ns}{local}"))
}

impl Namespaces {
    pub fn om(&self, local: &str) -> NodeRef {
        term(&self.om, local)
    }

    pub fn cpsmod(&self, local: &str) -> NodeRef {
        term(&self.cpsmod, local)
    }

    pub fn din77005(&self, local: &str) -> NodeRef {
        term(&self.din77005, local)
    }

    pub fn vdi3682(&self, local: &str) -> NodeRef {
        term(&self.vdi3682, local)
    }

    pub fn vdi2206(&self, local: &str) -> NodeRef {
        term(&self.vdi2206, local)
    }

    pub fn dinen61360(&self, local: &str) -> NodeRef {
        term(&self.dinen61360, local)
    }

    pub fn sosa(&self, local: &str) -> NodeRef {
        term(&self.sosa, local)
    }

    /// IRI of an OpenMath symbol: `{cdBase}/{cd}#{name}`.
    pub fn symbol_iri(&self, cd: &str, name: &str) -> NodeRef {
        NodeRef::Iri(format!(
            "{}/{}#{}",
            self.cd_base.trim_end_matches('/'),
            crate::rdf::encode_segment(cd),
            crate::rdf::encode_segment(name)
        ))
    }

    /// Prefix table used for Turtle output and query parsing.
    pub fn prefix_table(&self) -> Vec<(&'static str, String)> {
        vec![
            ("cpsmod", self.cpsmod.clone()),
            ("din77005", self.din77005.clone()),
            ("dinen61360", self.dinen61360.clone()),
            ("om", self.om.clone()),
            ("rdf", RDF.to_string()),
            ("rdfs", RDFS.to_string()),
            ("sosa", self.sosa.clone()),
            ("vdi2206", self.vdi2206.clone()),
            ("vdi3682", self.vdi3682.clone()),
            ("xsd", XSD.to_string()),
        ]
    }

    pub fn bind_prefixes(&self, graph: &mut Graph) {
        for (prefix, ns) in self.prefix_table() {
            graph.bind_prefix(prefix, ns);
        }
    }
}

/// Tool configuration: namespaces plus parsing strictness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase", deny_unknown_fields)]
pub struct Config {
    pub namespaces: Namespaces,
    /// Reject unknown infix functions, unsupported OpenMath elements and
    /// symbol IRIs outside the CD base.
    pub strict: bool,
    /// CD assigned to unknown infix function names when not strict.
    pub fallback_cd: String,
}

impl Default for Config {
    fn default() -> Self {
        Config { namespaces: Namespaces::default(), strict: true, fallback_cd: "custom1".into() }
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_iri_shape() {
        let ns = Namespaces::default();
        assert_eq!(
            ns.symbol_iri("arith1", "plus"),
            NodeRef::iri("http://www.openmath.org/cd/arith1#plus")
        );
    }

    #[test]
    fn partial_config_keeps_defaults() {
        let cfg = Config::from_json(r#"{"namespaces": {"om": "http://example.org/om#"}, "strict": false}"#).unwrap();
        assert_eq!(cfg.namespaces.om, "http://example.org/om#");
        assert_eq!(cfg.namespaces.cd_base, Namespaces::default().cd_base);
        assert!(!cfg.strict);
        assert!(Config::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
