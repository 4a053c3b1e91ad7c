use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub fn rdf(local: &str) -> NodeRef {
    NodeRef::Iri(format!("{RDF}{local}"))
}

pub fn rdf_type() -> NodeRef {
    rdf("type")
}

pub fn rdf_first() -> NodeRef {
    rdf("first")
}

pub fn rdf_rest() -> NodeRef {
    rdf("rest")
}

pub fn rdf_nil() -> NodeRef {
    rdf("nil")
}

pub fn xsd(local: &str) -> String {
    format!("{XSD}{local}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("not an absolute IRI: {0:?}")]
    InvalidIri(String),
}

/// An RDF literal. Datatype is always explicit; simple literals carry
/// `xsd:string`, language-tagged ones `rdf:langString`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    pub datatype: String,
    pub language: Option<String>,
}

/// A node in the graph. Skolem IRIs standing in for anonymous nodes are
/// ordinary [`NodeRef::Iri`] values; see [`skolem_iri`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeRef {
    Iri(String),
    Literal(Literal),
}

impl NodeRef {
    pub fn iri(value: impl Into<String>) -> Self {
        NodeRef::Iri(value.into())
    }

    pub fn string(value: impl Into<String>) -> Self {
        Self::typed(value, xsd("string"))
    }

    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        NodeRef::Literal(Literal { lexical: lexical.into(), datatype: datatype.into(), language: None })
    }

    pub fn lang_string(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        NodeRef::Literal(Literal {
            lexical: lexical.into(),
            datatype: format!("{RDF}langString"),
            language: Some(language.into()),
        })
    }

    pub fn integer(value: impl fmt::Display) -> Self {
        Self::typed(value.to_string(), xsd("integer"))
    }

    pub fn double(value: f64) -> Self {
        Self::typed(crate::openmath::format_float(value), xsd("double"))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            NodeRef::Iri(i) => Some(i),
            NodeRef::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            NodeRef::Literal(l) => Some(l),
            NodeRef::Iri(_) => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, NodeRef::Literal(_))
    }

    /// N-Triples term syntax.
    pub fn to_ntriples(&self) -> String {
        match self {
            NodeRef::Iri(i) => format!("<{i}>"),
            NodeRef::Literal(l) => {
                let mut s = format!("\"{}\"", escape_literal(&l.lexical));
                if let Some(lang) = &l.language {
                    s.push('@');
                    s.push_str(lang);
                } else if l.datatype != xsd("string") {
                    s.push_str(&format!("^^<{}>", l.datatype));
                }
                s
            }
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ntriples())
    }
}

pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// `scheme:rest` with no characters N-Triples forbids inside `<…>`.
pub fn is_absolute_iri(s: &str) -> bool {
    let Some((scheme, rest)) = s.split_once(':') else {
        return false;
    };
    let scheme_ok = scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        && scheme.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    let rest_ok = !rest.is_empty()
        && !rest.chars().any(|c| {
            c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
        });
    scheme_ok && rest_ok
}

/// Deterministic IRI for a node that would otherwise be anonymous:
/// `{base}/{kind}/{context}/{local}` with each segment percent-encoded.
pub fn skolem_iri(base: &str, kind: &str, context: &str, local: &str) -> NodeRef {
    NodeRef::Iri(format!(
        "{}/{}/{}/{}",
        base.trim_end_matches('/'),
        encode_segment(kind),
        encode_segment(context),
        encode_segment(local)
    ))
}

/// Percent-encodes everything outside the RFC 3986 unreserved set.
pub fn encode_segment(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: NodeRef,
    pub predicate: NodeRef,
    pub object: NodeRef,
}

impl Triple {
    pub fn new(subject: NodeRef, predicate: NodeRef, object: NodeRef) -> Self {
        Triple { subject, predicate, object }
    }

    pub fn validate(&self) -> Result<(), RdfError> {
        let NodeRef::Iri(s) = &self.subject else {
            return Err(RdfError::InvalidTriple(format!("literal subject {}", self.subject)));
        };
        let NodeRef::Iri(p) = &self.predicate else {
            return Err(RdfError::InvalidTriple(format!("literal predicate {}", self.predicate)));
        };
        for iri in [Some(s.as_str()), Some(p.as_str()), self.object.as_iri()].into_iter().flatten() {
            if !is_absolute_iri(iri) {
                return Err(RdfError::InvalidIri(iri.to_string()));
            }
        }
        if let NodeRef::Literal(l) = &self.object {
            if !is_absolute_iri(&l.datatype) {
                return Err(RdfError::InvalidIri(l.datatype.clone()));
            }
        }
        Ok(())
    }

    pub fn to_ntriples(&self) -> String {
        format!("{} {} {} .", self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ntriples())
    }
}

/// A set of triples plus prefix bindings used by the Turtle writer.
///
/// Equality compares triples only.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Adds a triple; returns whether it was new.
    pub fn insert(&mut self, triple: Triple) -> Result<bool, RdfError> {
        triple.validate()?;
        Ok(self.triples.insert(triple))
    }

    /// Shorthand for internally constructed triples known to be valid.
    pub(crate) fn add(&mut self, s: &NodeRef, p: &NodeRef, o: &NodeRef) {
        let t = Triple::new(s.clone(), p.clone(), o.clone());
        debug_assert!(t.validate().is_ok(), "{t}");
        self.triples.insert(t);
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn has(&self, s: &NodeRef, p: &NodeRef, o: &NodeRef) -> bool {
        self.triples.contains(&Triple::new(s.clone(), p.clone(), o.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Merges another graph's triples and prefixes into this one.
    pub fn extend(&mut self, other: Graph) {
        self.triples.extend(other.triples);
        for (p, ns) in other.prefixes {
            self.prefixes.entry(p).or_insert(ns);
        }
    }

    pub fn bind_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.insert(prefix.into(), namespace.into());
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    fn with_subject(&self, s: NodeRef) -> impl Iterator<Item = &Triple> + '_ {
        let start = Triple::new(s.clone(), NodeRef::Iri(String::new()), NodeRef::Iri(String::new()));
        self.triples.range(start..).take_while(move |t| t.subject == s)
    }

    /// Triples matching the bound positions.
    pub fn matching(
        &self,
        s: Option<&NodeRef>,
        p: Option<&NodeRef>,
        o: Option<&NodeRef>,
    ) -> Box<dyn Iterator<Item = &Triple> + '_> {
        let (p, o) = (p.cloned(), o.cloned());
        let filter = move |t: &&Triple| {
            p.as_ref().is_none_or(|p| &t.predicate == p) && o.as_ref().is_none_or(|o| &t.object == o)
        };
        match s {
            Some(s) => Box::new(self.with_subject(s.clone()).filter(filter)),
            None => Box::new(self.triples.iter().filter(filter)),
        }
    }

    pub fn objects(&self, s: &NodeRef, p: &NodeRef) -> impl Iterator<Item = &NodeRef> + '_ {
        self.matching(Some(s), Some(p), None).map(|t| &t.object)
    }

    pub fn subjects(&self, p: &NodeRef, o: &NodeRef) -> impl Iterator<Item = &NodeRef> + '_ {
        self.matching(None, Some(p), Some(o)).map(|t| &t.subject)
    }

    /// The single object of `(s, p, ?)`, or `None` if there are zero or several.
    pub fn object(&self, s: &NodeRef, p: &NodeRef) -> Option<&NodeRef> {
        let mut it = self.objects(s, p);
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    pub fn has_type(&self, node: &NodeRef, class: &NodeRef) -> bool {
        self.has(node, &rdf_type(), class)
    }

    /// Subjects typed `class`, in graph order.
    pub fn instances_of<'a>(&'a self, class: &'a NodeRef) -> Vec<&'a NodeRef> {
        let ty = rdf_type();
        self.triples
            .iter()
            .filter(|t| t.predicate == ty && &t.object == class)
            .map(|t| &t.subject)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(local: &str) -> NodeRef {
        NodeRef::iri(format!("http://example.org/{local}"))
    }

    #[test]
    fn insert_is_idempotent() {
        let mut g = Graph::new();
        let t = Triple::new(ex("a"), ex("p"), ex("b"));
        assert_eq!(g.insert(t.clone()), Ok(true));
        assert_eq!(g.len(), 1);
        assert_eq!(g.insert(t), Ok(false));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn literal_subject_is_rejected() {
        let mut g = Graph::new();
        let err = g.insert(Triple::new(NodeRef::string("x"), ex("p"), ex("b"))).unwrap_err();
        assert!(matches!(err, RdfError::InvalidTriple(_)));
        let err = g.insert(Triple::new(ex("a"), NodeRef::string("p"), ex("b"))).unwrap_err();
        assert!(matches!(err, RdfError::InvalidTriple(_)));
        let err = g.insert(Triple::new(NodeRef::iri("relative"), ex("p"), ex("b"))).unwrap_err();
        assert!(matches!(err, RdfError::InvalidIri(_)));
        assert!(g.is_empty());
    }

    #[test]
    fn distinct_inserts_count() {
        let mut g = Graph::new();
        for i in 0..25 {
            g.insert(Triple::new(ex("s"), ex("p"), NodeRef::integer(i))).unwrap();
        }
        assert_eq!(g.len(), 25);
    }

    #[test]
    fn subject_range_lookup() {
        let mut g = Graph::new();
        g.add(&ex("a"), &ex("p"), &ex("x"));
        g.add(&ex("a"), &ex("q"), &ex("y"));
        g.add(&ex("b"), &ex("p"), &ex("z"));
        let objs: Vec<_> = g.objects(&ex("a"), &ex("p")).collect();
        assert_eq!(objs, vec![&ex("x")]);
        assert_eq!(g.matching(Some(&ex("a")), None, None).count(), 2);
        assert_eq!(g.object(&ex("b"), &ex("p")), Some(&ex("z")));
        assert_eq!(g.object(&ex("b"), &ex("q")), None);
    }

    #[test]
    fn iri_validation() {
        assert!(is_absolute_iri("http://example.org/a#b"));
        assert!(is_absolute_iri("urn:x"));
        assert!(!is_absolute_iri("a b:c"));
        assert!(!is_absolute_iri("http://exa mple"));
        assert!(!is_absolute_iri("nocolon"));
    }

    #[test]
    fn skolem_segments_are_encoded() {
        let n = skolem_iri("http://ex.org/base/", "expr", "eq 1", "n0");
        assert_eq!(n, NodeRef::iri("http://ex.org/base/expr/eq%201/n0"));
    }

    #[test]
    fn literal_rendering() {
        assert_eq!(NodeRef::string("a\"b\n").to_ntriples(), r#""a\"b\n""#);
        assert_eq!(
            NodeRef::integer(3).to_ntriples(),
            "\"3\"^^<http://www.w3.org/2001/XMLSchema#integer>"
        );
        assert_eq!(NodeRef::lang_string("hi", "en").to_ntriples(), "\"hi\"@en");
    }
}
