//! In-memory RDF graph with canonical N-Triples, Turtle output and
//! basic graph-pattern matching. No blank nodes, no named graphs.

mod model;
mod ntriples;
mod query;
mod turtle;

pub use model::{
    encode_segment, is_absolute_iri, rdf, rdf_first, rdf_nil, rdf_rest, rdf_type, skolem_iri, xsd,
    Graph, Literal, NodeRef, RdfError, Triple, RDF, RDFS, XSD,
};
pub use ntriples::{parse_ntriples, to_ntriples, SyntaxError};
pub use query::{match_pattern, MalformedQuery, PatternQuery, PatternTerm, Solutions, TriplePattern};
pub use turtle::to_turtle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdfFormat {
    Turtle,
    NTriples,
}

pub fn serialize(graph: &Graph, format: RdfFormat) -> String {
    match format {
        RdfFormat::Turtle => to_turtle(graph),
        RdfFormat::NTriples => to_ntriples(graph),
    }
}
