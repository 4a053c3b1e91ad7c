//! Behavior models of cyber-physical systems as RDF knowledge graphs.
//!
//! Differential equations enter as OpenMath XML or infix text, are mapped
//! onto RDF with argument lists as RDF collections, and are attached to
//! process operators, resources and data elements of a CPS model.

pub mod cps;
pub mod eval;
pub mod export;
pub mod infix;
pub mod mapper;
pub mod openmath;
pub mod rdf;
pub mod validate;
pub mod vocab;
