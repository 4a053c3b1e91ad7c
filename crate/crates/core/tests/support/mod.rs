pub mod conformance;
pub mod corpus;
pub mod ehsa;
