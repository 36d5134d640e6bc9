//! Detection of simple and complex changes between two versions of an RDF
//! dataset, with an RDF ontology describing what was detected.

pub mod catalogs;
pub mod detect;
pub mod error;
pub mod harness;
pub mod language;
pub mod ontology;
pub mod pattern;
pub mod pipeline;
pub mod rdf;
pub mod synth;
