//! Namespace constants for the vocabularies the catalogs and the ontology use.

use super::term::{Iri, Term};

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const QB: &str = "http://purl.org/linked-data/cube#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const CO: &str = "http://rdf-delta.dev/co#";

pub fn iri(ns: &str, local: &str) -> Iri {
    Iri::new_unchecked(&format!("{ns}{local}"))
}

pub fn term(ns: &str, local: &str) -> Term {
    Term::Iri(iri(ns, local))
}

pub mod rdf {
    use super::*;

    pub fn type_() -> Iri {
        iri(RDF, "type")
    }
    pub fn property() -> Iri {
        iri(RDF, "Property")
    }
}

pub mod rdfs {
    use super::*;

    pub fn class() -> Iri {
        iri(RDFS, "Class")
    }
    pub fn resource() -> Iri {
        iri(RDFS, "Resource")
    }
    pub fn literal() -> Iri {
        iri(RDFS, "Literal")
    }
    pub fn sub_class_of() -> Iri {
        iri(RDFS, "subClassOf")
    }
    pub fn sub_property_of() -> Iri {
        iri(RDFS, "subPropertyOf")
    }
    pub fn domain() -> Iri {
        iri(RDFS, "domain")
    }
    pub fn range() -> Iri {
        iri(RDFS, "range")
    }
    pub fn comment() -> Iri {
        iri(RDFS, "comment")
    }
    pub fn label() -> Iri {
        iri(RDFS, "label")
    }
}

pub mod xsd {
    use super::*;

    pub fn integer() -> Iri {
        iri(XSD, "integer")
    }
}
