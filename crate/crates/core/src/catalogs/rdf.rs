use crate::language::ChangeLanguage;
use crate::pattern::{FilterExpr, GraphPattern};
use crate::rdf::vocab::{RDF, RDFS};

use super::{c, only_if, tp, v, Pair};

/// Predicates with a dedicated change; every other predicate is a property
/// instance.
pub(crate) const RESERVED_PREDICATES: [&str; 7] = [
    "subClassOf",
    "subPropertyOf",
    "type",
    "comment",
    "label",
    "domain",
    "range",
];

fn reserved(local: &str) -> super::PatternTerm {
    if local == "type" {
        c(RDF, "type")
    } else {
        c(RDFS, local)
    }
}

/// Simple changes of the RDF model, transcribed from their detection queries.
pub fn rdf_catalog() -> ChangeLanguage {
    let mut lang = ChangeLanguage::new();
    let typed = |class: super::PatternTerm| vec![tp(v("a"), c(RDF, "type"), class)];
    for (what, class) in [
        ("Class", c(RDFS, "Class")),
        ("Property", c(RDF, "Property")),
        ("Individual", c(RDFS, "Resource")),
    ] {
        Pair {
            add: &format!("Add_Type_{what}"),
            delete: &format!("Delete_Type_{what}"),
            params: &["a"],
            literals: &[],
            delta: typed(class),
            cond: GraphPattern::Unit,
        }
        .register(&mut lang);
    }
    let binary = [
        ("Superclass", c(RDFS, "subClassOf"), &[][..]),
        ("Superproperty", c(RDFS, "subPropertyOf"), &[]),
        ("Domain", c(RDFS, "domain"), &[]),
        ("Range", c(RDFS, "range"), &[]),
        ("Comment", c(RDFS, "comment"), &["b"]),
        ("Label", c(RDFS, "label"), &["b"]),
    ];
    for (what, predicate, literals) in binary {
        Pair {
            add: &format!("Add_{what}"),
            delete: &format!("Delete_{what}"),
            params: &["a", "b"],
            literals,
            delta: vec![tp(v("a"), predicate, v("b"))],
            cond: GraphPattern::Unit,
        }
        .register(&mut lang);
    }
    Pair {
        add: "Add_Type_To_Individual",
        delete: "Delete_Type_From_Individual",
        params: &["a", "b"],
        literals: &[],
        delta: vec![tp(v("a"), c(RDF, "type"), v("b"))],
        cond: only_if(FilterExpr::And(vec![
            FilterExpr::neq(v("b"), c(RDFS, "Class")),
            FilterExpr::neq(v("b"), c(RDF, "Property")),
            FilterExpr::neq(v("b"), c(RDFS, "Resource")),
        ])),
    }
    .register(&mut lang);
    Pair {
        add: "Add_Property_Instance",
        delete: "Delete_Property_Instance",
        params: &["a1", "a2", "b"],
        literals: &[],
        delta: vec![tp(v("a1"), v("b"), v("a2"))],
        cond: only_if(FilterExpr::And(
            RESERVED_PREDICATES
                .iter()
                .map(|p| FilterExpr::neq(v("b"), reserved(p)))
                .collect(),
        )),
    }
    .register(&mut lang);
    lang
}
