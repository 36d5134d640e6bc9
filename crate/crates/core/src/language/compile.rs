use crate::ontology::OntologyNamespace;
use crate::pattern::{
    FilterExpr, GraphPattern, GraphSelector, PatternTerm, TriplePattern, Variable,
};
use crate::rdf::vocab::{self, RDF};

use super::{ChangeLanguage, ComplexChangeDef, SimpleChangeDef};

/// Bound to the old-version IRI before a complex pattern is evaluated.
pub const OLD_VERSION_VAR: &str = "__old_version";
/// Bound to the new-version IRI before a complex pattern is evaluated.
pub const NEW_VERSION_VAR: &str = "__new_version";

fn scoped_with(
    graph: GraphSelector,
    consumed: &[TriplePattern],
    cond: &GraphPattern,
) -> Option<GraphPattern> {
    match cond {
        _ if cond.is_unit() && consumed.is_empty() => None,
        _ if cond.is_unit() => Some(GraphPattern::scoped(
            graph,
            GraphPattern::bgp(consumed.iter().cloned()),
        )),
        GraphPattern::Bgp(tps) => Some(GraphPattern::scoped(
            graph,
            GraphPattern::bgp(tps.iter().chain(consumed).cloned()),
        )),
        _ if consumed.is_empty() => Some(GraphPattern::scoped(graph, cond.clone())),
        _ => Some(GraphPattern::join([
            GraphPattern::scoped(graph, GraphPattern::bgp(consumed.iter().cloned())),
            GraphPattern::scoped(graph, cond.clone()),
        ])),
    }
}

/// The detection pattern of a simple change: δ⁺ and `cond_new` matched in
/// NEW, δ⁻ and `cond_old` matched in OLD, and every consumed pattern
/// required to be absent from the other version.
pub fn compile_simple(def: &SimpleChangeDef) -> GraphPattern {
    let parts: Vec<GraphPattern> = [
        scoped_with(GraphSelector::New, &def.delta_plus, &def.cond_new),
        scoped_with(GraphSelector::Old, &def.delta_minus, &def.cond_old),
    ]
    .into_iter()
    .flatten()
    .collect();
    let mut gp = if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        GraphPattern::join(parts)
    };
    for tp in &def.delta_plus {
        gp = GraphPattern::not_exists(
            gp,
            GraphPattern::scoped(GraphSelector::Old, GraphPattern::bgp([tp.clone()])),
        );
    }
    for tp in &def.delta_minus {
        gp = GraphPattern::not_exists(
            gp,
            GraphPattern::scoped(GraphSelector::New, GraphPattern::bgp([tp.clone()])),
        );
    }
    gp
}

fn var(name: String) -> PatternTerm {
    PatternTerm::Var(Variable::new(name))
}

/// The detection pattern of a complex change over the ontology graph: one
/// unconsumed simple-change individual per consumed reference, one stored
/// association per declared association, and the version conditions.
pub fn compile_complex(def: &ComplexChangeDef, lang: &ChangeLanguage) -> GraphPattern {
    let ns = OntologyNamespace::default();
    let rdf_type = vocab::iri(RDF, "type");
    let old_v = PatternTerm::var(OLD_VERSION_VAR);
    let new_v = PatternTerm::var(NEW_VERSION_VAR);
    let mut onto: Vec<GraphPattern> = Vec::new();
    for (i, r) in def.consumes.iter().enumerate() {
        let sc = var(format!("__sc{i}"));
        let abbrev = lang
            .simple(&r.change)
            .map(|s| s.abbrev.clone())
            .unwrap_or_else(|| super::abbreviation(&r.change));
        let mut tps = vec![
            TriplePattern::new(sc.clone(), rdf_type.clone(), ns.change_class(&r.change)),
            TriplePattern::new(sc.clone(), ns.old_version(), old_v.clone()),
            TriplePattern::new(sc.clone(), ns.new_version(), new_v.clone()),
        ];
        for (j, arg) in r.args.iter().enumerate() {
            tps.push(TriplePattern::new(
                sc.clone(),
                ns.param_property(&abbrev, j + 1),
                arg.clone(),
            ));
        }
        onto.push(GraphPattern::bgp(tps));
        onto.push(GraphPattern::not_exists(
            GraphPattern::Unit,
            GraphPattern::bgp([TriplePattern::new(
                var(format!("__cc{i}")),
                ns.consumes(),
                sc,
            )]),
        ));
    }
    for (k, a) in def.associations.iter().enumerate() {
        let ai = var(format!("__a{k}"));
        let mut tps = vec![
            TriplePattern::new(ai.clone(), rdf_type.clone(), ns.association_class()),
            TriplePattern::new(ai.clone(), ns.old_version(), old_v.clone()),
            TriplePattern::new(ai.clone(), ns.new_version(), new_v.clone()),
        ];
        tps.extend(
            a.from
                .iter()
                .map(|x| TriplePattern::new(ai.clone(), ns.old_value(), x.clone())),
        );
        tps.extend(
            a.to.iter()
                .map(|x| TriplePattern::new(ai.clone(), ns.new_value(), x.clone())),
        );
        onto.push(GraphPattern::bgp(tps));
        for (side, prop, members) in [
            ("ov", ns.old_value(), &a.from),
            ("nv", ns.new_value(), &a.to),
        ] {
            let other = var(format!("__{side}{k}"));
            let differs: Vec<FilterExpr> = members
                .iter()
                .map(|m| FilterExpr::Neq(other.clone(), m.clone()))
                .collect();
            let differs = if differs.len() == 1 {
                differs.into_iter().next().expect("one member")
            } else {
                FilterExpr::And(differs)
            };
            onto.push(GraphPattern::not_exists(
                GraphPattern::Unit,
                GraphPattern::filter(
                    GraphPattern::bgp([TriplePattern::new(ai.clone(), prop, other)]),
                    differs,
                ),
            ));
        }
    }
    let mut parts = Vec::new();
    if !onto.is_empty() {
        parts.push(GraphPattern::scoped(
            GraphSelector::Ontology,
            GraphPattern::join(onto),
        ));
    }
    if !def.cond_old.is_unit() {
        parts.push(GraphPattern::scoped(
            GraphSelector::Old,
            def.cond_old.clone(),
        ));
    }
    if !def.cond_new.is_unit() {
        parts.push(GraphPattern::scoped(
            GraphSelector::New,
            def.cond_new.clone(),
        ));
    }
    match parts.len() {
        0 => GraphPattern::Unit,
        1 => parts.pop().expect("one part"),
        _ => GraphPattern::join(parts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{SimpleChangeDef, SimpleChangeRef};
    use crate::pattern::select_query;
    use crate::rdf::vocab::{QB, RDFS};
    use crate::rdf::Term;

    fn v(n: &str) -> PatternTerm {
        PatternTerm::var(n)
    }

    #[test]
    fn simple_matches_listed_query_shape() {
        let def = SimpleChangeDef::new("Attach_Type_To_Measure", &["m", "t"])
            .added(TriplePattern::new(
                v("m"),
                vocab::iri(RDFS, "range"),
                v("t"),
            ))
            .cond_new(GraphPattern::bgp([TriplePattern::new(
                v("m"),
                vocab::iri(RDF, "type"),
                vocab::iri(QB, "MeasureProperty"),
            )]));
        let gp = compile_simple(&def);
        let q = select_query(&def.param_vars(), &gp);
        assert_eq!(
            q,
            concat!(
                "SELECT ?m ?t WHERE {\n",
                "  GRAPH <v_new> {\n",
                "    ?m <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://purl.org/linked-data/cube#MeasureProperty> .\n",
                "    ?m <http://www.w3.org/2000/01/rdf-schema#range> ?t .\n",
                "  }\n",
                "  FILTER NOT EXISTS {\n",
                "    GRAPH <v_old> {\n",
                "      ?m <http://www.w3.org/2000/01/rdf-schema#range> ?t .\n",
                "    }\n",
                "  }\n",
                "}"
            )
        );
    }

    #[test]
    fn deletion_mirrors_addition() {
        let tp = TriplePattern::new(v("a"), vocab::iri(RDFS, "label"), v("b"));
        let def = SimpleChangeDef::new("Delete_Label", &["a", "b"]).deleted(tp.clone());
        assert_eq!(
            compile_simple(&def),
            GraphPattern::not_exists(
                GraphPattern::scoped(GraphSelector::Old, GraphPattern::bgp([tp.clone()])),
                GraphPattern::scoped(GraphSelector::New, GraphPattern::bgp([tp])),
            )
        );
    }

    #[test]
    fn complex_guards_against_consumed_individuals() {
        let mut lang = ChangeLanguage::new();
        lang.register_simple(SimpleChangeDef::new("Add_Superclass", &["a", "b"]).added(
            TriplePattern::new(v("a"), vocab::iri(RDFS, "subClassOf"), v("b")),
        ))
        .unwrap();
        let obsolete =
            Term::iri("http://www.geneontology.org/formats/oboInOwl#ObsoleteClass").unwrap();
        let def = ComplexChangeDef::new("Mark_as_Obsolete", &["cl"], 2)
            .consumes(SimpleChangeRef::new("Add_Superclass", [v("cl"), v("obs")]))
            .cond_old(GraphPattern::filter(
                GraphPattern::Unit,
                FilterExpr::eq(Variable::new("obs"), obsolete),
            ));
        let q = select_query(&def.params, &compile_complex(&def, &lang));
        assert!(
            q.contains("?__sc0 <http://rdf-delta.dev/co#asc_p1> ?cl ."),
            "{q}"
        );
        assert!(
            q.contains("?__sc0 <http://rdf-delta.dev/co#asc_p2> ?obs ."),
            "{q}"
        );
        assert!(
            q.contains("?__cc0 <http://rdf-delta.dev/co#consumes> ?__sc0 ."),
            "{q}"
        );
        assert!(
            q.contains(
                "FILTER (?obs = <http://www.geneontology.org/formats/oboInOwl#ObsoleteClass>)"
            ),
            "{q}"
        );
    }
}
