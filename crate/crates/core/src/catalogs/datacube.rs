use crate::language::ChangeLanguage;
use crate::pattern::{FilterExpr, GraphPattern, TriplePattern};
use crate::rdf::vocab::{QB, RDF, RDFS, SKOS};

use super::{absent, bgp, c, only_if, tp, v, Pair};

fn a(x: &str, ns: &str, class: &str) -> TriplePattern {
    tp(v(x), c(RDF, "type"), c(ns, class))
}

fn qb(s: &str, p: &str, o: &str) -> TriplePattern {
    tp(v(s), c(QB, p), v(o))
}

fn either(alternatives: Vec<TriplePattern>) -> GraphPattern {
    let mut it = alternatives.into_iter().map(|t| bgp([t]));
    let first = it.next().expect("at least one alternative");
    it.fold(first, GraphPattern::union)
}

/// Predicates the unknown-property catch-all leaves to dedicated changes.
pub(crate) const UNKNOWN_EXCLUDED_PREDICATES: [(&str, &str); 11] = [
    (RDFS, "label"),
    (RDFS, "range"),
    (SKOS, "inScheme"),
    (SKOS, "broaderTransitive"),
    (QB, "codeList"),
    (QB, "component"),
    (QB, "dimension"),
    (QB, "measure"),
    (QB, "attribute"),
    (QB, "dataSet"),
    (QB, "structure"),
];

/// Classes whose `rdf:type` triples the unknown-property catch-all leaves
/// to dedicated changes.
pub(crate) const UNKNOWN_EXCLUDED_TYPES: [(&str, &str); 8] = [
    (SKOS, "Concept"),
    (SKOS, "ConceptScheme"),
    (QB, "AttributeProperty"),
    (QB, "CodedProperty"),
    (QB, "DimensionProperty"),
    (QB, "DataStructureDefinition"),
    (QB, "HierarchicalCodeList"),
    (QB, "Observation"),
];

fn unknown_property_cond() -> GraphPattern {
    let label = c(RDFS, "label");
    let not_label_subproperty = GraphPattern::union(
        absent(bgp([tp(v("p"), c(RDFS, "subPropertyOf"), label.clone())])),
        only_if(FilterExpr::neq(v("p"), label)),
    );
    let mut tests: Vec<FilterExpr> = UNKNOWN_EXCLUDED_PREDICATES
        .iter()
        .map(|(ns, local)| FilterExpr::neq(v("p"), c(ns, local)))
        .collect();
    tests.extend(UNKNOWN_EXCLUDED_TYPES.iter().map(|(ns, local)| {
        FilterExpr::Or(vec![
            FilterExpr::neq(v("p"), c(RDF, "type")),
            FilterExpr::neq(v("o"), c(ns, local)),
        ])
    }));
    GraphPattern::filter(not_label_subproperty, FilterExpr::And(tests))
}

fn observation_chain(component: &str, property: &str) -> Vec<TriplePattern> {
    vec![
        qb("o", "dataSet", "ds"),
        qb("ds", "structure", "ft"),
        qb("ft", "component", "cs"),
        qb("cs", component, property),
        tp(v(property), c(RDFS, "range"), v("v")),
    ]
}

/// Simple changes of the multidimensional model over the Data Cube
/// vocabulary, transcribed from their detection queries.
pub fn datacube_catalog() -> ChangeLanguage {
    let mut lang = ChangeLanguage::new();
    let typed = [
        ("Dimension", "d", QB, "DimensionProperty"),
        ("Observation", "o", QB, "Observation"),
        ("Codelist", "c", SKOS, "ConceptScheme"),
        ("Instance", "i", SKOS, "Concept"),
        ("Measure", "m", QB, "MeasureProperty"),
        ("Fact_Table", "ft", QB, "DataStructureDefinition"),
        ("Attribute", "attr", QB, "AttributeProperty"),
    ];
    for (what, x, ns, class) in typed {
        Pair {
            add: &format!("Add_{what}"),
            delete: &format!("Delete_{what}"),
            params: &[x],
            literals: &[],
            delta: vec![a(x, ns, class)],
            cond: GraphPattern::Unit,
        }
        .register(&mut lang);
    }
    let not_a_scheme = || absent(bgp([a("h", SKOS, "ConceptScheme")]));
    Pair {
        add: "Add_Hierarchy",
        delete: "Delete_Hierarchy",
        params: &["h"],
        literals: &[],
        delta: vec![a("h", QB, "HierarchicalCodeList")],
        cond: not_a_scheme(),
    }
    .register(&mut lang);

    let attach = |lang: &mut ChangeLanguage,
                  what: &str,
                  params: &[&str],
                  delta: Vec<TriplePattern>,
                  cond: GraphPattern| {
        Pair {
            add: &format!("Attach_{what}"),
            delete: &format!("Detach_{}", what.replacen("_to_", "_from_", 1)),
            params,
            literals: &[],
            delta,
            cond,
        }
        .register(lang);
    };
    let is = |x: &str, ns: &str, class: &str| bgp([a(x, ns, class)]);
    attach(
        &mut lang,
        "Datatype_to_Dimension",
        &["d", "t"],
        vec![tp(v("d"), c(RDFS, "range"), v("t"))],
        is("d", QB, "DimensionProperty"),
    );
    attach(
        &mut lang,
        "Attr_to_Dimension",
        &["d", "attr"],
        vec![qb("d", "attribute", "attr")],
        is("d", QB, "DimensionProperty"),
    );
    attach(
        &mut lang,
        "Observation_to_FT",
        &["o", "ft"],
        vec![qb("o", "dataSet", "ds"), qb("ds", "structure", "ft")],
        GraphPattern::Unit,
    );
    attach(
        &mut lang,
        "Codelist_to_Dimension",
        &["d", "c"],
        vec![qb("d", "codeList", "c")],
        GraphPattern::Unit,
    );
    attach(
        &mut lang,
        "Hierarchy_to_Dimension",
        &["d", "h"],
        vec![qb("d", "codeList", "h")],
        GraphPattern::join([is("h", QB, "HierarchicalCodeList"), not_a_scheme()]),
    );
    attach(
        &mut lang,
        "Instance_to_Codelist",
        &["c", "i"],
        vec![tp(v("i"), c(SKOS, "inScheme"), v("c"))],
        is("c", SKOS, "ConceptScheme"),
    );
    attach(
        &mut lang,
        "Instance_to_Hierarchy",
        &["h", "i"],
        vec![tp(v("i"), c(SKOS, "inScheme"), v("h"))],
        is("h", QB, "HierarchicalCodeList"),
    );
    attach(
        &mut lang,
        "Instance_to_Parent",
        &["i", "p"],
        vec![tp(v("i"), c(SKOS, "broaderTransitive"), v("p"))],
        GraphPattern::Unit,
    );
    Pair {
        add: "Attach_Type_To_Measure",
        delete: "Detach_Type_from_Measure",
        params: &["m", "t"],
        literals: &[],
        delta: vec![tp(v("m"), c(RDFS, "range"), v("t"))],
        cond: is("m", QB, "MeasureProperty"),
    }
    .register(&mut lang);
    attach(
        &mut lang,
        "Measure_to_Fact_Table",
        &["m", "ft"],
        vec![qb("ft", "component", "cs"), qb("cs", "measure", "m")],
        GraphPattern::Unit,
    );
    attach(
        &mut lang,
        "Dimension_to_Fact_Table",
        &["d", "ft"],
        vec![qb("ft", "component", "cs"), qb("cs", "dimension", "d")],
        GraphPattern::Unit,
    );
    attach(
        &mut lang,
        "Attr_to_Measure",
        &["attr", "m"],
        vec![qb("m", "attribute", "attr")],
        is("m", QB, "MeasureProperty"),
    );
    attach(
        &mut lang,
        "Observation_to_Dataset",
        &["o", "ds"],
        vec![qb("o", "dataSet", "ds")],
        GraphPattern::Unit,
    );

    let valued = [
        ("Measure_Value", "measure", "m", QB, "MeasureProperty"),
        ("Dimension_Value", "dimension", "d", QB, "DimensionProperty"),
    ];
    for (what, component, x, ns, class) in valued {
        Pair {
            add: &format!("Add_{what}_to_Observation"),
            delete: &format!("Delete_{what}_from_Observation"),
            params: &["o", x, "v"],
            literals: &[],
            delta: observation_chain(component, x),
            cond: is(x, ns, class),
        }
        .register(&mut lang);
    }

    Pair {
        add: "Add_Inscheme",
        delete: "Delete_Inscheme",
        params: &["x", "s"],
        literals: &[],
        delta: vec![tp(v("x"), c(SKOS, "inScheme"), v("s"))],
        cond: absent(either(vec![
            a("s", SKOS, "ConceptScheme"),
            a("s", QB, "HierarchicalCodeList"),
        ])),
    }
    .register(&mut lang);
    Pair {
        add: "Add_Label",
        delete: "Delete_Label",
        params: &["s", "o"],
        literals: &["o"],
        delta: vec![tp(v("s"), c(RDFS, "label"), v("o"))],
        cond: GraphPattern::Unit,
    }
    .register(&mut lang);
    Pair {
        add: "Add_Unknown_Property",
        delete: "Delete_Unknown_Property",
        params: &["s", "p", "o"],
        literals: &[],
        delta: vec![tp(v("s"), v("p"), v("o"))],
        cond: unknown_property_cond(),
    }
    .register(&mut lang);
    Pair {
        add: "Add_Generic_Datatype",
        delete: "Delete_Generic_Datatype",
        params: &["x", "t"],
        literals: &[],
        delta: vec![tp(v("x"), c(RDFS, "range"), v("t"))],
        cond: GraphPattern::Unit,
    }
    .register(&mut lang);
    Pair {
        add: "Add_Generic_Attribute",
        delete: "Delete_Generic_Attribute",
        params: &["x", "attr"],
        literals: &[],
        delta: vec![qb("x", "attribute", "attr")],
        cond: absent(either(vec![
            a("attr", QB, "DimensionProperty"),
            a("attr", QB, "MeasureProperty"),
            a("attr", QB, "CodedProperty"),
        ])),
    }
    .register(&mut lang);
    Pair {
        add: "Add_Generic_Value_to_Observation",
        delete: "Delete_Generic_Value_from_Observation",
        params: &["o", "p", "v"],
        literals: &[],
        delta: observation_chain("componentProperty", "p"),
        cond: absent(either(vec![
            a("p", QB, "DimensionProperty"),
            a("p", QB, "MeasureProperty"),
        ])),
    }
    .register(&mut lang);
    lang
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::detect_simple;
    use crate::pattern::EvalContext;
    use crate::rdf::{parse_ntriples_str, Universe};

    const QB_NS: &str = "http://purl.org/linked-data/cube#";
    const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

    fn detect(old: &str, new: &str) -> Vec<String> {
        let u = Universe::new();
        let ctx = EvalContext::new(
            parse_ntriples_str(old, &u).unwrap(),
            parse_ntriples_str(new, &u).unwrap(),
        );
        detect_simple(&datacube_catalog(), &ctx)
            .unwrap()
            .instantiations
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn registers_every_entry() {
        let lang = datacube_catalog();
        assert_eq!(lang.len(), 58);
        let attm = lang.simple("Attach_Type_To_Measure").unwrap();
        assert_eq!(attm.abbrev, "attm");
        assert!(lang.simple("Detach_Instance_from_Parent").is_some());
        assert!(lang
            .simple("Delete_Generic_Value_from_Observation")
            .is_some());
    }

    #[test]
    fn observation_typing_alone() {
        let got = detect(
            "",
            &format!("<a:o> <{RDF_NS}type> <{QB_NS}Observation> .\n"),
        );
        assert_eq!(got, ["Add_Observation(<a:o>)"]);
    }

    #[test]
    fn hierarchy_excludes_concept_schemes() {
        let h = format!("<a:h> <{RDF_NS}type> <{QB_NS}HierarchicalCodeList> .\n");
        assert_eq!(detect("", &h), ["Add_Hierarchy(<a:h>)"]);
        let both = format!(
            "{h}<a:h> <{RDF_NS}type> <http://www.w3.org/2004/02/skos/core#ConceptScheme> .\n"
        );
        assert_eq!(detect("", &both), ["Add_Codelist(<a:h>)"]);
    }

    #[test]
    fn unknown_property_reads_filters_pairwise() {
        let got = detect(
            "",
            &format!(
                "<a:s> <{RDF_NS}type> <a:Thing> .\n<a:s> <{RDF_NS}type> <{QB_NS}Observation> .\n"
            ),
        );
        assert_eq!(
            got,
            [
                "Add_Observation(<a:s>)".to_string(),
                format!("Add_Unknown_Property(<a:s>, <{RDF_NS}type>, <a:Thing>)")
            ]
        );
        let label_sub = "<a:p> <http://www.w3.org/2000/01/rdf-schema#subPropertyOf> <http://www.w3.org/2000/01/rdf-schema#label> .\n<a:s> <a:p> \"x\" .\n";
        let got = detect("", label_sub);
        assert!(
            got.contains(&"Add_Unknown_Property(<a:s>, <a:p>, \"x\")".to_string()),
            "{got:?}"
        );
    }
}
