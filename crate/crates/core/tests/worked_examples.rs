mod common;

use rdfdelta_core::catalogs::CatalogId;
use rdfdelta_core::rdf::{parse_ntriples_str, Universe};

use common::*;

#[test]
fn measure_datatype_matches_golden() {
    let dir = fixtures().join("fig4");
    let (run, sinks) = run_fixture(&dir, CatalogId::DataCube);
    assert_eq!(
        golden_mismatches(&dir, &golden_outputs(&run, sinks.path())),
        Vec::<String>::new()
    );
    let attach: Vec<_> = run
        .report
        .simple_detected
        .iter()
        .filter(|i| i.name() == "Attach_Type_To_Measure")
        .collect();
    assert_eq!(attach.len(), 1);
    assert_eq!(
        attach[0]
            .args()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>(),
        [
            "<http://example.org/dm-measure/meas7v8t>",
            "<http://example.org/dm-type/int>"
        ]
    );
}

#[test]
fn measure_datatype_individual_has_five_triples() {
    let (run, sinks) = run_fixture(&fixtures().join("fig4"), CatalogId::DataCube);
    let u = Universe::new();
    let simple = parse_ntriples_str(
        &std::fs::read_to_string(sinks.path().join("simple.nt")).unwrap(),
        &u,
    )
    .unwrap();
    let attach = run
        .report
        .simple_detected
        .iter()
        .find(|i| i.name() == "Attach_Type_To_Measure")
        .unwrap();
    let node = format!("<http://rdf-delta.dev/co#d_{}>", attach.stable_id());
    let text = rdfdelta_core::rdf::to_ntriples_string(&simple);
    let own: Vec<&str> = text.lines().filter(|l| l.starts_with(&node)).collect();
    assert_eq!(own.len(), 5, "{own:#?}");
    assert!(own
        .iter()
        .any(|l| l.ends_with("<http://rdf-delta.dev/co#Attach_Type_To_Measure> .")));
    assert!(own
        .iter()
        .any(|l| l.ends_with("<http://example.org/dm-type/int> .")));
}

#[test]
fn obsolete_class_matches_golden() {
    let dir = fixtures().join("fig5");
    let (run, sinks) = run_fixture(&dir, CatalogId::RdfModel);
    assert_eq!(
        golden_mismatches(&dir, &golden_outputs(&run, sinks.path())),
        Vec::<String>::new()
    );
    assert_eq!(complex_names(&run), ["Mark_as_Obsolete"]);
    let complex = std::fs::read_to_string(sinks.path().join("complex.nt")).unwrap();
    assert_eq!(complex.lines().count(), 5);
    assert_eq!(
        complex
            .lines()
            .filter(|l| l.contains("co#consumes>"))
            .count(),
        1
    );
    assert!(!run.report.has_diagnostics());
}

#[test]
fn higher_priority_wins() {
    let run = run_priority(5, 2);
    assert_eq!(complex_names(&run), ["Reparent"]);
    assert!(run.report.warnings.is_empty());
}

#[test]
fn swapped_priority_swaps_winner() {
    let run = run_priority(2, 5);
    assert_eq!(complex_names(&run), ["Specialise"]);
    assert!(run.report.warnings.is_empty());
}

#[test]
fn equal_priority_detects_both_and_warns() {
    let run = run_priority(3, 3);
    let mut names = complex_names(&run);
    names.sort();
    assert_eq!(names, ["Reparent", "Specialise"]);
    assert_eq!(run.report.warnings.len(), 1);
    assert!(
        run.report.warnings[0].contains("equal-priority"),
        "{:?}",
        run.report.warnings
    );
}
