//! End-to-end detection between two versions: simple changes, their
//! ingestion into the ontology, complex changes on top, and the report.

use std::path::Path;
use std::time::Instant;

use crate::detect::{
    check_completeness, check_unambiguity, detect_complex, detect_simple, versions_of,
    AssociationStore, ConsumptionMap, DetectionReport, Timings,
};
use crate::error::PipelineError;
use crate::language::ChangeLanguage;
use crate::ontology::{
    emit_associations, emit_detections, ingest, ChangesOntology, IngestStats, OntologyNamespace,
};
use crate::pattern::EvalContext;
use crate::rdf::Dataset;

/// What a run produces: the report and the ontology it populated.
#[derive(Debug, Clone)]
pub struct DetectionRun {
    pub report: DetectionReport,
    pub ontology: ChangesOntology,
}

/// Runs both detection layers between `old` and `new`, whose labels name
/// the versions. The simple and complex triple blocks are written to
/// `simple.nt` and `complex.nt` under `sink_dir` before being loaded.
pub fn run_detection(
    lang: &ChangeLanguage,
    old: Dataset,
    new: Dataset,
    assoc: &AssociationStore,
    ns: &OntologyNamespace,
    sink_dir: &Path,
) -> Result<DetectionRun, PipelineError> {
    let mut ctx = EvalContext::new(old, new);
    let universe = ctx.universe().clone();
    let versions = versions_of(&ctx);
    let mut ontology = ChangesOntology::new(lang, ns, &universe);
    let mut timings = Timings {
        setup_seconds: ctx.setup_seconds(),
        ..Timings::default()
    };
    let mut ingestion = IngestStats::default();

    let start = Instant::now();
    let simple = detect_simple(lang, &ctx)?;
    let triples = emit_detections(
        &simple.instantiations,
        &simple.consumption,
        lang,
        ns,
        &universe,
    )?;
    timings.simple_seconds = start.elapsed().as_secs_f64();
    ingestion.add(ingest(
        &triples,
        &sink_dir.join("simple.nt"),
        &mut ontology,
    )?);
    ctx.extend_ontology(&triples);
    ctx.mark_simple_layer();

    let start = Instant::now();
    let complex = detect_complex(lang, &mut ctx, &simple.instantiations, assoc, ns)?;
    let mut triples = emit_detections(
        &complex.instantiations,
        &complex.consumption,
        lang,
        ns,
        &universe,
    )?;
    let mut pair_assoc = AssociationStore::new();
    pair_assoc.extend(&versions, assoc.for_pair(&versions).cloned());
    triples.extend_from(&emit_associations(&pair_assoc, ns, &universe));
    timings.complex_seconds = start.elapsed().as_secs_f64();
    ingestion.add(ingest(
        &triples,
        &sink_dir.join("complex.nt"),
        &mut ontology,
    )?);

    timings.creation_seconds =
        timings.simple_seconds + timings.complex_seconds + ingestion.write_seconds;
    timings.ingestion_seconds = ingestion.merge_seconds;

    let delta = ctx.delta();
    let mut consumption = ConsumptionMap::new();
    consumption.merge(simple.consumption);
    let unconsumed_delta = check_completeness(&consumption, &delta);
    let ambiguous_delta = check_unambiguity(&consumption, &delta);
    consumption.merge(complex.consumption);

    let mut counts: std::collections::BTreeMap<String, usize> =
        lang.names().map(|n| (n.to_string(), 0)).collect();
    for i in simple.instantiations.iter().chain(&complex.instantiations) {
        *counts.entry(i.name().to_string()).or_default() += 1;
    }
    let report = DetectionReport {
        versions: Some(versions),
        simple_detected: simple.instantiations,
        complex_detected: complex.instantiations,
        consumption,
        unconsumed_delta,
        ambiguous_delta,
        warnings: complex.warnings,
        counts,
        delta_added: delta.added.len(),
        delta_deleted: delta.deleted.len(),
        schema_triples: ontology.schema.len(),
        instance_triples: ontology.instances.len(),
        timings,
    };
    Ok(DetectionRun { report, ontology })
}
