//! Randomized completeness checks and the size-versus-delta benchmark grid.

use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use crate::catalogs::CatalogId;
use crate::detect::{
    check_completeness, check_unambiguity, detect_simple, AssociationStore, Timings,
};
use crate::error::PipelineError;
use crate::language::ChangeLanguage;
use crate::ontology::OntologyNamespace;
use crate::pattern::EvalContext;
use crate::pipeline::run_detection;
use crate::rdf::{Triple, Universe};
use crate::synth;

/// A delta triple left unconsumed, or consumed by several instantiations,
/// in one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Unconsumed {
        trial: usize,
        triple: Triple,
    },
    Ambiguous {
        trial: usize,
        triple: Triple,
        consumers: Vec<String>,
    },
}

#[derive(Debug, Clone, Default)]
pub struct CheckOutcome {
    pub trials: usize,
    pub unconsumed: usize,
    pub ambiguous: usize,
    pub violations: Vec<Violation>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.unconsumed == 0 && self.ambiguous == 0
    }
}

/// The model's catalog, plus under `adversarial` a renamed copy of its
/// label addition so every added label is consumed twice.
pub fn check_language(model: CatalogId, adversarial: bool) -> ChangeLanguage {
    let mut lang = model.language();
    if adversarial {
        let mut copy = lang
            .simple("Add_Label")
            .expect("both catalogs define labels")
            .def
            .clone();
        copy.name = "Add_Label_Copy".into();
        lang.register_simple(copy)
            .expect("the copy has a fresh name");
    }
    lang
}

/// Runs simple detection on `trials` seeded random pairs over the model's
/// vocabulary and collects every completeness and unambiguity violation.
pub fn check(model: CatalogId, trials: usize, seed: u64, adversarial: bool) -> CheckOutcome {
    let lang = check_language(model, adversarial);
    let mut rng = synth::rng(seed);
    let mut out = CheckOutcome {
        trials,
        ..CheckOutcome::default()
    };
    for trial in 0..trials {
        let universe = Universe::new();
        let (old, new) = synth::random_pair(model, &mut rng, &universe);
        let ctx = EvalContext::new(old, new);
        let found = detect_simple(&lang, &ctx).expect("catalog patterns are well formed");
        let delta = ctx.delta();
        for triple in check_completeness(&found.consumption, &delta) {
            out.unconsumed += 1;
            out.violations.push(Violation::Unconsumed { trial, triple });
        }
        for (triple, consumers) in check_unambiguity(&found.consumption, &delta) {
            out.ambiguous += 1;
            let consumers = consumers.iter().map(ToString::to_string).collect();
            out.violations.push(Violation::Ambiguous {
                trial,
                triple,
                consumers,
            });
        }
    }
    out
}

/// One cell of the benchmark grid. Times are the fastest of the repeats.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub model: String,
    pub size: usize,
    pub delta: usize,
    pub detections: usize,
    pub instance_triples: usize,
    pub setup_seconds: f64,
    pub creation_seconds: f64,
    pub ingestion_seconds: f64,
    pub detection_seconds: f64,
}

pub const BENCH_HEADER: &str =
    "model,size,delta,detections,instance_triples,setup_seconds,creation_seconds,ingestion_seconds,detection_seconds";

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
            self.model,
            self.size,
            self.delta,
            self.detections,
            self.instance_triples,
            self.setup_seconds,
            self.creation_seconds,
            self.ingestion_seconds,
            self.detection_seconds
        )
    }
}

/// Generates one pair of `size` triples with a `delta`-triple difference
/// and runs the full pipeline on it `repeats` times.
pub fn bench_cell(
    model: CatalogId,
    size: usize,
    delta: usize,
    seed: u64,
    repeats: usize,
    work_dir: &Path,
) -> Result<BenchRow, PipelineError> {
    let lang = model.language();
    let universe = Universe::new();
    let (old, new) = synth::scaled_pair(model, size, delta, seed, &universe);
    let ns = OntologyNamespace::default();
    let mut best: Option<(Timings, usize, usize)> = None;
    for _ in 0..repeats.max(1) {
        let run = run_detection(
            &lang,
            old.clone(),
            new.clone(),
            &AssociationStore::new(),
            &ns,
            work_dir,
        )?;
        let t = run.report.timings;
        if best.is_none_or(|(b, _, _)| t.detection_seconds() < b.detection_seconds()) {
            best = Some((t, run.report.total_detected(), run.report.instance_triples));
        }
    }
    let (t, detections, instance_triples) = best.expect("at least one repeat");
    Ok(BenchRow {
        model: model.to_string(),
        size,
        delta,
        detections,
        instance_triples,
        setup_seconds: t.setup_seconds,
        creation_seconds: t.creation_seconds,
        ingestion_seconds: t.ingestion_seconds,
        detection_seconds: t.detection_seconds(),
    })
}

/// Changes detected by at least one trial, useful to see what a check
/// actually exercised.
pub fn exercised(model: CatalogId, trials: usize, seed: u64) -> BTreeSet<String> {
    let lang = model.language();
    let mut rng = synth::rng(seed);
    let mut seen = BTreeSet::new();
    for _ in 0..trials {
        let universe = Universe::new();
        let (old, new) = synth::random_pair(model, &mut rng, &universe);
        let ctx = EvalContext::new(old, new);
        let found = detect_simple(&lang, &ctx).expect("catalog patterns are well formed");
        seen.extend(found.instantiations.iter().map(|i| i.name().to_string()));
    }
    seen
}
