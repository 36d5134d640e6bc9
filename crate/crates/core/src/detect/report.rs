use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::rdf::Triple;

use super::{ChangeInstantiation, ConsumptionMap, VersionPair};

/// Wall-clock seconds per phase. `creation` covers detection and triple
/// emission, `ingestion` the sink writes and store merges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Timings {
    pub setup_seconds: f64,
    pub simple_seconds: f64,
    pub complex_seconds: f64,
    pub creation_seconds: f64,
    pub ingestion_seconds: f64,
}

impl Timings {
    /// Everything after setup.
    pub fn detection_seconds(&self) -> f64 {
        self.creation_seconds + self.ingestion_seconds
    }
}

#[derive(Debug, Clone, Default)]
pub struct DetectionReport {
    pub versions: Option<VersionPair>,
    pub simple_detected: BTreeSet<ChangeInstantiation>,
    pub complex_detected: BTreeSet<ChangeInstantiation>,
    pub consumption: ConsumptionMap,
    pub unconsumed_delta: BTreeSet<Triple>,
    pub ambiguous_delta: BTreeMap<Triple, BTreeSet<ChangeInstantiation>>,
    pub warnings: Vec<String>,
    /// Every change of the language, including those never detected.
    pub counts: BTreeMap<String, usize>,
    pub delta_added: usize,
    pub delta_deleted: usize,
    pub schema_triples: usize,
    pub instance_triples: usize,
    pub timings: Timings,
}

#[derive(Serialize)]
struct Detected<'a> {
    id: &'a str,
    change: &'a str,
    args: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consumes: Option<Vec<&'a str>>,
}

#[derive(Serialize)]
struct Ambiguous<'a> {
    triple: String,
    consumers: Vec<&'a str>,
}

#[derive(Serialize)]
struct Delta {
    added: usize,
    deleted: usize,
}

#[derive(Serialize)]
struct OntologySize {
    schema_triples: usize,
    instance_triples: usize,
}

#[derive(Serialize)]
struct Json<'a> {
    old_version: &'a str,
    new_version: &'a str,
    delta: Delta,
    counts: &'a BTreeMap<String, usize>,
    simple: Vec<Detected<'a>>,
    complex: Vec<Detected<'a>>,
    unconsumed: Vec<String>,
    ambiguous: Vec<Ambiguous<'a>>,
    warnings: &'a [String],
    ontology: OntologySize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<TimingsJson>,
}

#[derive(Serialize)]
struct TimingsJson {
    #[serde(flatten)]
    phases: Timings,
    detection_seconds: f64,
}

fn triple_text(t: &Triple) -> String {
    let s = t.to_ntriples();
    s.trim_end_matches(" .").to_string()
}

impl DetectionReport {
    pub fn total_detected(&self) -> usize {
        self.simple_detected.len() + self.complex_detected.len()
    }

    pub fn has_diagnostics(&self) -> bool {
        !self.unconsumed_delta.is_empty()
            || !self.ambiguous_delta.is_empty()
            || !self.warnings.is_empty()
    }

    pub fn count(&self, change: &str) -> usize {
        self.counts.get(change).copied().unwrap_or(0)
    }

    /// Pretty-printed JSON with a fixed key order; timings only on request.
    pub fn to_json(&self, include_timings: bool) -> String {
        let (old, new) = match &self.versions {
            Some(v) => (v.old.as_ref(), v.new.as_ref()),
            None => ("", ""),
        };
        fn render<'a>(
            i: &'a ChangeInstantiation,
            consumption: Option<&'a ConsumptionMap>,
        ) -> Detected<'a> {
            Detected {
                id: i.stable_id(),
                change: i.name(),
                args: i.args().iter().map(ToString::to_string).collect(),
                consumes: consumption.map(|c| {
                    c.consumed_by(i)
                        .map(ChangeInstantiation::stable_id)
                        .collect()
                }),
            }
        }
        let json = Json {
            old_version: old,
            new_version: new,
            delta: Delta {
                added: self.delta_added,
                deleted: self.delta_deleted,
            },
            counts: &self.counts,
            simple: self
                .simple_detected
                .iter()
                .map(|i| render(i, None))
                .collect(),
            complex: self
                .complex_detected
                .iter()
                .map(|i| render(i, Some(&self.consumption)))
                .collect(),
            unconsumed: self.unconsumed_delta.iter().map(triple_text).collect(),
            ambiguous: self
                .ambiguous_delta
                .iter()
                .map(|(t, cs)| Ambiguous {
                    triple: triple_text(t),
                    consumers: cs.iter().map(ChangeInstantiation::stable_id).collect(),
                })
                .collect(),
            warnings: &self.warnings,
            ontology: OntologySize {
                schema_triples: self.schema_triples,
                instance_triples: self.instance_triples,
            },
            timings: include_timings.then(|| TimingsJson {
                phases: self.timings,
                detection_seconds: self.timings.detection_seconds(),
            }),
        };
        let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
        s.push('\n');
        s
    }
}
