#![allow(dead_code)]

pub mod oracle;
pub mod random_data;

use std::path::PathBuf;

use rdfdelta_core::detect::detect_simple;
use rdfdelta_core::language::ChangeLanguage;
use rdfdelta_core::pattern::EvalContext;
use rdfdelta_core::rdf::{Dataset, Universe};

use oracle::{Detections, Instance};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn language(inst: &Instance) -> ChangeLanguage {
    let mut lang = ChangeLanguage::new();
    for d in &inst.defs {
        lang.register_simple(d.clone())
            .expect("generated definitions are valid");
    }
    lang
}

/// The engine's answer on an oracle instance, in the oracle's shape.
pub fn engine(inst: &Instance) -> Detections {
    let u = Universe::new();
    let mut old = Dataset::from_triples(&u, &inst.old);
    old.set_label("v1");
    let mut new = Dataset::from_triples(&u, &inst.new);
    new.set_label("v2");
    let ctx = EvalContext::new(old, new);
    let found = detect_simple(&language(inst), &ctx).expect("patterns are well formed");
    let mut out = Detections::new();
    for i in &found.instantiations {
        out.entry((i.name().to_string(), i.args().to_vec()))
            .or_default();
    }
    for (t, consumers) in found.consumption.triple_consumers() {
        for c in consumers {
            out.entry((c.name().to_string(), c.args().to_vec()))
                .or_default()
                .insert(t.clone());
        }
    }
    out
}

use std::path::Path;

use rdfdelta_core::catalogs::CatalogId;
use rdfdelta_core::detect::AssociationStore;
use rdfdelta_core::language::json::load_complex_definitions;
use rdfdelta_core::ontology::OntologyNamespace;
use rdfdelta_core::pipeline::{run_detection, DetectionRun};
use rdfdelta_core::rdf::parse_ntriples_str;

pub fn load(path: &Path, label: &str, u: &Universe) -> Dataset {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut ds = parse_ntriples_str(&text, u).expect("fixture parses");
    ds.set_label(label);
    ds
}

/// Runs the pipeline on `dir/v1.nt` and `dir/v2.nt`, with `dir/complex.json`
/// when present. Returns the run and the sink directory holding the
/// written simple.nt and complex.nt.
pub fn run_fixture(dir: &Path, model: CatalogId) -> (DetectionRun, tempfile::TempDir) {
    let u = Universe::new();
    let old = load(&dir.join("v1.nt"), "v1", &u);
    let new = load(&dir.join("v2.nt"), "v2", &u);
    let mut lang = model.language();
    let complex = dir.join("complex.json");
    if complex.exists() {
        load_complex_definitions(&std::fs::read_to_string(complex).unwrap(), &mut lang).unwrap();
    }
    let sinks = tempfile::tempdir().unwrap();
    let run = run_detection(
        &lang,
        old,
        new,
        &AssociationStore::new(),
        &OntologyNamespace::default(),
        sinks.path(),
    )
    .expect("fixture runs");
    (run, sinks)
}

/// The files compared byte for byte against `dir/expected/`.
pub fn golden_outputs(run: &DetectionRun, sinks: &Path) -> Vec<(&'static str, String)> {
    let read = |f: &str| std::fs::read_to_string(sinks.join(f)).unwrap();
    vec![
        ("simple.nt", read("simple.nt")),
        ("complex.nt", read("complex.nt")),
        ("report.json", run.report.to_json(false)),
    ]
}

/// Names of mismatching golden files; with UPDATE_GOLDEN set they are
/// rewritten instead.
pub fn golden_mismatches(dir: &Path, outputs: &[(&str, String)]) -> Vec<String> {
    let expected = dir.join("expected");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for (name, got) in outputs {
        let path = expected.join(name);
        if update {
            std::fs::create_dir_all(&expected).unwrap();
            std::fs::write(&path, got).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(got.as_str()) {
            bad.push(name.to_string());
        }
    }
    bad
}

pub const PRIORITY_OLD: &str = "<http://example.org/Widget> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2000/01/rdf-schema#Class> .\n";
pub const PRIORITY_NEW: &str = "<http://example.org/Widget> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2000/01/rdf-schema#Class> .\n\
<http://example.org/Widget> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://example.org/Gadget> .\n";

/// Two complex changes competing for the one Add_Superclass.
pub fn priority_definitions(reparent: u32, specialise: u32) -> String {
    format!(
        r#"[
  {{"name": "Reparent", "params": ["c", "p"], "priority": {reparent},
    "consumes": [{{"change": "Add_Superclass", "args": ["?c", "?p"]}}]}},
  {{"name": "Specialise", "params": ["c"], "priority": {specialise},
    "consumes": [{{"change": "Add_Superclass", "args": ["?c", "?p"]}}]}}
]"#
    )
}

pub fn run_priority(reparent: u32, specialise: u32) -> DetectionRun {
    let u = Universe::new();
    let mut old = parse_ntriples_str(PRIORITY_OLD, &u).unwrap();
    old.set_label("v1");
    let mut new = parse_ntriples_str(PRIORITY_NEW, &u).unwrap();
    new.set_label("v2");
    let mut lang = CatalogId::RdfModel.language();
    load_complex_definitions(&priority_definitions(reparent, specialise), &mut lang).unwrap();
    let sinks = tempfile::tempdir().unwrap();
    run_detection(
        &lang,
        old,
        new,
        &AssociationStore::new(),
        &OntologyNamespace::default(),
        sinks.path(),
    )
    .unwrap()
}

pub fn complex_names(run: &DetectionRun) -> Vec<String> {
    run.report
        .complex_detected
        .iter()
        .map(|i| i.name().to_string())
        .collect()
}
