use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use rdfdelta_core::catalogs::CatalogId;
use rdfdelta_core::detect::{AssociationStore, ChangeInstantiation, ChangeKind, VersionPair};
use rdfdelta_core::error::PipelineError;
use rdfdelta_core::harness;
use rdfdelta_core::language::json::{load_complex_definitions, parse_associations};
use rdfdelta_core::ontology::OntologyNamespace;
use rdfdelta_core::pipeline::{run_detection, DetectionRun};
use rdfdelta_core::rdf::{parse_ntriples_str, to_ntriples_string, Universe};

fn model(name: &str) -> PyResult<CatalogId> {
    name.parse().map_err(PyValueError::new_err)
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed N-Triples document.
#[pyclass(frozen, module = "rdfdelta")]
struct Dataset {
    inner: rdfdelta_core::rdf::Dataset,
}

#[pymethods]
impl Dataset {
    #[new]
    #[pyo3(signature = (text, label = "v"))]
    fn new(text: &str, label: &str) -> PyResult<Self> {
        let mut inner = parse_ntriples_str(text, &Universe::new()).map_err(value_err)?;
        inner.set_label(label);
        Ok(Dataset { inner })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, line: &str) -> PyResult<bool> {
        let one = parse_ntriples_str(line, &Universe::new()).map_err(value_err)?;
        Ok(one.iter().all(|t| self.inner.contains(&t)) && one.len() == 1)
    }

    /// Each triple as an N-Triples line without the final " .", sorted.
    fn triples(&self) -> Vec<String> {
        self.inner
            .sorted_triples()
            .iter()
            .map(|t| t.to_ntriples())
            .collect()
    }

    fn to_ntriples(&self) -> String {
        to_ntriples_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(label={:?}, triples={})",
            self.inner.label(),
            self.inner.len()
        )
    }
}

/// One detected change with its arguments in N-Triples syntax.
#[pyclass(frozen, module = "rdfdelta")]
struct Change {
    #[pyo3(get)]
    id: String,
    #[pyo3(get)]
    name: String,
    #[pyo3(get)]
    kind: &'static str,
    #[pyo3(get)]
    args: Vec<String>,
    #[pyo3(get)]
    consumes: Vec<String>,
}

#[pymethods]
impl Change {
    fn __repr__(&self) -> String {
        format!("{}({})", self.name, self.args.join(", "))
    }
}

fn change(i: &ChangeInstantiation, run: &DetectionRun) -> Change {
    Change {
        id: i.stable_id().to_string(),
        name: i.name().to_string(),
        kind: match i.kind() {
            ChangeKind::Simple => "simple",
            ChangeKind::Complex => "complex",
        },
        args: i.args().iter().map(ToString::to_string).collect(),
        consumes: run
            .report
            .consumption
            .consumed_by(i)
            .map(|s| s.stable_id().to_string())
            .collect(),
    }
}

/// Everything a detection run produced.
#[pyclass(frozen, module = "rdfdelta")]
struct DetectionResult {
    run: DetectionRun,
}

#[pymethods]
impl DetectionResult {
    #[getter]
    fn simple(&self) -> Vec<Change> {
        self.run
            .report
            .simple_detected
            .iter()
            .map(|i| change(i, &self.run))
            .collect()
    }

    #[getter]
    fn complex(&self) -> Vec<Change> {
        self.run
            .report
            .complex_detected
            .iter()
            .map(|i| change(i, &self.run))
            .collect()
    }

    #[getter]
    fn counts(&self) -> BTreeMap<String, usize> {
        self.run.report.counts.clone()
    }

    #[getter]
    fn unconsumed(&self) -> Vec<String> {
        self.run
            .report
            .unconsumed_delta
            .iter()
            .map(|t| t.to_ntriples())
            .collect()
    }

    #[getter]
    fn ambiguous(&self) -> BTreeMap<String, Vec<String>> {
        self.run
            .report
            .ambiguous_delta
            .iter()
            .map(|(t, cs)| {
                (
                    t.to_ntriples(),
                    cs.iter().map(|c| c.stable_id().to_string()).collect(),
                )
            })
            .collect()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.run.report.warnings.clone()
    }

    #[getter]
    fn instance_triples(&self) -> usize {
        self.run.report.instance_triples
    }

    #[pyo3(signature = (timings = false))]
    fn report_json(&self, timings: bool) -> String {
        self.run.report.to_json(timings)
    }

    /// Schema and instances of the ontology of changes.
    fn ontology_ntriples(&self) -> String {
        to_ntriples_string(&self.run.ontology.combined())
    }

    fn instances_ntriples(&self) -> String {
        to_ntriples_string(&self.run.ontology.instances)
    }

    fn __repr__(&self) -> String {
        format!(
            "DetectionResult(simple={}, complex={}, unconsumed={}, ambiguous={})",
            self.run.report.simple_detected.len(),
            self.run.report.complex_detected.len(),
            self.run.report.unconsumed_delta.len(),
            self.run.report.ambiguous_delta.len()
        )
    }
}

fn pipeline_err(e: PipelineError) -> PyErr {
    match e {
        PipelineError::Io(_) | PipelineError::Ingest(_) => PyIOError::new_err(e.to_string()),
        other => value_err(other),
    }
}

/// Detects simple and complex changes from `old` to `new`.
#[pyfunction]
#[pyo3(signature = (old, new, model, complex = None, associations = None, sink_dir = None))]
fn detect(
    py: Python<'_>,
    old: &Dataset,
    new: &Dataset,
    model: &str,
    complex: Option<&str>,
    associations: Option<&str>,
    sink_dir: Option<PathBuf>,
) -> PyResult<DetectionResult> {
    let mut lang = self::model(model)?.language();
    if let Some(text) = complex {
        load_complex_definitions(text, &mut lang).map_err(value_err)?;
    }
    let universe = Universe::new();
    let old = old.inner.rehome(&universe);
    let new = new.inner.rehome(&universe);
    let versions = VersionPair::new(old.label(), new.label());
    let mut assoc = AssociationStore::new();
    if let Some(text) = associations {
        assoc.extend(&versions, parse_associations(text).map_err(value_err)?);
    }
    let scratch;
    let dir = match sink_dir {
        Some(d) => d,
        None => {
            scratch = tempfile::tempdir().map_err(|e| PyIOError::new_err(e.to_string()))?;
            scratch.path().to_path_buf()
        }
    };
    let run = py
        .detach(|| run_detection(&lang, old, new, &assoc, &OntologyNamespace::default(), &dir))
        .map_err(pipeline_err)?;
    Ok(DetectionResult { run })
}

/// Names of the simple changes in a built-in catalog.
#[pyfunction]
fn catalog(model: &str) -> PyResult<Vec<String>> {
    Ok(self::model(model)?
        .language()
        .names()
        .map(str::to_string)
        .collect())
}

/// Completeness and unambiguity of a catalog over random pairs.
#[pyfunction]
#[pyo3(signature = (model, trials = 1000, seed = 0, adversarial = false))]
fn check(
    py: Python<'_>,
    model: &str,
    trials: usize,
    seed: u64,
    adversarial: bool,
) -> PyResult<BTreeMap<String, usize>> {
    let model = self::model(model)?;
    let out = py.detach(|| harness::check(model, trials, seed, adversarial));
    Ok(BTreeMap::from([
        ("trials".to_string(), out.trials),
        ("unconsumed".to_string(), out.unconsumed),
        ("ambiguous".to_string(), out.ambiguous),
    ]))
}

#[pymodule]
fn rdfdelta(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dataset>()?;
    m.add_class::<Change>()?;
    m.add_class::<DetectionResult>()?;
    m.add_function(wrap_pyfunction!(detect, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
