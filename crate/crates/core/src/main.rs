use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rdfdelta_core::catalogs::CatalogId;
use rdfdelta_core::detect::{AssociationStore, VersionPair};
use rdfdelta_core::error::PipelineError;
use rdfdelta_core::harness::{self, Violation, BENCH_HEADER};
use rdfdelta_core::language::json::{load_complex_definitions, parse_associations};
use rdfdelta_core::ontology::OntologyNamespace;
use rdfdelta_core::pipeline::run_detection;
use rdfdelta_core::rdf::{parse_ntriples, serialize_ntriples, Dataset, Universe};

const EXIT_DIAGNOSTICS: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "rdfdelta",
    version,
    about = "Detect simple and complex changes between two RDF versions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Diff two N-Triples files and write the ontology of changes and a report.
    Detect(DetectArgs),
    /// Check completeness and unambiguity of a catalog on random pairs.
    Check(CheckArgs),
    /// Time detection over a grid of dataset and delta sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    old: PathBuf,
    #[arg(long)]
    new: PathBuf,
    #[arg(long)]
    model: CatalogId,
    /// JSON file of complex-change definitions.
    #[arg(long)]
    complex: Option<PathBuf>,
    /// JSON file of associations between the two versions.
    #[arg(long)]
    assoc: Option<PathBuf>,
    /// Where to write the ontology of changes (N-Triples).
    #[arg(long)]
    out: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    report: PathBuf,
    /// Worker threads; defaults to one per core.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Include phase timings in the report.
    #[arg(long)]
    timings: bool,
    /// Exit with status 2 when the report has diagnostics.
    #[arg(long)]
    strict: bool,
    /// Version label of the old file; defaults to its file stem.
    #[arg(long)]
    old_label: Option<String>,
    /// Version label of the new file; defaults to its file stem.
    #[arg(long)]
    new_label: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    model: CatalogId,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Add a duplicate of the label change to provoke ambiguity.
    #[arg(long)]
    adversarial: bool,
    /// Print at most this many violations.
    #[arg(long, default_value_t = 50)]
    show: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    deltas: Vec<usize>,
    #[arg(long)]
    model: CatalogId,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn io_fail(path: &Path, e: io::Error) -> Failure {
    fail(EXIT_IO, format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_fail(path, e))
}

fn load_version(
    path: &Path,
    label: Option<String>,
    universe: &Universe,
) -> Result<Dataset, Failure> {
    let file = File::open(path).map_err(|e| io_fail(path, e))?;
    let mut ds = parse_ntriples(BufReader::new(file), universe)
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    let label = label.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string())
    });
    ds.set_label(label);
    Ok(ds)
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| io_fail(path, e))?;
    let mut out = BufWriter::new(file);
    f(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| io_fail(path, e))
}

fn pool(threads: Option<u16>) -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n as usize);
    }
    b.build().map_err(|e| fail(EXIT_USAGE, e.to_string()))
}

fn pipeline_fail(e: PipelineError) -> Failure {
    match e {
        PipelineError::Ingest(e) => fail(EXIT_IO, e.to_string()),
        PipelineError::Io(e) => fail(EXIT_IO, e.to_string()),
        other => fail(EXIT_DATA, other.to_string()),
    }
}

fn detect(args: DetectArgs) -> Result<u8, Failure> {
    let universe = Universe::new();
    let old = load_version(&args.old, args.old_label, &universe)?;
    let new = load_version(&args.new, args.new_label, &universe)?;
    let mut lang = args.model.language();
    if let Some(path) = &args.complex {
        load_complex_definitions(&read_text(path)?, &mut lang)
            .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    }
    let versions = VersionPair::new(old.label(), new.label());
    let mut assoc = AssociationStore::new();
    if let Some(path) = &args.assoc {
        let items = parse_associations(&read_text(path)?)
            .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
        assoc.extend(&versions, items);
    }
    let sinks = tempfile::tempdir().map_err(|e| fail(EXIT_IO, e.to_string()))?;
    let run = pool(args.threads)?
        .install(|| {
            run_detection(
                &lang,
                old,
                new,
                &assoc,
                &OntologyNamespace::default(),
                sinks.path(),
            )
        })
        .map_err(pipeline_fail)?;
    write_file(&args.out, |w| {
        serialize_ntriples(&run.ontology.combined(), w)
    })?;
    write_file(&args.report, |w| {
        w.write_all(run.report.to_json(args.timings).as_bytes())
    })?;
    let r = &run.report;
    eprintln!(
        "{}: {} simple, {} complex, {} unconsumed, {} ambiguous, {} warnings",
        versions,
        r.simple_detected.len(),
        r.complex_detected.len(),
        r.unconsumed_delta.len(),
        r.ambiguous_delta.len(),
        r.warnings.len()
    );
    Ok(if args.strict && r.has_diagnostics() {
        EXIT_DIAGNOSTICS
    } else {
        0
    })
}

fn check(args: CheckArgs) -> Result<u8, Failure> {
    let outcome = harness::check(args.model, args.trials, args.seed, args.adversarial);
    for v in outcome.violations.iter().take(args.show) {
        match v {
            Violation::Unconsumed { trial, triple } => {
                println!("trial {trial}: unconsumed {triple}")
            }
            Violation::Ambiguous {
                trial,
                triple,
                consumers,
            } => println!(
                "trial {trial}: ambiguous {triple} <- {}",
                consumers.join(" | ")
            ),
        }
    }
    if outcome.violations.len() > args.show {
        println!("... {} more", outcome.violations.len() - args.show);
    }
    println!(
        "model={} trials={} seed={} unconsumed={} ambiguous={}",
        args.model, outcome.trials, args.seed, outcome.unconsumed, outcome.ambiguous
    );
    Ok(if outcome.passed() { 0 } else { 1 })
}

fn bench(args: BenchArgs) -> Result<u8, Failure> {
    let sinks = tempfile::tempdir().map_err(|e| fail(EXIT_IO, e.to_string()))?;
    let pool = pool(args.threads)?;
    let mut rows = Vec::new();
    for &size in &args.sizes {
        for &delta in &args.deltas {
            if delta > size / 2 {
                return Err(fail(
                    EXIT_USAGE,
                    format!("delta {delta} is too large for size {size}"),
                ));
            }
            let row = pool
                .install(|| {
                    harness::bench_cell(
                        args.model,
                        size,
                        delta,
                        args.seed,
                        args.repeats,
                        sinks.path(),
                    )
                })
                .map_err(pipeline_fail)?;
            eprintln!("{}", row.csv());
            rows.push(row);
        }
    }
    write_file(&args.out, |w| {
        writeln!(w, "{BENCH_HEADER}")?;
        for r in &rows {
            writeln!(w, "{}", r.csv())?;
        }
        Ok(())
    })?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Detect(a) => detect(a),
        Command::Check(a) => check(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rdfdelta: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
