use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::IngestError;
use crate::rdf::{parse_into, serialize_ntriples, Dataset};

use super::ChangesOntology;

/// Outcome of one ingestion: triples written to the sink, triples new to
/// the store, and the time spent in each phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct IngestStats {
    pub written: usize,
    pub merged: usize,
    pub write_seconds: f64,
    pub merge_seconds: f64,
}

impl IngestStats {
    pub fn add(&mut self, other: IngestStats) {
        self.written += other.written;
        self.merged += other.merged;
        self.write_seconds += other.write_seconds;
        self.merge_seconds += other.merge_seconds;
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `triples` to `sink` as sorted N-Triples, then bulk-loads the file
/// into the store's instances.
pub fn ingest(
    triples: &Dataset,
    sink: &Path,
    store: &mut ChangesOntology,
) -> Result<IngestStats, IngestError> {
    let start = Instant::now();
    let file = File::create(sink).map_err(io(sink))?;
    let mut out = BufWriter::new(file);
    serialize_ntriples(triples, &mut out).map_err(io(sink))?;
    out.flush().map_err(io(sink))?;
    drop(out);
    let write_seconds = start.elapsed().as_secs_f64();
    let mut stats = ingest_file(sink, store)?;
    stats.written = triples.len();
    stats.write_seconds = write_seconds;
    Ok(stats)
}

/// Loads an N-Triples file into the store's instances.
pub fn ingest_file(path: &Path, store: &mut ChangesOntology) -> Result<IngestStats, IngestError> {
    let start = Instant::now();
    let file = File::open(path).map_err(io(path))?;
    let merged = parse_into(BufReader::new(file), &mut store.instances).map_err(|source| {
        IngestError::Parse {
            path: path.to_path_buf(),
            source,
        }
    })?;
    Ok(IngestStats {
        written: 0,
        merged,
        write_seconds: 0.0,
        merge_seconds: start.elapsed().as_secs_f64(),
    })
}
