//! Terms, triples, datasets, low-level deltas and N-Triples I/O.

mod dataset;
mod delta;
mod ntriples;
mod term;
mod universe;
pub mod vocab;

pub use dataset::{Dataset, IdTriple};
pub use delta::{low_level_delta, LowLevelDelta};
pub use ntriples::{
    parse_into, parse_ntriples, parse_ntriples_str, parse_term, serialize_ntriples,
    to_ntriples_string,
};
pub use term::{Iri, Literal, LiteralTag, Term, Triple};
pub use universe::{TermId, Universe};
