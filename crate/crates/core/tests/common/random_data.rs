//! Random datasets with awkward lexical forms, for serializer round trips.

use rand::seq::IndexedRandom;
use rand::Rng;

use rdfdelta_core::rdf::{Iri, Literal, Term, Triple};

const IRI_CHARS: &[char] = &[
    'a', 'z', 'Q', '0', '9', '/', '#', '%', '~', '.', '-', '_', '?', '=', '&', 'é', 'ß', '日', '🦀',
];
const TEXT_CHARS: &[char] = &[
    'a', 'B', ' ', '"', '\\', '\n', '\r', '\t', '\u{7}', '\u{8}', '\u{c}', '\u{1f}', '\u{7f}', '<',
    '>', '@', '^', 'é', '€', '日', '🦀', '\u{feff}',
];
const LANGS: &[&str] = &["en", "de", "en-gb", "zh-hant-tw", "x-abc123"];

fn word(rng: &mut impl Rng, pool: &[char], max: usize) -> String {
    let n = rng.random_range(0..=max);
    (0..n).map(|_| *pool.choose(rng).unwrap()).collect()
}

pub fn iri(rng: &mut impl Rng) -> Iri {
    let scheme = ["http", "https", "urn", "tag", "x-a.b+c"]
        .choose(rng)
        .unwrap();
    Iri::new(format!(
        "{scheme}://h{}/{}",
        rng.random_range(0..4),
        word(rng, IRI_CHARS, 12)
    ))
    .unwrap()
}

pub fn term(rng: &mut impl Rng) -> Term {
    match rng.random_range(0..4) {
        0 => Term::Iri(iri(rng)),
        1 => Literal::plain(word(rng, TEXT_CHARS, 10)).into(),
        2 => Literal::lang(word(rng, TEXT_CHARS, 10), *LANGS.choose(rng).unwrap())
            .unwrap()
            .into(),
        _ => Literal::typed(word(rng, TEXT_CHARS, 10), iri(rng)).into(),
    }
}

pub fn triples(rng: &mut impl Rng, max: usize) -> Vec<Triple> {
    let n = rng.random_range(0..=max);
    (0..n)
        .map(|_| Triple::new(iri(rng), iri(rng), term(rng)))
        .collect()
}
