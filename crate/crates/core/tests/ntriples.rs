mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rdfdelta_core::rdf::{parse_ntriples_str, to_ntriples_string, Dataset, Universe};

use common::random_data;

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples = random_data::triples(&mut rng, 40);
        let u = Universe::new();
        let ds = Dataset::from_triples(&u, &triples);
        let text = to_ntriples_string(&ds);
        let back = parse_ntriples_str(&text, &Universe::new()).unwrap();
        prop_assert_eq!(back.sorted_triples(), ds.sorted_triples());
        prop_assert_eq!(to_ntriples_string(&back), text);
    }
}

#[test]
fn escapes_control_characters() {
    let text = "<a:s> <a:p> \"bell\\u0007 and \\U0001F980\" .\n";
    let ds = parse_ntriples_str(text, &Universe::new()).unwrap();
    let again = to_ntriples_string(&ds);
    assert!(!again.contains('\u{7}'), "{again:?}");
    assert_eq!(
        parse_ntriples_str(&again, &Universe::new())
            .unwrap()
            .sorted_triples(),
        ds.sorted_triples()
    );
}
