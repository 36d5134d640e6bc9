//! The RDF catalog against a direct, per-triple reading of its detection
//! queries.

mod common;

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rdfdelta_core::catalogs::CatalogId;
use rdfdelta_core::detect::detect_simple;
use rdfdelta_core::pattern::EvalContext;
use rdfdelta_core::rdf::{Dataset, Iri, Literal, Term, Triple, Universe};

const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";

fn iri(s: String) -> Iri {
    Iri::new(s).unwrap()
}

type Found = BTreeSet<(String, Vec<Term>)>;

/// The change a single added or deleted triple stands for. The queries
/// never test whether an object is a literal, so neither does this.
fn classify(t: &Triple, added: bool) -> Option<(String, Vec<Term>)> {
    let verb = if added { "Add" } else { "Delete" };
    let s = Term::Iri(t.subject.clone());
    let o = t.object.clone();
    let p = t.predicate.as_str();
    let object_iri = o.as_iri().map(Iri::as_str).unwrap_or_default();
    let name = |what: &str| format!("{verb}_{what}");
    if p == format!("{RDF}type") {
        let class = object_iri;
        return Some(if class == format!("{RDFS}Class") {
            (name("Type_Class"), vec![s])
        } else if class == format!("{RDF}Property") {
            (name("Type_Property"), vec![s])
        } else if class == format!("{RDFS}Resource") {
            (name("Type_Individual"), vec![s])
        } else if added {
            ("Add_Type_To_Individual".into(), vec![s, o])
        } else {
            ("Delete_Type_From_Individual".into(), vec![s, o])
        });
    }
    for (local, what) in [
        ("subClassOf", "Superclass"),
        ("subPropertyOf", "Superproperty"),
        ("domain", "Domain"),
        ("range", "Range"),
        ("comment", "Comment"),
        ("label", "Label"),
    ] {
        if p == format!("{RDFS}{local}") {
            return Some((name(what), vec![s, o]));
        }
    }
    Some((
        name("Property_Instance"),
        vec![s, o, Term::Iri(t.predicate.clone())],
    ))
}

fn random_triple(rng: &mut impl Rng) -> Triple {
    let res = |rng: &mut ChaCha8Rng| iri(format!("http://ex.org/r{}", rng.random_range(0..5)));
    let mut r = ChaCha8Rng::seed_from_u64(rng.random());
    let predicates = [
        format!("{RDF}type"),
        format!("{RDFS}subClassOf"),
        format!("{RDFS}subPropertyOf"),
        format!("{RDFS}domain"),
        format!("{RDFS}range"),
        format!("{RDFS}comment"),
        format!("{RDFS}label"),
        "http://ex.org/p0".into(),
        "http://ex.org/p1".into(),
    ];
    let objects = [
        Term::Iri(iri(format!("{RDFS}Class"))),
        Term::Iri(iri(format!("{RDF}Property"))),
        Term::Iri(iri(format!("{RDFS}Resource"))),
        Term::Iri(res(&mut r)),
        Term::Iri(res(&mut r)),
        Literal::plain(format!("v{}", r.random_range(0..3))).into(),
        Literal::lang("hallo", "de").unwrap().into(),
    ];
    Triple::new(
        res(&mut r),
        iri(predicates.choose(&mut r).unwrap().clone()),
        objects.choose(&mut r).unwrap().clone(),
    )
}

#[test]
fn rdf_catalog_matches_direct_reading() {
    let lang = CatalogId::RdfModel.language();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut compared = 0;
    for _ in 0..300 {
        let old: Vec<Triple> = (0..rng.random_range(0..20))
            .map(|_| random_triple(&mut rng))
            .collect();
        let new: Vec<Triple> = (0..rng.random_range(0..20))
            .map(|_| random_triple(&mut rng))
            .collect();
        let u = Universe::new();
        let ctx = EvalContext::new(
            Dataset::from_triples(&u, &old),
            Dataset::from_triples(&u, &new),
        );
        let got: Found = detect_simple(&lang, &ctx)
            .unwrap()
            .instantiations
            .iter()
            .map(|i| (i.name().to_string(), i.args().to_vec()))
            .collect();
        let delta = ctx.delta();
        let want: Found = delta
            .added
            .iter()
            .filter_map(|t| classify(&t, true))
            .chain(delta.deleted.iter().filter_map(|t| classify(&t, false)))
            .collect();
        let extra: Vec<_> = got.difference(&want).collect();
        let missing: Vec<_> = want.difference(&got).collect();
        assert!(
            extra.is_empty() && missing.is_empty(),
            "extra {extra:?}\nmissing {missing:?}"
        );
        compared += want.len();
    }
    assert!(compared > 1000, "{compared}");
}

fn qb_detections(old: &str, new: &str) -> Vec<String> {
    let u = Universe::new();
    let parse = |text: &str| rdfdelta_core::rdf::parse_ntriples_str(text, &u).unwrap();
    let ctx = EvalContext::new(parse(old), parse(new));
    detect_simple(&CatalogId::DataCube.language(), &ctx)
        .unwrap()
        .instantiations
        .iter()
        .map(ToString::to_string)
        .collect()
}

/// Every consumed triple has to be new, not merely the set of them: with
/// the component specification already present, attaching it to a fact
/// table is not a dimension attachment, though the conjunctive NOT EXISTS
/// of the listed query would accept it.
#[test]
fn multi_triple_changes_need_every_triple_new() {
    let component =
        "<http://ex.org/dsd> <http://purl.org/linked-data/cube#component> <http://ex.org/cs> .\n";
    let dimension =
        "<http://ex.org/cs> <http://purl.org/linked-data/cube#dimension> <http://ex.org/d> .\n";
    let attach =
        "Attach_Dimension_to_Fact_Table(<http://ex.org/d>, <http://ex.org/dsd>)".to_string();
    assert!(qb_detections("", &format!("{component}{dimension}")).contains(&attach));
    assert!(!qb_detections(dimension, &format!("{component}{dimension}")).contains(&attach));
}
