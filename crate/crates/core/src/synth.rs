//! Seeded generators of version pairs: small vocabulary-closed pairs for
//! completeness checks, and large pairs whose size and delta are set
//! independently for benchmarks.

use std::collections::HashSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalogs::CatalogId;
use crate::rdf::vocab::{self, QB, RDF, RDFS, SKOS};
use crate::rdf::{Dataset, IdTriple, Iri, Literal, Term, TermId, Triple, Universe};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ex(kind: &str, i: usize) -> Iri {
    Iri::new(format!("http://example.org/{kind}/{i}")).expect("absolute")
}

fn labelled(universe: &Universe, label: &str) -> Dataset {
    Dataset::with_label(universe, label)
}

/// Closed pools of resources, properties and literals a random pair draws
/// from, together with the predicates and classes of the model.
struct Pools {
    resources: Vec<Term>,
    properties: Vec<Iri>,
    literals: Vec<Term>,
    classes: Vec<Iri>,
}

impl Pools {
    fn new(rng: &mut impl Rng) -> Self {
        let n = rng.random_range(2..=5);
        Pools {
            resources: (0..n).map(|i| Term::Iri(ex("r", i))).collect(),
            properties: (0..rng.random_range(1..=3)).map(|i| ex("p", i)).collect(),
            literals: (0..rng.random_range(1..=3))
                .map(|i| Term::from(Literal::plain(format!("l{i}"))))
                .collect(),
            classes: (0..rng.random_range(1..=3)).map(|i| ex("C", i)).collect(),
        }
    }

    fn resource(&self, rng: &mut impl Rng) -> Term {
        self.resources.choose(rng).expect("non-empty").clone()
    }

    fn subject(&self, rng: &mut impl Rng) -> Iri {
        match self.resource(rng) {
            Term::Iri(i) => i,
            Term::Literal(_) => unreachable!("resources are IRIs"),
        }
    }

    fn literal(&self, rng: &mut impl Rng) -> Term {
        self.literals.choose(rng).expect("non-empty").clone()
    }

    fn object(&self, rng: &mut impl Rng) -> Term {
        if rng.random_bool(0.25) {
            self.literal(rng)
        } else {
            self.resource(rng)
        }
    }
}

fn rdf_triple(p: &Pools, rng: &mut impl Rng) -> Triple {
    let s = p.subject(rng);
    let t = |ns, l| vocab::iri(ns, l);
    match rng.random_range(0..10) {
        0 => {
            let class = [t(RDFS, "Class"), t(RDF, "Property"), t(RDFS, "Resource")]
                .into_iter()
                .chain(p.classes.iter().cloned())
                .collect::<Vec<_>>();
            Triple::new(
                s,
                t(RDF, "type"),
                class.choose(rng).expect("non-empty").clone(),
            )
        }
        1 => Triple::new(s, t(RDFS, "subClassOf"), p.resource(rng)),
        2 => Triple::new(s, t(RDFS, "subPropertyOf"), p.resource(rng)),
        3 => Triple::new(s, t(RDFS, "domain"), p.resource(rng)),
        4 => Triple::new(s, t(RDFS, "range"), p.resource(rng)),
        5 => Triple::new(s, t(RDFS, "comment"), p.literal(rng)),
        6 => Triple::new(s, t(RDFS, "label"), p.literal(rng)),
        _ => Triple::new(
            s,
            p.properties.choose(rng).expect("non-empty").clone(),
            p.object(rng),
        ),
    }
}

fn qb_triple(p: &Pools, rng: &mut impl Rng) -> Triple {
    let s = p.subject(rng);
    let q = |l| vocab::iri(QB, l);
    match rng.random_range(0..12) {
        0 | 1 => {
            let classes = [
                q("DimensionProperty"),
                q("MeasureProperty"),
                q("AttributeProperty"),
                q("CodedProperty"),
                q("DataStructureDefinition"),
                q("Observation"),
                q("HierarchicalCodeList"),
                vocab::iri(SKOS, "Concept"),
                vocab::iri(SKOS, "ConceptScheme"),
            ]
            .into_iter()
            .chain(p.classes.iter().cloned())
            .collect::<Vec<_>>();
            Triple::new(
                s,
                vocab::iri(RDF, "type"),
                classes.choose(rng).expect("non-empty").clone(),
            )
        }
        2 => Triple::new(s, vocab::iri(RDFS, "label"), p.literal(rng)),
        3 => Triple::new(s, vocab::iri(RDFS, "range"), p.resource(rng)),
        4 => Triple::new(s, vocab::iri(SKOS, "inScheme"), p.resource(rng)),
        5 => Triple::new(s, vocab::iri(SKOS, "broaderTransitive"), p.resource(rng)),
        6 => Triple::new(
            s,
            p.properties.choose(rng).expect("non-empty").clone(),
            p.object(rng),
        ),
        _ => {
            let preds = [
                "dataSet",
                "structure",
                "component",
                "dimension",
                "measure",
                "componentProperty",
                "attribute",
                "codeList",
            ];
            Triple::new(s, q(preds.choose(rng).expect("non-empty")), p.resource(rng))
        }
    }
}

/// A small random pair whose triples use only the model's vocabulary and
/// a handful of resources, properties and literals. Each old triple
/// survives with probability 0.6 and up to 20 new ones are drawn.
pub fn random_pair(
    model: CatalogId,
    rng: &mut impl Rng,
    universe: &Universe,
) -> (Dataset, Dataset) {
    let pools = Pools::new(rng);
    let draw = |rng: &mut _| match model {
        CatalogId::RdfModel => rdf_triple(&pools, rng),
        CatalogId::DataCube => qb_triple(&pools, rng),
    };
    let mut old = labelled(universe, "v1");
    for _ in 0..rng.random_range(0..=25) {
        old.insert(&draw(rng));
    }
    let mut new = labelled(universe, "v2");
    for t in old.sorted_triples() {
        if rng.random_bool(0.6) {
            new.insert(&t);
        }
    }
    for _ in 0..rng.random_range(0..=20) {
        new.insert(&draw(rng));
    }
    (old, new)
}

/// `n` resources typed in both versions; the new version gives each a label.
pub fn label_additions(n: usize, universe: &Universe) -> (Dataset, Dataset) {
    let mut old = labelled(universe, "v1");
    let class = ex("ontology", 0);
    for i in 0..n {
        old.insert(&Triple::new(
            ex("resource", i),
            vocab::iri(RDF, "type"),
            class.clone(),
        ));
    }
    let mut new = old.clone();
    new.set_label("v2");
    for i in 0..n {
        new.insert(&Triple::new(
            ex("resource", i),
            vocab::iri(RDFS, "label"),
            Literal::lang(format!("Resource {i}"), "en").expect("valid tag"),
        ));
    }
    (old, new)
}

struct IdPools {
    resources: Vec<TermId>,
    classes: Vec<TermId>,
    properties: Vec<TermId>,
    rdf_type: TermId,
    label: TermId,
}

impl IdPools {
    fn new(universe: &Universe, resources: usize) -> Self {
        let id = |t: Term| universe.intern(&t);
        IdPools {
            resources: (0..resources.max(1))
                .map(|i| id(Term::Iri(ex("resource", i))))
                .collect(),
            classes: (0..50)
                .map(|i| id(Term::Iri(ex("ontology/class", i))))
                .collect(),
            properties: (0..40)
                .map(|i| id(Term::Iri(ex("ontology/property", i))))
                .collect(),
            rdf_type: id(vocab::term(RDF, "type")),
            label: id(vocab::term(RDFS, "label")),
        }
    }

    fn pick(v: &[TermId], rng: &mut impl Rng) -> TermId {
        v[rng.random_range(0..v.len())]
    }
}

/// A pair whose old version holds exactly `size` triples and whose delta
/// holds exactly `delta` triples. Requires `delta` well below `size`.
pub fn scaled_pair(
    model: CatalogId,
    size: usize,
    delta: usize,
    seed: u64,
    universe: &Universe,
) -> (Dataset, Dataset) {
    match model {
        CatalogId::RdfModel => scaled_rdf(size, delta, seed, universe),
        CatalogId::DataCube => scaled_qb(size, delta, seed, universe),
    }
}

/// Typed, labelled and interlinked resources; the delta adds property
/// instances, labels and types and deletes old triples.
fn scaled_rdf(size: usize, delta: usize, seed: u64, universe: &Universe) -> (Dataset, Dataset) {
    let mut rng = rng(seed);
    let pools = IdPools::new(universe, size / 4);
    let mut base: Vec<IdTriple> = Vec::with_capacity(size);
    let mut seen: HashSet<IdTriple> = HashSet::with_capacity(size + delta);
    let mut push = |t: IdTriple, base: &mut Vec<IdTriple>| {
        if base.len() < size && seen.insert(t) {
            base.push(t);
        }
    };
    let mut i = 0;
    while base.len() < size {
        let r = pools.resources[i % pools.resources.len()];
        let round = i / pools.resources.len();
        if round == 0 {
            push(
                [r, pools.rdf_type, IdPools::pick(&pools.classes, &mut rng)],
                &mut base,
            );
            let name = universe.intern(&Term::from(
                Literal::lang(format!("Resource {i}"), "en").expect("valid tag"),
            ));
            push([r, pools.label, name], &mut base);
        }
        let p = IdPools::pick(&pools.properties, &mut rng);
        let o = IdPools::pick(&pools.resources, &mut rng);
        push([r, p, o], &mut base);
        i += 1;
    }
    let mut old = labelled(universe, "v1");
    for t in &base {
        old.insert_ids(*t);
    }
    let mut new = old.clone();
    new.set_label("v2");
    let mut removed = HashSet::new();
    let mut made = 0;
    while made < delta {
        let r = IdPools::pick(&pools.resources, &mut rng);
        let t = match made % 10 {
            0..=3 => [
                r,
                IdPools::pick(&pools.properties, &mut rng),
                IdPools::pick(&pools.resources, &mut rng),
            ],
            4 | 5 => {
                let alt = universe.intern(&Term::from(
                    Literal::lang(format!("Alternative {made}"), "de").expect("valid tag"),
                ));
                [r, pools.label, alt]
            }
            6 => [r, pools.rdf_type, IdPools::pick(&pools.classes, &mut rng)],
            _ => {
                let victim = base[rng.random_range(0..base.len())];
                if removed.insert(victim) {
                    new.remove_ids(&victim);
                    made += 1;
                }
                continue;
            }
        };
        if !old.contains_ids(&t) && new.insert_ids(t) {
            made += 1;
        }
    }
    (old, new)
}

/// Observations of ten data sets sharing a three-dimension, one-measure
/// structure; the delta adds new observations and deletes dimension values
/// of old ones.
fn scaled_qb(size: usize, delta: usize, seed: u64, universe: &Universe) -> (Dataset, Dataset) {
    let mut rng = rng(seed);
    let id = |t: Term| universe.intern(&t);
    let q = |l: &str| id(vocab::term(QB, l));
    let (a, data_set, structure, component) = (
        id(vocab::term(RDF, "type")),
        q("dataSet"),
        q("structure"),
        q("component"),
    );
    let range = id(vocab::term(RDFS, "range"));
    let dims: Vec<TermId> = (0..3).map(|i| id(Term::Iri(ex("dimension", i)))).collect();
    let measure = id(Term::Iri(ex("measure", 0)));
    let codes: Vec<TermId> = (0..100).map(|i| id(Term::Iri(ex("code", i)))).collect();
    let values: Vec<TermId> = (0..1000)
        .map(|i| {
            id(Term::from(Literal::typed(
                i.to_string(),
                vocab::iri(vocab::XSD, "integer"),
            )))
        })
        .collect();

    let mut old = labelled(universe, "v1");
    let ft = id(Term::Iri(ex("structure", 0)));
    old.insert_ids([ft, a, q("DataStructureDefinition")]);
    for (j, &d) in dims.iter().chain([&measure]).enumerate() {
        let cs = id(Term::Iri(ex("component", j)));
        old.insert_ids([ft, component, cs]);
        let (role, class) = if j < 3 {
            ("dimension", "DimensionProperty")
        } else {
            ("measure", "MeasureProperty")
        };
        old.insert_ids([cs, q(role), d]);
        old.insert_ids([d, a, q(class)]);
        old.insert_ids([d, range, id(vocab::term(vocab::XSD, "integer"))]);
    }
    let sets: Vec<TermId> = (0..10).map(|i| id(Term::Iri(ex("dataset", i)))).collect();
    for &ds in &sets {
        old.insert_ids([ds, a, q("DataSet")]);
        old.insert_ids([ds, structure, ft]);
    }
    let mut observation = 0;
    let obs_triples = |o: usize, rng: &mut ChaCha8Rng| -> Vec<IdTriple> {
        let node = id(Term::Iri(ex("observation", o)));
        let mut ts = vec![
            [node, a, q("Observation")],
            [node, data_set, sets[o % sets.len()]],
        ];
        ts.extend(dims.iter().map(|&d| [node, d, IdPools::pick(&codes, rng)]));
        ts.push([node, measure, IdPools::pick(&values, rng)]);
        ts
    };
    let mut dim_values = Vec::new();
    while old.len() < size {
        for t in obs_triples(observation, &mut rng) {
            if old.len() < size && old.insert_ids(t) && dims.contains(&t[1]) {
                dim_values.push(t);
            }
        }
        observation += 1;
    }
    let mut new = old.clone();
    new.set_label("v2");
    let mut made = 0;
    while made < delta {
        if made % 4 == 3 && !dim_values.is_empty() {
            let victim = dim_values.swap_remove(rng.random_range(0..dim_values.len()));
            new.remove_ids(&victim);
            made += 1;
            continue;
        }
        for t in obs_triples(observation, &mut rng) {
            if made < delta && !old.contains_ids(&t) && new.insert_ids(t) {
                made += 1;
            }
        }
        observation += 1;
    }
    (old, new)
}

/// A DBpedia-flavoured pair: a class hierarchy with labels and comments in
/// several languages, typed resources with property links, and an edit mix
/// of schema and instance changes including obsoleted and renamed classes.
pub fn dbpedia_like(seed: u64, universe: &Universe) -> (Dataset, Dataset) {
    let mut rng = rng(seed);
    let onto = |l: String| Iri::new(format!("http://dbpedia.org/ontology/{l}")).expect("absolute");
    let res =
        |i: usize| Iri::new(format!("http://dbpedia.org/resource/Entity_{i}")).expect("absolute");
    let t = |ns, l| vocab::iri(ns, l);
    let lit = |s: String, lang: &str| Term::from(Literal::lang(s, lang).expect("valid tag"));
    let classes: Vec<Iri> = (0..60).map(|i| onto(format!("Class{i}"))).collect();
    let props: Vec<Iri> = (0..30).map(|i| onto(format!("property{i}"))).collect();

    let mut old = labelled(universe, "dbpedia-v1");
    for (i, c) in classes.iter().enumerate() {
        old.insert(&Triple::new(c.clone(), t(RDF, "type"), t(RDFS, "Class")));
        if i > 0 {
            let parent = classes[rng.random_range(0..i)].clone();
            old.insert(&Triple::new(c.clone(), t(RDFS, "subClassOf"), parent));
        }
        for lang in ["en", "de", "fr"] {
            old.insert(&Triple::new(
                c.clone(),
                t(RDFS, "label"),
                lit(format!("Class {i} {lang}"), lang),
            ));
        }
        old.insert(&Triple::new(
            c.clone(),
            t(RDFS, "comment"),
            lit(format!("About class {i}"), "en"),
        ));
    }
    for p in &props {
        old.insert(&Triple::new(p.clone(), t(RDF, "type"), t(RDF, "Property")));
        old.insert(&Triple::new(
            p.clone(),
            t(RDFS, "domain"),
            classes.choose(&mut rng).expect("non-empty").clone(),
        ));
        old.insert(&Triple::new(
            p.clone(),
            t(RDFS, "range"),
            classes.choose(&mut rng).expect("non-empty").clone(),
        ));
    }
    let entities = 1500;
    for i in 0..entities {
        let e = res(i);
        old.insert(&Triple::new(
            e.clone(),
            t(RDF, "type"),
            classes.choose(&mut rng).expect("non-empty").clone(),
        ));
        old.insert(&Triple::new(
            e.clone(),
            t(RDFS, "label"),
            lit(format!("Entity {i}"), "en"),
        ));
        for _ in 0..3 {
            let p = props.choose(&mut rng).expect("non-empty").clone();
            if rng.random_bool(0.3) {
                old.insert(&Triple::new(
                    e.clone(),
                    p,
                    Literal::plain(format!("{}", rng.random_range(0..1000))),
                ));
            } else {
                old.insert(&Triple::new(
                    e.clone(),
                    p,
                    res(rng.random_range(0..entities)),
                ));
            }
        }
    }

    let mut new = old.clone();
    new.set_label("dbpedia-v2");
    let obsolete =
        Iri::new("http://www.geneontology.org/formats/oboInOwl#ObsoleteClass").expect("absolute");
    for c in classes.iter().skip(50) {
        new.insert(&Triple::new(
            c.clone(),
            t(RDFS, "subClassOf"),
            obsolete.clone(),
        ));
    }
    for i in 60..70 {
        let c = onto(format!("Class{i}"));
        new.insert(&Triple::new(c.clone(), t(RDF, "type"), t(RDFS, "Class")));
        new.insert(&Triple::new(
            c.clone(),
            t(RDFS, "subClassOf"),
            classes[i % 10].clone(),
        ));
        new.insert(&Triple::new(
            c,
            t(RDFS, "label"),
            lit(format!("Class {i} en"), "en"),
        ));
    }
    for (i, c) in classes.iter().enumerate().take(20) {
        let old_label = lit(format!("Class {i} en"), "en");
        new.remove(&Triple::new(c.clone(), t(RDFS, "label"), old_label));
        new.insert(&Triple::new(
            c.clone(),
            t(RDFS, "label"),
            lit(format!("Class {i} (renamed)"), "en"),
        ));
    }
    let snapshot = old.sorted_triples();
    for _ in 0..400 {
        let victim = snapshot.choose(&mut rng).expect("non-empty");
        new.remove(victim);
    }
    for i in 0..600 {
        let e = res(rng.random_range(0..entities + 200));
        let p = props.choose(&mut rng).expect("non-empty").clone();
        match i % 4 {
            0 => new.insert(&Triple::new(
                e,
                t(RDFS, "label"),
                lit(format!("Entität {i}"), "de"),
            )),
            1 => new.insert(&Triple::new(
                e,
                t(RDF, "type"),
                classes.choose(&mut rng).expect("non-empty").clone(),
            )),
            _ => new.insert(&Triple::new(e, p, res(rng.random_range(0..entities)))),
        };
    }
    (old, new)
}

/// Complex changes exercised by [`dbpedia_like`], in the definition-file
/// format.
pub const DBPEDIA_COMPLEX: &str = r#"[
  {
    "name": "Mark_as_Obsolete",
    "params": ["cl"],
    "priority": 2,
    "consumes": [{"change": "Add_Superclass", "args": ["?cl", "?obs"]}],
    "cond_old": {"filter": {"op": "eq", "lhs": "?obs", "rhs": "<http://www.geneontology.org/formats/oboInOwl#ObsoleteClass>"}}
  },
  {
    "name": "Relabel",
    "params": ["x", "from", "to"],
    "priority": 1,
    "consumes": [
      {"change": "Delete_Label", "args": ["?x", "?from"]},
      {"change": "Add_Label", "args": ["?x", "?to"]}
    ]
  },
  {
    "name": "Introduce_Subclass",
    "params": ["c", "parent"],
    "priority": 1,
    "consumes": [
      {"change": "Add_Type_Class", "args": ["?c"]},
      {"change": "Add_Superclass", "args": ["?c", "?parent"]}
    ]
  }
]
"#;

/// Labels of the datasets [`dbpedia_like`] produces.
pub const DBPEDIA_VERSIONS: (&str, &str) = ("dbpedia-v1", "dbpedia-v2");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::low_level_delta;

    #[test]
    fn random_pairs_are_reproducible() {
        let u = Universe::new();
        for model in [CatalogId::RdfModel, CatalogId::DataCube] {
            let a = random_pair(model, &mut rng(7), &u);
            let b = random_pair(model, &mut rng(7), &u);
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn scaled_pairs_have_requested_shape() {
        let u = Universe::new();
        for model in [CatalogId::RdfModel, CatalogId::DataCube] {
            let (old, new) = scaled_pair(model, 2000, 150, 3, &u);
            assert_eq!(old.len(), 2000);
            assert_eq!(low_level_delta(&old, &new).len(), 150);
        }
    }

    #[test]
    fn label_additions_shape() {
        let u = Universe::new();
        let (old, new) = label_additions(10, &u);
        let d = low_level_delta(&old, &new);
        assert_eq!((d.added.len(), d.deleted.len()), (10, 0));
    }
}
