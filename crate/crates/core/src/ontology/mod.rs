//! The ontology of changes: classes for change definitions, individuals
//! for detections and associations, and the write-then-load ingestion path.

mod ingest;

use std::sync::Arc;

use crate::detect::{
    digest, AssociationStore, ChangeInstantiation, ChangeKind, ConsumptionMap, VersionPair,
};
use crate::error::OntologyError;
use crate::language::{ChangeLanguage, ParamKind};
use crate::pattern::select_query;
use crate::rdf::vocab::{self, CO, RDF, RDFS, XSD};
use crate::rdf::{Dataset, Iri, Literal, Term, Triple, Universe};

pub use ingest::{ingest, ingest_file, IngestStats};

/// Mints every IRI of the ontology from a base namespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyNamespace {
    base: Arc<str>,
}

impl Default for OntologyNamespace {
    fn default() -> Self {
        OntologyNamespace {
            base: Arc::from(CO),
        }
    }
}

fn encode_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for b in label.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

impl OntologyNamespace {
    /// `base` must be an absolute IRI; names are appended to it verbatim.
    pub fn new(base: &str) -> Result<Self, crate::error::TermError> {
        Iri::new(base)?;
        Ok(OntologyNamespace {
            base: Arc::from(base),
        })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    fn mint(&self, local: &str) -> Iri {
        Iri::new_unchecked(&format!("{}{local}", self.base))
    }

    pub fn change_class(&self, name: &str) -> Iri {
        self.mint(name)
    }

    pub fn param_property(&self, abbrev: &str, i: usize) -> Iri {
        self.mint(&format!("{abbrev}_p{i}"))
    }

    pub fn detection(&self, stable_id: &str) -> Iri {
        self.mint(&format!("d_{stable_id}"))
    }

    pub fn association(&self, hash: &str) -> Iri {
        self.mint(&format!("a_{hash}"))
    }

    pub fn version(&self, label: &str) -> Iri {
        self.mint(&format!("versions/{}", encode_label(label)))
    }

    pub fn simple_change_class(&self) -> Iri {
        self.mint("Simple_Change")
    }

    pub fn complex_change_class(&self) -> Iri {
        self.mint("Complex_Change")
    }

    pub fn association_class(&self) -> Iri {
        self.mint("Association")
    }

    pub fn old_version(&self) -> Iri {
        self.mint("old_version")
    }

    pub fn new_version(&self) -> Iri {
        self.mint("new_version")
    }

    pub fn consumes(&self) -> Iri {
        self.mint("consumes")
    }

    pub fn old_value(&self) -> Iri {
        self.mint("old_value")
    }

    pub fn new_value(&self) -> Iri {
        self.mint("new_value")
    }

    pub fn cname(&self) -> Iri {
        self.mint("cname")
    }

    pub fn pname(&self) -> Iri {
        self.mint("pname")
    }

    pub fn priority(&self) -> Iri {
        self.mint("priority")
    }

    pub fn consumes_change(&self) -> Iri {
        self.mint("consumes_change")
    }

    pub fn query(&self) -> Iri {
        self.mint("query")
    }
}

struct Emitter<'a> {
    ds: Dataset,
    rdf_type: &'a Iri,
}

impl Emitter<'_> {
    fn add(&mut self, s: &Iri, p: &Iri, o: impl Into<Term>) {
        self.ds.insert(&Triple::new(s.clone(), p.clone(), o));
    }

    fn typed(&mut self, s: &Iri, class: &Iri) {
        let p = self.rdf_type.clone();
        self.add(s, &p, class.clone());
    }
}

fn emitter<'a>(universe: &Universe, label: &str, rdf_type: &'a Iri) -> Emitter<'a> {
    Emitter {
        ds: Dataset::with_label(universe, label),
        rdf_type,
    }
}

fn param_schema(
    e: &mut Emitter<'_>,
    ns: &OntologyNamespace,
    class: &Iri,
    abbrev: &str,
    names: &[(String, ParamKind)],
) {
    for (i, (name, kind)) in names.iter().enumerate() {
        let prop = ns.param_property(abbrev, i + 1);
        e.typed(&prop, &vocab::iri(RDF, "Property"));
        e.add(&prop, &vocab::iri(RDFS, "domain"), class.clone());
        let range = match kind {
            ParamKind::Resource => vocab::iri(RDFS, "Resource"),
            ParamKind::Literal => vocab::iri(RDFS, "Literal"),
        };
        e.add(&prop, &vocab::iri(RDFS, "range"), range);
        e.add(&prop, &ns.pname(), Literal::plain(name));
    }
}

/// Schema-level triples: the upper classes, then one class per change with
/// its parameter properties; complex classes also carry their priority,
/// the classes they consume and their detection query.
pub fn emit_schema(lang: &ChangeLanguage, ns: &OntologyNamespace, universe: &Universe) -> Dataset {
    let rdf_type = vocab::iri(RDF, "type");
    let mut e = emitter(universe, "schema", &rdf_type);
    let class = vocab::iri(RDFS, "Class");
    let sub = vocab::iri(RDFS, "subClassOf");
    for upper in [
        ns.simple_change_class(),
        ns.complex_change_class(),
        ns.association_class(),
    ] {
        e.typed(&upper, &class);
    }
    for s in lang.simple_changes() {
        let c = ns.change_class(&s.def.name);
        e.typed(&c, &class);
        e.add(&c, &sub, ns.simple_change_class());
        e.add(&c, &ns.cname(), Literal::plain(&s.def.name));
        let names: Vec<_> = s
            .def
            .params
            .iter()
            .map(|p| (p.var.name().to_string(), p.kind))
            .collect();
        param_schema(&mut e, ns, &c, &s.abbrev, &names);
    }
    for x in lang.complex_changes() {
        let c = ns.change_class(&x.def.name);
        e.typed(&c, &class);
        e.add(&c, &sub, ns.complex_change_class());
        e.add(&c, &ns.cname(), Literal::plain(&x.def.name));
        let names: Vec<_> = x
            .def
            .params
            .iter()
            .zip(&x.param_kinds)
            .map(|(v, k)| (v.name().to_string(), *k))
            .collect();
        param_schema(&mut e, ns, &c, &x.abbrev, &names);
        e.add(
            &c,
            &ns.priority(),
            Literal::typed(x.def.priority.to_string(), vocab::iri(XSD, "integer")),
        );
        for r in &x.def.consumes {
            e.add(&c, &ns.consumes_change(), ns.change_class(&r.change));
        }
        e.add(
            &c,
            &ns.query(),
            Literal::plain(select_query(&x.def.params, &x.pattern)),
        );
    }
    e.ds
}

/// One individual per instantiation: its type, both versions, one triple
/// per argument and, for complex changes, one `consumes` edge per consumed
/// simple instantiation.
pub fn emit_detections<'a>(
    insts: impl IntoIterator<Item = &'a ChangeInstantiation>,
    consumption: &ConsumptionMap,
    lang: &ChangeLanguage,
    ns: &OntologyNamespace,
    universe: &Universe,
) -> Result<Dataset, OntologyError> {
    let rdf_type = vocab::iri(RDF, "type");
    let mut e = emitter(universe, "detections", &rdf_type);
    let (old_p, new_p, consumes) = (ns.old_version(), ns.new_version(), ns.consumes());
    for inst in insts {
        let change = lang
            .get(inst.name())
            .filter(|c| c.arity() == inst.args().len())
            .ok_or_else(|| OntologyError::UnknownChange(inst.name().to_string()))?;
        let d = ns.detection(inst.stable_id());
        e.typed(&d, &ns.change_class(inst.name()));
        e.add(&d, &old_p, ns.version(&inst.versions().old));
        e.add(&d, &new_p, ns.version(&inst.versions().new));
        for (i, arg) in inst.args().iter().enumerate() {
            e.add(&d, &ns.param_property(change.abbrev(), i + 1), arg.clone());
        }
        if inst.kind() == ChangeKind::Complex {
            for s in consumption.consumed_by(inst) {
                e.add(&d, &consumes, ns.detection(s.stable_id()));
            }
        }
    }
    Ok(e.ds)
}

pub(crate) fn association_id(
    versions: &VersionPair,
    a: &crate::detect::GroundAssociation,
) -> String {
    let from: Vec<String> = a.from.iter().map(Term::to_string).collect();
    let to: Vec<String> = a.to.iter().map(Term::to_string).collect();
    let n_from = from.len().to_string();
    digest(
        [
            versions.old.as_bytes(),
            versions.new.as_bytes(),
            n_from.as_bytes(),
        ]
        .into_iter()
        .chain(from.iter().chain(&to).map(String::as_bytes)),
    )
}

/// One `Association` individual per stored association, with its version
/// pair and one value triple per member on each side.
pub fn emit_associations(
    store: &AssociationStore,
    ns: &OntologyNamespace,
    universe: &Universe,
) -> Dataset {
    let rdf_type = vocab::iri(RDF, "type");
    let mut e = emitter(universe, "associations", &rdf_type);
    for (versions, a) in store.iter() {
        let node = ns.association(&association_id(versions, a));
        e.typed(&node, &ns.association_class());
        e.add(&node, &ns.old_version(), ns.version(&versions.old));
        e.add(&node, &ns.new_version(), ns.version(&versions.new));
        for x in &a.from {
            e.add(&node, &ns.old_value(), x.clone());
        }
        for x in &a.to {
            e.add(&node, &ns.new_value(), x.clone());
        }
    }
    e.ds
}

/// Schema and instance triples of the ontology of changes.
#[derive(Debug, Clone)]
pub struct ChangesOntology {
    pub schema: Dataset,
    pub instances: Dataset,
}

impl ChangesOntology {
    pub fn new(lang: &ChangeLanguage, ns: &OntologyNamespace, universe: &Universe) -> Self {
        ChangesOntology {
            schema: emit_schema(lang, ns, universe),
            instances: Dataset::with_label(universe, "instances"),
        }
    }

    /// Both levels as one dataset.
    pub fn combined(&self) -> Dataset {
        let mut all = self.schema.clone();
        all.set_label("ontology");
        all.extend_from(&self.instances);
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{ComplexChangeDef, SimpleChangeDef, SimpleChangeRef};
    use crate::pattern::{GraphPattern, PatternTerm, TriplePattern};
    use crate::rdf::vocab::QB;

    fn v(n: &str) -> PatternTerm {
        PatternTerm::var(n)
    }

    fn lang() -> ChangeLanguage {
        let mut lang = ChangeLanguage::new();
        lang.register_simple(
            SimpleChangeDef::new("Attach_Type_To_Measure", &["m", "t"])
                .added(TriplePattern::new(
                    v("m"),
                    vocab::iri(RDFS, "range"),
                    v("t"),
                ))
                .cond_new(GraphPattern::bgp([TriplePattern::new(
                    v("m"),
                    vocab::iri(RDF, "type"),
                    vocab::iri(QB, "MeasureProperty"),
                )])),
        )
        .unwrap();
        lang.register_simple(SimpleChangeDef::new("Add_Superclass", &["a", "b"]).added(
            TriplePattern::new(v("a"), vocab::iri(RDFS, "subClassOf"), v("b")),
        ))
        .unwrap();
        lang.register_complex(
            ComplexChangeDef::new("Mark_as_Obsolete", &["cl"], 2)
                .consumes(SimpleChangeRef::new("Add_Superclass", [v("cl"), v("obs")])),
        )
        .unwrap();
        lang
    }

    #[test]
    fn empty_language_schema() {
        let u = Universe::new();
        let ds = emit_schema(&ChangeLanguage::new(), &OntologyNamespace::default(), &u);
        assert_eq!(ds.len(), 3);
    }

    #[test]
    fn schema_shapes() {
        let u = Universe::new();
        let ns = OntologyNamespace::default();
        let ds = emit_schema(&lang(), &ns, &u);
        let attm = ns.change_class("Attach_Type_To_Measure");
        assert!(ds.contains(&Triple::new(
            attm.clone(),
            vocab::iri(RDFS, "subClassOf"),
            ns.simple_change_class()
        )));
        for i in 1..=2 {
            assert!(ds.contains(&Triple::new(
                ns.param_property("attm", i),
                vocab::iri(RDFS, "domain"),
                attm.clone()
            )));
        }
        assert!(!ds.iter().any(|t| t.subject == ns.param_property("attm", 3)));
        let mao = ns.change_class("Mark_as_Obsolete");
        assert!(ds.contains(&Triple::new(
            mao.clone(),
            ns.priority(),
            Literal::typed("2", vocab::iri(XSD, "integer"))
        )));
        assert!(ds.contains(&Triple::new(
            mao,
            ns.consumes_change(),
            ns.change_class("Add_Superclass")
        )));
    }

    #[test]
    fn detection_triples() {
        let u = Universe::new();
        let ns = OntologyNamespace::default();
        let pair = VersionPair::new("v1", "v2");
        let inst = ChangeInstantiation::new(
            "Attach_Type_To_Measure",
            ChangeKind::Simple,
            vec![Term::iri("a:m").unwrap(), Term::iri("a:t").unwrap()],
            pair.clone(),
        );
        let lang = lang();
        let ds = emit_detections([&inst], &ConsumptionMap::new(), &lang, &ns, &u).unwrap();
        assert_eq!(ds.len(), 5);
        let unknown = ChangeInstantiation::new("Nope", ChangeKind::Simple, vec![], pair);
        assert!(emit_detections([&unknown], &ConsumptionMap::new(), &lang, &ns, &u).is_err());
        assert!(emit_detections([], &ConsumptionMap::new(), &lang, &ns, &u)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn version_labels_are_encoded() {
        let ns = OntologyNamespace::default();
        assert_eq!(
            ns.version("v 1").as_str(),
            "http://rdf-delta.dev/co#versions/v%201"
        );
        assert_eq!(
            ns.version("go-2024.nt").as_str(),
            "http://rdf-delta.dev/co#versions/go-2024.nt"
        );
    }
}
