use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::language::check_shape;
use crate::rdf::{Term, Triple};

/// The labels of the two versions being compared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VersionPair {
    pub old: Arc<str>,
    pub new: Arc<str>,
}

impl VersionPair {
    pub fn new(old: impl AsRef<str>, new: impl AsRef<str>) -> Self {
        VersionPair {
            old: Arc::from(old.as_ref()),
            new: Arc::from(new.as_ref()),
        }
    }
}

impl fmt::Display for VersionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.old, self.new)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChangeKind {
    Simple,
    Complex,
}

/// A change applied to concrete arguments between two versions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChangeInstantiation {
    name: Arc<str>,
    args: Vec<Term>,
    versions: VersionPair,
    kind: ChangeKind,
    stable_id: Arc<str>,
}

fn digest_field(h: &mut Sha256, bytes: &[u8]) {
    h.update((bytes.len() as u64).to_le_bytes());
    h.update(bytes);
}

/// Hex digest of length-prefixed fields; the prefixes keep it injective
/// over field boundaries.
pub(crate) fn digest<'a>(fields: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for f in fields {
        digest_field(&mut h, f);
    }
    hex::encode(&h.finalize()[..16])
}

impl ChangeInstantiation {
    pub fn new(
        name: impl AsRef<str>,
        kind: ChangeKind,
        args: Vec<Term>,
        versions: VersionPair,
    ) -> Self {
        let name = name.as_ref();
        let rendered: Vec<String> = args.iter().map(Term::to_string).collect();
        let stable_id = digest(
            [
                name.as_bytes(),
                versions.old.as_bytes(),
                versions.new.as_bytes(),
            ]
            .into_iter()
            .chain(rendered.iter().map(String::as_bytes)),
        );
        ChangeInstantiation {
            name: Arc::from(name),
            args,
            versions,
            kind,
            stable_id: Arc::from(stable_id),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ChangeKind {
        self.kind
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn versions(&self) -> &VersionPair {
        &self.versions
    }

    /// 32 hex digits determined by name, arguments and version pair.
    pub fn stable_id(&self) -> &str {
        &self.stable_id
    }
}

impl fmt::Display for ChangeInstantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Which instantiations consume which delta triples, and which complex
/// instantiations consume which simple ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsumptionMap {
    triple_consumers: BTreeMap<Triple, BTreeSet<ChangeInstantiation>>,
    simple_consumers: BTreeMap<ChangeInstantiation, BTreeSet<ChangeInstantiation>>,
    consumed_by_complex: BTreeMap<ChangeInstantiation, BTreeSet<ChangeInstantiation>>,
}

impl ConsumptionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_triple(&mut self, t: Triple, consumer: ChangeInstantiation) {
        self.triple_consumers.entry(t).or_default().insert(consumer);
    }

    pub fn record_simple(&mut self, simple: ChangeInstantiation, complex: ChangeInstantiation) {
        self.consumed_by_complex
            .entry(complex.clone())
            .or_default()
            .insert(simple.clone());
        self.simple_consumers
            .entry(simple)
            .or_default()
            .insert(complex);
    }

    pub fn triple_consumers(&self) -> &BTreeMap<Triple, BTreeSet<ChangeInstantiation>> {
        &self.triple_consumers
    }

    pub fn simple_consumers(
        &self,
    ) -> &BTreeMap<ChangeInstantiation, BTreeSet<ChangeInstantiation>> {
        &self.simple_consumers
    }

    /// Simple instantiations consumed by a complex one.
    pub fn consumed_by(
        &self,
        complex: &ChangeInstantiation,
    ) -> impl Iterator<Item = &ChangeInstantiation> {
        self.consumed_by_complex.get(complex).into_iter().flatten()
    }

    pub fn consumers_of(&self, t: &Triple) -> impl Iterator<Item = &ChangeInstantiation> {
        self.triple_consumers.get(t).into_iter().flatten()
    }

    pub fn merge(&mut self, other: ConsumptionMap) {
        for (t, cs) in other.triple_consumers {
            self.triple_consumers.entry(t).or_default().extend(cs);
        }
        for (s, cs) in other.simple_consumers {
            self.simple_consumers.entry(s).or_default().extend(cs);
        }
        for (c, ss) in other.consumed_by_complex {
            self.consumed_by_complex.entry(c).or_default().extend(ss);
        }
    }
}

/// A rename, split or merge between concrete terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAssociation {
    pub from: Vec<Term>,
    pub to: Vec<Term>,
}

impl GroundAssociation {
    /// Members are kept sorted; the shape must be a rename, split or merge.
    pub fn new(mut from: Vec<Term>, mut to: Vec<Term>) -> Result<Self, String> {
        if let Some(e) = check_shape(&from, &to) {
            return Err(e);
        }
        from.sort();
        to.sort();
        Ok(GroundAssociation { from, to })
    }

    pub fn rename(from: Term, to: Term) -> Result<Self, String> {
        Self::new(vec![from], vec![to])
    }
}

/// The associations supplied as input, per version pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssociationStore {
    entries: BTreeSet<(VersionPair, GroundAssociation)>,
}

impl AssociationStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, versions: VersionPair, a: GroundAssociation) -> bool {
        self.entries.insert((versions, a))
    }

    pub fn extend(
        &mut self,
        versions: &VersionPair,
        items: impl IntoIterator<Item = GroundAssociation>,
    ) {
        for a in items {
            self.insert(versions.clone(), a);
        }
    }

    pub fn for_pair<'a>(
        &'a self,
        versions: &'a VersionPair,
    ) -> impl Iterator<Item = &'a GroundAssociation> + 'a {
        self.entries
            .iter()
            .filter(move |(v, _)| v == versions)
            .map(|(_, a)| a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VersionPair, &GroundAssociation)> {
        self.entries.iter().map(|(v, a)| (v, a))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    #[test]
    fn stable_ids() {
        let pair = VersionPair::new("v1", "v2");
        let a = ChangeInstantiation::new(
            "Add_Label",
            ChangeKind::Simple,
            vec![iri("a:c"), Term::from(crate::rdf::Literal::plain("x"))],
            pair.clone(),
        );
        let b = ChangeInstantiation::new(
            "Add_Label",
            ChangeKind::Simple,
            vec![iri("a:c"), Term::from(crate::rdf::Literal::plain("x"))],
            pair.clone(),
        );
        assert_eq!(a.stable_id(), b.stable_id());
        assert_eq!(a.stable_id().len(), 32);
        let other_pair = ChangeInstantiation::new(
            "Add_Label",
            ChangeKind::Simple,
            a.args().to_vec(),
            VersionPair::new("v1", "v3"),
        );
        assert_ne!(a.stable_id(), other_pair.stable_id());
        let split =
            ChangeInstantiation::new("X", ChangeKind::Simple, vec![iri("a:bc")], pair.clone());
        let joined =
            ChangeInstantiation::new("X", ChangeKind::Simple, vec![iri("a:b"), iri("a:c")], pair);
        assert_ne!(split.stable_id(), joined.stable_id());
    }

    #[test]
    fn association_shapes() {
        assert!(GroundAssociation::rename(iri("a:x"), iri("a:y")).is_ok());
        assert!(GroundAssociation::rename(iri("a:x"), iri("a:x")).is_err());
        let split =
            GroundAssociation::new(vec![iri("a:y1")], vec![iri("a:y3"), iri("a:y2")]).unwrap();
        assert_eq!(split.to, vec![iri("a:y2"), iri("a:y3")]);
    }
}
