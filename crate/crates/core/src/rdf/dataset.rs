use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use rayon::slice::ParallelSliceMut;

use super::term::{Term, Triple};
use super::universe::{TermId, Universe};

pub type IdTriple = [TermId; 3];

type Raw = [u32; 3];

/// Sorted permutations of a dataset's id triples, searched by prefix range.
#[derive(Debug, Default)]
pub(crate) struct Index {
    spo: Vec<Raw>,
    pos: Vec<Raw>,
    osp: Vec<Raw>,
}

#[derive(Clone, Copy)]
enum Order {
    Spo,
    Pos,
    Osp,
}

impl Index {
    fn build(triples: &HashSet<IdTriple>) -> Index {
        let mut spo: Vec<Raw> = triples
            .iter()
            .map(|t| [t[0].get(), t[1].get(), t[2].get()])
            .collect();
        let mut pos: Vec<Raw> = spo.iter().map(|t| [t[1], t[2], t[0]]).collect();
        let mut osp: Vec<Raw> = spo.iter().map(|t| [t[2], t[0], t[1]]).collect();
        spo.par_sort_unstable();
        pos.par_sort_unstable();
        osp.par_sort_unstable();
        Index { spo, pos, osp }
    }

    fn plan(s: Option<u32>, p: Option<u32>, o: Option<u32>) -> (Order, Vec<u32>) {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => (Order::Spo, vec![s, p, o]),
            (Some(s), Some(p), None) => (Order::Spo, vec![s, p]),
            (Some(s), None, None) => (Order::Spo, vec![s]),
            (None, Some(p), Some(o)) => (Order::Pos, vec![p, o]),
            (None, Some(p), None) => (Order::Pos, vec![p]),
            (Some(s), None, Some(o)) => (Order::Osp, vec![o, s]),
            (None, None, Some(o)) => (Order::Osp, vec![o]),
            (None, None, None) => (Order::Spo, vec![]),
        }
    }

    fn table(&self, order: Order) -> &[Raw] {
        match order {
            Order::Spo => &self.spo,
            Order::Pos => &self.pos,
            Order::Osp => &self.osp,
        }
    }

    fn range<'a>(table: &'a [Raw], prefix: &[u32]) -> &'a [Raw] {
        let k = prefix.len();
        if k == 0 {
            return table;
        }
        let lo = table.partition_point(|t| &t[..k] < prefix);
        let hi = lo + table[lo..].partition_point(|t| &t[..k] <= prefix);
        &table[lo..hi]
    }

    /// Triples matching the bound positions, returned in (s, p, o) layout.
    pub(crate) fn scan(&self, s: Option<u32>, p: Option<u32>, o: Option<u32>) -> Scan<'_> {
        let (order, prefix) = Index::plan(s, p, o);
        Scan {
            rows: Index::range(self.table(order), &prefix).iter(),
            order,
        }
    }

    pub(crate) fn count(&self, s: Option<u32>, p: Option<u32>, o: Option<u32>) -> usize {
        let (order, prefix) = Index::plan(s, p, o);
        Index::range(self.table(order), &prefix).len()
    }
}

pub(crate) struct Scan<'a> {
    rows: std::slice::Iter<'a, Raw>,
    order: Order,
}

impl Iterator for Scan<'_> {
    type Item = Raw;

    fn next(&mut self) -> Option<Raw> {
        let t = self.rows.next()?;
        Some(match self.order {
            Order::Spo => *t,
            Order::Pos => [t[2], t[0], t[1]],
            Order::Osp => [t[1], t[2], t[0]],
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.rows.size_hint()
    }
}

/// A labelled set of triples over a shared [`Universe`].
///
/// Two datasets are equal when they hold the same triples; labels are not
/// compared.
pub struct Dataset {
    universe: Universe,
    label: String,
    triples: HashSet<IdTriple>,
    index: OnceLock<Index>,
}

impl Clone for Dataset {
    fn clone(&self) -> Self {
        Dataset {
            universe: self.universe.clone(),
            label: self.label.clone(),
            triples: self.triples.clone(),
            index: OnceLock::new(),
        }
    }
}

impl fmt::Debug for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dataset")
            .field("label", &self.label)
            .field("len", &self.triples.len())
            .finish()
    }
}

impl Dataset {
    pub fn new(universe: &Universe) -> Self {
        Dataset {
            universe: universe.clone(),
            label: String::new(),
            triples: HashSet::new(),
            index: OnceLock::new(),
        }
    }

    pub fn with_label(universe: &Universe, label: impl Into<String>) -> Self {
        let mut ds = Dataset::new(universe);
        ds.label = label.into();
        ds
    }

    pub fn from_triples<'a>(
        universe: &Universe,
        triples: impl IntoIterator<Item = &'a Triple>,
    ) -> Self {
        let mut ds = Dataset::new(universe);
        for t in triples {
            ds.insert(t);
        }
        ds
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn encode(&self, t: &Triple) -> IdTriple {
        [
            self.universe.intern(&Term::Iri(t.subject.clone())),
            self.universe.intern(&Term::Iri(t.predicate.clone())),
            self.universe.intern(&t.object),
        ]
    }

    /// Ids of `t` if all three terms are already interned.
    pub fn try_encode(&self, t: &Triple) -> Option<IdTriple> {
        Some([
            self.universe.lookup(&Term::Iri(t.subject.clone()))?,
            self.universe.lookup(&Term::Iri(t.predicate.clone()))?,
            self.universe.lookup(&t.object)?,
        ])
    }

    pub fn decode(&self, ids: IdTriple) -> Triple {
        let [s, p, o] = ids;
        let subject = match self.universe.resolve(s) {
            Term::Iri(i) => i,
            Term::Literal(_) => unreachable!("subject ids always denote IRIs"),
        };
        let predicate = match self.universe.resolve(p) {
            Term::Iri(i) => i,
            Term::Literal(_) => unreachable!("predicate ids always denote IRIs"),
        };
        Triple {
            subject,
            predicate,
            object: self.universe.resolve(o),
        }
    }

    /// Returns `false` when the triple was already present.
    pub fn insert(&mut self, t: &Triple) -> bool {
        let ids = self.encode(t);
        self.insert_ids(ids)
    }

    /// The caller guarantees that subject and predicate ids denote IRIs.
    pub fn insert_ids(&mut self, ids: IdTriple) -> bool {
        let added = self.triples.insert(ids);
        if added {
            self.index.take();
        }
        added
    }

    pub fn remove(&mut self, t: &Triple) -> bool {
        let removed = match self.try_encode(t) {
            Some(ids) => self.triples.remove(&ids),
            None => false,
        };
        if removed {
            self.index.take();
        }
        removed
    }

    pub fn remove_ids(&mut self, ids: &IdTriple) -> bool {
        let removed = self.triples.remove(ids);
        if removed {
            self.index.take();
        }
        removed
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.try_encode(t)
            .is_some_and(|ids| self.triples.contains(&ids))
    }

    pub fn contains_ids(&self, ids: &IdTriple) -> bool {
        self.triples.contains(ids)
    }

    pub fn extend_from(&mut self, other: &Dataset) {
        if self.universe.same_as(&other.universe) {
            let before = self.triples.len();
            self.triples.extend(other.triples.iter().copied());
            if self.triples.len() != before {
                self.index.take();
            }
        } else {
            for t in other.iter() {
                self.insert(&t);
            }
        }
    }

    pub fn id_triples(&self) -> impl Iterator<Item = &IdTriple> + '_ {
        self.triples.iter()
    }

    /// Decoded triples in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.triples.iter().map(|ids| self.decode(*ids))
    }

    /// Triples in canonical order: by serialized subject, predicate, object.
    pub fn sorted_triples(&self) -> Vec<Triple> {
        let mut keyed: Vec<(String, String, String, Triple)> = self
            .iter()
            .map(|t| {
                (
                    t.subject.to_string(),
                    t.predicate.to_string(),
                    t.object.to_string(),
                    t,
                )
            })
            .collect();
        keyed.par_sort_unstable_by(|a, b| (&a.0, &a.1, &a.2).cmp(&(&b.0, &b.1, &b.2)));
        keyed.into_iter().map(|k| k.3).collect()
    }

    /// A copy of this dataset whose ids live in `universe`.
    pub fn rehome(&self, universe: &Universe) -> Dataset {
        if self.universe.same_as(universe) {
            return self.clone();
        }
        let mut ds = Dataset::with_label(universe, self.label.clone());
        for t in self.iter() {
            ds.insert(&t);
        }
        ds
    }

    pub(crate) fn index(&self) -> &Index {
        self.index.get_or_init(|| Index::build(&self.triples))
    }

    /// Forces construction of the lookup permutations.
    pub fn build_index(&self) {
        self.index();
    }
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if self.universe.same_as(&other.universe) {
            return self.triples == other.triples;
        }
        self.iter().all(|t| other.contains(&t))
    }
}

impl Eq for Dataset {}
