use std::collections::HashMap;
use std::fmt;
use std::num::NonZeroU32;
use std::sync::Arc;

use parking_lot::RwLock;

use super::term::Term;

/// Interned handle of a term inside one [`Universe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(NonZeroU32);

impl TermId {
    pub fn get(self) -> u32 {
        self.0.get()
    }

    pub(crate) fn from_raw(raw: u32) -> Option<TermId> {
        NonZeroU32::new(raw).map(TermId)
    }
}

#[derive(Default)]
struct Interner {
    ids: HashMap<Term, TermId>,
    terms: Vec<Term>,
}

/// A shared term dictionary. Datasets built over the same universe compare
/// and join on ids; cloning a universe clones the handle, not the table.
#[derive(Clone, Default)]
pub struct Universe {
    inner: Arc<RwLock<Interner>>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("terms", &self.len())
            .finish()
    }
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&self, term: &Term) -> TermId {
        if let Some(id) = self.inner.read().ids.get(term) {
            return *id;
        }
        let mut guard = self.inner.write();
        if let Some(id) = guard.ids.get(term) {
            return *id;
        }
        let raw = u32::try_from(guard.terms.len() + 1).expect("term universe exceeds u32 ids");
        let id = TermId(NonZeroU32::new(raw).expect("ids start at one"));
        guard.terms.push(term.clone());
        guard.ids.insert(term.clone(), id);
        id
    }

    pub fn lookup(&self, term: &Term) -> Option<TermId> {
        self.inner.read().ids.get(term).copied()
    }

    /// Panics if `id` was minted by another universe and is out of range.
    pub fn resolve(&self, id: TermId) -> Term {
        self.inner.read().terms[id.get() as usize - 1].clone()
    }

    pub fn resolve_many(&self, ids: &[TermId]) -> Vec<Term> {
        let guard = self.inner.read();
        ids.iter()
            .map(|id| guard.terms[id.get() as usize - 1].clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.inner.read().terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn same_as(&self, other: &Universe) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}
