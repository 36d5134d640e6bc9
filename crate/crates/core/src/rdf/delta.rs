use super::dataset::Dataset;

/// `Δ(V_old, V_new)`: the raw additions and deletions between two versions.
#[derive(Debug, Clone)]
pub struct LowLevelDelta {
    pub added: Dataset,
    pub deleted: Dataset,
}

impl LowLevelDelta {
    pub fn len(&self) -> usize {
        self.added.len() + self.deleted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.deleted.is_empty()
    }
}

/// Exact set differences; both halves live in `v_old`'s universe.
pub fn low_level_delta(v_old: &Dataset, v_new: &Dataset) -> LowLevelDelta {
    let universe = v_old.universe();
    let rehomed;
    let v_new = if v_new.universe().same_as(universe) {
        v_new
    } else {
        rehomed = v_new.rehome(universe);
        &rehomed
    };
    let mut added = Dataset::with_label(universe, "added");
    let mut deleted = Dataset::with_label(universe, "deleted");
    for ids in v_new.id_triples() {
        if !v_old.contains_ids(ids) {
            added.insert_ids(*ids);
        }
    }
    for ids in v_old.id_triples() {
        if !v_new.contains_ids(ids) {
            deleted.insert_ids(*ids);
        }
    }
    LowLevelDelta { added, deleted }
}
