use std::fmt;

/// Index of a variable within a [`crate::Csp`].
pub type VarId = usize;

/// A domain value. Domains are finite sets of integers.
pub type Value = i64;

/// One domain per variable: the element of the domain lattice carried by
/// every search node. Each per-variable set is kept sorted ascending and
/// duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DomainTuple {
    sets: Vec<Vec<Value>>,
}

impl DomainTuple {
    /// Builds a tuple from raw value sets, normalizing each to sorted
    /// ascending order without duplicates.
    pub fn new(sets: Vec<Vec<Value>>) -> Self {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        DomainTuple { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn get(&self, var: VarId) -> &[Value] {
        &self.sets[var]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Value]> {
        self.sets.iter().map(|s| s.as_slice())
    }

    pub fn contains(&self, var: VarId, value: Value) -> bool {
        self.sets[var].binary_search(&value).is_ok()
    }

    /// Removes `value` from `var`'s set. Returns true if it was present.
    pub fn remove(&mut self, var: VarId, value: Value) -> bool {
        match self.sets[var].binary_search(&value) {
            Ok(i) => {
                self.sets[var].remove(i);
                true
            }
            Err(_) => false,
        }
    }

    /// Replaces `var`'s set, normalizing order.
    pub fn assign_set(&mut self, var: VarId, mut values: Vec<Value>) {
        values.sort_unstable();
        values.dedup();
        self.sets[var] = values;
    }

    /// Restricts `var` to a single value.
    pub fn assign(&mut self, var: VarId, value: Value) {
        self.sets[var] = vec![value];
    }

    pub fn has_empty_set(&self) -> bool {
        self.sets.iter().any(|s| s.is_empty())
    }

    pub fn all_singletons(&self) -> bool {
        self.sets.iter().all(|s| s.len() == 1)
    }

    /// The assignment determined by all-singleton domains, if any.
    pub fn singleton_assignment(&self) -> Option<Vec<Value>> {
        self.sets
            .iter()
            .map(|s| if s.len() == 1 { Some(s[0]) } else { None })
            .collect()
    }

    /// True when every per-variable set of `self` is a subset of the
    /// corresponding set in `other`.
    pub fn subset_of(&self, other: &DomainTuple) -> bool {
        self.sets.len() == other.sets.len()
            && self
                .sets
                .iter()
                .zip(other.sets.iter())
                .all(|(a, b)| a.iter().all(|v| b.binary_search(v).is_ok()))
    }

    /// Pairs `(var, value)` present in `self` but not in `other`.
    pub fn difference(&self, other: &DomainTuple) -> Vec<(VarId, Value)> {
        let mut out = Vec::new();
        for (i, set) in self.sets.iter().enumerate() {
            for &v in set {
                if !other.contains(i, v) {
                    out.push((i, v));
                }
            }
        }
        out
    }

    /// Product of the per-variable set sizes, saturating at `u128::MAX`.
    pub fn product_size(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }
}

impl fmt::Debug for DomainTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.sets.iter()).finish()
    }
}

impl FromIterator<Vec<Value>> for DomainTuple {
    fn from_iter<T: IntoIterator<Item = Vec<Value>>>(iter: T) -> Self {
        DomainTuple::new(iter.into_iter().collect())
    }
}
