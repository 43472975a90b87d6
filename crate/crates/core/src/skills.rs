use std::fmt;

use serde::{Deserialize, Serialize};

/// Index into the instance's skill universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SkillId(pub u32);

impl SkillId {
    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SkillId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Sorted, duplicate-free set of skills.
///
/// Skill sets in this problem are small (a handful of entries), so a sorted
/// vector beats hashing or bitsets sized to the whole universe. The derived
/// `Ord` is the lexicographic order on the sorted id lists, which is the
/// subset tie-break used by the solvers.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<SkillId>", from = "Vec<SkillId>")]
pub struct SkillSet(Vec<SkillId>);

impl SkillSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Builds a set from sorted ids. Caller guarantees order and uniqueness.
    pub(crate) fn from_sorted_unchecked(ids: Vec<SkillId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        Self(ids)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn contains(&self, skill: SkillId) -> bool {
        self.0.binary_search(&skill).is_ok()
    }

    pub fn insert(&mut self, skill: SkillId) -> bool {
        match self.0.binary_search(&skill) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, skill);
                true
            }
        }
    }

    pub fn remove(&mut self, skill: SkillId) -> bool {
        match self.0.binary_search(&skill) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// Removes every element of `other` from `self`.
    pub fn subtract(&mut self, other: &SkillSet) {
        self.0.retain(|s| !other.contains(*s));
    }

    pub fn union_with(&mut self, other: &SkillSet) {
        for &s in other.iter() {
            self.insert(s);
        }
    }

    pub fn is_subset(&self, other: &SkillSet) -> bool {
        self.0.iter().all(|s| other.contains(*s))
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &SkillId> + '_ {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[SkillId] {
        &self.0
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        self.0.capacity() * std::mem::size_of::<SkillId>()
    }
}

impl From<Vec<SkillId>> for SkillSet {
    fn from(mut ids: Vec<SkillId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self(ids)
    }
}

impl From<SkillSet> for Vec<SkillId> {
    fn from(set: SkillSet) -> Self {
        set.0
    }
}

impl FromIterator<SkillId> for SkillSet {
    fn from_iter<I: IntoIterator<Item = SkillId>>(iter: I) -> Self {
        Self::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<'a> IntoIterator for &'a SkillSet {
    type Item = &'a SkillId;
    type IntoIter = std::slice::Iter<'a, SkillId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for SkillSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}
