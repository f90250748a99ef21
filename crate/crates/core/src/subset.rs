//! Small index subsets of `[r] = {0, ..., r-1}` as bitmasks.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of summand indices, stored as a bitmask. Index `i` corresponds
/// to bit `1 << i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// The full set `[r]`.
    pub fn full(r: usize) -> Self {
        Subset((1u32 << r) - 1)
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All nonempty subsets `S` with `S ⊆ self`.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = Subset> {
        let full = self.0;
        std::iter::successors(Some(full), move |&s| {
            if s == 0 {
                None
            } else {
                Some((s - 1) & full)
            }
        })
        .filter(|&s| s != 0)
        .map(Subset)
    }

    /// All nonempty proper subsets `S` with `∅ ⊂ S ⊂ self`.
    pub fn proper_nonempty_subsets(self) -> impl Iterator<Item = Subset> {
        let me = self;
        self.nonempty_subsets().filter(move |&s| s != me)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration() {
        let r = Subset::full(3);
        let subs: Vec<_> = r.nonempty_subsets().collect();
        assert_eq!(subs.len(), 7);
        let proper: Vec<_> = r.proper_nonempty_subsets().collect();
        assert_eq!(proper.len(), 6);
        assert!(proper.iter().all(|s| s.is_subset_of(r) && *s != r));
    }

    #[test]
    fn membership_ops() {
        let s = Subset::singleton(2).insert(0);
        assert!(s.contains(0) && !s.contains(1) && s.contains(2));
        assert_eq!(s.len(), 2);
        assert_eq!(s.remove(0), Subset::singleton(2));
        assert_eq!(format!("{s}"), "{1,3}");
    }
}
