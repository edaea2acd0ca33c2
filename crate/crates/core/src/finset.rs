//! Canonical finite sets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite set kept as a strictly increasing vector.
///
/// Two `FinSet`s are equal exactly when they are extensionally equal. The
/// `Ord` instance is the order of the usual binary coding of finite sets of
/// naturals (`{a, b, ..}` coded as `2^a + 2^b + ..`), generalised to any
/// totally ordered element type: the set containing the largest element of
/// the symmetric difference is the larger one. This lets callers walk finite
/// sets "in ascending code order" without materialising the codes, which
/// overflow quickly.
#[derive(Clone, PartialEq, Eq, Hash, Deserialize)]
#[serde(from = "Vec<T>")]
#[serde(bound(deserialize = "T: Ord + Deserialize<'de>"))]
pub struct FinSet<T> {
    elems: Vec<T>,
}

impl<T: Serialize> Serialize for FinSet<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

impl<T> Default for FinSet<T> {
    fn default() -> Self {
        FinSet { elems: Vec::new() }
    }
}

impl<T: Ord> FinSet<T> {
    pub fn new() -> Self {
        FinSet { elems: Vec::new() }
    }

    pub fn singleton(e: T) -> Self {
        FinSet { elems: vec![e] }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &T) -> bool {
        self.elems.binary_search(e).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.elems.iter()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.elems
    }

    pub fn max(&self) -> Option<&T> {
        self.elems.last()
    }

    /// Inserts `e`; returns false if it was already present.
    pub fn insert(&mut self, e: T) -> bool {
        match self.elems.binary_search(&e) {
            Ok(_) => false,
            Err(pos) => {
                self.elems.insert(pos, e);
                true
            }
        }
    }

    pub fn remove(&mut self, e: &T) -> bool {
        match self.elems.binary_search(e) {
            Ok(pos) => {
                self.elems.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.elems.iter().all(|e| other.contains(e))
    }

    pub fn into_vec(self) -> Vec<T> {
        self.elems
    }
}

impl<T: Ord + Clone> FinSet<T> {
    pub fn union(&self, other: &Self) -> Self {
        self.iter().chain(other.iter()).cloned().collect()
    }

    pub fn with(&self, e: T) -> Self {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    pub fn without(&self, e: &T) -> Self {
        let mut out = self.clone();
        out.remove(e);
        out
    }
}

impl FinSet<u64> {
    /// Binary code `sum 2^e`, or `None` when it does not fit in 64 bits.
    pub fn code(&self) -> Option<u64> {
        self.elems
            .iter()
            .try_fold(0u64, |acc, &e| (e < 64).then(|| acc | (1u64 << e)))
    }

    pub fn from_code(code: u64) -> Self {
        (0..64).filter(|bit| code >> bit & 1 == 1).collect()
    }
}

impl<T: Ord> FromIterator<T> for FinSet<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut elems: Vec<T> = iter.into_iter().collect();
        elems.sort();
        elems.dedup();
        FinSet { elems }
    }
}

impl<T: Ord> From<Vec<T>> for FinSet<T> {
    fn from(v: Vec<T>) -> Self {
        v.into_iter().collect()
    }
}

impl<T> From<FinSet<T>> for Vec<T> {
    fn from(s: FinSet<T>) -> Self {
        s.elems
    }
}

impl<'a, T> IntoIterator for &'a FinSet<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

impl<T: Ord> Ord for FinSet<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (self.elems.len(), other.elems.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (_, 0) => return Ordering::Greater,
                (0, _) => return Ordering::Less,
                _ => match self.elems[i - 1].cmp(&other.elems[j - 1]) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    unequal => return unequal,
                },
            }
        }
    }
}

impl<T: Ord> PartialOrd for FinSet<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: fmt::Debug> fmt::Debug for FinSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let a: FinSet<u64> = vec![3, 1, 3, 2].into();
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a, FinSet::from(vec![2, 3, 1]));
    }

    #[test]
    fn code_roundtrip_small() {
        let a: FinSet<u64> = vec![0, 2, 5].into();
        assert_eq!(a.code(), Some(1 + 4 + 32));
        assert_eq!(FinSet::from_code(37), a);
        assert_eq!(FinSet::<u64>::singleton(64).code(), None);
    }

    #[test]
    fn json_is_a_plain_list() {
        let a: FinSet<u64> = vec![4, 1].into();
        assert_eq!(serde_json::to_string(&a).unwrap(), "[1,4]");
        let b: FinSet<u64> = serde_json::from_str("[4,1,4]").unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn order_matches_binary_code(a in 0u64..1 << 20, b in 0u64..1 << 20) {
            let (sa, sb) = (FinSet::from_code(a), FinSet::from_code(b));
            prop_assert_eq!(sa.cmp(&sb), a.cmp(&b));
        }
    }
}
