use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{ElementIndex, GroupElement, GroupSpec};

/// A subset of a group, stored as a bitset over element indices.
#[derive(Clone)]
pub struct GroupSubset {
    group: GroupSpec,
    bits: FixedBitSet,
    size: usize,
}

impl GroupSubset {
    pub fn empty(group: &GroupSpec) -> Self {
        GroupSubset {
            group: group.clone(),
            bits: FixedBitSet::with_capacity(group.order()),
            size: 0,
        }
    }

    pub fn full(group: &GroupSpec) -> Self {
        let mut bits = FixedBitSet::with_capacity(group.order());
        bits.insert_range(..);
        GroupSubset {
            group: group.clone(),
            bits,
            size: group.order(),
        }
    }

    pub fn from_indices(group: &GroupSpec, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(group);
        for i in indices {
            if i >= group.order() {
                return Err(Error::InvalidElement(format!(
                    "index {i} is out of range for {} (order {})",
                    group.literal(),
                    group.order()
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub(crate) fn from_indices_unchecked(group: &GroupSpec, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(group);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn from_elements<'a>(group: &GroupSpec, elems: impl IntoIterator<Item = &'a GroupElement>) -> Result<Self> {
        let mut s = Self::empty(group);
        for e in elems {
            s.insert(group.encode(e)?.0);
        }
        Ok(s)
    }

    /// `S = {x : x in S}` from the tuple lists used in tables, e.g.
    /// `[[0,1],[1,0]]`.
    pub fn from_tuples(group: &GroupSpec, tuples: &[Vec<u64>]) -> Result<Self> {
        let elems: Vec<GroupElement> = tuples.iter().cloned().map(GroupElement::new).collect();
        Self::from_elements(group, &elems)
    }

    /// Parses `0,3` (element indices) or `(0,1),(1,0)` (coordinate tuples).
    /// An empty string is the empty set.
    pub fn parse(group: &GroupSpec, s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if s.is_empty() {
            return Ok(Self::empty(group));
        }
        if s.contains('(') {
            let mut elems = Vec::new();
            let mut rest = s;
            while let Some(open) = rest.find('(') {
                let close = rest[open..]
                    .find(')')
                    .map(|c| c + open)
                    .ok_or_else(|| Error::parse(&rest[open..], "unclosed tuple"))?;
                let body = &rest[open + 1..close];
                let coords = body
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u64>()
                            .map_err(|_| Error::parse(t.trim(), "coordinate is not a non-negative integer"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                elems.push(GroupElement::new(coords));
                rest = &rest[close + 1..];
            }
            return Self::from_elements(group, &elems);
        }
        let idx = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>()
                    .map_err(|_| Error::parse(t, "element index is not a non-negative integer"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(group, idx)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let fresh = !self.bits.put(i);
        if fresh {
            self.size += 1;
        }
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        let had = self.bits.contains(i);
        if had {
            self.bits.set(i, false);
            self.size -= 1;
        }
        had
    }

    /// Indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.indices().collect()
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.indices().map(|i| self.group.decode(ElementIndex(i))).collect()
    }

    /// Coordinate tuples sorted lexicographically.
    pub fn to_tuples(&self) -> Vec<Vec<u64>> {
        let mut t: Vec<Vec<u64>> = self.elements().into_iter().map(|e| e.coords).collect();
        t.sort();
        t
    }

    /// `-S`.
    pub fn negated(&self) -> Self {
        Self::from_indices_unchecked(&self.group, self.indices().map(|i| self.group.neg_idx(i)))
    }

    /// `S + g`.
    pub fn translated(&self, g: usize) -> Self {
        Self::from_indices_unchecked(&self.group, self.indices().map(|i| self.group.add_idx(i, g)))
    }

    /// Image under an index permutation (e.g. an automorphism table).
    pub fn mapped(&self, perm: &[usize]) -> Self {
        Self::from_indices_unchecked(&self.group, self.indices().map(|i| perm[i]))
    }

    pub fn is_symmetric(&self) -> bool {
        self.indices().all(|i| self.contains(self.group.neg_idx(i)))
    }

    pub fn is_disjoint(&self, other: &GroupSubset) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        GroupSubset {
            group: self.group.clone(),
            size: self.group.order() - self.size,
            bits,
        }
    }
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.bits == other.bits
    }
}

impl Eq for GroupSubset {}

impl std::hash::Hash for GroupSubset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.hash(state);
        for i in self.indices() {
            i.hash(state);
        }
    }
}

impl PartialOrd for GroupSubset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupSubset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_vec().cmp(&other.to_vec())
    }
}

impl fmt::Display for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.group.literal())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let z7: GroupSpec = "Z7".parse().unwrap();
        let a = GroupSubset::parse(&z7, "0,3").unwrap();
        assert_eq!(a.to_vec(), vec![0, 3]);
        assert_eq!(a.len(), 2);

        let z33: GroupSpec = "Z3xZ3".parse().unwrap();
        let b = GroupSubset::parse(&z33, "{(0,1),(1,0),(0,2),(2,0)}").unwrap();
        assert_eq!(b.to_vec(), vec![1, 2, 3, 6]);
        assert!(b.is_symmetric());
        assert_eq!(b.to_string(), "{(0,1),(0,2),(1,0),(2,0)}");

        assert!(GroupSubset::parse(&z7, "0,7").is_err());
        assert!(GroupSubset::parse(&z33, "(0,3)").is_err());
        assert!(GroupSubset::parse(&z7, "").unwrap().is_empty());
    }

    #[test]
    fn size_tracks_popcount() {
        let z: GroupSpec = "Z10".parse().unwrap();
        let mut s = GroupSubset::empty(&z);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(9);
        assert_eq!(s.len(), 2);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert_eq!(s.len(), 1);
        assert_eq!(s.complement().len(), 9);
        assert_eq!(s.negated().to_vec(), vec![1]);
        assert_eq!(s.translated(2).to_vec(), vec![1]);
    }
}
