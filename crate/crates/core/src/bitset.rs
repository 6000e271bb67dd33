//! Bitset-backed vertex sets over `0..n-1`.

use serde::{Deserialize, Serialize};

/// A set of vertices of some graph, stored as 64-bit words.
///
/// The associated universe size `n` is carried by the owning [`crate::graph::Graph`];
/// a `VertexSet` only promises that no bit at position `>= n` is set when it was
/// produced by an operation of that graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet {
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            words: vec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        if v / 64 >= self.words.len() {
            self.words.resize(v / 64 + 1, 0);
        }
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v / 64 < self.words.len() {
            self.words[v / 64] &= !(1u64 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v / 64 < self.words.len() && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Least element, if any. Choice rules throughout the crate break ties by
    /// least vertex index, so this is the canonical representative.
    pub fn min_elem(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_words<'a>(&'a self, other: &'a VertexSet) -> impl Iterator<Item = (u64, u64)> + 'a {
        let len = self.words.len().max(other.words.len());
        (0..len).map(move |i| {
            (
                self.words.get(i).copied().unwrap_or(0),
                other.words.get(i).copied().unwrap_or(0),
            )
        })
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self.zip_words(other).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self.zip_words(other).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            words: self.zip_words(other).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.zip_words(other).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &VertexSet) -> bool {
        self.zip_words(other).all(|(a, b)| a & b == 0)
    }

    /// All vertices of `0..n-1` not in `self`.
    pub fn complement(&self, n: usize) -> VertexSet {
        VertexSet::full(n).difference(self)
    }

    /// Stable key for memo tables: the raw words, trailing zero words trimmed.
    pub fn key(&self) -> Vec<u64> {
        let mut k = self.words.clone();
        while k.last() == Some(&0) {
            k.pop();
        }
        k
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VertexSet::empty(70);
        s.insert(0);
        s.insert(65);
        assert!(s.contains(0) && s.contains(65) && !s.contains(64));
        assert_eq!(s.len(), 2);
        assert_eq!(s.min_elem(), Some(0));
        assert_eq!(s.to_vec(), vec![0, 65]);
        s.remove(0);
        assert_eq!(s.min_elem(), Some(65));
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_iter(10, [1, 3, 5]);
        let b = VertexSet::from_iter(10, [3, 4]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 3, 4, 5]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 5]);
        assert!(!a.is_subset_of(&b));
        assert!(VertexSet::from_iter(10, [3]).is_subset_of(&b));
        assert_eq!(a.complement(6).to_vec(), vec![0, 2, 4]);
    }
}
