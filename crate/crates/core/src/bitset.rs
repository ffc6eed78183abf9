//! Fixed-width bit blocks over a dense vertex range `0..universe`.
//!
//! Every neighborhood in [`Digraph`](crate::Digraph) is one of these, so all
//! degree-window queries reduce to word-wise `AND` plus population count.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(universe: usize) -> usize {
    universe.div_ceil(WORD)
}

/// A set of vertices drawn from `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    /// The full range `0..universe`.
    pub fn full(universe: usize) -> Self {
        let mut s = VertexSet::new(universe);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    /// Builds a set from indices; panics if one is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, it: I) -> Self {
        let mut s = VertexSet::new(universe);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn from_range(universe: usize, range: std::ops::Range<usize>) -> Self {
        VertexSet::from_indices(universe, range)
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (w, b) = (v / WORD, v % WORD);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / WORD, v % WORD);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// `|self ∩ other|` without allocating.
    #[inline]
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `|self ∩ other ∩ third|` without allocating.
    #[inline]
    pub fn intersection3_len(&self, other: &VertexSet, third: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .zip(&third.words)
            .map(|((a, b), c)| (a & b & c).count_ones() as usize)
            .sum()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Smallest member of `self ∩ other`.
    pub fn first_common(&self, other: &VertexSet) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find(|(_, (a, b))| *a & *b != 0)
            .map(|(i, (a, b))| i * WORD + (a & b).trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as the ascending list of members.
impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_respects_universe() {
        let s = VertexSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(!s.contains(70));
        assert_eq!(s.complement().len(), 0);
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_indices(130, [1, 64, 65, 129]);
        let b = VertexSet::from_indices(130, [64, 100, 129]);
        assert_eq!(a.intersection(&b).to_vec(), vec![64, 129]);
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(a.union(&b).len(), 5);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 65]);
        assert_eq!(a.first_common(&b), Some(64));
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(a.complement().len(), 126);
    }

    #[test]
    fn empty_universe() {
        let s = VertexSet::new(0);
        assert!(s.is_empty());
        assert_eq!(s.iter().count(), 0);
        assert_eq!(s.first(), None);
    }
}
