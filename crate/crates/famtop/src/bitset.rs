//! Variable-width bit sets used for subsets of points, open-set families and
//! carriers. Ordering compares the sets as unsigned integers (most significant
//! block first), which is the canonical order used everywhere in this crate.

use std::fmt;

const BLOCK_BITS: usize = 64;

/// A subset of `{0, .., universe-1}` stored as packed 64-bit blocks.
///
/// Two sets are comparable only when they share a universe; all operations
/// panic on mismatched universes since that is always a logic error upstream.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    universe: usize,
    blocks: Vec<u64>,
}

impl BitSet {
    pub fn empty(universe: usize) -> Self {
        let nblocks = universe.div_ceil(BLOCK_BITS).max(1);
        BitSet {
            universe,
            blocks: vec![0; nblocks],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn singleton(universe: usize, index: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(index);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Decode the low `universe` bits of `value` (used by exhaustive subset
    /// enumeration loops; requires `universe <= 64`).
    pub fn from_mask(universe: usize, value: u64) -> Self {
        assert!(universe <= 64);
        let mut s = Self::empty(universe);
        s.blocks[0] = if universe == 64 {
            value
        } else {
            value & ((1u64 << universe) - 1)
        };
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.universe, "bit {index} out of universe {}", self.universe);
        self.blocks[index / BLOCK_BITS] |= 1u64 << (index % BLOCK_BITS);
    }

    pub fn contains(&self, index: usize) -> bool {
        if index >= self.universe {
            return false;
        }
        self.blocks[index / BLOCK_BITS] >> (index % BLOCK_BITS) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.universe, other.universe, "universe mismatch");
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check(other);
        BitSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check(other);
        BitSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::empty(self.universe);
        for i in 0..self.universe {
            if !self.contains(i) {
                out.insert(i);
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.check(other);
        self.blocks.iter().rev().cmp(other.blocks.iter().rev())
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Sort a family of sets into canonical order and drop duplicates.
pub fn canonicalize(mut family: Vec<BitSet>) -> Vec<BitSet> {
    family.sort();
    family.dedup();
    family
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_order() {
        let u = 3;
        let mut all: Vec<BitSet> = (0..8u64).map(|m| BitSet::from_mask(u, m)).collect();
        let shuffled = {
            let mut v = all.clone();
            v.reverse();
            v
        };
        all.sort();
        let mut re = shuffled;
        re.sort();
        assert_eq!(all, re);
        assert!(all[0].is_empty());
        assert!(all[7].is_full());
    }

    #[test]
    fn subset_and_ops() {
        let a = BitSet::from_indices(5, [0, 2]);
        let b = BitSet::from_indices(5, [0, 2, 4]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert_eq!(a.union(&b), b);
        assert_eq!(a.intersection(&b), a);
        assert_eq!(a.complement().len(), 3);
    }

    #[test]
    fn wide_universe() {
        let mut s = BitSet::empty(130);
        s.insert(0);
        s.insert(129);
        assert_eq!(s.len(), 2);
        assert!(s.contains(129));
        let t = BitSet::full(130);
        assert!(s.is_subset(&t));
    }
}
