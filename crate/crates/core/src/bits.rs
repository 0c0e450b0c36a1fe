//! Fixed-width bitsets over object and morphism indices.
//!
//! Every finite category handled by this crate has at most 64 objects and 64
//! morphisms, so sets of either fit in a single machine word. Ordering and
//! equality are those of the underlying word, which gives every set-valued
//! output a canonical order.

use serde::{Deserialize, Serialize};

/// Largest number of objects or morphisms a category may have.
pub const MAX_INDEX: usize = 64;

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl $name {
            pub const EMPTY: Self = Self(0);

            pub fn singleton(i: usize) -> Self {
                Self(1u64 << i)
            }

            /// The set `{0, .., n-1}`.
            pub fn full(n: usize) -> Self {
                if n >= 64 {
                    Self(u64::MAX)
                } else {
                    Self((1u64 << n) - 1)
                }
            }

            pub fn contains(self, i: usize) -> bool {
                i < 64 && self.0 & (1u64 << i) != 0
            }

            pub fn insert(&mut self, i: usize) {
                self.0 |= 1u64 << i;
            }

            pub fn remove(&mut self, i: usize) {
                self.0 &= !(1u64 << i);
            }

            pub fn with(mut self, i: usize) -> Self {
                self.insert(i);
                self
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub fn union(self, other: Self) -> Self {
                Self(self.0 | other.0)
            }

            pub fn intersection(self, other: Self) -> Self {
                Self(self.0 & other.0)
            }

            pub fn difference(self, other: Self) -> Self {
                Self(self.0 & !other.0)
            }

            pub fn is_subset(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            /// Smallest member, if any.
            pub fn first(self) -> Option<usize> {
                if self.0 == 0 {
                    None
                } else {
                    Some(self.0.trailing_zeros() as usize)
                }
            }

            pub fn iter(self) -> BitIter {
                BitIter(self.0)
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                let mut s = Self::EMPTY;
                for i in iter {
                    s.insert(i);
                }
                s
            }
        }

        impl IntoIterator for $name {
            type Item = usize;
            type IntoIter = BitIter;

            fn into_iter(self) -> BitIter {
                self.iter()
            }
        }

        impl std::fmt::Debug for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }
    };
}

index_set!(
    /// A set of morphism indices.
    MorphSet
);
index_set!(
    /// A set of object indices.
    ObjSet
);

/// Ascending iterator over the members of a bitset.
#[derive(Clone, Debug)]
pub struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for BitIter {}

/// Enumerates every down-closed subset of a finite preorder on `0..n`.
///
/// `below[i]` must contain `i` and every element that is forced into a set
/// once `i` is in it (i.e. the principal down-set of `i`, already transitively
/// closed). Output is sorted ascending by word value.
pub fn down_sets(universe: u64, below: &[u64]) -> Vec<u64> {
    let n = below.len();
    let mut above = vec![0u64; n];
    for (i, &b) in below.iter().enumerate() {
        for j in BitIter(b) {
            above[j] |= 1 << i;
        }
    }
    let order: Vec<usize> = BitIter(universe).collect();
    let mut out = Vec::new();
    down_sets_rec(&order, 0, 0, 0, below, &above, &mut out);
    out.sort_unstable();
    out
}

fn down_sets_rec(
    order: &[usize],
    pos: usize,
    inc: u64,
    exc: u64,
    below: &[u64],
    above: &[u64],
    out: &mut Vec<u64>,
) {
    let mut pos = pos;
    while pos < order.len() && (inc | exc) & (1 << order[pos]) != 0 {
        pos += 1;
    }
    if pos == order.len() {
        out.push(inc);
        return;
    }
    let i = order[pos];
    let inc2 = inc | below[i];
    if inc2 & exc == 0 {
        down_sets_rec(order, pos + 1, inc2, exc, below, above, out);
    }
    let exc2 = exc | above[i];
    if exc2 & inc == 0 {
        down_sets_rec(order, pos + 1, inc, exc2, below, above, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_and_len() {
        let s: MorphSet = [0, 3, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert!(s.contains(3) && !s.contains(4));
        assert_eq!(MorphSet::full(64).len(), 64);
    }

    #[test]
    fn down_sets_of_chain_and_antichain() {
        // chain 0 < 1 < 2
        let below = [0b001, 0b011, 0b111];
        assert_eq!(down_sets(0b111, &below), vec![0, 0b001, 0b011, 0b111]);
        // antichain of three elements: every subset
        let below = [0b001, 0b010, 0b100];
        assert_eq!(down_sets(0b111, &below).len(), 8);
    }

    #[test]
    fn down_sets_match_brute_force() {
        // 0 < 2, 1 < 2, 2 < 3
        let below = [0b0001, 0b0010, 0b0111, 0b1111];
        let mut brute: Vec<u64> = (0u64..16)
            .filter(|&s| BitIter(s).all(|i| below[i] & !s == 0))
            .collect();
        brute.sort_unstable();
        assert_eq!(down_sets(0b1111, &below), brute);
    }
}
