//! Exterior powers of `K^{n+1}`.
//!
//! Basis vectors of the degree-`d` power are indexed by `d`-subsets of
//! `{0, ..., n}`. Dense coordinates use colexicographic order, so the subsets
//! of `{0, ..., m}` always occupy a prefix of the subsets of `{0, ..., n}` for
//! `m <= n`.
//!
//! All indices are 0-based. The classical labels `e_1 ... e_7` used when
//! writing tensors in `wedge^3 C^7` by hand map to internal indices `0 ... 6`;
//! the text format accepts either convention through its `one_based` flag.

mod multivector;
mod pairing;
mod text;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use multivector::{annihilator_dim, is_decomposable, wedge_vectors, Multivector};
pub use pairing::{pairing_matrix, ContractionMatrix};
pub use text::{format_tensor, parse_tensor};

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial coefficient overflows usize")
}

/// A strictly increasing list of indices.
///
/// Ordering is colexicographic: compare the largest elements first. Sets of
/// different sizes compare by size.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Vec<usize> {
        s.0
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        Ok(IndexSet(indices))
    }

    /// Sorts `indices`, returning the set and the sign of the sorting
    /// permutation, or `None` if an index repeats.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Option<(IndexSet, bool)> {
        let odd = inversions(&indices) % 2 == 1;
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((IndexSet(indices), odd))
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// `{start, ..., end - 1}`.
    pub fn range(start: usize, end: usize) -> Self {
        IndexSet((start..end).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn intersection_size(&self, other: &IndexSet) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.intersection_size(other) == 0
    }

    /// Merges two disjoint sets; the flag is the parity of the shuffle that
    /// sorts `self ++ other`. `None` if they overlap.
    pub fn merge(&self, other: &IndexSet) -> Option<(IndexSet, bool)> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let mut swaps = 0usize;
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] < other.0[j]) {
                out.push(self.0[i]);
                i += 1;
            } else {
                if i < self.0.len() && self.0[i] == other.0[j] {
                    return None;
                }
                // other[j] jumps over the remaining elements of self
                swaps += self.0.len() - i;
                out.push(other.0[j]);
                j += 1;
            }
        }
        Some((IndexSet(out), swaps % 2 == 1))
    }

    /// Position of `i` within the set.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }

    pub fn with(&self, i: usize) -> Option<IndexSet> {
        match self.0.binary_search(&i) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, i);
                Some(IndexSet(v))
            }
        }
    }
}

/// Number of inversions of a sequence.
pub fn inversions(seq: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// Colex rank of `s` among the `d`-subsets of `{0, ..., n}`.
pub fn rank_of_subset(s: &IndexSet, n: usize, d: usize) -> Result<usize> {
    if s.len() != d {
        return Err(Error::InvalidIndexSet(format!(
            "{s:?} does not have size {d}"
        )));
    }
    if s.largest().is_some_and(|m| m > n) {
        return Err(Error::InvalidIndexSet(format!("{s:?} exceeds {n}")));
    }
    Ok(s.0
        .iter()
        .enumerate()
        .map(|(t, &v)| binomial(v, t + 1))
        .sum())
}

/// Inverse of [`rank_of_subset`].
pub fn unrank(rank: usize, n: usize, d: usize) -> Result<IndexSet> {
    let total = binomial(n + 1, d);
    if rank >= total {
        return Err(Error::RankOutOfRange {
            rank,
            size: n + 1,
            d,
        });
    }
    let mut r = rank;
    let mut out = vec![0; d];
    let mut hi = n + 1;
    for t in (1..=d).rev() {
        // largest c < hi with C(c, t) <= r
        let mut c = hi - 1;
        while binomial(c, t) > r {
            c -= 1;
        }
        out[t - 1] = c;
        r -= binomial(c, t);
        hi = c;
    }
    Ok(IndexSet(out))
}

/// Precomputed binomials for ranking `d`-subsets of `{0, ..., n}` in hot loops.
#[derive(Debug, Clone)]
pub struct ColexIndexer {
    n: usize,
    d: usize,
    table: Vec<usize>,
}

impl ColexIndexer {
    pub fn new(n: usize, d: usize) -> Self {
        let mut table = vec![0; (n + 1) * (d + 1)];
        for v in 0..=n {
            for t in 0..=d {
                table[v * (d + 1) + t] = binomial(v, t);
            }
        }
        ColexIndexer { n, d, table }
    }

    /// Number of basis vectors, `C(n+1, d)`.
    pub fn size(&self) -> usize {
        binomial(self.n + 1, self.d)
    }

    #[inline]
    pub fn rank(&self, s: &[usize]) -> usize {
        debug_assert_eq!(s.len(), self.d);
        s.iter()
            .enumerate()
            .map(|(t, &v)| self.table[v * (self.d + 1) + t + 1])
            .sum()
    }
}

/// All `d`-subsets of `ground` (taken as a sorted list) in colex order.
pub fn subsets_of(ground: &[usize], d: usize) -> Vec<IndexSet> {
    let m = ground.len();
    if d > m {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(m, d));
    let mut pos: Vec<usize> = (0..d).collect();
    loop {
        out.push(IndexSet(pos.iter().map(|&p| ground[p]).collect()));
        // colex successor: bump the first position that can move
        let mut t = 0;
        loop {
            if t == d {
                return out;
            }
            let limit = if t + 1 < d { pos[t + 1] } else { m };
            if pos[t] + 1 < limit {
                pos[t] += 1;
                for (u, slot) in pos.iter_mut().enumerate().take(t) {
                    *slot = u;
                }
                break;
            }
            t += 1;
        }
    }
}

/// All `d`-subsets of `{0, ..., n}` in colex order.
pub fn all_subsets(n: usize, d: usize) -> Vec<IndexSet> {
    let ground: Vec<usize> = (0..=n).collect();
    subsets_of(&ground, d)
}
