//! Constant-weight binary codes as certificates of independent tangent spaces.
//!
//! Words are stored by their supports. Two weight-`w` words at Hamming
//! distance `d` share `w - d/2` positions, so distance at least 6 means the
//! supports meet in at most `w - 3` elements. For weight `k + 1` this is the
//! condition under which the tangent spaces at the corresponding coordinate
//! points of `Gr(k, n)` are spanned by disjoint sets of unit vectors.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extalg::{all_subsets, IndexSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSet {
    length: usize,
    weight: usize,
    min_distance: usize,
    words: Vec<IndexSet>,
}

fn distance(a: &IndexSet, b: &IndexSet) -> usize {
    a.len() + b.len() - 2 * a.intersection_size(b)
}

impl CodeSet {
    /// Validates lengths, weights and every pairwise distance.
    pub fn new(
        length: usize,
        weight: usize,
        min_distance: usize,
        words: Vec<IndexSet>,
    ) -> Result<Self> {
        for w in &words {
            if w.len() != weight || w.largest().is_some_and(|m| m >= length) {
                return Err(Error::InvalidParameters(format!(
                    "word {w:?} is not a weight-{weight} word of length {length}"
                )));
            }
        }
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                if distance(a, b) < min_distance {
                    return Err(Error::InvalidParameters(format!(
                        "words {a:?} and {b:?} are at distance {} < {min_distance}",
                        distance(a, b)
                    )));
                }
            }
        }
        Ok(CodeSet {
            length,
            weight,
            min_distance,
            words,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn min_distance(&self) -> usize {
        self.min_distance
    }

    pub fn words(&self) -> &[IndexSet] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Largest pairwise intersection, or `None` for fewer than two words.
    pub fn max_intersection(&self) -> Option<usize> {
        let mut best = None;
        for (i, a) in self.words.iter().enumerate() {
            for b in &self.words[i + 1..] {
                best = best.max(Some(a.intersection_size(b)));
            }
        }
        best
    }

    fn truncate(mut self, s: usize) -> Self {
        self.words.truncate(s);
        self
    }
}

/// Words `{3i, ..., 3i + k}` for `i < s`; consecutive words share `k - 2`
/// elements and the others are disjoint.
pub fn tre_construction(k: usize, n: usize, s: usize) -> Result<CodeSet> {
    if k < 2 || s == 0 || n < k || 3 * (s - 1) > n - k {
        return Err(Error::InvalidParameters(format!(
            "need k >= 2, s >= 1 and 3(s-1) <= n-k, got k={k}, n={n}, s={s}"
        )));
    }
    let words = (0..s)
        .map(|i| IndexSet::range(3 * i, 3 * i + k + 1))
        .collect();
    CodeSet::new(n + 1, k + 1, 6, words)
}

/// Greedy code: scan weight-`weight` supports in colex order and keep each one
/// at distance at least `min_distance` from everything kept so far. Stops
/// after `limit` words when given.
pub fn lexicode_greedy(
    length: usize,
    weight: usize,
    min_distance: usize,
    limit: Option<usize>,
) -> CodeSet {
    let mut words: Vec<IndexSet> = Vec::new();
    if weight <= length && length > 0 {
        for cand in all_subsets(length - 1, weight) {
            if limit.is_some_and(|l| words.len() >= l) {
                break;
            }
            if words.iter().all(|w| distance(w, &cand) >= min_distance) {
                words.push(cand);
            }
        }
    }
    CodeSet {
        length,
        weight,
        min_distance,
        words,
    }
}

/// The three lower bounds for `A(n, 6, w)` of Graham and Sloane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrahamSloaneBounds {
    /// `C(n, w) / q^2`, `q` the least prime power with `q >= n`.
    pub a: BigUint,
    pub q_a: u64,
    /// `(q - 1) C(n, w) / (q^3 - 1)`, `q` the least prime power with `q + 1 >= n`.
    pub b: BigUint,
    pub q_b: u64,
    /// `C(n, w) / (1 + w(n - w) + C(w, 2) C(n - w, 2))`.
    pub c: BigUint,
}

impl GrahamSloaneBounds {
    pub fn best(&self) -> BigUint {
        self.a.clone().max(self.b.clone()).max(self.c.clone())
    }
}

fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= q && q % f != 0 {
        f += 1;
    }
    if f * f > q {
        return true;
    }
    let mut m = q;
    while m % f == 0 {
        m /= f;
    }
    m == 1
}

fn least_prime_power_at_least(m: u64) -> u64 {
    let mut q = m.max(2);
    while !is_prime_power(q) {
        q += 1;
    }
    q
}

pub fn graham_sloane_bounds(n: u64, w: u64) -> Result<GrahamSloaneBounds> {
    if w == 0 || w > n {
        return Err(Error::InvalidParameters(format!(
            "need n >= w >= 1, got n={n}, w={w}"
        )));
    }
    let total = binomial_big(n, w);
    let q_a = least_prime_power_at_least(n);
    let a = &total / (BigUint::from(q_a) * q_a);
    let q_b = least_prime_power_at_least(n.saturating_sub(1));
    let qb = BigUint::from(q_b);
    let b = &total * (&qb - 1u32) / (&qb * &qb * &qb - 1u32);
    let denom = BigUint::from(1 + w * (n - w)) + binomial_big(w, 2) * binomial_big(n - w, 2);
    let c = &total / denom;
    Ok(GrahamSloaneBounds { a, q_a, b, q_b, c })
}

/// A code of at least `s` words of length `n+1`, weight `k+1`, distance 6, if
/// the explicit or greedy construction reaches `s`. Such a code shows that
/// `s` coordinate points have independent tangent spaces.
pub fn monomial_certificate(k: usize, n: usize, s: usize) -> Option<CodeSet> {
    if k < 2 || s == 0 || n <= k {
        return None;
    }
    if let Ok(code) = tre_construction(k, n, s) {
        return Some(code);
    }
    let greedy = lexicode_greedy(n + 1, k + 1, 6, Some(s));
    (greedy.len() >= s).then(|| greedy.truncate(s))
}
