use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{all_subsets, ColexIndexer, IndexSet};
use crate::error::{Error, Result};
use crate::field::{Coefficient, EchelonBasis, FieldScalar, PrimeModulus};

/// A sparse element of the degree-`d` exterior power of `K^dim`.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Multivector<R: Coefficient> {
    ring: R::Ring,
    dim: usize,
    degree: usize,
    terms: BTreeMap<IndexSet, R>,
}

impl<R: Coefficient> std::fmt::Debug for Multivector<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Multivector(dim {}, degree {})[", self.dim, self.degree)?;
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*e{s:?}")?;
        }
        write!(f, "]")
    }
}

impl<R: Coefficient> Multivector<R> {
    pub fn zero(ring: R::Ring, dim: usize, degree: usize) -> Self {
        Multivector {
            ring,
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff * e_set`.
    pub fn basis(dim: usize, set: IndexSet, coeff: R) -> Result<Self> {
        let mut m = Self::zero(coeff.ring(), dim, set.len());
        m.add_term(set, coeff)?;
        Ok(m)
    }

    pub fn from_terms(
        ring: R::Ring,
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (IndexSet, R)>,
    ) -> Result<Self> {
        let mut m = Self::zero(ring, dim, degree);
        for (s, c) in terms {
            m.add_term(s, c)?;
        }
        Ok(m)
    }

    fn check_set(&self, set: &IndexSet) -> Result<()> {
        if set.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: set.len(),
            });
        }
        if set.largest().is_some_and(|m| m >= self.dim) {
            return Err(Error::InvalidIndexSet(format!(
                "{set:?} out of range for dimension {}",
                self.dim
            )));
        }
        Ok(())
    }

    /// Adds `coeff * e_set` in place.
    pub fn add_term(&mut self, set: IndexSet, coeff: R) -> Result<()> {
        self.check_set(&set)?;
        if coeff.ring() != self.ring {
            return Err(Error::InvalidParameters(
                "coefficient from another ring".into(),
            ));
        }
        self.add_unchecked(set, coeff);
        Ok(())
    }

    fn add_unchecked(&mut self, set: IndexSet, coeff: R) {
        if coeff.vanishes() {
            return;
        }
        match self.terms.get_mut(&set) {
            Some(c) => {
                let sum = c.plus(&coeff);
                if sum.vanishes() {
                    self.terms.remove(&set);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(set, coeff);
            }
        }
    }

    pub fn ring(&self) -> R::Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, set: &IndexSet) -> R {
        self.terms
            .get(set)
            .cloned()
            .unwrap_or_else(|| R::zero_in(self.ring))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_unchecked(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&R::from_i64(self.ring, -1))
    }

    pub fn scale(&self, k: &R) -> Self {
        let mut out = Self::zero(self.ring, self.dim, self.degree);
        for (s, c) in &self.terms {
            out.add_unchecked(s.clone(), c.times(k));
        }
        out
    }

    /// Exterior product. Each merged term carries the parity of the shuffle
    /// that sorts the concatenated index lists; overlapping terms vanish.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree + other.degree > self.dim {
            return Err(Error::DegreeOverflow {
                left: self.degree,
                right: other.degree,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.ring, self.dim, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, odd)) = a.merge(b) {
                    let c = ca.times(cb);
                    out.add_unchecked(s, if odd { c.negated() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Coordinates in colex order, reduced mod `p`.
    pub fn to_dense(&self, p: PrimeModulus) -> Vec<u32> {
        let ix = ColexIndexer::new(self.dim.saturating_sub(1), self.degree);
        let mut out = vec![0u32; ix.size()];
        for (s, c) in &self.terms {
            out[ix.rank(s.as_slice())] = c.residue(p);
        }
        out
    }

    /// Image under the linear map sending `e_i` to column `i` of `g`.
    pub fn transform(&self, g: &[Vec<R>]) -> Result<Self> {
        if g.len() != self.dim || g.iter().any(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: g.len(),
            });
        }
        let columns: Vec<Vec<R>> = (0..self.dim)
            .map(|i| g.iter().map(|row| row[i].clone()).collect())
            .collect();
        let mut out = Self::zero(self.ring, self.dim, self.degree);
        for (s, c) in &self.terms {
            let vecs: Vec<Vec<R>> = s.as_slice().iter().map(|&i| columns[i].clone()).collect();
            let image = wedge_vectors(&vecs)?;
            for (t, ct) in image.terms {
                out.add_unchecked(t, ct.times(c));
            }
        }
        Ok(out)
    }
}

impl Multivector<BigInt> {
    pub fn reduce_mod(&self, p: PrimeModulus) -> Multivector<FieldScalar> {
        let mut out = Multivector::zero(p, self.dim, self.degree);
        for (s, c) in &self.terms {
            out.add_unchecked(s.clone(), FieldScalar::new(p.reduce_bigint(c), p));
        }
        out
    }
}

/// Signed permutations of `0..d` (Heap's algorithm).
fn signed_permutations(d: usize) -> Vec<(Vec<usize>, bool)> {
    let mut perm: Vec<usize> = (0..d).collect();
    let mut out = vec![(perm.clone(), false)];
    let mut c = vec![0usize; d];
    let mut odd = false;
    let mut i = 1;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            odd = !odd;
            out.push((perm.clone(), odd));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `v_0 ^ ... ^ v_k`: the coefficient at `I` is the maximal minor of the
/// stacked vectors on the columns `I`, expanded by permutations. Meant for
/// small numbers of vectors.
pub fn wedge_vectors<R: Coefficient>(vectors: &[Vec<R>]) -> Result<Multivector<R>> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::InvalidParameters("wedge of no vectors".into()))?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::InvalidParameters("vectors of length zero".into()));
    }
    let ring = first[0].ring();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    let d = vectors.len();
    if d > dim {
        return Err(Error::DegreeOverflow {
            left: d,
            right: 0,
            dim,
        });
    }
    let perms = signed_permutations(d);
    let mut out = Multivector::zero(ring, dim, d);
    for set in all_subsets(dim - 1, d) {
        let cols = set.as_slice();
        let mut acc: Option<R> = None;
        for (perm, odd) in &perms {
            let mut prod: Option<R> = None;
            for (r, &pc) in perm.iter().enumerate() {
                let entry = &vectors[r][cols[pc]];
                if entry.vanishes() {
                    prod = None;
                    break;
                }
                prod = Some(match prod {
                    None => entry.clone(),
                    Some(p) => p.times(entry),
                });
            }
            if let Some(p) = prod {
                let p = if *odd { p.negated() } else { p };
                acc = Some(match acc {
                    None => p,
                    Some(a) => a.plus(&p),
                });
            }
        }
        if let Some(a) = acc {
            out.add_unchecked(set, a);
        }
    }
    Ok(out)
}

/// Dimension over GF(p) of `{v : v ^ omega = 0}`.
pub fn annihilator_dim<R: Coefficient>(omega: &Multivector<R>, p: PrimeModulus) -> usize {
    let dim = omega.dim();
    if omega.degree() >= dim {
        return dim;
    }
    let cols = ColexIndexer::new(dim - 1, omega.degree() + 1).size();
    let mut basis = EchelonBasis::new(p, cols);
    for j in 0..dim {
        let ej = Multivector::basis(
            dim,
            IndexSet::new(vec![j]).unwrap(),
            R::one_in(omega.ring()),
        )
        .expect("basis vector in range");
        let prod = ej.wedge(omega).expect("degree checked above");
        basis.insert(&prod.to_dense(p));
    }
    dim - basis.rank()
}

/// Whether `omega` is a nonzero decomposable tensor over GF(p): its
/// annihilator has dimension equal to its degree.
pub fn is_decomposable<R: Coefficient>(omega: &Multivector<R>, p: PrimeModulus) -> bool {
    omega.to_dense(p).iter().any(|&v| v != 0) && annihilator_dim(omega, p) == omega.degree()
}
