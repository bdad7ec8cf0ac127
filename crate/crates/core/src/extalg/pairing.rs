use num_bigint::BigInt;

use super::{all_subsets, IndexSet, Multivector};
use crate::error::{Error, Result};
use crate::field::{det_exact, rank_exact, Coefficient, DenseMatrix, PrimeModulus};

/// The symmetric 21x21 matrix of `(eta, eta') -> eta ^ eta' ^ omega` for
/// `omega` in the third exterior power of a 7-dimensional space, read off
/// against the volume form `e_0 ^ ... ^ e_6`. Rows and columns follow the
/// colex order of 2-subsets of `{0, ..., 6}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionMatrix<R: Coefficient> {
    entries: Vec<Vec<R>>,
}

impl<R: Coefficient> ContractionMatrix<R> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &R {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<R>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Entry-wise image in GF(p).
    pub fn to_dense(&self, p: PrimeModulus) -> DenseMatrix {
        let rows: Vec<Vec<u32>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|c| c.residue(p)).collect())
            .collect();
        DenseMatrix::from_rows(p, self.entries.len(), &rows).expect("square matrix")
    }

    pub fn rank_mod_p(&self, p: PrimeModulus) -> usize {
        self.to_dense(p).rank()
    }
}

impl ContractionMatrix<BigInt> {
    pub fn det_exact(&self) -> BigInt {
        det_exact(&self.entries)
    }

    pub fn rank_exact(&self) -> usize {
        rank_exact(&self.entries)
    }
}

/// Builds the contraction matrix of a degree-3 tensor in dimension 7.
///
/// Each term `c * e_C` of `omega` touches only the pairs `(A, B)` of 2-sets
/// that together with `C` partition `{0, ..., 6}`, so the matrix is filled
/// term by term; every entry is plus or minus one coefficient of `omega`.
pub fn pairing_matrix<R: Coefficient>(omega: &Multivector<R>) -> Result<ContractionMatrix<R>> {
    if omega.dim() != 7 {
        return Err(Error::DimensionMismatch {
            expected: 7,
            got: omega.dim(),
        });
    }
    if omega.degree() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: omega.degree(),
        });
    }
    let ring = omega.ring();
    let pairs = all_subsets(6, 2);
    let ix = super::ColexIndexer::new(6, 2);
    let mut entries = vec![vec![R::zero_in(ring); pairs.len()]; pairs.len()];
    for (c, coeff) in omega.terms() {
        let rest: Vec<usize> = (0..7).filter(|&i| !c.contains(i)).collect();
        for a in super::subsets_of(&rest, 2) {
            let b = IndexSet::new(rest.iter().copied().filter(|&i| !a.contains(i)).collect())
                .expect("sorted complement");
            // a ^ b ^ c against the volume form; row is b (eta'), column a (eta)
            let (ab, odd_ab) = a.merge(&b).expect("disjoint");
            let (_, odd_abc) = ab.merge(c).expect("disjoint");
            let v = if odd_ab ^ odd_abc {
                coeff.negated()
            } else {
                coeff.clone()
            };
            let (ra, rb) = (ix.rank(a.as_slice()), ix.rank(b.as_slice()));
            entries[rb][ra] = entries[rb][ra].plus(&v);
        }
    }
    Ok(ContractionMatrix { entries })
}
