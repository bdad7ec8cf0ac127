//! Points of `Gr(k, n)` as row matrices over GF(p), their Plücker images and
//! the generators of their affine tangent spaces.
//!
//! The tangent space to the cone over `Gr(k, n)` at `v_0 ^ ... ^ v_k` is
//! spanned by the `(k+1)(n+1)` products obtained by replacing one `v_i` with a
//! unit vector `e_j`. Its dimension is `(k+1)(n-k) + 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extalg::{binomial, subsets_of, wedge_vectors, ColexIndexer, IndexSet, Multivector};
use crate::field::{DenseMatrix, EchelonBasis, FieldScalar, PrimeModulus};

/// Maximum number of draws before [`random_point`] gives up on full rank.
pub const MAX_RESAMPLES: usize = 8;

/// Affine dimension of the cone over `Gr(k, n)`.
pub fn cone_dim(k: usize, n: usize) -> usize {
    (k + 1) * (n - k) + 1
}

/// A `(k+1)`-dimensional subspace of GF(p)^(n+1), stored by a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassPoint {
    modulus: PrimeModulus,
    k: usize,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl GrassPoint {
    /// Checks that `rows` are `k+1` independent vectors of length `n+1`.
    pub fn new(modulus: PrimeModulus, n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.len() < 2 || rows.len() > n {
            return Err(Error::InvalidParameters(format!(
                "{} rows do not define a point of a Grassmannian of lines or higher in P^{n}",
                rows.len()
            )));
        }
        let mut m = DenseMatrix::zeros(modulus, 0, n + 1);
        for r in &rows {
            m.push_row(r)?;
        }
        let rank = m.rank();
        if rank < rows.len() {
            return Err(Error::DegenerateRows {
                rank,
                expected: rows.len(),
            });
        }
        let rows = m.row_iter().map(<[u32]>::to_vec).collect();
        Ok(GrassPoint {
            modulus,
            k: m.rows() - 1,
            n,
            rows,
        })
    }

    pub fn from_i64_rows(modulus: PrimeModulus, n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| modulus.reduce_i64(v)).collect())
            .collect();
        Self::new(modulus, n, rows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    fn scalar_rows(&self) -> Vec<Vec<FieldScalar>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| FieldScalar::new(v, self.modulus))
                    .collect()
            })
            .collect()
    }
}

/// The coordinate subspace of GF(p)^(n+1) spanned by `e_i`, `i` in `support`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateSubspace {
    n: usize,
    support: IndexSet,
}

impl CoordinateSubspace {
    pub fn new(n: usize, support: IndexSet) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidParameters("empty support".into()));
        }
        if support.largest().is_some_and(|m| m > n) {
            return Err(Error::InvalidIndexSet(format!("{support:?} exceeds {n}")));
        }
        Ok(CoordinateSubspace { n, support })
    }

    /// Support `{lo, ..., hi}`.
    pub fn interval(n: usize, lo: usize, hi: usize) -> Result<Self> {
        Self::new(n, IndexSet::range(lo, hi + 1))
    }

    pub fn full(n: usize) -> Self {
        CoordinateSubspace {
            n,
            support: IndexSet::range(0, n + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &IndexSet {
        &self.support
    }

    pub fn contains(&self, other: &CoordinateSubspace) -> bool {
        other.support.intersection_size(&self.support) == other.support.len()
    }
}

/// Plücker image of a point.
pub fn pluecker(pt: &GrassPoint) -> Multivector<FieldScalar> {
    wedge_vectors(&pt.scalar_rows()).expect("rows validated at construction")
}

/// Dense Plücker coordinates in colex order.
pub fn pluecker_dense(pt: &GrassPoint) -> Vec<u32> {
    pluecker(pt).to_dense(pt.modulus)
}

/// Tangent-space generators of one point, as dense rows of length
/// `C(n+1, k+1)`. Row `i * (n+1) + j` is the product with `v_i` replaced by
/// `e_j`.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    point: GrassPoint,
    generators: Vec<Vec<u32>>,
}

impl TangentFrame {
    pub fn point(&self) -> &GrassPoint {
        &self.point
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn into_generators(self) -> Vec<Vec<u32>> {
        self.generators
    }

    /// Generators as sparse multivectors.
    pub fn to_multivectors(&self) -> Vec<Multivector<FieldScalar>> {
        let p = self.point.modulus;
        let (n, d) = (self.point.n, self.point.k + 1);
        let sets: Vec<IndexSet> = crate::extalg::all_subsets(n, d);
        self.generators
            .iter()
            .map(|g| {
                Multivector::from_terms(
                    p,
                    n + 1,
                    d,
                    sets.iter()
                        .cloned()
                        .zip(g.iter().map(|&v| FieldScalar::new(v, p))),
                )
                .expect("dense row in range")
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let cols = self.generators.first().map_or(0, Vec::len);
        let mut b = EchelonBasis::new(self.point.modulus, cols);
        for g in &self.generators {
            b.insert(g);
        }
        b.rank()
    }
}

/// Determinant of a small square matrix over GF(p).
fn small_det(p: PrimeModulus, mut a: Vec<Vec<u32>>) -> u32 {
    let n = a.len();
    let mut det = 1u32;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = p.neg(det);
        }
        det = p.mul(det, a[c][c]);
        let inv = p.inv(a[c][c]);
        for r in c + 1..n {
            let f = p.mul(a[r][c], inv);
            if f != 0 {
                for j in c..n {
                    a[r][j] = p.sub(a[r][j], p.mul(f, a[c][j]));
                }
            }
        }
    }
    det
}

/// Tangent frame by Laplace expansion along the replaced row: the
/// coefficient of `e_I` in the generator `(i, j)` with `j` in `I` is
/// `(-1)^(i + pos(j, I))` times the minor of the other rows on `I \ {j}`.
pub fn tangent_frame(pt: &GrassPoint) -> Result<TangentFrame> {
    let frame = tangent_frame_unchecked(pt);
    let expected = cone_dim(pt.k, pt.n);
    let got = frame.rank();
    if got != expected {
        return Err(Error::RankDrop { expected, got });
    }
    Ok(frame)
}

pub(crate) fn tangent_frame_unchecked(pt: &GrassPoint) -> TangentFrame {
    let p = pt.modulus;
    let (k, n) = (pt.k, pt.n);
    let ix = ColexIndexer::new(n, k + 1);
    let cols = ix.size();
    let all: Vec<usize> = (0..=n).collect();
    let minor_sets = subsets_of(&all, k);
    let mut generators = vec![vec![0u32; cols]; (k + 1) * (n + 1)];
    let mut idx = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let others: Vec<&Vec<u32>> = (0..=k).filter(|&r| r != i).map(|r| &pt.rows[r]).collect();
        for j_set in &minor_sets {
            let sub: Vec<Vec<u32>> = others
                .iter()
                .map(|r| j_set.as_slice().iter().map(|&c| r[c]).collect())
                .collect();
            let minor = small_det(p, sub);
            if minor == 0 {
                continue;
            }
            for j in 0..=n {
                if j_set.contains(j) {
                    continue;
                }
                idx.clear();
                idx.extend_from_slice(j_set.as_slice());
                let pos = idx.partition_point(|&x| x < j);
                idx.insert(pos, j);
                let v = if (i + pos) % 2 == 1 {
                    p.neg(minor)
                } else {
                    minor
                };
                generators[i * (n + 1) + j][ix.rank(&idx)] = v;
            }
        }
    }
    TangentFrame {
        point: pt.clone(),
        generators,
    }
}

/// Index sets meeting `a` in at least `k` elements, in colex order. At the
/// coordinate point `e_a` these unit vectors span the tangent space.
pub fn monomial_tangent_basis(a: &IndexSet, k: usize, n: usize) -> Result<Vec<IndexSet>> {
    if a.len() != k + 1 {
        return Err(Error::DimensionMismatch {
            expected: k + 1,
            got: a.len(),
        });
    }
    if a.largest().is_some_and(|m| m > n) {
        return Err(Error::InvalidIndexSet(format!("{a:?} exceeds {n}")));
    }
    Ok(crate::extalg::all_subsets(n, k + 1)
        .into_iter()
        .filter(|s| s.intersection_size(a) >= k)
        .collect())
}

/// The point spanned by the unit vectors `e_i`, `i` in `a`.
pub fn coordinate_point(modulus: PrimeModulus, a: &IndexSet, n: usize) -> Result<GrassPoint> {
    let rows = a
        .as_slice()
        .iter()
        .map(|&i| {
            let mut r = vec![0u32; n + 1];
            r[i] = 1;
            r
        })
        .collect();
    GrassPoint::new(modulus, n, rows)
}

/// A uniformly random point whose rows are supported on `constraint`.
///
/// Resamples up to [`MAX_RESAMPLES`] times if the rows come out dependent.
pub fn random_point<G: Rng + ?Sized>(
    modulus: PrimeModulus,
    k: usize,
    n: usize,
    constraint: Option<&CoordinateSubspace>,
    rng: &mut G,
) -> Result<GrassPoint> {
    let support: Vec<usize> = match constraint {
        Some(c) => c.support.as_slice().to_vec(),
        None => (0..=n).collect(),
    };
    if support.len() < k + 1 {
        return Err(Error::SupportTooSmall {
            support: support.len(),
            needed: k + 1,
        });
    }
    if support.last().is_some_and(|&m| m > n) {
        return Err(Error::InvalidIndexSet(format!("support exceeds {n}")));
    }
    let mut last = Error::DegenerateRows {
        rank: 0,
        expected: k + 1,
    };
    for _ in 0..MAX_RESAMPLES {
        let rows: Vec<Vec<u32>> = (0..=k)
            .map(|_| {
                let mut r = vec![0u32; n + 1];
                for &c in &support {
                    r[c] = rng.gen_range(0..modulus.get());
                }
                r
            })
            .collect();
        match GrassPoint::new(modulus, n, rows) {
            Ok(pt) => return Ok(pt),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Basis of the `d`-th exterior power of a coordinate subspace: all
/// `d`-subsets of its support.
pub fn subgrassmannian_span(l: &CoordinateSubspace, d: usize) -> Vec<IndexSet> {
    subsets_of(l.support.as_slice(), d)
}

/// Dimension of [`subgrassmannian_span`] without enumerating it.
pub fn subgrassmannian_dim(l: &CoordinateSubspace, d: usize) -> usize {
    binomial(l.support.len(), d)
}
