//! Third exterior power of a 7-dimensional space: the cone over `Gr(2, 6)`
//! and its secant varieties, detected by the rank of the contraction matrix.
//!
//! Also the two tangent-span demonstrations for `Gr(3, 7)` and `Gr(2, 8)`.
//! Tensors built from labels use 1-based indices `1..=7`, stored 0-based.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::extalg::ContractionMatrix;
use crate::extalg::{
    all_subsets, binomial, is_decomposable, pairing_matrix, wedge_vectors, IndexSet, Multivector,
};
use crate::field::{
    integer_cube_root_signed, Coefficient, EchelonBasis, FieldScalar, Integers, PrimeModulus,
};
use crate::grassmann::{cone_dim, pluecker, pluecker_dense, GrassPoint};
use crate::terracini::SpanStack;

/// Rank thresholds of the contraction matrix for `G`, `sigma_2`, `sigma_3`.
pub const RANK_G: usize = 6;
pub const RANK_SIGMA2: usize = 12;
pub const RANK_SIGMA3: usize = 18;

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub prime: u32,
    /// Exact rank for integral input, rank over GF(p) otherwise.
    pub rank: usize,
    pub in_g: bool,
    pub in_sigma2: bool,
    pub in_sigma3: bool,
    /// Projective dimension of the `GL(7)`-orbit over GF(p).
    pub orbit_dim: Option<usize>,
    #[serde(with = "bigint_string")]
    pub p7_exact: Option<BigInt>,
    pub p7_mod_p: u32,
}

impl MembershipReport {
    fn from_rank(
        prime: PrimeModulus,
        rank: usize,
        p7_exact: Option<BigInt>,
        p7_mod_p: u32,
    ) -> Self {
        let in_sigma3 = rank <= RANK_SIGMA3;
        let in_sigma2 = in_sigma3 && rank <= RANK_SIGMA2;
        let in_g = in_sigma2 && rank <= RANK_G;
        MembershipReport {
            prime: prime.get(),
            rank,
            in_g,
            in_sigma2,
            in_sigma3,
            orbit_dim: None,
            p7_exact,
            p7_mod_p,
        }
    }
}

fn check_shape<R: Coefficient>(omega: &Multivector<R>) -> Result<()> {
    if omega.dim() != 7 || omega.degree() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 7,
            got: if omega.dim() != 7 {
                omega.dim()
            } else {
                omega.degree()
            },
        });
    }
    Ok(())
}

/// Rank flags, orbit dimension and `P7` of an integral tensor. `p` must admit
/// unique cube roots.
pub fn classify(omega: &Multivector<BigInt>, p: PrimeModulus) -> Result<MembershipReport> {
    check_shape(omega)?;
    if !p.supports_cube_roots() {
        return Err(Error::NoUniqueCubeRoot(p.get()));
    }
    let m = pairing_matrix(omega)?;
    let p7 = p7(omega)?;
    let mut r = MembershipReport::from_rank(p, m.rank_exact(), None, p.reduce_bigint(&p7));
    r.p7_exact = Some(p7);
    r.orbit_dim = Some(orbit_dim(omega, p)?);
    Ok(r)
}

/// [`classify`] for a tensor over GF(p); no exact invariant is available.
pub fn classify_mod_p(omega: &Multivector<FieldScalar>) -> Result<MembershipReport> {
    check_shape(omega)?;
    let p = omega.ring();
    let m = pairing_matrix(omega)?;
    let p7 = p7_mod_p(omega)?;
    let mut r = MembershipReport::from_rank(p, m.rank_mod_p(p), None, p7.value());
    r.orbit_dim = Some(orbit_dim(omega, p)?);
    Ok(r)
}

/// `P7(omega)`: the integer with `det = 2 P7^3`.
pub fn p7(omega: &Multivector<BigInt>) -> Result<BigInt> {
    check_shape(omega)?;
    let det = pairing_matrix(omega)?.det_exact();
    let two = BigInt::from(2);
    if !(&det % &two).is_zero() {
        return Err(Error::OddDeterminant(det.to_string()));
    }
    integer_cube_root_signed(&(det / two))
}

/// `P7` over GF(p), `p = 2 (mod 3)`: the cube root of `det / 2`.
pub fn p7_mod_p(omega: &Multivector<FieldScalar>) -> Result<FieldScalar> {
    check_shape(omega)?;
    let p = omega.ring();
    let det = pairing_matrix(omega)?.to_dense(p).det().expect("square");
    let half = p.mul(det, p.inv(2));
    Ok(FieldScalar::new(p.cube_root(half)?, p))
}

/// Integral tensor from `(coefficient, [i, j, k])` with 1-based labels in any
/// order; each term picks up the sign of its sorting permutation.
pub fn tensor_from_labels(terms: &[(i64, [usize; 3])]) -> Result<Multivector<BigInt>> {
    let mut omega = Multivector::zero(Integers, 7, 3);
    for (c, labels) in terms {
        if labels.iter().any(|&l| l == 0 || l > 7) {
            return Err(Error::InvalidIndexSet(format!(
                "labels {labels:?} outside 1..=7"
            )));
        }
        let (set, odd) = IndexSet::from_unsorted(labels.iter().map(|l| l - 1).collect())
            .ok_or_else(|| Error::InvalidIndexSet(format!("repeated label in {labels:?}")))?;
        let c = BigInt::from(*c);
        omega.add_term(set, if odd { -c } else { c })?;
    }
    Ok(omega)
}

/// `e135 + e147 + e126 + e234 + e567`: the lines of the Fano plane.
pub fn fano_tensor() -> Multivector<BigInt> {
    five_term_tensor(&[1, 1, 1, 1, 1].map(BigInt::from))
}

fn five_term_tensor(a: &[BigInt; 5]) -> Multivector<BigInt> {
    let labels = [[1, 3, 5], [1, 4, 7], [1, 2, 6], [2, 3, 4], [5, 6, 7]];
    let mut omega = Multivector::zero(Integers, 7, 3);
    for (c, l) in a.iter().zip(labels) {
        let set = IndexSet::new(l.iter().map(|x| x - 1).collect()).expect("sorted labels");
        omega.add_term(set, c.clone()).expect("shape");
    }
    omega
}

/// The exact determinant of the contraction matrix of
/// `a135 e135 + a147 e147 + a126 e126 + a234 e234 + a567 e567`, and the
/// closed form `-2 (a234^2 a567^2 a135 a147 a126)^3`.
pub fn five_term_identity(
    a135: &BigInt,
    a147: &BigInt,
    a126: &BigInt,
    a234: &BigInt,
    a567: &BigInt,
) -> (BigInt, BigInt) {
    let omega = five_term_tensor(&[a135, a147, a126, a234, a567].map(Clone::clone));
    let det = pairing_matrix(&omega).expect("shape").det_exact();
    let base = a234 * a234 * a567 * a567 * a135 * a147 * a126;
    let predicted = BigInt::from(-2) * &base * &base * &base;
    (det, predicted)
}

/// Projective dimension of the orbit of `omega` under `GL(7)`: the rank of
/// `{E_ij . omega}` minus one, over GF(p).
pub fn orbit_dim<R: Coefficient>(omega: &Multivector<R>, p: PrimeModulus) -> Result<usize> {
    check_shape(omega)?;
    let ix = crate::extalg::ColexIndexer::new(6, 3);
    let mut basis = EchelonBasis::new(p, ix.size());
    for i in 0..7 {
        for j in 0..7 {
            // E_ij sends e_j to e_i
            let mut row = vec![0u32; ix.size()];
            for (set, c) in omega.terms() {
                let Some(pos) = set.position(j) else { continue };
                if i != j && set.contains(i) {
                    continue;
                }
                let mut seq = set.as_slice().to_vec();
                seq[pos] = i;
                let (t, odd) = IndexSet::from_unsorted(seq).expect("distinct");
                let v = c.residue(p);
                let r = ix.rank(t.as_slice());
                row[r] = if odd {
                    p.sub(row[r], v)
                } else {
                    p.add(row[r], v)
                };
            }
            basis.insert(&row);
        }
    }
    Ok(basis.rank().saturating_sub(1))
}

/// One orbit of `SL(7)` on the projectivized third exterior power, with a
/// representative and its measured invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub label: String,
    pub expected_dim: usize,
    pub expected_rank: usize,
    pub representative: String,
    pub measured_dim: usize,
    pub measured_rank: usize,
}

impl OrbitEntry {
    pub fn verified(&self) -> bool {
        self.expected_dim == self.measured_dim && self.expected_rank == self.measured_rank
    }
}

/// Representatives of the nine orbits, in increasing dimension.
pub fn figure1_representatives() -> Vec<(&'static str, usize, usize, Vec<(i64, [usize; 3])>)> {
    vec![
        ("G", 12, 6, vec![(1, [1, 2, 3])]),
        (
            "restricted chordal",
            19,
            10,
            vec![(1, [1, 2, 3]), (1, [1, 4, 5])],
        ),
        (
            "dual of sigma2",
            20,
            15,
            vec![(1, [1, 2, 3]), (1, [1, 4, 5]), (1, [1, 6, 7])],
        ),
        (
            "Tan G",
            24,
            12,
            vec![(1, [1, 2, 6]), (1, [1, 5, 3]), (1, [4, 2, 3])],
        ),
        ("sigma2", 25, 12, vec![(1, [1, 2, 3]), (1, [4, 5, 6])]),
        (
            "dual of Tan G",
            27,
            15,
            vec![
                (1, [3, 7, 6]),
                (-1, [3, 1, 5]),
                (-1, [3, 4, 2]),
                (-1, [6, 1, 2]),
            ],
        ),
        (
            "Sing sigma3",
            30,
            16,
            vec![(1, [1, 2, 3]), (1, [4, 5, 6]), (1, [1, 4, 7])],
        ),
        (
            "sigma3",
            33,
            18,
            vec![
                (1, [1, 2, 3]),
                (1, [4, 5, 6]),
                (1, [7, 1, 4]),
                (1, [7, 2, 5]),
            ],
        ),
        (
            "ambient",
            34,
            21,
            vec![
                (1, [1, 3, 5]),
                (1, [1, 4, 7]),
                (1, [1, 2, 6]),
                (1, [2, 3, 4]),
                (1, [5, 6, 7]),
            ],
        ),
    ]
}

/// Measures rank and orbit dimension of every representative.
pub fn figure1_table(p: PrimeModulus) -> Vec<OrbitEntry> {
    figure1_representatives()
        .into_iter()
        .map(|(label, dim, rank, terms)| {
            let omega = tensor_from_labels(&terms).expect("valid labels");
            OrbitEntry {
                label: label.to_string(),
                expected_dim: dim,
                expected_rank: rank,
                representative: crate::extalg::format_tensor(&omega, true)
                    .lines()
                    .skip(1)
                    .collect::<Vec<_>>()
                    .join("; "),
                measured_dim: orbit_dim(&omega, p).expect("shape"),
                measured_rank: pairing_matrix(&omega).expect("shape").rank_exact(),
            }
        })
        .collect()
}

/// Random integral vector with entries in `[-bound, bound]`.
fn random_vector<G: Rng + ?Sized>(dim: usize, bound: i64, rng: &mut G) -> Vec<BigInt> {
    (0..dim)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect()
}

/// `v1 ^ v2 ^ v3` for random integral vectors.
pub fn random_decomposable<G: Rng + ?Sized>(bound: i64, rng: &mut G) -> Multivector<BigInt> {
    let vs: Vec<Vec<BigInt>> = (0..3).map(|_| random_vector(7, bound, rng)).collect();
    wedge_vectors(&vs).expect("three vectors in dimension 7")
}

/// Sum of `count` random decomposables: a point of `sigma_count`.
pub fn random_secant_point<G: Rng + ?Sized>(
    count: usize,
    bound: i64,
    rng: &mut G,
) -> Multivector<BigInt> {
    let mut omega = Multivector::zero(Integers, 7, 3);
    for _ in 0..count {
        omega = omega
            .add(&random_decomposable(bound, rng))
            .expect("same shape");
    }
    omega
}

/// Tensor with every coefficient uniform in `[-bound, bound]`.
pub fn random_tensor<G: Rng + ?Sized>(bound: i64, rng: &mut G) -> Multivector<BigInt> {
    let coeffs = random_vector(35, bound, rng);
    Multivector::from_terms(Integers, 7, 3, all_subsets(6, 3).into_iter().zip(coeffs))
        .expect("shape")
}

/// Random integer matrix of determinant 1 or -1, as a product of `steps`
/// elementary row operations and swaps.
pub fn random_unimodular<G: Rng + ?Sized>(
    dim: usize,
    steps: usize,
    rng: &mut G,
) -> Vec<Vec<BigInt>> {
    let mut g: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    for _ in 0..steps {
        let (i, j) = (rng.gen_range(0..dim), rng.gen_range(0..dim));
        if i == j {
            continue;
        }
        if rng.gen_bool(0.2) {
            g.swap(i, j);
        } else {
            let c = BigInt::from(rng.gen_range(-2i64..=2));
            let src = g[j].clone();
            for (a, b) in g[i].iter_mut().zip(src) {
                *a += &c * b;
            }
        }
    }
    g
}

/// Tangent spans at the special points of a defective Grassmannian, with the
/// rational surface through them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReport {
    pub name: String,
    pub k: usize,
    pub n: usize,
    pub points: usize,
    pub prime: u32,
    pub affine_rank: usize,
    pub expected_rank: usize,
    pub ambient: usize,
    /// Affine dimension of the span of the curve or surface.
    pub surface_span: usize,
    /// `surface_span + points * (cone_dim - tangent directions along it)`.
    pub upper_bound: usize,
    pub samples_on_grassmannian: usize,
    pub samples_checked: usize,
    pub passes_through_points: bool,
}

impl DemoReport {
    pub fn projective_rank(&self) -> usize {
        self.affine_rank - 1
    }

    pub fn projective_expected(&self) -> usize {
        self.expected_rank - 1
    }

    pub fn passes(&self) -> bool {
        self.affine_rank <= self.upper_bound
            && self.affine_rank < self.expected_rank
            && self.samples_on_grassmannian == self.samples_checked
            && self.passes_through_points
    }
}

/// `a` and `b` are nonzero and proportional.
fn proportional(a: &[u32], b: &[u32], p: PrimeModulus) -> bool {
    let Some(i) = a.iter().position(|&v| v != 0) else {
        return false;
    };
    if b[i] == 0 {
        return false;
    }
    let f = p.mul(b[i], p.inv(a[i]));
    a.iter().zip(b).all(|(&x, &y)| p.mul(x, f) == y)
}

/// Rows `sum_b params[b] * e_{i + b * block}`, `i < block`.
fn block_rows(params: &[u32], block: usize) -> Vec<Vec<u32>> {
    (0..block)
        .map(|i| {
            let mut r = vec![0u32; block * params.len()];
            for (b, &c) in params.iter().enumerate() {
                r[i + b * block] = c;
            }
            r
        })
        .collect()
}

fn block_point(p: PrimeModulus, params: &[u32], block: usize) -> Result<GrassPoint> {
    GrassPoint::new(p, block * params.len() - 1, block_rows(params, block))
}

/// The special points: one coordinate block each, plus the diagonal.
fn special_points(p: PrimeModulus, blocks: usize, block: usize) -> Result<Vec<GrassPoint>> {
    let n = blocks * block - 1;
    let mut rows: Vec<Vec<Vec<u32>>> = (0..blocks)
        .map(|b| {
            (0..block)
                .map(|i| (0..=n).map(|c| u32::from(c == b * block + i)).collect())
                .collect()
        })
        .collect();
    rows.push(
        (0..block)
            .map(|i| (0..=n).map(|c| u32::from(c % block == i)).collect())
            .collect(),
    );
    rows.into_iter().map(|r| GrassPoint::new(p, n, r)).collect()
}

fn random_params<G: Rng + ?Sized>(p: PrimeModulus, blocks: usize, rng: &mut G) -> Vec<u32> {
    (0..blocks).map(|_| rng.gen_range(0..p.get())).collect()
}

fn run_demo<G: Rng + ?Sized>(
    name: &str,
    p: PrimeModulus,
    blocks: usize,
    block: usize,
    samples: usize,
    rng: &mut G,
) -> Result<DemoReport> {
    let (k, n) = (block - 1, block * blocks - 1);
    let points = special_points(p, blocks, block)?;
    let mut stack = SpanStack::new(p, k, n);
    for pt in &points {
        stack.add_point(pt);
    }
    // parameters hitting the special points: the unit vectors and all ones
    let mut params: Vec<Vec<u32>> = (0..blocks)
        .map(|b| (0..blocks).map(|c| u32::from(c == b)).collect())
        .collect();
    params.push(vec![1; blocks]);
    let through = points.iter().zip(&params).all(|(pt, t)| {
        block_point(p, t, block)
            .is_ok_and(|f| proportional(&pluecker_dense(pt), &pluecker_dense(&f), p))
    });
    let mut checked = 0;
    let mut on_g = 0;
    while checked < samples {
        let Ok(pt) = block_point(p, &random_params(p, blocks, rng), block) else {
            continue;
        };
        checked += 1;
        if is_decomposable(&pluecker(&pt), p) {
            on_g += 1;
        }
    }
    // Plücker coordinates of the family are forms of degree `block` in the
    // parameters; sample well past their count to fill the span
    let forms = binomial(block + blocks - 1, blocks - 1);
    let mut span = EchelonBasis::new(p, binomial(n + 1, block));
    for _ in 0..4 * forms {
        if let Ok(pt) = block_point(p, &random_params(p, blocks, rng), block) {
            span.insert(&pluecker_dense(&pt));
        }
    }
    let cd = cone_dim(k, n);
    let ambient = binomial(n + 1, k + 1);
    // at each point the cone over the family contributes `blocks` directions
    let upper_bound = span.rank() + points.len() * (cd - blocks);
    Ok(DemoReport {
        name: name.to_string(),
        k,
        n,
        points: points.len(),
        prime: p.get(),
        affine_rank: stack.rank(),
        expected_rank: (points.len() * cd).min(ambient),
        ambient,
        surface_span: span.rank(),
        upper_bound,
        samples_on_grassmannian: on_g,
        samples_checked: checked,
        passes_through_points: through,
    })
}

/// Three points of `Gr(3, 7)` on a rational normal quartic curve.
pub fn demo_gr37<G: Rng + ?Sized>(p: PrimeModulus, rng: &mut G) -> Result<DemoReport> {
    run_demo("gr37", p, 2, 4, 5, rng)
}

/// Four points of `Gr(2, 8)` on a cubic Veronese surface.
pub fn demo_gr28<G: Rng + ?Sized>(p: PrimeModulus, rng: &mut G) -> Result<DemoReport> {
    run_demo("gr28", p, 3, 3, 6, rng)
}
