//! Exact arithmetic substrate.
//!
//! Prime-field scalars for moduli below 2^16, dense matrices over GF(p) with an
//! incremental row-echelon basis, and fraction-free elimination over the
//! integers for determinants and ranks of small matrices.
//!
//! The 16-bit bound on `p` lets the echelon reduction accumulate products in
//! `u64` lanes and reduce once per row instead of once per multiply-add.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Characteristic used by default for every rank computation.
pub const DEFAULT_PRIME: u32 = 32003;
/// Alternate characteristic for re-running verdicts; also `2 (mod 3)`.
pub const SECOND_PRIME: u32 = 46337;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An odd prime `p < 2^16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeModulus(u32);

impl TryFrom<u32> for PrimeModulus {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u32 {
    fn from(p: PrimeModulus) -> u32 {
        p.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Default for PrimeModulus {
    fn default() -> Self {
        PrimeModulus(DEFAULT_PRIME)
    }
}

impl PrimeModulus {
    pub fn new(p: u32) -> Result<Self> {
        if p > u16::MAX as u32 {
            return Err(Error::ModulusTooLarge(p as u64));
        }
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeModulus(p))
    }

    /// Like [`PrimeModulus::new`], additionally requiring `p = 2 (mod 3)` so
    /// that cubing is a bijection.
    pub fn with_cube_roots(p: u32) -> Result<Self> {
        let m = Self::new(p)?;
        if !m.supports_cube_roots() {
            return Err(Error::NoUniqueCubeRoot(p));
        }
        Ok(m)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn supports_cube_roots(self) -> bool {
        self.0 % 3 == 2
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut result = 1u32 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.0 != 0, "inverse of zero mod {}", self.0);
        self.pow(a, self.0 as u64 - 2)
    }

    pub fn reduce_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    pub fn reduce_bigint(self, v: &BigInt) -> u32 {
        v.mod_floor(&BigInt::from(self.0))
            .to_u32()
            .expect("residue fits in u32")
    }

    pub fn scalar(self, v: i64) -> FieldScalar {
        FieldScalar {
            value: self.reduce_i64(v),
            modulus: self,
        }
    }

    /// Exponent `e` with `3e = 1 (mod p-1)`.
    pub fn cube_root_exponent(self) -> Result<u64> {
        if !self.supports_cube_roots() {
            return Err(Error::NoUniqueCubeRoot(self.0));
        }
        let order = self.0 as u64 - 1;
        // order = 1 (mod 3), so (2*order + 1) / 3 is an integer.
        Ok((2 * order + 1) / 3)
    }

    pub fn cube_root(self, c: u32) -> Result<u32> {
        let e = self.cube_root_exponent()?;
        Ok(self.pow(c, e))
    }
}

/// An element of GF(p) that carries its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    value: u32,
    modulus: PrimeModulus,
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.0)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldScalar {
    pub fn new(value: u32, modulus: PrimeModulus) -> Self {
        FieldScalar {
            value: value % modulus.0,
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn inv(self) -> FieldScalar {
        FieldScalar::new(self.modulus.inv(self.value), self.modulus)
    }

    pub fn pow(self, e: u64) -> FieldScalar {
        FieldScalar::new(self.modulus.pow(self.value, e), self.modulus)
    }
}

impl Add for FieldScalar {
    type Output = FieldScalar;
    fn add(self, o: FieldScalar) -> FieldScalar {
        debug_assert_eq!(self.modulus, o.modulus);
        FieldScalar::new(self.modulus.add(self.value, o.value), self.modulus)
    }
}

impl Sub for FieldScalar {
    type Output = FieldScalar;
    fn sub(self, o: FieldScalar) -> FieldScalar {
        debug_assert_eq!(self.modulus, o.modulus);
        FieldScalar::new(self.modulus.sub(self.value, o.value), self.modulus)
    }
}

impl Mul for FieldScalar {
    type Output = FieldScalar;
    fn mul(self, o: FieldScalar) -> FieldScalar {
        debug_assert_eq!(self.modulus, o.modulus);
        FieldScalar::new(self.modulus.mul(self.value, o.value), self.modulus)
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar::new(self.modulus.neg(self.value), self.modulus)
    }
}

/// The unique `x` with `x^3 = c` in GF(p), for `p = 2 (mod 3)`.
pub fn cube_root_mod_p(c: FieldScalar) -> Result<FieldScalar> {
    let m = c.modulus();
    Ok(FieldScalar::new(m.cube_root(c.value())?, m))
}

/// Signed integer cube root; fails unless `c` is a perfect cube.
pub fn integer_cube_root_signed(c: &BigInt) -> Result<BigInt> {
    let x = c.cbrt();
    if &(&x * &x * &x) == c {
        Ok(x)
    } else {
        Err(Error::NotACube(c.to_string()))
    }
}

/// Coefficient rings usable in [`crate::extalg::Multivector`].
///
/// `Ring` is the runtime context needed to build constants: nothing for the
/// integers, the modulus for GF(p).
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    type Ring: Copy + PartialEq + fmt::Debug;

    fn ring(&self) -> Self::Ring;
    fn from_i64(ring: Self::Ring, v: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Image in GF(p).
    fn residue(&self, p: PrimeModulus) -> u32;

    fn zero_in(ring: Self::Ring) -> Self {
        Self::from_i64(ring, 0)
    }

    fn one_in(ring: Self::Ring) -> Self {
        Self::from_i64(ring, 1)
    }
}

/// Context marker for exact integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl Coefficient for BigInt {
    type Ring = Integers;

    fn ring(&self) -> Integers {
        Integers
    }
    fn from_i64(_: Integers, v: i64) -> Self {
        BigInt::from(v)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn residue(&self, p: PrimeModulus) -> u32 {
        p.reduce_bigint(self)
    }
}

impl Coefficient for FieldScalar {
    type Ring = PrimeModulus;

    fn ring(&self) -> PrimeModulus {
        self.modulus
    }
    fn from_i64(ring: PrimeModulus, v: i64) -> Self {
        ring.scalar(v)
    }
    fn vanishes(&self) -> bool {
        self.value == 0
    }
    fn plus(&self, other: &Self) -> Self {
        *self + *other
    }
    fn times(&self, other: &Self) -> Self {
        *self * *other
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn residue(&self, p: PrimeModulus) -> u32 {
        assert_eq!(p, self.modulus, "residue taken in a different field");
        self.value
    }
}

/// Row-major dense matrix over GF(p) with reduced entries.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    modulus: PrimeModulus,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "DenseMatrix {}x{} mod {}",
            self.rows, self.cols, self.modulus
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn zeros(modulus: PrimeModulus, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry.
    pub fn from_i64_rows(modulus: PrimeModulus, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| modulus.reduce_i64(v)));
        }
        Ok(DenseMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix with a fixed column count from already-reduced rows.
    pub fn from_rows(modulus: PrimeModulus, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::zeros(modulus, 0, cols);
        for row in rows {
            m.push_row(row)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: &[u32]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        let p = self.modulus.get();
        self.data.extend(row.iter().map(|&v| v % p));
        self.rows += 1;
        Ok(())
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.modulus.get();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(DenseMatrix {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let p = self.modulus;
        let mut out = DenseMatrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for t in 0..self.cols {
                    acc += self.get(i, t) as u64 * other.get(t, j) as u64;
                    acc %= p.get() as u64;
                }
                out.data[i * other.cols + j] = acc as u32;
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn rank(&self) -> usize {
        rank_mod_p(self)
    }

    /// Determinant by elimination; `None` unless square.
    pub fn det(&self) -> Option<u32> {
        if self.rows != self.cols {
            return None;
        }
        let p = self.modulus;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return Some(0);
            };
            if piv != c {
                for j in 0..n {
                    a.swap(piv * n + j, c * n + j);
                }
                det = p.neg(det);
            }
            let d = a[c * n + c];
            det = p.mul(det, d);
            let dinv = p.inv(d);
            for r in c + 1..n {
                let f = p.mul(a[r * n + c], dinv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    a[r * n + j] = p.sub(a[r * n + j], p.mul(f, a[c * n + j]));
                }
            }
        }
        Some(det)
    }
}

/// Rank of `m` over GF(p).
pub fn rank_mod_p(m: &DenseMatrix) -> usize {
    let mut basis = EchelonBasis::new(m.modulus(), m.cols());
    for row in m.row_iter() {
        basis.insert(row);
        if basis.is_full() {
            break;
        }
    }
    basis.rank()
}

/// Row-echelon basis of a growing subspace of GF(p)^cols.
///
/// Pivot rows are kept sorted by pivot column, normalized to 1 at the pivot
/// and zero before it. A candidate row is reduced against the pivots in
/// column order with lazily reduced `u64` accumulators.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    modulus: PrimeModulus,
    cols: usize,
    pivot_cols: Vec<usize>,
    pivot_rows: Vec<Vec<u32>>,
    scratch: Vec<u64>,
}

impl EchelonBasis {
    pub fn new(modulus: PrimeModulus, cols: usize) -> Self {
        EchelonBasis {
            modulus,
            cols,
            pivot_cols: Vec::new(),
            pivot_rows: Vec::new(),
            scratch: vec![0; cols],
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.cols
    }

    /// Reduces `row` into the scratch buffer; returns the first nonzero column.
    fn reduce(&mut self, row: &[u32]) -> Option<usize> {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        let p = self.modulus.get() as u64;
        for (acc, &v) in self.scratch.iter_mut().zip(row) {
            *acc = v as u64 % p;
        }
        for (pc, prow) in self.pivot_cols.iter().zip(&self.pivot_rows) {
            let coef = self.scratch[*pc] % p;
            if coef == 0 {
                continue;
            }
            let m = p - coef;
            for (acc, &v) in self.scratch[*pc..].iter_mut().zip(&prow[*pc..]) {
                *acc += m * v as u64;
            }
        }
        let mut lead = None;
        for (j, acc) in self.scratch.iter_mut().enumerate() {
            *acc %= p;
            if lead.is_none() && *acc != 0 {
                lead = Some(j);
            }
        }
        lead
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: &[u32]) -> bool {
        if self.is_full() {
            return false;
        }
        let Some(lead) = self.reduce(row) else {
            return false;
        };
        let p = self.modulus;
        let inv = p.inv(self.scratch[lead] as u32);
        let mut new_row = vec![0u32; self.cols];
        for j in lead..self.cols {
            new_row[j] = p.mul(self.scratch[j] as u32, inv);
        }
        let pos = self.pivot_cols.partition_point(|&c| c < lead);
        self.pivot_cols.insert(pos, lead);
        self.pivot_rows.insert(pos, new_row);
        true
    }

    /// Adds the standard basis vector `e_col`.
    pub fn insert_unit(&mut self, col: usize) -> bool {
        let mut row = vec![0u32; self.cols];
        row[col] = 1;
        self.insert(&row)
    }

    /// Whether `row` already lies in the span.
    pub fn contains(&mut self, row: &[u32]) -> bool {
        self.reduce(row).is_none()
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Panics if `m` is not square.
pub fn det_exact(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    assert!(
        m.iter().all(|r| r.len() == n),
        "det_exact needs a square matrix"
    );
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact rank over the rationals of an integer matrix (fraction-free).
pub fn rank_exact(m: &[Vec<BigInt>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}
