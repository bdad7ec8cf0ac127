//! Closed forms for the secant indices of `Gr(2, n)`, evaluated exactly.
//!
//! Every expression is assembled as a rational number and rounded once at the
//! end, so nothing depends on floating-point behavior near integers.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extalg::binomial;
use crate::grassmann::cone_dim;

type Q = Ratio<i128>;

fn q(num: i128, den: i128) -> Q {
    Q::new(num, den)
}

fn floor(x: Q) -> i64 {
    x.floor().to_integer() as i64
}

fn ceil(x: Q) -> i64 {
    x.ceil().to_integer() as i64
}

fn check(n: u64) -> Result<i128> {
    if n < 9 {
        return Err(Error::InvalidParameters(format!(
            "formulas need n >= 9, got {n}"
        )));
    }
    Ok(n as i128)
}

/// `C(n+1, 3)`, the dimension of the third exterior power of `K^{n+1}`.
pub fn f(n: u64) -> u64 {
    binomial(n as usize + 1, 3) as u64
}

/// `n^2/18 - 31n/54 + 125/81`, the common part of `f1` and `f2`.
fn core(n: i128) -> Q {
    q(n * n, 18) - q(31 * n, 54) + q(125, 81)
}

pub fn f1(n: u64) -> Result<i64> {
    let n = check(n)?;
    Ok(floor(core(n) - q(n, 6) + q(2, 1)))
}

pub fn f2(n: u64) -> Result<i64> {
    let n = check(n)?;
    Ok(ceil(core(n) + q(n, 6) - q(1, 1)))
}

/// `floor((6n - 49) / 9)`; may be negative for small `n`.
pub fn second_step_floor(n: u64) -> i64 {
    Integer::div_floor(&(6 * n as i64 - 49), &9)
}

pub fn second_step_ceil(n: u64) -> i64 {
    Integer::div_ceil(&(6 * n as i64 - 49), &9)
}

/// `floor((6n - 13) / 9)`: the number of free points kept off `L`.
pub fn third_step_floor(n: u64) -> i64 {
    Integer::div_floor(&(6 * n as i64 - 13), &9)
}

pub fn third_step_ceil(n: u64) -> i64 {
    Integer::div_ceil(&(6 * n as i64 - 13), &9)
}

/// Single-floor closed form of the lower index.
pub fn s1(n: u64) -> Result<i64> {
    let n = check(n)?;
    Ok(floor(q(n * n, 18) - q(2 * n, 27) + q(170, 81)))
}

/// Single-ceiling closed form of the upper index.
pub fn s2(n: u64) -> Result<i64> {
    let n = check(n)?;
    Ok(ceil(q(n * n, 18) + q(7 * n, 27) - q(73, 81)))
}

/// Lower index as a sum of two floors, `f1(n) + floor((6n - 13)/9)`.
pub fn s1_intro(n: u64) -> Result<i64> {
    let m = check(n)?;
    Ok(floor(q(m * m, 18) - q(20 * m, 27) + q(287, 81)) + third_step_floor(n))
}

/// Upper index as a sum of two ceilings, `f2(n) + ceil((6n - 13)/9)`.
pub fn s2_intro(n: u64) -> Result<i64> {
    let m = check(n)?;
    Ok(ceil(q(m * m, 18) - q(11 * m, 27) + q(44, 81)) + third_step_ceil(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// `ceil(C(n+1, k+1) / ((k+1)(n-k) + 1))`: fewer points cannot fill.
    pub generic_lower: u64,
    /// `floor((n^2 + 3)/12 + 1)`, known for `k = 2` only.
    pub ehrenborg_upper: Option<u64>,
}

pub fn bounds(n: u64, k: u64) -> Result<Bounds> {
    if k < 1 || n <= k {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k < n, got k={k}, n={n}"
        )));
    }
    let amb = binomial(n as usize + 1, k as usize + 1) as u64;
    let cone = cone_dim(k as usize, n as usize) as u64;
    let ehrenborg_upper = (k == 2).then(|| {
        let n = n as i128;
        floor(q(n * n + 3, 12) + q(1, 1)) as u64
    });
    Ok(Bounds {
        generic_lower: amb.div_ceil(cone),
        ehrenborg_upper,
    })
}

/// The four arithmetic inequalities used to pass from `n - 6` to `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub n: u64,
    /// `f1(n) - floor((6n-49)/9) <= f1(n-6)`
    pub f1_step: bool,
    /// `f2(n-6) <= f2(n) - ceil((6n-49)/9)`
    pub f2_step: bool,
    /// `s1(n) - s1(n-6) <= floor((6n-13)/9)`
    pub s1_step: bool,
    /// `ceil((6n-13)/9) <= s2(n) - s2(n-6)`
    pub s2_step: bool,
}

impl ChainCheck {
    pub fn all(&self) -> bool {
        self.f1_step && self.f2_step && self.s1_step && self.s2_step
    }
}

pub fn chain_inequalities(n: u64) -> Result<ChainCheck> {
    if n < 15 {
        return Err(Error::InvalidParameters(format!(
            "chain needs n >= 15, got {n}"
        )));
    }
    Ok(ChainCheck {
        n,
        f1_step: f1(n)? - second_step_floor(n) <= f1(n - 6)?,
        f2_step: f2(n - 6)? <= f2(n)? - second_step_ceil(n),
        s1_step: s1(n)? - s1(n - 6)? <= third_step_floor(n),
        s2_step: third_step_ceil(n) <= s2(n)? - s2(n - 6)?,
    })
}

/// Values of `n` in `lo..=hi` where the two closed forms of an index differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormMismatch {
    pub n: u64,
    pub single: i64,
    pub split: i64,
}

pub fn s1_mismatches(lo: u64, hi: u64) -> Result<Vec<FormMismatch>> {
    mismatches(lo, hi, s1, s1_intro)
}

pub fn s2_mismatches(lo: u64, hi: u64) -> Result<Vec<FormMismatch>> {
    mismatches(lo, hi, s2, s2_intro)
}

fn mismatches(
    lo: u64,
    hi: u64,
    single: fn(u64) -> Result<i64>,
    split: fn(u64) -> Result<i64>,
) -> Result<Vec<FormMismatch>> {
    let mut out = Vec::new();
    for n in lo..=hi {
        let (a, b) = (single(n)?, split(n)?);
        if a != b {
            out.push(FormMismatch {
                n,
                single: a,
                split: b,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Floor of a/b by long division on plain integers, as an oracle for the
    /// rational pipeline. All formulas have denominator dividing 162.
    fn floor_162(num162: i128) -> i64 {
        num162.div_euclid(162) as i64
    }

    #[test]
    fn values_at_nine() {
        assert_eq!(s1(9).unwrap(), 5);
        assert_eq!(s2(9).unwrap(), 6);
        assert_eq!(f1(9).unwrap(), 1);
        assert_eq!(s1_intro(9).unwrap(), 5);
        assert_eq!(third_step_floor(9), 4);
        assert!(f1(8).is_err() && s2(3).is_err());
    }

    #[test]
    fn small_tables() {
        let f1s: Vec<i64> = (9..=14).map(|n| f1(n).unwrap()).collect();
        assert_eq!(f1s, [1, 1, 2, 2, 3, 4]);
        let f2s: Vec<i64> = (9..=14).map(|n| f2(n).unwrap()).collect();
        assert_eq!(f2s, [2, 3, 3, 4, 5, 6]);
        let floors: Vec<i64> = (11..=16).map(second_step_floor).collect();
        assert_eq!(floors, [1, 2, 3, 3, 4, 5]);
        let ceils: Vec<i64> = (11..=16).map(second_step_ceil).collect();
        assert_eq!(ceils, [2, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bounds(6, 2).unwrap().generic_lower, 3);
        assert_eq!(bounds(9, 2).unwrap().generic_lower, 6);
        assert_eq!(bounds(9, 2).unwrap().generic_lower as i64, s2(9).unwrap());
        // (36 + 3)/12 + 1 = 4.25
        assert_eq!(bounds(6, 2).unwrap().ehrenborg_upper, Some(4));
        assert_eq!(bounds(9, 3).unwrap().ehrenborg_upper, None);
        assert!(bounds(2, 2).is_err());
    }

    #[test]
    fn chain_examples() {
        assert!(chain_inequalities(15).unwrap().all());
        assert!(chain_inequalities(100).unwrap().all());
        assert!(chain_inequalities(14).is_err());
    }

    proptest! {
        #[test]
        fn rational_floor_matches_integer_division(n in 9u64..100_000) {
            let m = n as i128;
            // n^2/18 - 2n/27 + 170/81 = (9n^2 - 12n + 340) / 162
            prop_assert_eq!(s1(n).unwrap(), floor_162(9 * m * m - 12 * m + 340));
            // ceil((9n^2 + 42n - 146) / 162) = -floor(-x)
            prop_assert_eq!(s2(n).unwrap(), -floor_162(-(9 * m * m + 42 * m - 146)));
        }

        #[test]
        fn split_forms_match_proof_identity(n in 9u64..100_000) {
            prop_assert_eq!(s1_intro(n).unwrap(), f1(n).unwrap() + third_step_floor(n));
            prop_assert_eq!(s2_intro(n).unwrap(), f2(n).unwrap() + third_step_ceil(n));
        }

        #[test]
        fn forms_differ_by_at_most_one(n in 9u64..100_000) {
            let d1 = s1(n).unwrap() - s1_intro(n).unwrap();
            let d2 = s2_intro(n).unwrap() - s2(n).unwrap();
            prop_assert!((0..=1).contains(&d1));
            prop_assert!((0..=1).contains(&d2));
        }
    }
}
