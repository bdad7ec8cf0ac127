//! Base cases of the three specialization statements, as rank computations
//! over GF(p) with points placed on coordinate sub-Grassmannians.

use serde::{Deserialize, Serialize};

use super::formulas::{
    f, f1, f2, second_step_ceil, second_step_floor, third_step_ceil, third_step_floor,
};
use crate::error::{Error, Result};
use crate::extalg::IndexSet;
use crate::field::PrimeModulus;
use crate::grassmann::CoordinateSubspace;
use crate::terracini::{probe_with_specialization, SecantProblem, SpecializationReport, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Floors: the residual system has the stated positive dimension.
    Floor,
    /// Ceilings: the residual system is empty.
    Ceil,
}

/// Outcome of one base-case computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropCheck {
    pub n: u64,
    pub variant: Variant,
    /// Points placed on the sub-Grassmannians (per span) and free points.
    pub constrained_points: usize,
    pub free_points: usize,
    pub target: usize,
    pub achieved: usize,
    pub residual: usize,
    pub span_rank: usize,
    pub increments: Vec<usize>,
    pub pass: bool,
}

fn from_report(
    n: u64,
    variant: Variant,
    constrained_points: usize,
    free_points: usize,
    target: usize,
    r: SpecializationReport,
) -> PropCheck {
    PropCheck {
        n,
        variant,
        constrained_points,
        free_points,
        target,
        achieved: r.verdict.achieved_rank,
        residual: r.residual_dimension,
        span_rank: r.span_rank,
        increments: r.increments,
        pass: r.verdict.verdict.is_certified(),
    }
}

fn sub(n: u64, ranges: &[(u64, u64)]) -> Result<CoordinateSubspace> {
    let idx: Vec<usize> = ranges
        .iter()
        .flat_map(|&(lo, hi)| lo as usize..=hi as usize)
        .collect();
    CoordinateSubspace::new(n as usize, IndexSet::new(idx)?)
}

fn run(
    n: u64,
    spans: Vec<CoordinateSubspace>,
    constraints: Vec<Option<CoordinateSubspace>>,
    target: usize,
    prime: PrimeModulus,
    seed: u64,
) -> Result<SpecializationReport> {
    let problem = SecantProblem::new(2, n as usize, constraints.len())?
        .with_prime(prime)
        .with_seed(seed)
        .with_strategy(Strategy::Random)
        .with_extra_spans(spans)
        .with_constraints(constraints)
        .with_target(target);
    probe_with_specialization(&problem)
}

/// Three codimension-6 coordinate spans with four points on each; the stack
/// should fill `wedge^3 K^{n+1}`.
///
/// For `n = 17` the supports are `{6..17}`, `{0..5, 12..17}`, `{0..11}`; for
/// larger `n` the coordinates `18..n` are added to all three.
pub fn check_prop_a(n: u64, prime: PrimeModulus, seed: u64) -> Result<PropCheck> {
    if n < 17 {
        return Err(Error::InvalidParameters(format!("needs n >= 17, got {n}")));
    }
    let tail = |r: &mut Vec<(u64, u64)>| {
        if n > 17 {
            r.push((18, n));
        }
    };
    let mut a = vec![(6, 17)];
    let mut b = vec![(0, 5), (12, 17)];
    let mut c = vec![(0, 11)];
    tail(&mut a);
    tail(&mut b);
    tail(&mut c);
    let spans = vec![sub(n, &a)?, sub(n, &b)?, sub(n, &c)?];
    let mut constraints = Vec::new();
    for _ in 0..4 {
        for l in &spans {
            constraints.push(Some(l.clone()));
        }
    }
    let target = f(n) as usize;
    let r = run(n, spans, constraints, target, prime, seed)?;
    Ok(from_report(n, Variant::Ceil, 12, 0, target, r))
}

/// Spans on `{6..n}` and `{0..n-6}`, `s` points on each and four free
/// points, with `s = floor((6n-49)/9)` (or the ceiling).
pub fn check_prop_b(n: u64, variant: Variant, prime: PrimeModulus, seed: u64) -> Result<PropCheck> {
    if n < 11 {
        return Err(Error::InvalidParameters(format!("needs n >= 11, got {n}")));
    }
    let s = match variant {
        Variant::Floor => second_step_floor(n),
        Variant::Ceil => second_step_ceil(n),
    } as usize;
    let ni = n as i64;
    let target = match variant {
        Variant::Floor => {
            (f(n) as i64 - (36 * (ni - 6) - 36 * s as i64 - 4 * (3 * ni - 5))) as usize
        }
        Variant::Ceil => f(n) as usize,
    };
    let l = sub(n, &[(6, n)])?;
    let m = sub(n, &[(0, n - 6)])?;
    let mut constraints = Vec::new();
    for _ in 0..s {
        constraints.push(Some(l.clone()));
        constraints.push(Some(m.clone()));
    }
    constraints.extend(std::iter::repeat_n(None, 4));
    let r = run(n, vec![l, m], constraints, target, prime, seed)?;
    Ok(from_report(n, variant, 2 * s, 4, target, r))
}

/// Span on `{6..n}` with `f1(n)` points on it and `floor((6n-13)/9)` free
/// points (or `f2(n)` and the ceiling).
pub fn check_prop_c(n: u64, variant: Variant, prime: PrimeModulus, seed: u64) -> Result<PropCheck> {
    let (fl, s) = match variant {
        Variant::Floor => (f1(n)?, third_step_floor(n)),
        Variant::Ceil => (f2(n)?, third_step_ceil(n)),
    };
    let (fl, s) = (fl as usize, s as usize);
    let ni = n as i64;
    let target = match variant {
        Variant::Floor => {
            (f(n) as i64 - (3 * ni * ni - 18 * ni + 35 - 18 * fl as i64 - (3 * ni - 5) * s as i64))
                as usize
        }
        Variant::Ceil => f(n) as usize,
    };
    let l = sub(n, &[(6, n)])?;
    let mut constraints: Vec<Option<CoordinateSubspace>> = vec![Some(l.clone()); fl];
    constraints.extend(std::iter::repeat_n(None, s));
    let r = run(n, vec![l], constraints, target, prime, seed)?;
    Ok(from_report(n, variant, fl, s, target, r))
}
