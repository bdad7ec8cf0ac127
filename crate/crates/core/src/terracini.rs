//! Secant dimensions by stacking tangent spaces.
//!
//! The affine tangent space of the cone over `sigma_s(Gr(k, n))` at a general
//! point of the span of `P_1, ..., P_s` is the sum of the tangent spaces at
//! the `P_i`. Its rank over GF(p) at random points bounds the characteristic-0
//! rank from below, so reaching the expected value certifies it while a
//! shortfall proves nothing.
//!
//! Problems may also carry extra coordinate spans and per-point support
//! constraints. This is the setting of the specialization arguments, where the
//! rank of `wedge^{k+1} L + ... + sum of tangent spaces` is compared with a
//! stated target.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::monomial_certificate;
use crate::error::{Error, Result};
use crate::extalg::{binomial, ColexIndexer, IndexSet};
use crate::field::{EchelonBasis, PrimeModulus};
use crate::grassmann::{
    cone_dim, monomial_tangent_basis, random_point, subgrassmannian_span, tangent_frame_unchecked,
    CoordinateSubspace, GrassPoint,
};

pub const DEFAULT_TRIALS: usize = 3;

/// `min(s((k+1)(n-k)+1), C(n+1, k+1))`.
pub fn expected_affine_dim(k: usize, n: usize, s: usize) -> usize {
    (s * cone_dim(k, n)).min(binomial(n + 1, k + 1))
}

/// Seed of trial `t`; trial 0 uses the problem seed itself.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// How probe points are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Random points, resampled across trials.
    Random,
    /// Coordinate points from a distance-6 code; exact, one trial.
    Monomial,
    /// Monomial when a code of size `s` is available, otherwise random.
    #[default]
    Auto,
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Strategy::Random),
            "monomial" => Ok(Strategy::Monomial),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::InvalidParameters(format!(
                "unknown strategy `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Random => "random",
            Strategy::Monomial => "monomial",
            Strategy::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantProblem {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub prime: PrimeModulus,
    pub seed: u64,
    pub trials: usize,
    pub strategy: Strategy,
    /// One entry per point, or empty for `s` free points.
    pub point_constraints: Vec<Option<CoordinateSubspace>>,
    pub extra_spans: Vec<CoordinateSubspace>,
    /// Rank the stack is expected to reach; defaults to the naive count
    /// capped at the ambient dimension.
    pub target: Option<usize>,
}

impl SecantProblem {
    pub fn new(k: usize, n: usize, s: usize) -> Result<Self> {
        let p = SecantProblem {
            k,
            n,
            s,
            prime: PrimeModulus::default(),
            seed: 0,
            trials: DEFAULT_TRIALS,
            strategy: Strategy::Auto,
            point_constraints: Vec::new(),
            extra_spans: Vec::new(),
            target: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_prime(mut self, prime: PrimeModulus) -> Self {
        self.prime = prime;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_constraints(mut self, c: Vec<Option<CoordinateSubspace>>) -> Self {
        self.point_constraints = c;
        self
    }

    pub fn with_extra_spans(mut self, spans: Vec<CoordinateSubspace>) -> Self {
        self.extra_spans = spans;
        self
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.target = Some(target);
        self
    }

    pub fn ambient(&self) -> usize {
        binomial(self.n + 1, self.k + 1)
    }

    fn is_plain(&self) -> bool {
        self.extra_spans.is_empty() && self.point_constraints.iter().all(Option::is_none)
    }

    pub fn expected_rank(&self) -> usize {
        match self.target {
            Some(t) => t,
            None => {
                let spans: usize = self
                    .extra_spans
                    .iter()
                    .map(|l| binomial(l.support().len(), self.k + 1))
                    .sum();
                (spans + self.s * cone_dim(self.k, self.n)).min(self.ambient())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.n <= self.k {
            return Err(Error::InvalidParameters(format!(
                "need 1 <= k < n, got k={}, n={}",
                self.k, self.n
            )));
        }
        if self.s < 1 && self.extra_spans.is_empty() {
            return Err(Error::InvalidParameters("need s >= 1".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidParameters("need at least one trial".into()));
        }
        if !self.point_constraints.is_empty() && self.point_constraints.len() != self.s {
            return Err(Error::DimensionMismatch {
                expected: self.s,
                got: self.point_constraints.len(),
            });
        }
        if let Some(t) = self.target {
            if t > self.ambient() {
                return Err(Error::InvalidParameters(format!(
                    "target {t} exceeds ambient {}",
                    self.ambient()
                )));
            }
        }
        for l in self
            .extra_spans
            .iter()
            .chain(self.point_constraints.iter().flatten())
        {
            if l.n() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: l.n(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Rank equals the expected value, below the ambient dimension.
    CertifiedExpected,
    /// Rank equals the ambient dimension.
    CertifiedFills,
    /// Best rank fell short by this much; not a proof of defectivity.
    InconclusiveDeficit(usize),
}

impl Verdict {
    pub fn is_certified(self) -> bool {
        !matches!(self, Verdict::InconclusiveDeficit(_))
    }

    pub fn deficit(self) -> usize {
        match self {
            Verdict::InconclusiveDeficit(d) => d,
            _ => 0,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedExpected => f.write_str("CertifiedExpected"),
            Verdict::CertifiedFills => f.write_str("CertifiedFills"),
            Verdict::InconclusiveDeficit(d) => write!(f, "InconclusiveDeficit({d})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanVerdict {
    pub achieved_rank: usize,
    pub expected_rank: usize,
    pub ambient: usize,
    pub verdict: Verdict,
    pub trials_used: usize,
}

impl SpanVerdict {
    fn judge(achieved: usize, expected: usize, ambient: usize, trials_used: usize) -> Self {
        let verdict = if achieved < expected {
            Verdict::InconclusiveDeficit(expected - achieved)
        } else if expected == ambient {
            Verdict::CertifiedFills
        } else {
            Verdict::CertifiedExpected
        };
        SpanVerdict {
            achieved_rank: achieved,
            expected_rank: expected,
            ambient,
            verdict,
            trials_used,
        }
    }
}

/// Incremental row space of `wedge^{k+1} K^{n+1}` over GF(p).
#[derive(Debug, Clone)]
pub struct SpanStack {
    k: usize,
    n: usize,
    ix: ColexIndexer,
    basis: EchelonBasis,
}

impl SpanStack {
    pub fn new(prime: PrimeModulus, k: usize, n: usize) -> Self {
        let ix = ColexIndexer::new(n, k + 1);
        let basis = EchelonBasis::new(prime, ix.size());
        SpanStack { k, n, ix, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn is_full(&self) -> bool {
        self.basis.is_full()
    }

    /// Adds `wedge^{k+1} L`; returns the rank increase.
    pub fn add_span(&mut self, l: &CoordinateSubspace) -> usize {
        let before = self.rank();
        for s in subgrassmannian_span(l, self.k + 1) {
            self.basis.insert_unit(self.ix.rank(s.as_slice()));
        }
        self.rank() - before
    }

    /// Adds the tangent space at `pt`; returns the rank increase.
    pub fn add_point(&mut self, pt: &GrassPoint) -> usize {
        debug_assert_eq!((pt.k(), pt.n()), (self.k, self.n));
        let before = self.rank();
        for g in tangent_frame_unchecked(pt).generators() {
            if self.basis.is_full() {
                break;
            }
            self.basis.insert(g);
        }
        self.rank() - before
    }

    /// Adds the tangent space at the coordinate point `e_a`.
    pub fn add_coordinate_point(&mut self, a: &IndexSet) -> Result<usize> {
        let before = self.rank();
        for s in monomial_tangent_basis(a, self.k, self.n)? {
            self.basis.insert_unit(self.ix.rank(s.as_slice()));
        }
        Ok(self.rank() - before)
    }

    /// Adds one dense row.
    pub fn add_row(&mut self, row: &[u32]) -> bool {
        self.basis.insert(row)
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Trial {
    span_rank: usize,
    increments: Vec<usize>,
    rank: usize,
}

fn run_trial(problem: &SecantProblem, seed: u64) -> Result<Trial> {
    let mut stack = SpanStack::new(problem.prime, problem.k, problem.n);
    for l in &problem.extra_spans {
        stack.add_span(l);
    }
    let span_rank = stack.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut increments = Vec::with_capacity(problem.s);
    for i in 0..problem.s {
        let constraint = problem.point_constraints.get(i).and_then(Option::as_ref);
        // draw even when full so the point sequence does not depend on rank
        let pt = random_point(problem.prime, problem.k, problem.n, constraint, &mut rng)?;
        increments.push(if stack.is_full() {
            0
        } else {
            stack.add_point(&pt)
        });
    }
    Ok(Trial {
        span_rank,
        increments,
        rank: stack.rank(),
    })
}

fn monomial_trial(problem: &SecantProblem) -> Option<Result<Trial>> {
    let code = monomial_certificate(problem.k, problem.n, problem.s)?;
    let mut stack = SpanStack::new(problem.prime, problem.k, problem.n);
    let mut increments = Vec::with_capacity(problem.s);
    for w in code.words().iter().take(problem.s) {
        match stack.add_coordinate_point(w) {
            Ok(d) => increments.push(d),
            Err(e) => return Some(Err(e)),
        }
    }
    Some(Ok(Trial {
        span_rank: 0,
        increments,
        rank: stack.rank(),
    }))
}

/// [`probe`] together with the specialization bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecializationReport {
    pub verdict: SpanVerdict,
    /// `ambient - achieved`: the number of independent hyperplanes containing
    /// the whole configuration.
    pub residual_dimension: usize,
    /// Rank of the extra spans alone.
    pub span_rank: usize,
    /// Rank added by each point, in order, in the best trial.
    pub increments: Vec<usize>,
}

fn check_constraints(problem: &SecantProblem) -> Result<()> {
    if problem.extra_spans.is_empty() {
        return Ok(());
    }
    for (i, c) in problem.point_constraints.iter().enumerate() {
        if let Some(c) = c {
            if !problem.extra_spans.iter().any(|l| l.contains(c)) {
                return Err(Error::InconsistentConstraint(i));
            }
        }
    }
    Ok(())
}

/// Full probe with spans and constraints.
///
/// Runs up to `trials` random trials and keeps the best rank. A rank above an
/// explicit target means the target itself is wrong and is reported as an
/// error.
pub fn probe_with_specialization(problem: &SecantProblem) -> Result<SpecializationReport> {
    problem.validate()?;
    check_constraints(problem)?;
    let expected = problem.expected_rank();
    let ambient = problem.ambient();
    let use_monomial = match problem.strategy {
        Strategy::Random => false,
        Strategy::Monomial => {
            if !problem.is_plain() {
                return Err(Error::InvalidParameters(
                    "monomial strategy takes no spans or constraints".into(),
                ));
            }
            true
        }
        Strategy::Auto => problem.is_plain(),
    };
    if use_monomial {
        match monomial_trial(problem) {
            Some(t) => return Ok(report(t?, expected, ambient, 1)),
            None if problem.strategy == Strategy::Monomial => {
                return Err(Error::InvalidParameters(format!(
                    "no distance-6 code with {} words of weight {} and length {}",
                    problem.s,
                    problem.k + 1,
                    problem.n + 1
                )))
            }
            None => {}
        }
    }
    let mut best: Option<Trial> = None;
    let mut used = 0;
    for t in 0..problem.trials {
        let trial = run_trial(problem, trial_seed(problem.seed, t))?;
        used += 1;
        if trial.rank > expected {
            return Err(Error::TargetExceeded {
                achieved: trial.rank,
                target: expected,
            });
        }
        let done = trial.rank == expected;
        if best.as_ref().is_none_or(|b| trial.rank > b.rank) {
            best = Some(trial);
        }
        if done {
            break;
        }
    }
    Ok(report(
        best.expect("at least one trial"),
        expected,
        ambient,
        used,
    ))
}

fn report(t: Trial, expected: usize, ambient: usize, used: usize) -> SpecializationReport {
    SpecializationReport {
        verdict: SpanVerdict::judge(t.rank, expected, ambient, used),
        residual_dimension: ambient - t.rank,
        span_rank: t.span_rank,
        increments: t.increments,
    }
}

pub fn probe(problem: &SecantProblem) -> Result<SpanVerdict> {
    probe_with_specialization(problem).map(|r| r.verdict)
}

/// Verdicts implied by monotonicity in `s`, without recomputation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Implication {
    /// Expected dimension for every `1 <= s' <= expected_up_to`.
    pub expected_up_to: Option<usize>,
    /// Fills the ambient space for every `s' >= fills_from`.
    pub fills_from: Option<usize>,
}

/// A certified verdict at `s` extends: independent tangent spaces stay
/// independent when points are dropped, and a filling secant stays filling
/// when points are added.
pub fn monotone_extend(k: usize, n: usize, s: usize, v: &SpanVerdict) -> Result<Implication> {
    match v.verdict {
        Verdict::InconclusiveDeficit(_) => Err(Error::NotCertified),
        Verdict::CertifiedExpected => Ok(Implication {
            expected_up_to: Some(s),
            fills_from: None,
        }),
        Verdict::CertifiedFills => Ok(Implication {
            // all s tangent spaces independent only when they exactly fit
            expected_up_to: (v.achieved_rank == s * cone_dim(k, n)).then_some(s),
            fills_from: Some(s),
        }),
    }
}

/// Serializable summary of one probe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub k: usize,
    pub n: usize,
    pub s: usize,
    pub prime: PrimeModulus,
    pub seed: u64,
    pub trials: usize,
    pub achieved: usize,
    pub expected: usize,
    pub ambient: usize,
    pub verdict: Verdict,
    /// Wall time; omitted where output must be reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Runs [`probe`] and wraps the result with timing.
pub fn probe_record(problem: &SecantProblem) -> Result<VerdictRecord> {
    let start = Instant::now();
    let v = probe(problem)?;
    Ok(VerdictRecord {
        k: problem.k,
        n: problem.n,
        s: problem.s,
        prime: problem.prime,
        seed: problem.seed,
        trials: v.trials_used,
        achieved: v.achieved_rank,
        expected: v.expected_rank,
        ambient: v.ambient,
        verdict: v.verdict,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}
