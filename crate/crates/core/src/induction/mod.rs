//! The induction for `Gr(2, n)`: closed forms, base cases and the arithmetic
//! that carries them from `n - 6` to `n`.

pub mod formulas;
pub mod props;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use formulas::{
    bounds, chain_inequalities, f, f1, f2, s1, s1_intro, s1_mismatches, s2, s2_intro,
    s2_mismatches, Bounds, ChainCheck, FormMismatch,
};
pub use props::{check_prop_a, check_prop_b, check_prop_c, PropCheck, Variant};

use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::terracini::{probe, SecantProblem, Strategy, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseKind {
    /// Three spans, four points on each.
    PropA,
    /// Two spans, points on each and four free points.
    PropB,
    /// One span, points on it and free points.
    PropC,
    /// Plain probe of `sigma_s(Gr(2, n))`.
    Probe,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCase {
    pub kind: BaseKind,
    pub n: u64,
    /// Floor/ceiling for the specialization checks; for probes, whether `s`
    /// is the lower or upper index.
    pub variant: Variant,
    /// Number of points for probes; `None` for the specialization checks.
    pub s: Option<u64>,
    pub target: usize,
    pub achieved: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionCertificate {
    pub n_max: u64,
    pub prime: PrimeModulus,
    pub seed: u64,
    pub base_cases: Vec<BaseCase>,
    pub chain: Vec<ChainCheck>,
    /// `[9, n_max]` when every constituent check passes.
    pub conclusion: Option<(u64, u64)>,
}

impl InductionCertificate {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .base_cases
            .iter()
            .filter(|b| !b.pass)
            .map(|b| {
                format!(
                    "{:?} n={} {:?} s={:?}: {} of {}",
                    b.kind, b.n, b.variant, b.s, b.achieved, b.target
                )
            })
            .collect();
        out.extend(
            self.chain
                .iter()
                .filter(|c| !c.all())
                .map(|c| format!("chain n={}: {c:?}", c.n)),
        );
        out
    }
}

enum Job {
    A(u64),
    B(u64, Variant),
    C(u64, Variant),
    Probe(u64, u64, Variant),
}

fn base_of(check: PropCheck, kind: BaseKind) -> BaseCase {
    BaseCase {
        kind,
        n: check.n,
        variant: check.variant,
        s: None,
        target: check.target,
        achieved: check.achieved,
        pass: check.pass,
    }
}

fn run_job(job: &Job, prime: PrimeModulus, seed: u64) -> Result<BaseCase> {
    Ok(match *job {
        Job::A(n) => base_of(check_prop_a(n, prime, seed)?, BaseKind::PropA),
        Job::B(n, v) => base_of(check_prop_b(n, v, prime, seed)?, BaseKind::PropB),
        Job::C(n, v) => base_of(check_prop_c(n, v, prime, seed)?, BaseKind::PropC),
        Job::Probe(n, s, v) => {
            let problem = SecantProblem::new(2, n as usize, s as usize)?
                .with_prime(prime)
                .with_seed(seed)
                .with_strategy(Strategy::Random);
            let r = probe(&problem)?;
            // the upper index must fill; the lower one only needs the
            // expected dimension (which may also be the ambient space)
            let pass = match v {
                Variant::Floor => r.verdict.is_certified(),
                Variant::Ceil => r.verdict == Verdict::CertifiedFills,
            };
            BaseCase {
                kind: BaseKind::Probe,
                n,
                variant: v,
                s: Some(s),
                target: r.expected_rank,
                achieved: r.achieved_rank,
                pass,
            }
        }
    })
}

/// Runs every base case and the chain inequalities for `15 <= n <= n_max`.
///
/// Base cases run in parallel; the result is assembled in a fixed order.
/// Probes use both closed forms of each index where they differ.
pub fn certify_theorem(n_max: u64, prime: PrimeModulus, seed: u64) -> Result<InductionCertificate> {
    if n_max < 14 {
        return Err(Error::InvalidParameters(format!(
            "needs n_max >= 14, got {n_max}"
        )));
    }
    let mut jobs = vec![Job::A(17)];
    for v in [Variant::Floor, Variant::Ceil] {
        jobs.extend((11..=16).map(|n| Job::B(n, v)));
        jobs.extend((9..=14).map(|n| Job::C(n, v)));
    }
    for n in 9..=14 {
        let mut lower = vec![s1(n)?, s1_intro(n)?];
        lower.dedup();
        let mut upper = vec![s2(n)?, s2_intro(n)?];
        upper.dedup();
        jobs.extend(
            lower
                .into_iter()
                .map(|s| Job::Probe(n, s as u64, Variant::Floor)),
        );
        jobs.extend(
            upper
                .into_iter()
                .map(|s| Job::Probe(n, s as u64, Variant::Ceil)),
        );
    }
    let base_cases = jobs
        .par_iter()
        .map(|j| run_job(j, prime, seed))
        .collect::<Result<Vec<_>>>()?;
    let chain = (15..=n_max)
        .map(chain_inequalities)
        .collect::<Result<Vec<_>>>()?;
    let ok = base_cases.iter().all(|b| b.pass) && chain.iter().all(ChainCheck::all);
    Ok(InductionCertificate {
        n_max,
        prime,
        seed,
        base_cases,
        chain,
        conclusion: ok.then_some((9, n_max)),
    })
}
