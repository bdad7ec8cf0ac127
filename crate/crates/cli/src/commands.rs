use std::fmt::Write;
use std::path::Path;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use secant_core::codes::{graham_sloane_bounds, lexicode_greedy, monomial_certificate};
use secant_core::extalg::parse_tensor;
use secant_core::field::PrimeModulus;
use secant_core::gr26;
use secant_core::induction::{certify_theorem, s1, s1_intro, s2, s2_intro};
use secant_core::terracini::{
    monotone_extend, probe_record, SecantProblem, Strategy, Verdict, VerdictRecord,
};

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub primes: Vec<PrimeModulus>,
    pub seed: u64,
    pub trials: usize,
    pub strategy: Strategy,
}

impl RunConfig {
    fn prime(&self) -> PrimeModulus {
        self.primes[0]
    }
}

/// What a command produced: a reproducible payload, its human rendering and
/// whether every assertion held.
pub struct Outcome {
    pub payload: Value,
    pub human: String,
    pub pass: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run_probe(
    k: usize,
    n: usize,
    s: usize,
    prime: PrimeModulus,
    cfg: &RunConfig,
) -> Result<VerdictRecord> {
    let problem = SecantProblem::new(k, n, s)?
        .with_prime(prime)
        .with_seed(cfg.seed)
        .with_trials(cfg.trials)
        .with_strategy(cfg.strategy);
    let mut rec = probe_record(&problem)?;
    rec.elapsed_ms = None;
    Ok(rec)
}

fn same_verdicts(recs: &[VerdictRecord]) -> bool {
    recs.windows(2)
        .all(|w| (w[0].achieved, w[0].verdict) == (w[1].achieved, w[1].verdict))
}

pub fn check(k: usize, n: usize, s: usize, cfg: &RunConfig) -> Result<Outcome> {
    let recs = cfg
        .primes
        .par_iter()
        .map(|&p| run_probe(k, n, s, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut human = String::new();
    for r in &recs {
        let _ = writeln!(
            human,
            "sigma_{s}(Gr({k},{n})) mod {}: rank {} of expected {} (ambient {}), {}",
            r.prime, r.achieved, r.expected, r.ambient, r.verdict
        );
    }
    let agree = same_verdicts(&recs);
    if !agree {
        human.push_str("primes disagree\n");
    }
    Ok(Outcome {
        payload: json!({ "records": recs, "primes_agree": agree }),
        human,
        pass: agree,
    })
}

/// `(k, n, s, actual codimension, expected codimension)` of the four known
/// defective cases.
pub const DEFECTIVE_CASES: [(usize, usize, usize, usize, usize); 4] = [
    (2, 6, 3, 1, 0),
    (3, 7, 3, 20, 19),
    (3, 7, 4, 6, 2),
    (2, 8, 4, 10, 8),
];

#[derive(Serialize)]
struct TableRow {
    k: usize,
    n: usize,
    s: usize,
    prime: PrimeModulus,
    achieved: usize,
    expected: usize,
    ambient: usize,
    actual_codim: usize,
    expected_codim: usize,
    reference_actual: usize,
    reference_expected: usize,
    matches: bool,
}

pub fn conjecture_table(cfg: &RunConfig) -> Result<Outcome> {
    let jobs: Vec<_> = DEFECTIVE_CASES
        .iter()
        .flat_map(|&c| cfg.primes.iter().map(move |&p| (c, p)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&((k, n, s, ra, re), p)| {
            let r = run_probe(k, n, s, p, cfg)?;
            let (actual, expected) = (r.ambient - r.achieved, r.ambient - r.expected);
            Ok(TableRow {
                k,
                n,
                s,
                prime: p,
                achieved: r.achieved,
                expected: r.expected,
                ambient: r.ambient,
                actual_codim: actual,
                expected_codim: expected,
                reference_actual: ra,
                reference_expected: re,
                matches: (actual, expected) == (ra, re),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut human =
        String::from("secant      prime   rank/expected   codim actual/expected   reference\n");
    for r in &rows {
        let _ = writeln!(
            human,
            "s{}Gr({},{})   {:>6}   {:>4}/{:<4}        {:>3} / {:<3}               {} / {}{}",
            r.s,
            r.k,
            r.n,
            r.prime,
            r.achieved,
            r.expected,
            r.actual_codim,
            r.expected_codim,
            r.reference_actual,
            r.reference_expected,
            if r.matches { "" } else { "  MISMATCH" }
        );
    }
    let pass = rows.iter().all(|r| r.matches);
    Ok(Outcome {
        payload: to_value(&rows),
        human,
        pass,
    })
}

#[derive(Serialize)]
struct ScanRow {
    n: usize,
    s: usize,
    record: VerdictRecord,
    /// The index must fill the ambient space rather than just be certified.
    must_fill: bool,
    pass: bool,
}

/// Values of `s` to scan at `n`: a user range, or for `k = 2` both closed
/// forms of the lower and upper index.
fn scan_points(k: usize, n: usize, s_range: Option<(usize, usize)>) -> Result<Vec<(usize, bool)>> {
    if let Some((lo, hi)) = s_range {
        return Ok((lo..=hi).map(|s| (s, false)).collect());
    }
    if k != 2 {
        anyhow::bail!(secant_core::Error::InvalidParameters(
            "scans with k != 2 need --s-from and --s-to".into()
        ));
    }
    let n64 = n as u64;
    let mut out: Vec<(usize, bool)> = Vec::new();
    for (s, fill) in [
        (s1(n64)?, false),
        (s1_intro(n64)?, false),
        (s2(n64)?, true),
        (s2_intro(n64)?, true),
    ] {
        let s = s as usize;
        if !out.contains(&(s, fill)) {
            out.push((s, fill));
        }
    }
    out.sort();
    Ok(out)
}

pub fn scan(
    k: usize,
    n_range: (usize, usize),
    s_range: Option<(usize, usize)>,
    cfg: &RunConfig,
) -> Result<Outcome> {
    let mut jobs = Vec::new();
    for n in n_range.0..=n_range.1 {
        for (s, fill) in scan_points(k, n, s_range)? {
            for &p in &cfg.primes {
                jobs.push((n, s, fill, p));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(n, s, must_fill, p)| {
            let record = run_probe(k, n, s, p, cfg)?;
            let pass = if must_fill {
                record.verdict == Verdict::CertifiedFills
            } else {
                record.verdict.is_certified()
            };
            Ok(ScanRow {
                n,
                s,
                record,
                must_fill,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut implications = Vec::new();
    let mut human = String::new();
    for n in n_range.0..=n_range.1 {
        let (mut up_to, mut fills_from) = (None::<usize>, None::<usize>);
        for r in rows.iter().filter(|r| r.n == n) {
            let _ = writeln!(
                human,
                "Gr({k},{n}) s={:<3} mod {:<6} rank {:>5}/{:<5} {}{}",
                r.s,
                r.record.prime,
                r.record.achieved,
                r.record.expected,
                r.record.verdict,
                if r.pass { "" } else { "  FAIL" }
            );
            let v = secant_core::terracini::SpanVerdict {
                achieved_rank: r.record.achieved,
                expected_rank: r.record.expected,
                ambient: r.record.ambient,
                verdict: r.record.verdict,
                trials_used: r.record.trials,
            };
            if let Ok(imp) = monotone_extend(k, n, r.s, &v) {
                up_to = up_to.max(imp.expected_up_to);
                fills_from = match (fills_from, imp.fills_from) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
            }
        }
        let _ = writeln!(
            human,
            "Gr({k},{n}): expected for s <= {up_to:?}, fills for s >= {fills_from:?}"
        );
        implications.push(json!({ "n": n, "expected_up_to": up_to, "fills_from": fills_from }));
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(Outcome {
        payload: json!({ "rows": rows, "implications": implications }),
        human,
        pass,
    })
}

pub fn induction(n_max: u64, cfg: &RunConfig) -> Result<Outcome> {
    let cert = certify_theorem(n_max, cfg.prime(), cfg.seed)?;
    let failures = cert.failures();
    let pass = failures.is_empty() && cert.conclusion == Some((9, n_max));
    let mut human = format!(
        "{} base cases, {} chain checks (15 <= n <= {n_max})\n",
        cert.base_cases.len(),
        cert.chain.len()
    );
    for f in &failures {
        let _ = writeln!(human, "failed: {f}");
    }
    match cert.conclusion {
        Some((lo, hi)) => {
            let _ = writeln!(
                human,
                "conclusion: Gr(2,n) secants have the expected dimension for {lo} <= n <= {hi}"
            );
        }
        None => human.push_str("no conclusion\n"),
    }
    Ok(Outcome {
        payload: to_value(&cert),
        human,
        pass,
    })
}

pub fn classify(file: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let omega = parse_tensor(&text)?;
    let r = gr26::classify(&omega, cfg.prime())?;
    let p7 = r
        .p7_exact
        .as_ref()
        .map_or("n/a".to_string(), ToString::to_string);
    let human = format!(
        "rank {}; in G: {}; in sigma_2: {}; in sigma_3: {}; orbit dim {}; P7 = {p7} ({} mod {})\n",
        r.rank,
        r.in_g,
        r.in_sigma2,
        r.in_sigma3,
        r.orbit_dim.map_or("?".into(), |d| d.to_string()),
        r.p7_mod_p,
        r.prime
    );
    Ok(Outcome {
        payload: to_value(&r),
        human,
        pass: true,
    })
}

pub fn invariant(a: [i64; 5]) -> Result<Outcome> {
    let [a135, a147, a126, a234, a567] = a.map(num_bigint::BigInt::from);
    let (det, predicted) = gr26::five_term_identity(&a135, &a147, &a126, &a234, &a567);
    let pass = det == predicted;
    Ok(Outcome {
        human: format!(
            "det {det}, closed form {predicted}: {}\n",
            if pass { "equal" } else { "DIFFERENT" }
        ),
        payload: json!({ "det": det.to_string(), "predicted": predicted.to_string(), "equal": pass }),
        pass,
    })
}

pub fn codes(n: usize, w: usize, d: usize, limit: Option<usize>) -> Result<Outcome> {
    if w == 0 || w > n {
        anyhow::bail!(secant_core::Error::InvalidParameters(format!(
            "need 1 <= w <= n, got n={n}, w={w}"
        )));
    }
    let code = lexicode_greedy(n, w, d, limit);
    let words: Vec<Vec<usize>> = code.words().iter().map(|s| s.as_slice().to_vec()).collect();
    let mut human = format!(
        "greedy code: {} words of weight {w}, length {n}, distance >= {d}\n",
        code.len()
    );
    let bounds = if d == 6 {
        let b = graham_sloane_bounds(n as u64, w as u64)?;
        let _ = writeln!(
            human,
            "lower bounds: {} (q={}), {} (q={}), {}",
            b.a, b.q_a, b.b, b.q_b, b.c
        );
        Some(b)
    } else {
        None
    };
    // a distance-6 code of weight k+1 on n+1 coordinates certifies coordinate
    // points of Gr(k, n) with independent tangent spaces
    let certificate = (d == 6 && w >= 3 && n > w).then(|| {
        let s = monomial_certificate(w - 1, n - 1, code.len().max(1)).map_or(0, |c| c.len());
        let _ = writeln!(human, "certifies {s} points of Gr({}, {})", w - 1, n - 1);
        s
    });
    for word in &words {
        let _ = writeln!(human, "  {word:?}");
    }
    Ok(Outcome {
        payload: json!({
            "length": n,
            "weight": w,
            "min_distance": d,
            "words": words,
            "bounds": bounds.map(|b| json!({
                "a": b.a.to_string(), "q_a": b.q_a,
                "b": b.b.to_string(), "q_b": b.q_b,
                "c": b.c.to_string(),
            })),
            "certified_points": certificate,
        }),
        human,
        pass: true,
    })
}

pub fn demo(which: &str, cfg: &RunConfig) -> Result<Outcome> {
    let p = cfg.prime();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if which == "figure1" {
        let rows = gr26::figure1_table(p);
        let mut human = String::new();
        for r in &rows {
            let _ = writeln!(
                human,
                "{:<20} dim {:>2} (measured {:>2})  rank {:>2} (measured {:>2})  {}",
                r.label,
                r.expected_dim,
                r.measured_dim,
                r.expected_rank,
                r.measured_rank,
                r.representative
            );
        }
        return Ok(Outcome {
            pass: rows.iter().all(gr26::OrbitEntry::verified),
            payload: to_value(&rows),
            human,
        });
    }
    let r = match which {
        "gr37" => gr26::demo_gr37(p, &mut rng)?,
        "gr28" => gr26::demo_gr28(p, &mut rng)?,
        other => anyhow::bail!(secant_core::Error::InvalidParameters(format!(
            "unknown demo `{other}`; expected gr37, gr28 or figure1"
        ))),
    };
    let human = format!(
        "Gr({},{}), {} points: tangent span affine rank {} (projective {}), expected {} (projective {})\n\
         span of the rational family: {}; upper bound {}; {}/{} samples on the Grassmannian; through the points: {}\n",
        r.k,
        r.n,
        r.points,
        r.affine_rank,
        r.projective_rank(),
        r.expected_rank,
        r.projective_expected(),
        r.surface_span,
        r.upper_bound,
        r.samples_on_grassmannian,
        r.samples_checked,
        r.passes_through_points
    );
    Ok(Outcome {
        pass: r.passes(),
        payload: to_value(&r),
        human,
    })
}
