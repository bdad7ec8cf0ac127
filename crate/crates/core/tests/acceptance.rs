//! Acceptance criteria 1 to 10. Runs without the test harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secant_core::codes::{lexicode_greedy, monomial_certificate};
use secant_core::extalg::{all_subsets, binomial, pairing_matrix, IndexSet, Multivector};
use secant_core::field::{FieldScalar, Integers, PrimeModulus, DEFAULT_PRIME, SECOND_PRIME};
use secant_core::gr26::{self, figure1_representatives, tensor_from_labels};
use secant_core::grassmann::{cone_dim, random_point, tangent_frame, CoordinateSubspace};
use secant_core::induction::{
    certify_theorem, check_prop_a, check_prop_b, check_prop_c, s1, s1_intro, s1_mismatches, s2,
    s2_intro, s2_mismatches, Variant,
};
use secant_core::terracini::{probe, SecantProblem, SpanStack, Strategy as ProbeStrategy, Verdict};

const SEED: u64 = 20_240_601;

fn primes() -> [PrimeModulus; 2] {
    [
        PrimeModulus::new(DEFAULT_PRIME).unwrap(),
        PrimeModulus::new(SECOND_PRIME).unwrap(),
    ]
}

/// Ok(detail) or Err(reason).
type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn plain_probe(
    k: usize,
    n: usize,
    s: usize,
    p: PrimeModulus,
    seed: u64,
    strategy: ProbeStrategy,
) -> Result<secant_core::terracini::SpanVerdict, String> {
    let problem = SecantProblem::new(k, n, s)
        .map_err(err)?
        .with_prime(p)
        .with_seed(seed)
        .with_strategy(strategy);
    probe(&problem).map_err(err)
}

/// (k, n, s, affine rank, expected affine rank, actual codim, expected codim)
const DEFECTIVE: [(usize, usize, usize, usize, usize, usize, usize); 4] = [
    (2, 6, 3, 34, 35, 1, 0),
    (3, 7, 3, 50, 51, 20, 19),
    (3, 7, 4, 64, 68, 6, 2),
    (2, 8, 4, 74, 76, 10, 8),
];

fn criterion_1() -> Check {
    let mut runs = 0;
    for &(k, n, s, rank, expected, codim, exp_codim) in &DEFECTIVE {
        for seed in [1, 2, 3] {
            for p in primes() {
                let v = plain_probe(k, n, s, p, seed, ProbeStrategy::Auto)?;
                let ambient = binomial(n + 1, k + 1);
                ensure(
                    v.achieved_rank == rank
                        && v.expected_rank == expected
                        && ambient - v.achieved_rank == codim
                        && ambient - v.expected_rank == exp_codim,
                    || format!("sigma_{s}Gr({k},{n}) seed {seed} mod {p}: {v:?}"),
                )?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} probes, ranks 34/50/64/74 vs 35/51/68/76"))
}

fn criterion_2() -> Check {
    let defective: Vec<(usize, usize, usize)> = DEFECTIVE.iter().map(|d| (d.0, d.1, d.2)).collect();
    let mut jobs = Vec::new();
    for k in 2..=4 {
        for n in 2 * k + 1..=14 {
            for s in 1..=6 {
                jobs.push((k, n, s));
            }
        }
    }
    let mut certified = 0;
    for &(k, n, s) in &jobs {
        let v = plain_probe(k, n, s, primes()[0], SEED, ProbeStrategy::Auto)?;
        let is_defective = defective.contains(&(k, n, s));
        ensure(v.verdict.is_certified() != is_defective, || {
            format!("sigma_{s}Gr({k},{n}): {v:?} (defective: {is_defective})")
        })?;
        certified += usize::from(v.verdict.is_certified());
    }
    Ok(format!(
        "{certified} of {} certified, 4 defective cases short",
        jobs.len()
    ))
}

fn criterion_3() -> Check {
    let v = plain_probe(3, 9, 6, primes()[0], SEED, ProbeStrategy::Random)?;
    ensure(
        v.verdict == Verdict::CertifiedExpected && v.achieved_rank == 150 && v.ambient == 210,
        || format!("{v:?}"),
    )?;
    ensure(monomial_certificate(3, 9, 6).is_none(), || {
        "a 6-word code exists".into()
    })?;
    let greedy = lexicode_greedy(10, 4, 6, None).len();
    ensure(greedy == 5, || format!("greedy code has {greedy} words"))?;
    Ok("rank 150 of 210; no 6-word code, greedy reaches 5".into())
}

fn criterion_4() -> Check {
    let p = primes()[0];
    let a = check_prop_a(17, p, SEED).map_err(err)?;
    ensure(a.pass && a.span_rank == 600 && a.achieved == 816, || {
        format!("{a:?}")
    })?;
    let mut count = 1;
    for n in 11..=16 {
        for variant in [Variant::Floor, Variant::Ceil] {
            let b = check_prop_b(n, variant, p, SEED).map_err(err)?;
            ensure(b.pass, || format!("{b:?}"))?;
            if variant == Variant::Floor {
                let want = [20, 8, 32][(n % 3) as usize];
                ensure(b.residual == want, || {
                    format!("n={n}: residual {} != {want}", b.residual)
                })?;
            }
            count += 1;
        }
    }
    for n in 9..=14 {
        for variant in [Variant::Floor, Variant::Ceil] {
            let c = check_prop_c(n, variant, p, SEED).map_err(err)?;
            ensure(c.pass, || format!("{c:?}"))?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} checks; A spans 600, full 816; B residuals 20/8/32 for n = 0/1/2 mod 3"
    ))
}

fn criterion_5() -> Check {
    let cert = certify_theorem(50, primes()[0], SEED).map_err(err)?;
    ensure(cert.failures().is_empty(), || {
        format!("{:?}", cert.failures())
    })?;
    ensure(cert.conclusion == Some((9, 50)), || {
        format!("{:?}", cert.conclusion)
    })?;
    for n in 15..=20u64 {
        let nu = n as usize;
        for s in [s1(n).unwrap(), s1_intro(n).unwrap()] {
            let v = plain_probe(2, nu, s as usize, primes()[0], SEED, ProbeStrategy::Random)?;
            ensure(v.verdict == Verdict::CertifiedExpected, || {
                format!("n={n} s={s}: {v:?}")
            })?;
        }
        for s in [s2(n).unwrap(), s2_intro(n).unwrap()] {
            let v = plain_probe(2, nu, s as usize, primes()[0], SEED, ProbeStrategy::Random)?;
            ensure(v.verdict == Verdict::CertifiedFills, || {
                format!("n={n} s={s}: {v:?}")
            })?;
        }
    }
    Ok(format!(
        "conclusion [9, 50] from {} base cases; spot probes n = 15..20",
        cert.base_cases.len()
    ))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..25 {
        let a: Vec<BigInt> = (0..5)
            .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
            .collect();
        let (det, predicted) = gr26::five_term_identity(&a[0], &a[1], &a[2], &a[3], &a[4]);
        ensure(det == predicted, || format!("{a:?}: {det} vs {predicted}"))?;
    }
    for _ in 0..50 {
        let omega = gr26::random_tensor(9, &mut rng);
        gr26::p7(&omega).map_err(err)?;
    }
    for _ in 0..50 {
        let omega = gr26::random_secant_point(3, 9, &mut rng);
        let q = gr26::p7(&omega).map_err(err)?;
        ensure(q.is_zero(), || format!("P7 = {q} on a secant point"))?;
    }
    let mut nonzero = 0;
    for _ in 0..50 {
        let omega = gr26::random_tensor(5, &mut rng);
        nonzero += usize::from(!gr26::p7(&omega).map_err(err)?.is_zero());
    }
    ensure(nonzero >= 49, || format!("P7 nonzero on {nonzero} of 50"))?;
    Ok(format!(
        "25 identities, 50 cubes, 50 zeros, {nonzero}/50 nonzero"
    ))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut retries = 0;
    for count in 1..=3 {
        for _ in 0..20 {
            let mut rank = 0;
            for attempt in 0..5 {
                let omega = gr26::random_secant_point(count, 9, &mut rng);
                rank = pairing_matrix(&omega).map_err(err)?.rank_exact();
                if rank == 6 * count {
                    break;
                }
                retries += usize::from(attempt < 4);
            }
            ensure(rank == 6 * count, || format!("sum of {count}: rank {rank}"))?;
        }
    }
    let fano = pairing_matrix(&gr26::fano_tensor())
        .map_err(err)?
        .rank_exact();
    ensure(fano == 21, || format!("Fano rank {fano}"))?;
    Ok(format!(
        "ranks 6/12/18 over 20 samples each ({retries} retries), Fano 21"
    ))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let a = gr26::demo_gr37(primes()[0], &mut rng).map_err(err)?;
    ensure(
        a.passes() && a.affine_rank == 50 && a.expected_rank == 51,
        || format!("{a:?}"),
    )?;
    let b = gr26::demo_gr28(primes()[0], &mut rng).map_err(err)?;
    ensure(
        b.passes() && b.affine_rank == 74 && b.expected_rank == 76,
        || format!("{b:?}"),
    )?;
    Ok(format!(
        "Gr(3,7) projective {} < {}; Gr(2,8) projective {} < {}",
        a.projective_rank(),
        a.projective_expected(),
        b.projective_rank(),
        b.projective_expected()
    ))
}

fn criterion_9() -> Check {
    const HI: u64 = 10_000;
    let mut problems = Vec::new();
    let m1 = s1_mismatches(9, HI).map_err(err)?;
    let m2 = s2_mismatches(9, HI).map_err(err)?;
    let first = |m: &[secant_core::induction::FormMismatch]| {
        m.iter()
            .take(5)
            .map(|x| format!("n={} {}/{}", x.n, x.single, x.split))
            .collect::<Vec<_>>()
            .join(", ")
    };
    if !m1.is_empty() {
        problems.push(format!(
            "s1 != s1_intro at {} values (single/split: {})",
            m1.len(),
            first(&m1)
        ));
    }
    if !m2.is_empty() {
        problems.push(format!(
            "s2 != s2_intro at {} values (single/split: {})",
            m2.len(),
            first(&m2)
        ));
    }
    let mut sandwich = Vec::new();
    for n in 9..=HI {
        let f = BigInt::from(binomial(n as usize + 1, 3));
        let step = BigInt::from(3 * n - 5);
        let (lo, hi) = (BigInt::from(s1(n).unwrap()), BigInt::from(s2(n).unwrap()));
        let (below, above) = (&lo * &step, &hi * &step);
        if below > f || above < f {
            sandwich.push(format!(
                "n={n}: s1*(3n-5) = {below}, C(n+1,3) = {f}, s2*(3n-5) = {above}"
            ));
        }
    }
    if !sandwich.is_empty() {
        problems.push(format!(
            "sandwich fails at {} values: {}",
            sandwich.len(),
            sandwich.join("; ")
        ));
    }
    for n in 200..=HI {
        for (name, s) in [("s1", s1(n).unwrap()), ("s2", s2(n).unwrap())] {
            let ratio = 18.0 * s as f64 / (n * n) as f64;
            if (ratio - 1.0).abs() >= 0.05 {
                problems.push(format!("{name}({n}) ratio {ratio}"));
            }
        }
    }
    if problems.is_empty() {
        Ok("closed forms agree, sandwich and asymptotics hold".into())
    } else {
        Err(problems.join(" | "))
    }
}

fn random_form(p: PrimeModulus, degree: usize) -> impl Strategy<Value = Multivector<FieldScalar>> {
    prop::collection::vec(0..p.get(), binomial(7, degree)).prop_map(move |c| {
        Multivector::from_terms(
            p,
            7,
            degree,
            all_subsets(6, degree)
                .into_iter()
                .zip(c.into_iter().map(|v| FieldScalar::new(v, p))),
        )
        .unwrap()
    })
}

fn random_integral(bound: i64) -> impl Strategy<Value = Multivector<BigInt>> {
    prop::collection::vec(-bound..=bound, 35).prop_map(|c| {
        Multivector::from_terms(
            Integers,
            7,
            3,
            all_subsets(6, 3)
                .into_iter()
                .zip(c.into_iter().map(BigInt::from)),
        )
        .unwrap()
    })
}

fn run_property<S: Strategy>(
    cases: u32,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_10() -> Check {
    let p = primes()[0];
    run_property(64, "antisymmetry", (1usize..=3, 1usize..=3), |(a, b)| {
        let mut rng = ChaCha8Rng::seed_from_u64((a * 7 + b) as u64);
        let mut sample = |d: usize| {
            let coeffs: Vec<FieldScalar> = (0..binomial(7, d))
                .map(|_| FieldScalar::new(rng.gen_range(0..p.get()), p))
                .collect();
            Multivector::from_terms(p, 7, d, all_subsets(6, d).into_iter().zip(coeffs)).unwrap()
        };
        let (x, y) = (sample(a), sample(b));
        let lhs = x.wedge(&y).unwrap();
        let rhs = y.wedge(&x).unwrap();
        let rhs = if a * b % 2 == 1 { rhs.neg() } else { rhs };
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })?;
    run_property(
        32,
        "associativity",
        (random_form(p, 2), random_form(p, 1), random_form(p, 3)),
        |(a, b, c)| {
            let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
            let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            Ok(())
        },
    )?;
    run_property(50, "contraction symmetry", random_integral(9), |omega| {
        prop_assert!(pairing_matrix(&omega).unwrap().is_symmetric());
        Ok(())
    })?;
    run_property(
        100,
        "rank subadditivity",
        (random_integral(3), random_integral(3)),
        |(a, b)| {
            let r = |w: &Multivector<BigInt>| pairing_matrix(w).unwrap().rank_mod_p(p);
            prop_assert!(r(&a.add(&b).unwrap()) <= r(&a) + r(&b));
            Ok(())
        },
    )?;
    let reps = figure1_representatives();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (label, _, rank, terms) in &reps {
        let omega = tensor_from_labels(terms).map_err(err)?;
        for _ in 0..20 {
            let g = gr26::random_unimodular(7, 30, &mut rng);
            let r = pairing_matrix(&omega.transform(&g).map_err(err)?)
                .map_err(err)?
                .rank_exact();
            ensure(r == *rank, || {
                format!("{label}: rank {r} after basis change")
            })?;
        }
    }
    run_property(
        60,
        "tangent rank law",
        (1usize..=4, 3usize..=12, any::<u64>()),
        |(k, n, seed)| {
            prop_assume!(k + 1 < n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pt = random_point(p, k, n, None, &mut rng).unwrap();
            prop_assert_eq!(tangent_frame(&pt).unwrap().rank(), cone_dim(k, n));
            Ok(())
        },
    )?;
    let support = |n: usize| prop::collection::btree_set(0..=n, 3..=n + 1);
    run_property(
        60,
        "inclusion-exclusion",
        (2usize..=3, 7usize..=11)
            .prop_flat_map(move |(k, n)| (Just(k), Just(n), support(n), support(n))),
        |(k, n, a, b)| {
            let d = k + 1;
            let l1 =
                CoordinateSubspace::new(n, IndexSet::new(a.iter().copied().collect()).unwrap())
                    .unwrap();
            let l2 =
                CoordinateSubspace::new(n, IndexSet::new(b.iter().copied().collect()).unwrap())
                    .unwrap();
            let mut stack = SpanStack::new(p, k, n);
            stack.add_span(&l1);
            stack.add_span(&l2);
            let common = a.intersection(&b).count();
            prop_assert_eq!(
                stack.rank(),
                binomial(a.len(), d) + binomial(b.len(), d) - binomial(common, d)
            );
            Ok(())
        },
    )?;
    let mut agreements = 0;
    for k in 2..=3 {
        for n in 2 * k + 1..=14 {
            let Some(s) = (1..=12)
                .rev()
                .find(|&s| monomial_certificate(k, n, s).is_some())
            else {
                continue;
            };
            let mono = plain_probe(k, n, s, p, SEED, ProbeStrategy::Monomial)?;
            let rand = plain_probe(k, n, s, p, SEED, ProbeStrategy::Random)?;
            ensure(
                mono.verdict.is_certified() && rand.verdict == mono.verdict,
                || format!("Gr({k},{n}) s={s}: monomial {mono:?}, random {rand:?}"),
            )?;
            agreements += 1;
        }
    }
    Ok(format!(
        "all properties held; {agreements} certificate/probe agreements"
    ))
}

fn main() {
    // budgets in seconds, per criterion
    let criteria: [(u32, fn() -> Check, u64); 10] = [
        (1, criterion_1, 10),
        (2, criterion_2, 180),
        (3, criterion_3, 5),
        (4, criterion_4, 120),
        (5, criterion_5, 300),
        (6, criterion_6, 30),
        (7, criterion_7, 10),
        (8, criterion_8, 5),
        (9, criterion_9, 5),
        (10, criterion_10, 120),
    ];
    let mut failed = 0;
    for (id, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(d) if elapsed > Duration::from_secs(budget) => Err(format!(
                "{d}; took {:.1}s, budget {budget}s",
                elapsed.as_secs_f64()
            )),
            r => r,
        };
        match result {
            Ok(detail) => println!(
                "criterion {id:>2}: PASS ({:.2}s) {detail}",
                elapsed.as_secs_f64()
            ),
            Err(reason) => {
                failed += 1;
                println!(
                    "criterion {id:>2}: FAIL ({:.2}s) {reason}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
