mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cache::{cache_key, Cache, ResultRecord};
use commands::{Outcome, RunConfig};
use secant_core::field::{PrimeModulus, DEFAULT_PRIME};
use secant_core::terracini::{Strategy, DEFAULT_TRIALS};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "secant",
    version,
    about = "Secant varieties of Grassmannians over prime fields"
)]
struct Cli {
    /// Prime modulus for all rank computations
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u32,

    /// Repeat probes at a second prime
    #[arg(long, global = true)]
    second_prime: Option<u32>,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,

    /// random, monomial or auto
    #[arg(long, global = true, default_value = "auto")]
    strategy: Strategy,

    /// Print one JSON record instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Recompute even if a cached result exists
    #[arg(long, global = true)]
    no_cache: bool,

    #[arg(long, global = true, default_value = ".secant-cache")]
    cache_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Probe the dimension of sigma_s(Gr(k, n))
    Check {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        s: usize,
    },
    /// The four defective cases, actual against expected codimension
    ConjectureTable,
    /// Probe a range of n
    Scan {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
        #[arg(long, requires = "s_to")]
        s_from: Option<usize>,
        #[arg(long, requires = "s_from")]
        s_to: Option<usize>,
    },
    /// Base cases and inequalities of the induction for Gr(2, n)
    Induction {
        #[arg(long, default_value_t = 50)]
        n_max: u64,
    },
    /// Contraction rank, memberships and P7 of a tensor file
    Classify { file: PathBuf },
    /// Determinant of the five-term family against its closed form
    Invariant {
        #[arg(allow_negative_numbers = true)]
        a135: i64,
        #[arg(allow_negative_numbers = true)]
        a147: i64,
        #[arg(allow_negative_numbers = true)]
        a126: i64,
        #[arg(allow_negative_numbers = true)]
        a234: i64,
        #[arg(allow_negative_numbers = true)]
        a567: i64,
    },
    /// Greedy constant-weight code
    Codes {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        w: usize,
        #[arg(short, default_value_t = 6)]
        d: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// gr37, gr28 or figure1
    Demo { which: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::ConjectureTable => "conjecture-table",
            Command::Scan { .. } => "scan",
            Command::Induction { .. } => "induction",
            Command::Classify { .. } => "classify",
            Command::Invariant { .. } => "invariant",
            Command::Codes { .. } => "codes",
            Command::Demo { .. } => "demo",
        }
    }

    fn parameters(&self, cfg: &RunConfig) -> anyhow::Result<Value> {
        let common = json!({ "trials": cfg.trials, "strategy": cfg.strategy.to_string() });
        Ok(match self {
            Command::Check { k, n, s } => json!({ "k": k, "n": n, "s": s, "run": common }),
            Command::ConjectureTable => json!({ "run": common }),
            Command::Scan {
                k,
                n_from,
                n_to,
                s_from,
                s_to,
            } => {
                json!({ "k": k, "n_from": n_from, "n_to": n_to, "s_from": s_from, "s_to": s_to, "run": common })
            }
            Command::Induction { n_max } => json!({ "n_max": n_max }),
            Command::Classify { file } => {
                // keyed by content so an edited file is recomputed
                let text = std::fs::read_to_string(file)
                    .map_err(|e| Usage(format!("reading {}: {e}", file.display())))?;
                json!({ "tensor": text })
            }
            Command::Invariant {
                a135,
                a147,
                a126,
                a234,
                a567,
            } => json!([a135, a147, a126, a234, a567]),
            Command::Codes { n, w, d, limit } => json!({ "n": n, "w": w, "d": d, "limit": limit }),
            Command::Demo { which } => json!({ "which": which }),
        })
    }

    fn run(&self, cfg: &RunConfig) -> anyhow::Result<Outcome> {
        match self {
            Command::Check { k, n, s } => commands::check(*k, *n, *s, cfg),
            Command::ConjectureTable => commands::conjecture_table(cfg),
            Command::Scan {
                k,
                n_from,
                n_to,
                s_from,
                s_to,
            } => {
                let s_range = s_from.zip(*s_to);
                commands::scan(*k, (*n_from, *n_to), s_range, cfg)
            }
            Command::Induction { n_max } => commands::induction(*n_max, cfg),
            Command::Classify { file } => commands::classify(file, cfg),
            Command::Invariant {
                a135,
                a147,
                a126,
                a234,
                a567,
            } => commands::invariant([*a135, *a147, *a126, *a234, *a567]),
            Command::Codes { n, w, d, limit } => commands::codes(*n, *w, *d, *limit),
            Command::Demo { which } => commands::demo(which, cfg),
        }
    }
}

/// Errors in the invocation rather than in the computation.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn is_usage_error(e: &anyhow::Error) -> bool {
    use secant_core::Error as E;
    if e.downcast_ref::<Usage>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<E>(),
        Some(
            E::InvalidParameters(_)
                | E::Parse { .. }
                | E::NotPrime(_)
                | E::ModulusTooLarge(_)
                | E::NoUniqueCubeRoot(_)
                | E::DimensionMismatch { .. }
                | E::SupportTooSmall { .. }
        )
    )
}

fn config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut primes = vec![PrimeModulus::new(cli.prime).map_err(|e| Usage(e.to_string()))?];
    if let Some(q) = cli.second_prime {
        primes.push(PrimeModulus::new(q).map_err(|e| Usage(e.to_string()))?);
    }
    if cli.trials == 0 {
        return Err(Usage("--trials must be at least 1".into()).into());
    }
    Ok(RunConfig {
        primes,
        seed: cli.seed,
        trials: cli.trials,
        strategy: cli.strategy,
    })
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = config(cli)?;
    let name = cli.command.name();
    let parameters = cli.command.parameters(&cfg)?;
    let primes: Vec<u32> = cfg.primes.iter().map(|p| p.get()).collect();
    let key = cache_key(name, &parameters, &primes, cfg.seed, VERSION);
    let cache = if cli.no_cache {
        None
    } else {
        Some(Cache::open(&cli.cache_dir)?)
    };

    let cached = match &cache {
        Some(c) => c.lookup(&key)?,
        None => None,
    };
    let (record, human, from_cache) = match cached {
        Some(rec) => (rec, None, true),
        None => {
            let start = Instant::now();
            let out = cli.command.run(&cfg)?;
            let rec = ResultRecord {
                key,
                command: name.to_string(),
                parameters,
                primes,
                seed: cfg.seed,
                version: VERSION.to_string(),
                pass: out.pass,
                payload: out.payload,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            if let Some(c) = &cache {
                c.append(&rec)?;
            }
            (rec, Some(out.human), false)
        }
    };

    if cli.json {
        let mut v = serde_json::to_value(&record)?;
        v["cached"] = json!(from_cache);
        println!("{v}");
    } else {
        match human {
            Some(h) => print!("{h}"),
            // replayed records carry only the payload
            None => println!(
                "(cached) {}",
                serde_json::to_string_pretty(&record.payload)?
            ),
        }
        println!("{}", if record.pass { "PASS" } else { "FAIL" });
    }
    Ok(record.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
