use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wordcycles::experiment::{
    convergence_scan, estimate_moment, exact_moment, joint_distribution_histogram, summarize,
    ExperimentConfig, Format, Mode,
};
use wordcycles::graph::{verify_lemma_bounds, LemmaMode};
use wordcycles::limit::{limit_moment, split_table, MomentMethod, MomentValue};
use wordcycles::sampler::{sample_tuple, SamplerKind, SamplerSpec, TupleSpec};
use wordcycles::word::{cyclic_reduce, gamma_profile, power_decompose, run_form};
use wordcycles::young::{admissible_fillings_count, count_fillings_by_enumeration, YoungDiagram};
use wordcycles::{mc, LimitSpec, Result};

const PARITY_NOTE: &str = "Samplers are given as `uniform`, `ncycle`, `class:3,2,1` or `ewens:0.5`; \
separate several with `;` or repeat --samplers. A single sampler is used for every generator. \
Parity is not corrected: a product of two n-cycles is always even, so e.g. x1x2 under ncycle \
never yields an odd permutation.";

#[derive(Parser)]
#[command(name = "wordcycles", version, about = "Cycle statistics of word maps on symmetric groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form, cyclic reduction, power decomposition and run profiles of a word.
    Reduce {
        #[arg(long)]
        word: String,
    },
    /// Draw permutation tuples, one tuple per line.
    #[command(after_help = PARITY_NOTE)]
    Sample {
        #[arg(long, required = true)]
        samplers: Vec<String>,
        #[arg(long)]
        n: usize,
        #[arg(long = "N", default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo estimate of a cycle-count moment of w(σ).
    #[command(after_help = PARITY_NOTE)]
    Estimate(RunArgs),
    /// Exact moment by enumerating the whole tuple space.
    #[command(after_help = PARITY_NOTE)]
    Exact(RunArgs),
    /// Monte Carlo estimates over a list of degrees.
    #[command(after_help = PARITY_NOTE)]
    Scan(RunArgs),
    /// Moments of the limiting law of (#_1, …, #_d') for d-th powers.
    Limit {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        dprime: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        moments: Vec<usize>,
        /// Use Monte Carlo with this many draws instead of the exact formula.
        #[arg(long = "N")]
        n_samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the split table.
        #[arg(long)]
        table: bool,
    },
    /// Joint histogram of (#_1, …, #_d') of w(σ) against the limit law.
    #[command(after_help = PARITY_NOTE)]
    Hist {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 2)]
        dprime: usize,
    },
    /// Number of admissible fillings K_{λ,μ,n}.
    Fillings {
        #[arg(long)]
        lambda: YoungDiagram,
        #[arg(long)]
        mu: YoungDiagram,
        #[arg(long)]
        n: usize,
        /// Cross-check by brute-force enumeration.
        #[arg(long)]
        enumerate: bool,
    },
    /// Check the graph-event probability bounds for the canonical graph of class C_{γ,γ'}.
    #[command(after_help = PARITY_NOTE)]
    Lemma {
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<usize>,
        #[arg(long = "gamma-prime", value_delimiter = ',')]
        gamma_prime: Vec<usize>,
        #[arg(long, default_value = "uniform")]
        samplers: String,
        #[arg(long)]
        n: usize,
        /// Monte Carlo draws when the support exceeds the enumeration cap.
        #[arg(long = "N", default_value_t = 1_000_000)]
        n_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Never enumerate, always sample.
        #[arg(long)]
        monte_carlo: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    word: String,
    #[arg(long, default_value = "uniform")]
    samplers: Vec<String>,
    /// Degree, or comma-separated degrees.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long = "N", default_value_t = 100_000)]
    n_samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exponents p_1,…,p_d' of Π_m (#_m)^{p_m}.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    moments: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
}

fn parse_samplers(raw: &[String]) -> Result<Vec<SamplerKind>> {
    raw.iter()
        .flat_map(|s| s.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

impl RunArgs {
    fn config(&self, mode: Mode) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(&self.word, parse_samplers(&self.samplers)?, self.n.clone());
        cfg.n_samples = self.n_samples;
        cfg.seed = self.seed;
        cfg.moments = self.moments.clone();
        cfg.mode = mode;
        cfg.output = self.out.clone();
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Reduce { word } => {
            let cfg = ExperimentConfig::new(&word, vec![SamplerKind::Uniform], vec![1]);
            let (w, _) = cfg.resolve()?;
            let red = cyclic_reduce(&w);
            let mut out = json!({
                "canonical": w.to_string(),
                "length": w.len(),
                "reduction": red,
                "universality": red.is_universal(),
            });
            if !w.is_identity() {
                let pd = power_decompose(&w)?;
                out["runs"] = serde_json::to_value(run_form(&w)?)?;
                out["gamma"] = serde_json::to_value(gamma_profile(&w)?)?;
                out["power"] = serde_json::to_value(&pd)?;
                out["d"] = json!(pd.exponent);
            }
            print!("{}", pretty(&out)?);
        }
        Command::Sample {
            samplers,
            n,
            count,
            seed,
        } => {
            let tuple = TupleSpec::from_kinds(&parse_samplers(&samplers)?, n)?;
            let mut rng = mc::substream(seed, &[0x5341_4d50]);
            for _ in 0..count {
                let line: Vec<String> = sample_tuple(&tuple, &mut rng)
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                println!("{}", line.join(" "));
            }
        }
        Command::Estimate(args) => {
            let format: Format = args.format.parse()?;
            let report = estimate_moment(&args.config(Mode::MonteCarlo)?)?;
            args.emit(&report.render(format)?)?;
        }
        Command::Scan(args) => {
            let format: Format = args.format.parse()?;
            let report = convergence_scan(&args.config(Mode::MonteCarlo)?)?;
            args.emit(&report.render(format)?)?;
        }
        Command::Exact(args) => {
            let format: Format = args.format.parse()?;
            let cfg = args.config(Mode::Exact)?;
            let (w, kinds) = cfg.resolve()?;
            summarize(&w)?;
            if args.out.is_none() && format == Format::Json {
                let mut rows = Vec::new();
                for &n in &cfg.degrees {
                    let v = exact_moment(&w, &TupleSpec::from_kinds(&kinds, n)?, &cfg.moments)?;
                    let mut row = serde_json::to_value(MomentValue::exact(&v))?;
                    row["degree"] = json!(n);
                    rows.push(row);
                }
                print!("{}", pretty(&rows)?);
            } else {
                let report = estimate_moment(&cfg)?;
                args.emit(&report.render(format)?)?;
            }
        }
        Command::Limit {
            d,
            dprime,
            moments,
            n_samples,
            seed,
            table,
        } => {
            let spec = LimitSpec::new(d, dprime)?;
            let method = match n_samples {
                Some(n_samples) => MomentMethod::MonteCarlo { n_samples, seed },
                None => MomentMethod::Exact,
            };
            match limit_moment(spec, &moments, method)? {
                MomentValue::Exact { value, decimal } => println!("{value} {decimal}"),
                MomentValue::MonteCarlo(e) => println!("{} ± {} (N={})", e.mean, e.stderr, e.n_samples),
            }
            if table {
                for (m, row) in split_table(spec).rows.iter().enumerate() {
                    let parts: Vec<String> = row
                        .iter()
                        .map(|s| format!("{}·#_{}", s.multiplier, s.source_len))
                        .collect();
                    println!("#_{} <- {}", m + 1, parts.join(" + "));
                }
            }
        }
        Command::Hist { run, dprime } => {
            let report = joint_distribution_histogram(&run.config(Mode::MonteCarlo)?, dprime)?;
            run.emit(&pretty(&report)?)?;
        }
        Command::Fillings {
            lambda,
            mu,
            n,
            enumerate,
        } => {
            let k = admissible_fillings_count(&lambda, &mu, n)?;
            let mut out = json!({
                "lambda": lambda.to_string(),
                "mu": mu.to_string(),
                "n": n,
                "coefficient": k.coefficient,
                "count": k.eval(n).to_string(),
            });
            if enumerate {
                out["enumerated"] = json!(count_fillings_by_enumeration(&lambda, &mu, n)?);
            }
            print!("{}", pretty(&out)?);
        }
        Command::Lemma {
            gamma,
            gamma_prime,
            samplers,
            n,
            n_samples,
            seed,
            monte_carlo,
        } => {
            let spec = SamplerSpec::new(samplers.trim().parse()?, n)?;
            let mode = if monte_carlo {
                LemmaMode::MonteCarlo { n_samples, seed }
            } else {
                LemmaMode::Auto { n_samples, seed }
            };
            let report = verify_lemma_bounds(n, &gamma, &gamma_prime, &spec, mode)?;
            print!("{}", pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
