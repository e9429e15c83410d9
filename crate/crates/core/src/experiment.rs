//! Moment estimation, exact enumeration, convergence scans and reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit::{limit_histogram, limit_moment_exact, merge_histograms, total_variation, LimitSpec};
use crate::mc::{self, Accumulator};
use crate::perm::Permutation;
use crate::sampler::{sample_tuple, SamplerKind, TupleSpec};
use crate::word::{cyclic_reduce, parse_word, power_decompose, ReductionCase, Word};

/// Largest product-space size `exact_moment` will enumerate.
pub const EXACT_TUPLE_CAP: u128 = 50_000;

const PARSE_ARITY: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "montecarlo" | "mc" => Ok(Mode::MonteCarlo),
            _ => Err(Error::InvalidConfig(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidConfig(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub word: String,
    /// One kind per generator, or a single kind used for every generator.
    pub samplers: Vec<SamplerKind>,
    pub degrees: Vec<usize>,
    pub n_samples: u64,
    pub seed: u64,
    /// `p_1, …, p_{d'}` of the monomial `Π_m (#_m)^{p_m}`.
    pub moments: Vec<usize>,
    pub mode: Mode,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(word: &str, samplers: Vec<SamplerKind>, degrees: Vec<usize>) -> Self {
        ExperimentConfig {
            word: word.to_string(),
            samplers,
            degrees,
            n_samples: 100_000,
            seed: 0,
            moments: vec![1],
            mode: Mode::MonteCarlo,
            output: None,
        }
    }

    /// Parses the word and expands the sampler list to one kind per generator.
    pub fn resolve(&self) -> Result<(Word, Vec<SamplerKind>)> {
        let raw = parse_word(&self.word, PARSE_ARITY)?;
        let used = raw.max_generator();
        let kinds = match self.samplers.len() {
            0 => return Err(Error::InvalidSampler("no sampler given".into())),
            1 => vec![self.samplers[0].clone(); used.max(1)],
            k if k >= used => self.samplers.clone(),
            k => {
                return Err(Error::ArityMismatch {
                    expected: used,
                    found: k,
                })
            }
        };
        Ok((raw.with_num_generators(kinds.len())?, kinds))
    }

    fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() {
            return Err(Error::InvalidConfig("degree list is empty".into()));
        }
        if self.mode == Mode::MonteCarlo && self.n_samples == 0 {
            return Err(Error::InvalidConfig("sample count must be positive".into()));
        }
        if self.moments.is_empty() || self.moments.iter().all(|&p| p == 0) {
            return Err(Error::InvalidConfig("exponents must not all be zero".into()));
        }
        Ok(())
    }
}

/// Word analysis echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WordSummary {
    pub canonical: String,
    pub cyclic_core: String,
    #[serde(flatten)]
    pub case: ReductionCase,
    pub universality: bool,
    pub base: String,
    pub d: usize,
}

pub fn summarize(w: &Word) -> Result<WordSummary> {
    let red = cyclic_reduce(w);
    if red.case == ReductionCase::Trivial {
        return Err(Error::EmptyWord);
    }
    let pd = power_decompose(w)?;
    Ok(WordSummary {
        canonical: w.to_string(),
        cyclic_core: red.core.to_string(),
        case: red.case,
        universality: red.is_universal(),
        base: pd.base.to_string(),
        d: pd.exponent,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportConfig {
    #[serde(flatten)]
    pub experiment: ExperimentConfig,
    #[serde(flatten)]
    pub word: WordSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub degree: usize,
    pub n_samples: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub reference: Option<f64>,
    pub zscore: Option<f64>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportMeta {
    pub seed: u64,
    pub version: String,
    pub walltime_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ReportConfig,
    pub rows: Vec<ReportRow>,
    pub meta: ReportMeta,
}

pub const CSV_HEADER: &str = "degree,n_samples,estimate,stderr,reference,zscore,exact";

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.degree,
                r.n_samples,
                r.estimate,
                r.stderr,
                opt(r.reference),
                opt(r.zscore),
                r.exact
            );
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }
}

fn monomial_exact(counts: &[usize], exponents: &[usize]) -> BigInt {
    exponents
        .iter()
        .zip(counts)
        .map(|(&p, &c)| BigInt::from(c).pow(p as u32))
        .product()
}

fn tuple_space_size(tuple: &TupleSpec) -> u128 {
    tuple
        .coordinates
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.support_size()))
}

/// Exact `E[Π_m (#_m w(σ))^{p_m}]` by enumerating the whole product space.
pub fn exact_moment(w: &Word, tuple: &TupleSpec, exponents: &[usize]) -> Result<BigRational> {
    if tuple.len() != w.num_generators() {
        return Err(Error::ArityMismatch {
            expected: w.num_generators(),
            found: tuple.len(),
        });
    }
    let size = tuple_space_size(tuple);
    if size > EXACT_TUPLE_CAP {
        return Err(Error::CapExceeded {
            size,
            cap: EXACT_TUPLE_CAP,
        });
    }
    let laws: Vec<Vec<(Permutation, BigRational)>> = tuple
        .coordinates
        .iter()
        .map(|c| c.exact_law())
        .collect::<Result<_>>()?;
    if laws.iter().any(|l| l.is_empty()) {
        return Ok(BigRational::zero());
    }
    let max = exponents.len();
    let mut idx = vec![0usize; laws.len()];
    let mut total = BigRational::zero();
    loop {
        let sigmas: Vec<Permutation> = idx.iter().zip(&laws).map(|(&i, l)| l[i].0.clone()).collect();
        let counts = w.evaluate(&sigmas)?.small_cycle_counts(max);
        let value = monomial_exact(&counts, exponents);
        if !value.is_zero() {
            let weight = idx
                .iter()
                .zip(&laws)
                .fold(BigRational::one(), |acc, (&i, l)| acc * &l[i].1);
            total += weight * BigRational::from_integer(value);
        }
        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(total);
            }
            idx[pos] += 1;
            if idx[pos] < laws[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Monte Carlo mean and standard error of the monomial at one degree.
pub fn estimate_at(
    w: &Word,
    tuple: &TupleSpec,
    exponents: &[usize],
    n_samples: u64,
    seed: u64,
) -> Result<mc::Estimate> {
    if tuple.len() != w.num_generators() {
        return Err(Error::ArityMismatch {
            expected: w.num_generators(),
            found: tuple.len(),
        });
    }
    if n_samples == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    let max = exponents.len();
    let key = [0x0045_5354_494d, tuple.degree() as u64];
    let parts = mc::run_chunks(n_samples, seed, &key, |rng, len| {
        let mut acc = Accumulator::default();
        for _ in 0..len {
            let sigmas = sample_tuple(tuple, rng);
            let image = w.evaluate(&sigmas).expect("arity checked");
            acc.push(crate::limit::monomial(&image.small_cycle_counts(max), exponents));
        }
        acc
    });
    Ok(parts
        .into_iter()
        .fold(Accumulator::default(), Accumulator::merge)
        .estimate())
}

fn version_tag() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

/// One report row per configured degree, Monte Carlo or exact per `mode`.
///
/// The reference is the limiting moment for `d = ` the power exponent of `w`
/// and is omitted when the word is a conjugate of a generator power.
pub fn estimate_moment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    config.validate()?;
    let (w, kinds) = config.resolve()?;
    let summary = summarize(&w)?;
    let reference = if summary.universality {
        let spec = LimitSpec::new(summary.d, config.moments.len())?;
        Some(limit_moment_exact(spec, &config.moments)?.to_f64().unwrap_or(f64::NAN))
    } else {
        None
    };
    let mut rows = Vec::with_capacity(config.degrees.len());
    for &n in &config.degrees {
        let tuple = TupleSpec::from_kinds(&kinds, n)?;
        let row = match config.mode {
            Mode::Exact => {
                let v = exact_moment(&w, &tuple, &config.moments)?;
                ReportRow {
                    degree: n,
                    n_samples: u64::try_from(tuple_space_size(&tuple)).unwrap_or(u64::MAX),
                    estimate: v.to_f64().unwrap_or(f64::NAN),
                    stderr: 0.0,
                    reference,
                    zscore: None,
                    exact: true,
                }
            }
            Mode::MonteCarlo => {
                let est = estimate_at(&w, &tuple, &config.moments, config.n_samples, config.seed)?;
                let zscore = reference
                    .filter(|_| est.stderr > 0.0)
                    .map(|r| (est.mean - r) / est.stderr);
                ReportRow {
                    degree: n,
                    n_samples: est.n_samples,
                    estimate: est.mean,
                    stderr: est.stderr,
                    reference,
                    zscore,
                    exact: false,
                }
            }
        };
        rows.push(row);
    }
    Ok(ExperimentReport {
        config: ReportConfig {
            experiment: config.clone(),
            word: summary,
        },
        rows,
        meta: ReportMeta {
            seed: config.seed,
            version: version_tag(),
            walltime_ms: started.elapsed().as_millis() as u64,
        },
    })
}

/// `estimate_moment` over the configured degree list, which must be non-empty.
pub fn convergence_scan(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.degrees.is_empty() {
        return Err(Error::InvalidConfig("degree list is empty".into()));
    }
    estimate_moment(config)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub counts: Vec<usize>,
    pub frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramRow {
    pub degree: usize,
    pub n_samples: u64,
    pub total_variation: f64,
    pub empirical: Vec<HistogramBin>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramReport {
    pub word: WordSummary,
    pub d_prime: usize,
    pub limit: Vec<HistogramBin>,
    pub rows: Vec<HistogramRow>,
}

fn bins(h: &BTreeMap<Vec<usize>, u64>) -> Vec<HistogramBin> {
    let total: u64 = h.values().sum();
    h.iter()
        .map(|(k, &v)| HistogramBin {
            counts: k.clone(),
            frequency: v as f64 / total as f64,
        })
        .collect()
}

/// Empirical histogram of `(#_1, …, #_{d'})` of `w(σ)` at each degree,
/// compared in total variation with `n_samples` draws from the limit law.
pub fn joint_distribution_histogram(config: &ExperimentConfig, d_prime: usize) -> Result<HistogramReport> {
    if config.degrees.is_empty() {
        return Err(Error::InvalidConfig("degree list is empty".into()));
    }
    if config.n_samples == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    let (w, kinds) = config.resolve()?;
    let summary = summarize(&w)?;
    let spec = LimitSpec::new(summary.d, d_prime)?;
    let limit = limit_histogram(spec, config.n_samples, config.seed);
    let mut rows = Vec::new();
    for &n in &config.degrees {
        let tuple = TupleSpec::from_kinds(&kinds, n)?;
        let key = [0x004a_4f49_4e54, n as u64];
        let parts = mc::run_chunks(config.n_samples, config.seed, &key, |rng, len| {
            let mut h: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for _ in 0..len {
                let sigmas = sample_tuple(&tuple, rng);
                let image = w.evaluate(&sigmas).expect("arity checked");
                *h.entry(image.small_cycle_counts(d_prime)).or_default() += 1;
            }
            h
        });
        let empirical = merge_histograms(parts);
        rows.push(HistogramRow {
            degree: n,
            n_samples: config.n_samples,
            total_variation: total_variation(&empirical, &limit),
            empirical: bins(&empirical),
        });
    }
    Ok(HistogramReport {
        word: summary,
        d_prime,
        limit: bins(&limit),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::SamplerSpec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn word(s: &str, k: usize) -> Word {
        parse_word(s, k).unwrap()
    }

    fn uniform(k: usize, n: usize) -> TupleSpec {
        TupleSpec::from_kinds(&vec![SamplerKind::Uniform; k], n).unwrap()
    }

    #[test]
    fn product_of_uniforms_has_one_fixed_point() {
        for n in 3..=5 {
            assert_eq!(exact_moment(&word("x1 x2", 2), &uniform(2, n), &[1]).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn products_of_three_cycles() {
        // class of (1 2 3) has two elements; products: id twice, a 3-cycle twice
        let kinds = vec![SamplerKind::ConjugacyClass("3".parse().unwrap()); 2];
        let tuple = TupleSpec::from_kinds(&kinds, 3).unwrap();
        assert_eq!(exact_moment(&word("x1 x2", 2), &tuple, &[1]).unwrap(), q(3, 2));
    }

    #[test]
    fn conjugation_leaves_moments_unchanged() {
        let t = uniform(2, 4);
        let a = exact_moment(&word("x1 x2 x1 x2^-1 x1^-1", 2), &t, &[1, 1]).unwrap();
        let b = exact_moment(&word("x2 x1 x2^-1", 2), &t, &[1, 1]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_cap() {
        assert!(matches!(
            exact_moment(&word("x1 x2", 2), &uniform(2, 6), &[1]),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            exact_moment(&word("x1 x2", 2), &uniform(3, 3), &[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn square_of_uniform() {
        // E[#_1(σ²)] = E[#_1] + 2E[#_2] = 2 once n >= 2
        let t = TupleSpec::new(vec![SamplerSpec::uniform(5)]).unwrap();
        assert_eq!(exact_moment(&word("x1^2", 1), &t, &[1]).unwrap(), q(2, 1));
    }

    #[test]
    fn resolve_broadcasts_samplers() {
        let cfg = ExperimentConfig::new("x1 x3", vec![SamplerKind::Uniform], vec![5]);
        let (w, kinds) = cfg.resolve().unwrap();
        assert_eq!(w.num_generators(), 3);
        assert_eq!(kinds.len(), 3);
        let cfg = ExperimentConfig::new("x1 x3", vec![SamplerKind::Uniform; 2], vec![5]);
        assert!(matches!(cfg.resolve(), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn report_shape() {
        let mut cfg = ExperimentConfig::new("x1x2", vec![SamplerKind::Uniform], vec![4, 5]);
        cfg.mode = Mode::Exact;
        let rep = estimate_moment(&cfg).unwrap();
        assert_eq!(rep.rows.len(), 2);
        assert!(rep.rows.iter().all(|r| r.exact && r.stderr == 0.0 && r.estimate == 1.0));
        assert_eq!(rep.rows[0].reference, Some(1.0));
        let csv = rep.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().nth(1).unwrap(), "4,576,1,0,1,,true");
        let json: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
        assert_eq!(json["config"]["universality"], true);
        assert_eq!(json["config"]["case"], "cyclically_reduced_mixed");
        assert!(json["meta"]["walltime_ms"].is_u64());
    }

    #[test]
    fn trivial_words_rejected_and_powers_flagged() {
        let cfg = ExperimentConfig::new("x1 x2 x2^-1 x1^-1", vec![SamplerKind::Uniform], vec![5]);
        assert!(matches!(estimate_moment(&cfg), Err(Error::EmptyWord)));
        let mut cfg = ExperimentConfig::new("x1 x2 x1^-1", vec![SamplerKind::Uniform], vec![6]);
        cfg.n_samples = 2000;
        let rep = estimate_moment(&cfg).unwrap();
        assert!(!rep.config.word.universality);
        assert_eq!(rep.rows[0].reference, None);
        assert_eq!(rep.rows[0].zscore, None);
    }

    #[test]
    fn seeds_determine_reports() {
        let mut cfg = ExperimentConfig::new("x1 x2^2", vec![SamplerKind::Uniform], vec![10, 20]);
        cfg.n_samples = 5000;
        cfg.seed = 11;
        let mut a = estimate_moment(&cfg).unwrap();
        let mut b = estimate_moment(&cfg).unwrap();
        a.meta.walltime_ms = 0;
        b.meta.walltime_ms = 0;
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        cfg.seed = 12;
        assert_ne!(estimate_moment(&cfg).unwrap().rows, a.rows);
    }

    #[test]
    fn empty_scan_is_an_error() {
        let cfg = ExperimentConfig::new("x1x2", vec![SamplerKind::Uniform], vec![]);
        assert!(convergence_scan(&cfg).is_err());
    }

    #[test]
    fn ncycle_has_no_fixed_points() {
        let mut cfg = ExperimentConfig::new("x1", vec![SamplerKind::NCycle], vec![30]);
        cfg.n_samples = 3000;
        let rep = joint_distribution_histogram(&cfg, 1).unwrap();
        assert_eq!(rep.rows[0].empirical.len(), 1);
        assert_eq!(rep.rows[0].empirical[0].counts, vec![0]);
        let again = joint_distribution_histogram(&cfg, 1).unwrap();
        assert_eq!(rep, again);
    }
}
