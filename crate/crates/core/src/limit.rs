//! The universal small-cycle limit for `w = Ω^d`.
//!
//! The limit is realized through the single-letter representative `x1^d`: a
//! uniform permutation has asymptotically independent `ξ_L ~ Poisson(1/L)`
//! cycle counts, and the `d`-th power splits each `L`-cycle into `gcd(L, d)`
//! cycles of length `L / gcd(L, d)`. Hence
//! `#_m = Σ_{L : L/gcd(L,d) = m} gcd(L,d) · ξ_L`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mc::{self, Estimate};
use crate::numbers::{binomial, divisors, gcd, stirling2_row};

/// Number of divisors of `d`.
pub fn psi(d: usize) -> usize {
    divisors(d).len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LimitSpec {
    pub d: usize,
    pub d_prime: usize,
}

impl LimitSpec {
    pub fn new(d: usize, d_prime: usize) -> Result<Self> {
        if d == 0 || d_prime == 0 {
            return Err(Error::InvalidConfig("d and d' must be positive".into()));
        }
        Ok(LimitSpec { d, d_prime })
    }
}

/// One contributing cycle length `L` and the number of `m`-cycles it splits into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub source_len: usize,
    pub multiplier: usize,
}

/// `rows[m-1]` lists every `(L, g)` with `g | d`, `L = m·g`, `gcd(L, d) = g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitTable {
    pub d: usize,
    pub rows: Vec<Vec<Split>>,
}

impl SplitTable {
    pub fn row(&self, m: usize) -> &[Split] {
        &self.rows[m - 1]
    }

    /// Predicted `#_m(σ^d)` from the cycle counts `#_L(σ)` (`counts[L-1]`).
    pub fn predict(&self, m: usize, counts: &[usize]) -> usize {
        self.row(m)
            .iter()
            .map(|s| s.multiplier * counts.get(s.source_len - 1).copied().unwrap_or(0))
            .sum()
    }

    /// Largest source length appearing in the table.
    pub fn max_source_len(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .map(|s| s.source_len)
            .max()
            .unwrap_or(0)
    }
}

pub fn split_table(spec: LimitSpec) -> SplitTable {
    let divs = divisors(spec.d);
    let rows = (1..=spec.d_prime)
        .map(|m| {
            divs.iter()
                .filter(|&&g| gcd(m * g, spec.d) == g)
                .map(|&g| Split {
                    source_len: m * g,
                    multiplier: g,
                })
                .collect()
        })
        .collect();
    SplitTable { d: spec.d, rows }
}

/// Poisson draw by sequential inversion; meant for small rates.
pub fn sample_poisson<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut k = 0;
    let mut p = (-rate).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= rate / k as f64;
        let next = cdf + p;
        if next == cdf {
            break;
        }
        cdf = next;
    }
    k
}

/// One draw of `(#_1, …, #_{d'})` from the limit law.
pub fn sample_limit<R: Rng + ?Sized>(spec: LimitSpec, rng: &mut R) -> Vec<usize> {
    sample_with_table(&split_table(spec), rng)
}

pub(crate) fn sample_with_table<R: Rng + ?Sized>(table: &SplitTable, rng: &mut R) -> Vec<usize> {
    table
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| s.multiplier * sample_poisson(1.0 / s.source_len as f64, rng))
                .sum()
        })
        .collect()
}

fn rational(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `E[ξ^a]` for `ξ ~ Poisson(rate)`: `Σ_j S(a, j) rate^j`.
fn poisson_raw_moment(a: usize, rate: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut power = BigRational::one();
    for s in stirling2_row(a) {
        acc += BigRational::from_integer(BigInt::from(s)) * &power;
        power *= rate;
    }
    acc
}

/// `E[(Σ_i g_i ξ_i)^p]` for independent `ξ_i ~ Poisson(1/L_i)`.
fn weighted_sum_moment(row: &[Split], p: usize) -> BigRational {
    if p == 0 {
        return BigRational::one();
    }
    let Some((first, rest)) = row.split_first() else {
        return BigRational::zero();
    };
    let rate = BigRational::new(BigInt::one(), BigInt::from(first.source_len));
    let g = rational(first.multiplier);
    let mut acc = BigRational::zero();
    // binomial split of the power between the first term and the rest
    for a in 0..=p {
        let head = poisson_raw_moment(a, &rate) * num_traits::pow(g.clone(), a);
        let tail = weighted_sum_moment(rest, p - a);
        acc += BigRational::from_integer(BigInt::from(binomial(p, a))) * head * tail;
    }
    acc
}

/// Exact `E[Π_m (#_m)^{p_m}]` under the limit law; `exponents[m-1] = p_m`.
pub fn limit_moment_exact(spec: LimitSpec, exponents: &[usize]) -> Result<BigRational> {
    check_exponents(spec, exponents)?;
    let table = split_table(spec);
    // each ξ_L feeds exactly one coordinate, so coordinates are independent
    Ok(exponents
        .iter()
        .enumerate()
        .map(|(i, &p)| weighted_sum_moment(table.row(i + 1), p))
        .fold(BigRational::one(), |acc, v| acc * v))
}

pub fn limit_moment_monte_carlo(
    spec: LimitSpec,
    exponents: &[usize],
    n_samples: u64,
    seed: u64,
) -> Result<Estimate> {
    check_exponents(spec, exponents)?;
    if n_samples == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    let table = split_table(spec);
    Ok(mc::estimate_mean(n_samples, seed, &[0x004c_494d_4954], |rng| {
        let draw = sample_with_table(&table, rng);
        monomial(&draw, exponents)
    }))
}

fn check_exponents(spec: LimitSpec, exponents: &[usize]) -> Result<()> {
    if exponents.len() > spec.d_prime {
        return Err(Error::InvalidConfig(format!(
            "{} exponents given for d' = {}",
            exponents.len(),
            spec.d_prime
        )));
    }
    if exponents.iter().all(|&p| p == 0) {
        return Err(Error::InvalidConfig("exponents must not all be zero".into()));
    }
    Ok(())
}

/// `Π_m counts[m-1]^{p_m}` as a float.
pub fn monomial(counts: &[usize], exponents: &[usize]) -> f64 {
    exponents
        .iter()
        .zip(counts)
        .map(|(&p, &c)| (c as f64).powi(p as i32))
        .product()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MomentValue {
    Exact { value: String, decimal: f64 },
    MonteCarlo(Estimate),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentMethod {
    Exact,
    MonteCarlo { n_samples: u64, seed: u64 },
}

impl MomentValue {
    pub fn exact(v: &BigRational) -> Self {
        MomentValue::Exact {
            value: v.to_string(),
            decimal: v.to_f64().unwrap_or(f64::NAN),
        }
    }
}

pub fn limit_moment(spec: LimitSpec, exponents: &[usize], method: MomentMethod) -> Result<MomentValue> {
    match method {
        MomentMethod::Exact => Ok(MomentValue::exact(&limit_moment_exact(spec, exponents)?)),
        MomentMethod::MonteCarlo { n_samples, seed } => Ok(MomentValue::MonteCarlo(
            limit_moment_monte_carlo(spec, exponents, n_samples, seed)?,
        )),
    }
}

/// Empirical joint histogram of `n_samples` limit draws.
pub fn limit_histogram(spec: LimitSpec, n_samples: u64, seed: u64) -> BTreeMap<Vec<usize>, u64> {
    let table = split_table(spec);
    let parts = mc::run_chunks(n_samples, seed, &[0x4849_5354], |rng, len| {
        let mut h: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for _ in 0..len {
            *h.entry(sample_with_table(&table, rng)).or_default() += 1;
        }
        h
    });
    merge_histograms(parts)
}

pub(crate) fn merge_histograms(parts: Vec<BTreeMap<Vec<usize>, u64>>) -> BTreeMap<Vec<usize>, u64> {
    let mut total = BTreeMap::new();
    for part in parts {
        for (k, v) in part {
            *total.entry(k).or_default() += v;
        }
    }
    total
}

/// Total-variation distance between two count histograms.
pub fn total_variation(a: &BTreeMap<Vec<usize>, u64>, b: &BTreeMap<Vec<usize>, u64>) -> f64 {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let keys: std::collections::BTreeSet<&Vec<usize>> = a.keys().chain(b.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|k| {
            let pa = a.get(k).copied().unwrap_or(0) as f64 / na as f64;
            let pb = b.get(k).copied().unwrap_or(0) as f64 / nb as f64;
            (pa - pb).abs()
        })
        .sum::<f64>()
}
