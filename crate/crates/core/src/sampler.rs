//! Conjugation-invariant random permutations.
//!
//! Every family here has a law that is constant on conjugacy classes:
//! uniform, a fixed class, Ewens(θ), and the `n`-cycle class.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mc;
use crate::numbers::factorial;
use crate::perm::{all_permutations, class_elements, Permutation};
use crate::young::YoungDiagram;

/// Largest support enumerated by exact laws (`8!`).
pub const EXACT_SUPPORT_CAP: u128 = 40_320;

#[derive(Clone, Debug, PartialEq)]
pub enum SamplerKind {
    Uniform,
    ConjugacyClass(YoungDiagram),
    Ewens(f64),
    NCycle,
}

impl SamplerKind {
    /// Checks the kind against a degree.
    pub fn validate(&self, degree: usize) -> Result<()> {
        match self {
            SamplerKind::ConjugacyClass(ty) if ty.size() != degree => Err(Error::InvalidSampler(
                format!("cycle type {ty} does not sum to n = {degree}"),
            )),
            SamplerKind::Ewens(theta) if !(theta.is_finite() && *theta > 0.0) => Err(
                Error::InvalidSampler(format!("Ewens parameter must be positive, got {theta}")),
            ),
            SamplerKind::NCycle if degree == 0 => {
                Err(Error::InvalidSampler("n-cycle needs n >= 1".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerKind::Uniform => f.write_str("uniform"),
            SamplerKind::ConjugacyClass(ty) => write!(f, "class:{ty}"),
            SamplerKind::Ewens(theta) => write!(f, "ewens:{theta}"),
            SamplerKind::NCycle => f.write_str("ncycle"),
        }
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    /// `uniform`, `class:3,2,1`, `ewens:0.5` or `ncycle`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("uniform", None) => Ok(SamplerKind::Uniform),
            ("ncycle", None) => Ok(SamplerKind::NCycle),
            ("class", Some(a)) => {
                let ty: YoungDiagram = a.parse()?;
                if ty.is_empty() {
                    return Err(Error::InvalidSampler("empty cycle type".into()));
                }
                Ok(SamplerKind::ConjugacyClass(ty))
            }
            ("ewens", Some(a)) => {
                let theta: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidSampler(format!("bad Ewens parameter `{a}`")))?;
                if !(theta.is_finite() && theta > 0.0) {
                    return Err(Error::InvalidSampler(format!(
                        "Ewens parameter must be positive, got {theta}"
                    )));
                }
                Ok(SamplerKind::Ewens(theta))
            }
            _ => Err(Error::InvalidSampler(format!("unknown sampler `{s}`"))),
        }
    }
}

impl Serialize for SamplerKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub degree: usize,
}

impl SamplerSpec {
    pub fn new(kind: SamplerKind, degree: usize) -> Result<Self> {
        kind.validate(degree)?;
        Ok(SamplerSpec { kind, degree })
    }

    pub fn uniform(degree: usize) -> Self {
        SamplerSpec {
            kind: SamplerKind::Uniform,
            degree,
        }
    }

    /// The cycle type when the law is supported on one class.
    fn class_type(&self) -> Option<YoungDiagram> {
        match &self.kind {
            SamplerKind::ConjugacyClass(ty) => Some(ty.clone()),
            SamplerKind::NCycle => Some(YoungDiagram::new(vec![self.degree]).expect("n >= 1")),
            _ => None,
        }
    }

    /// Size of the support.
    pub fn support_size(&self) -> u128 {
        let n_fact = u128::try_from(factorial(self.degree)).unwrap_or(u128::MAX);
        match self.class_type() {
            Some(ty) => {
                // n! / z_λ with z_λ = Π_L L^{m_L} m_L!
                let mut z: u128 = 1;
                let mut rows = ty.rows().to_vec();
                rows.dedup();
                for len in rows {
                    let m = ty.rows().iter().filter(|&&r| r == len).count();
                    z = z.saturating_mul((len as u128).saturating_pow(m as u32));
                    z = z.saturating_mul(u128::try_from(factorial(m)).unwrap_or(u128::MAX));
                }
                n_fact / z
            }
            None => n_fact,
        }
    }

    /// Every permutation in the support with its exact probability.
    pub fn exact_law(&self) -> Result<Vec<(Permutation, BigRational)>> {
        let size = self.support_size();
        if size > EXACT_SUPPORT_CAP {
            return Err(Error::CapExceeded {
                size,
                cap: EXACT_SUPPORT_CAP,
            });
        }
        let n = self.degree;
        match &self.kind {
            SamplerKind::Uniform => {
                let p = BigRational::new(BigInt::one(), BigInt::from(factorial(n)));
                Ok(all_permutations(n).map(|s| (s, p.clone())).collect())
            }
            SamplerKind::ConjugacyClass(_) | SamplerKind::NCycle => {
                let elems = class_elements(&self.class_type().expect("class law"));
                let p = BigRational::new(BigInt::one(), BigInt::from(elems.len()));
                Ok(elems.into_iter().map(|s| (s, p.clone())).collect())
            }
            SamplerKind::Ewens(theta) => {
                // P(σ) = θ^{cycles(σ)} / (θ (θ+1) ⋯ (θ+n-1))
                let theta = BigRational::from_float(*theta)
                    .ok_or_else(|| Error::InvalidSampler("non-finite Ewens parameter".into()))?;
                let rising = (0..n).fold(BigRational::one(), |acc, i| {
                    acc * (&theta + BigRational::from_integer(BigInt::from(i)))
                });
                let mut powers = vec![BigRational::one()];
                for i in 1..=n {
                    powers.push(&powers[i - 1] * &theta);
                }
                Ok(all_permutations(n)
                    .map(|s| {
                        let c = s.cycle_lengths().len();
                        let p = &powers[c] / &rising;
                        (s, p)
                    })
                    .collect())
            }
        }
    }
}

/// Draws one permutation from `spec`.
pub fn sample<R: Rng + ?Sized>(spec: &SamplerSpec, rng: &mut R) -> Permutation {
    let n = spec.degree;
    match &spec.kind {
        SamplerKind::Uniform => {
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(rng);
            Permutation::from_zero_based_unchecked(images)
        }
        SamplerKind::ConjugacyClass(ty) => fill_cycle_template(ty.rows(), n, rng),
        SamplerKind::NCycle => fill_cycle_template(&[n], n, rng),
        SamplerKind::Ewens(theta) => sample_ewens(*theta, n, rng),
    }
}

/// Writes a uniform arrangement of the points into consecutive cycle slots.
fn fill_cycle_template<R: Rng + ?Sized>(rows: &[usize], n: usize, rng: &mut R) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut images = vec![0; n];
    let mut start = 0;
    for &len in rows {
        let cycle = &order[start..start + len];
        for i in 0..len {
            images[cycle[i]] = cycle[(i + 1) % len];
        }
        start += len;
    }
    Permutation::from_zero_based_unchecked(images)
}

/// Sequential insertion: point `j` opens a new cycle with probability
/// `θ/(θ+j-1)`, otherwise it is inserted right after a uniform earlier point.
fn sample_ewens<R: Rng + ?Sized>(theta: f64, n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = Vec::with_capacity(n);
    for j in 0..n {
        let open = rng.gen::<f64>() * (theta + j as f64) < theta;
        if open {
            images.push(j);
        } else {
            let i = rng.gen_range(0..j);
            images.push(images[i]);
            images[i] = j;
        }
    }
    Permutation::from_zero_based_unchecked(images)
}

/// Independent coordinates sharing a degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TupleSpec {
    pub coordinates: Vec<SamplerSpec>,
}

impl TupleSpec {
    pub fn new(coordinates: Vec<SamplerSpec>) -> Result<Self> {
        if let Some(first) = coordinates.first() {
            for c in &coordinates {
                if c.degree != first.degree {
                    return Err(Error::DegreeMismatch {
                        expected: first.degree,
                        found: c.degree,
                    });
                }
            }
        }
        Ok(TupleSpec { coordinates })
    }

    /// Instantiates `kinds` at degree `n`.
    pub fn from_kinds(kinds: &[SamplerKind], n: usize) -> Result<Self> {
        let coords = kinds
            .iter()
            .map(|k| SamplerSpec::new(k.clone(), n))
            .collect::<Result<Vec<_>>>()?;
        TupleSpec::new(coords)
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coordinates.first().map(|c| c.degree).unwrap_or(0)
    }
}

/// Draws a tuple; each coordinate uses its own sub-stream seeded from `rng`.
pub fn sample_tuple<R: RngCore + ?Sized>(spec: &TupleSpec, rng: &mut R) -> Vec<Permutation> {
    spec.coordinates
        .iter()
        .map(|c| {
            let mut sub = ChaCha8Rng::seed_from_u64(rng.next_u64());
            sample(c, &mut sub)
        })
        .collect()
}

/// Monte Carlo estimate of `E[Π_i #_{c_i}(σ)]` at one degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub sampler: SamplerKind,
    pub cycle_lengths: Vec<usize>,
    pub degree: usize,
    pub sample_mean: f64,
    pub standard_error: f64,
    pub sample_count: u64,
}

/// Estimates the moment `E[Π_i #_{c_i}(σ_n)]` at each degree. Boundedness in
/// `n` is for the caller to judge from the scan.
pub fn check_hypothesis(
    kind: &SamplerKind,
    cycle_lengths: &[usize],
    degrees: &[usize],
    n_samples: u64,
    seed: u64,
) -> Result<Vec<HypothesisReport>> {
    if n_samples == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    if cycle_lengths.contains(&0) {
        return Err(Error::InvalidConfig("cycle lengths must be positive".into()));
    }
    let max = cycle_lengths.iter().copied().max().unwrap_or(0);
    degrees
        .iter()
        .map(|&n| {
            let spec = SamplerSpec::new(kind.clone(), n)?;
            let est = mc::estimate_mean(n_samples, seed, &[0x4859_5054, n as u64], |rng| {
                let counts = sample(&spec, rng).small_cycle_counts(max);
                cycle_lengths.iter().map(|&c| counts[c - 1] as f64).product()
            });
            Ok(HypothesisReport {
                sampler: kind.clone(),
                cycle_lengths: cycle_lengths.to_vec(),
                degree: n,
                sample_mean: est.mean,
                standard_error: est.stderr,
                sample_count: est.n_samples,
            })
        })
        .collect()
}

/// Exact `E[f(σ)]` under `spec`.
pub fn exact_expectation<F>(spec: &SamplerSpec, f: F) -> Result<BigRational>
where
    F: Fn(&Permutation) -> BigRational,
{
    Ok(spec
        .exact_law()?
        .iter()
        .fold(BigRational::zero(), |acc, (s, p)| acc + f(s) * p))
}
