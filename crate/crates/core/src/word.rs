//! Free-group words: parsing, free and cyclic reduction, power detection and
//! evaluation on permutation tuples.
//!
//! Letters are stored in printed order, left to right. Evaluation applies them
//! right to left, so `x1 x2` maps a point `m` to `σ1(σ2(m))`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// 1-based generator index.
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word over `x1, …, xk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    num_generators: usize,
}

impl Word {
    pub fn identity(num_generators: usize) -> Self {
        Word {
            letters: Vec::new(),
            num_generators,
        }
    }

    /// Freely reduces `letters`.
    pub fn new(letters: impl IntoIterator<Item = Letter>, num_generators: usize) -> Result<Self> {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if l.generator == 0 || l.generator > num_generators {
                return Err(Error::GeneratorOutOfRange {
                    index: l.generator,
                    num_generators,
                });
            }
            if stack.last().is_some_and(|&top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Ok(Word {
            letters: stack,
            num_generators,
        })
    }

    /// `x_g^e` for nonzero `e`.
    pub fn generator_power(generator: usize, exponent: i64, num_generators: usize) -> Result<Self> {
        let l = Letter::new(generator, exponent < 0);
        Word::new(std::iter::repeat_n(l, exponent.unsigned_abs() as usize), num_generators)
    }

    pub fn parse(text: &str, num_generators: usize) -> Result<Self> {
        parse_word(text, num_generators)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    /// Letter count `r`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `r_j`: how many letters (either sign) use generator `j`.
    pub fn letter_count(&self, generator: usize) -> usize {
        self.letters.iter().filter(|l| l.generator == generator).count()
    }

    /// Largest generator index actually used.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.generator).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
            num_generators: self.num_generators,
        }
    }

    /// Freely reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let k = self.num_generators.max(other.num_generators);
        Word::new(self.letters.iter().chain(&other.letters).copied(), k)
            .expect("generators already validated")
    }

    pub fn pow(&self, d: usize) -> Word {
        (0..d).fold(Word::identity(self.num_generators), |acc, _| acc.concat(self))
    }

    /// Re-labels the word as living in `F_k` for a larger `k`.
    pub fn with_num_generators(&self, num_generators: usize) -> Result<Word> {
        Word::new(self.letters.iter().copied(), num_generators)
    }

    fn from_slice(letters: &[Letter], num_generators: usize) -> Word {
        Word {
            letters: letters.to_vec(),
            num_generators,
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) => self.letters.len() == 1 || !a.cancels(b),
            _ => true,
        }
    }

    /// Evaluates the word map on `sigmas` (one permutation per generator).
    pub fn evaluate(&self, sigmas: &[Permutation]) -> Result<Permutation> {
        let n = check_tuple(self, sigmas)?;
        let inverses = self.inverse_tables(sigmas);
        let mut cur: Vec<usize> = (0..n).collect();
        for l in self.letters.iter().rev() {
            let table = if l.inverse {
                inverses[l.generator - 1].as_ref().expect("built for used inverses")
            } else {
                sigmas[l.generator - 1].zero_based()
            };
            for v in cur.iter_mut() {
                *v = table[*v];
            }
        }
        Ok(Permutation::from_zero_based_unchecked(cur))
    }

    pub(crate) fn inverse_tables(&self, sigmas: &[Permutation]) -> Vec<Option<Vec<usize>>> {
        let mut out: Vec<Option<Vec<usize>>> = vec![None; sigmas.len()];
        for l in &self.letters {
            if l.inverse && out[l.generator - 1].is_none() {
                out[l.generator - 1] = Some(sigmas[l.generator - 1].inverse().zero_based().to_vec());
            }
        }
        out
    }
}

/// Validates a tuple against a word and returns the common degree.
pub(crate) fn check_tuple(w: &Word, sigmas: &[Permutation]) -> Result<usize> {
    if sigmas.len() != w.num_generators {
        return Err(Error::ArityMismatch {
            expected: w.num_generators,
            found: sigmas.len(),
        });
    }
    let n = sigmas.first().map(Permutation::degree).unwrap_or(0);
    for s in sigmas {
        if s.degree() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: s.degree(),
            });
        }
    }
    Ok(n)
}

impl fmt::Display for Word {
    /// Canonical printing, e.g. `x1^4 x2^-3 x3^2 x2^5`; the identity is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let runs = runs_of(&self.letters);
        let parts: Vec<String> = runs
            .iter()
            .map(|r| {
                if r.exponent == 1 {
                    format!("x{}", r.generator)
                } else {
                    format!("x{}^{}", r.generator, r.exponent)
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses the word grammar:
///
/// ```text
/// word := atom*
/// atom := "x" INT ("^" SINT)? | LETTER ("^" SINT)?
/// ```
///
/// `a..z` stand for `x1..x26` and `A..Z` for their inverses. A lone `1`
/// denotes the identity. The result is freely reduced.
pub fn parse_word(text: &str, num_generators: usize) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut letters = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    if text.trim() == "1" {
        return Ok(Word::identity(num_generators));
    }
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        let c = bytes[pos];
        let (generator, inverse) = if c == b'x' {
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Syntax {
                    pos,
                    msg: "expected generator index after `x`".into(),
                });
            }
            let idx: usize = text[start..pos].parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: "generator index too large".into(),
            })?;
            if idx == 0 {
                return Err(Error::Syntax {
                    pos: start,
                    msg: "generator indices start at 1".into(),
                });
            }
            (idx, false)
        } else if c.is_ascii_lowercase() {
            pos += 1;
            ((c - b'a') as usize + 1, false)
        } else if c.is_ascii_uppercase() {
            pos += 1;
            ((c - b'A') as usize + 1, true)
        } else {
            return Err(Error::Syntax {
                pos,
                msg: format!("unexpected character `{}`", text[pos..].chars().next().unwrap()),
            });
        };
        let mut exponent: i64 = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let start = pos;
            if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                pos += 1;
            }
            let digits = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if digits == pos {
                return Err(Error::Syntax {
                    pos,
                    msg: "expected integer exponent after `^`".into(),
                });
            }
            exponent = text[start..pos].parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            if exponent == 0 {
                return Err(Error::ZeroExponent { pos: start });
            }
        }
        if generator > num_generators {
            return Err(Error::GeneratorOutOfRange {
                index: generator,
                num_generators,
            });
        }
        let letter = Letter::new(generator, inverse != (exponent < 0));
        letters.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
    }
    Word::new(letters, num_generators)
}

/// One maximal block `x_α^β` of the run-length form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    pub generator: usize,
    pub exponent: i64,
}

/// Run-length (reduced) form `x_{α1}^{β1} ⋯ x_{αℓ}^{βℓ}` with `α_{i+1} ≠ α_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunForm {
    pub runs: Vec<Run>,
}

fn runs_of(letters: &[Letter]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for l in letters {
        match runs.last_mut() {
            Some(r) if r.generator == l.generator => r.exponent += l.sign(),
            _ => runs.push(Run {
                generator: l.generator,
                exponent: l.sign(),
            }),
        }
    }
    runs
}

pub fn run_form(w: &Word) -> Result<RunForm> {
    if w.is_identity() {
        return Err(Error::EmptyWord);
    }
    Ok(RunForm {
        runs: runs_of(&w.letters),
    })
}

/// `γ^i(w)`: absolute run exponents per generator, sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaProfile {
    pub per_generator: BTreeMap<usize, Vec<usize>>,
}

impl GammaProfile {
    pub fn get(&self, generator: usize) -> &[usize] {
        self.per_generator
            .get(&generator)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn total(&self) -> usize {
        self.per_generator.values().flatten().sum()
    }
}

pub fn gamma_profile(w: &Word) -> Result<GammaProfile> {
    let runs = run_form(w)?.runs;
    let mut per_generator: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in runs {
        per_generator
            .entry(r.generator)
            .or_default()
            .push(r.exponent.unsigned_abs() as usize);
    }
    for v in per_generator.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok(GammaProfile { per_generator })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ReductionCase {
    Trivial,
    ConjugatePowerOfGenerator { generator: usize, exponent: i64 },
    CyclicallyReducedMixed,
}

/// `w = conjugator · core · conjugator⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicReduction {
    pub conjugator: Word,
    pub core: Word,
    #[serde(flatten)]
    pub case: ReductionCase,
}

impl CyclicReduction {
    /// Whether the cycle structure of `w(σ)` has a universal small-cycle limit.
    pub fn is_universal(&self) -> bool {
        self.case == ReductionCase::CyclicallyReducedMixed
    }
}

/// Strips cancelling first/last letter pairs: `w = u · core · u⁻¹` with a
/// cyclically reduced core.
fn strip_conjugator(w: &Word) -> (Word, Word) {
    let letters = &w.letters;
    let mut lo = 0;
    let mut hi = letters.len();
    while hi - lo >= 2 && letters[lo].cancels(letters[hi - 1]) {
        lo += 1;
        hi -= 1;
    }
    (
        Word::from_slice(&letters[..lo], w.num_generators),
        Word::from_slice(&letters[lo..hi], w.num_generators),
    )
}

/// Classifies `w` up to conjugation.
///
/// The core is cyclically reduced; when it involves two or more generators it
/// is additionally rotated so that its first and last letters use different
/// generators.
pub fn cyclic_reduce(w: &Word) -> CyclicReduction {
    let k = w.num_generators;
    let (mut conjugator, core) = strip_conjugator(w);
    if core.is_identity() {
        return CyclicReduction {
            conjugator,
            core,
            case: ReductionCase::Trivial,
        };
    }
    let first = core.letters[0].generator;
    if core.letters.iter().all(|l| l.generator == first) {
        let exponent = core.letters.iter().map(|l| l.sign()).sum();
        return CyclicReduction {
            conjugator,
            core,
            case: ReductionCase::ConjugatePowerOfGenerator {
                generator: first,
                exponent,
            },
        };
    }
    let last = core.letters[core.len() - 1].generator;
    let mut core = core;
    if first == last {
        // core = head · tail with head the leading run; tail · head = head⁻¹ · core · head
        let split = core.letters.iter().position(|l| l.generator != first).unwrap();
        let head = Word::from_slice(&core.letters[..split], k);
        let mut rotated = core.letters[split..].to_vec();
        rotated.extend_from_slice(&core.letters[..split]);
        core = Word::new(rotated, k).expect("valid generators");
        conjugator = conjugator.concat(&head);
    }
    CyclicReduction {
        conjugator,
        core,
        case: ReductionCase::CyclicallyReducedMixed,
    }
}

/// `w = conjugator · Ω^d · conjugator⁻¹` with `Ω` not a proper power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerDecomposition {
    pub conjugator: Word,
    pub base: Word,
    pub exponent: usize,
}

/// Finds the maximal `d` with `core = Ω^d` as a letter sequence, where `core`
/// is `w` with its conjugating prefix and suffix stripped.
pub fn power_decompose(w: &Word) -> Result<PowerDecomposition> {
    if w.is_identity() {
        return Err(Error::EmptyWord);
    }
    let (conjugator, core) = strip_conjugator(w);
    let period = smallest_period(&core.letters);
    let r = core.len();
    let (base_len, exponent) = if r % period == 0 {
        (period, r / period)
    } else {
        (r, 1)
    };
    Ok(PowerDecomposition {
        conjugator,
        base: Word::from_slice(&core.letters[..base_len], w.num_generators),
        exponent,
    })
}

/// Smallest `p` such that `s[i] = s[i+p]` for all valid `i` (prefix function).
fn smallest_period<T: PartialEq>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    for i in 1..n {
        let mut k = fail[i - 1];
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}
