//! Permutations of `{1, …, n}` and their cycle statistics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::young::YoungDiagram;

/// A permutation in one-line form.
///
/// Stored 0-based; every public method speaks 1-based points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds from 1-based images: `images[j-1] = σ(j)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let zero_based = images
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or_else(|| Error::InvalidPermutation("point 0 in one-line form".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_zero_based(zero_based)
    }

    /// Builds from 0-based images, validating bijectivity.
    pub fn from_zero_based(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "images are not a bijection of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_zero_based_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_zero_based(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds from disjoint cycles of 1-based points on `{1, …, n}`.
    pub fn from_cycles(cycles: &[Vec<usize>], n: usize) -> Result<Self> {
        let mut images: Vec<Option<usize>> = vec![None; n];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                let q = cycle[(i + 1) % cycle.len()];
                if p == 0 || p > n || q == 0 || q > n {
                    return Err(Error::PointOutOfRange {
                        point: p.max(q),
                        degree: n,
                    });
                }
                if images[p - 1].is_some() {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears twice"
                    )));
                }
                images[p - 1] = Some(q - 1);
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.unwrap_or(i))
            .collect();
        Self::from_zero_based(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `σ(j)` for a 1-based point. Panics when `j` is out of range.
    pub fn apply(&self, j: usize) -> usize {
        self.images[j - 1] + 1
    }

    pub fn try_apply(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.degree() {
            return Err(Error::PointOutOfRange {
                point: j,
                degree: self.degree(),
            });
        }
        Ok(self.apply(j))
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.images
    }

    /// 1-based one-line form.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(())
    }

    /// `self ∘ other`, i.e. `j ↦ self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `σ^j` by binary exponentiation; negative exponents invert first.
    pub fn pow(&self, j: i64) -> Permutation {
        let mut base = if j < 0 { self.inverse() } else { self.clone() };
        let mut e = j.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same degree");
            }
            base = base.compose(&base).expect("same degree");
            e >>= 1;
        }
        acc
    }

    /// `τ⁻¹ ∘ σ ∘ τ`.
    pub fn conjugate(&self, tau: &Permutation) -> Result<Permutation> {
        tau.inverse().compose(&self.compose(tau)?)
    }

    /// Disjoint cycles (fixed points included), each listed from its smallest
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Length of every cycle, in order of the smallest point.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                len += 1;
                j = self.images[j];
            }
            out.push(len);
        }
        out
    }

    pub fn cycle_type(&self) -> YoungDiagram {
        YoungDiagram::from_unsorted(self.cycle_lengths()).expect("cycle lengths are positive")
    }

    pub fn cycle_stats(&self) -> CycleStats {
        let mut counts = BTreeMap::new();
        for len in self.cycle_lengths() {
            *counts.entry(len).or_insert(0) += 1;
        }
        CycleStats { counts }
    }

    /// `#_ℓ σ`, the number of cycles of length `len`.
    pub fn count_cycles(&self, len: usize) -> usize {
        self.cycle_lengths().into_iter().filter(|&l| l == len).count()
    }

    /// `(#_1 σ, …, #_max σ)`.
    pub fn small_cycle_counts(&self, max: usize) -> Vec<usize> {
        let mut counts = vec![0; max];
        for len in self.cycle_lengths() {
            if len <= max {
                counts[len - 1] += 1;
            }
        }
        counts
    }

    /// `c_j(σ)`, the length of the cycle through the 1-based point `j`.
    pub fn cycle_length_at(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.degree() {
            return Err(Error::PointOutOfRange {
                point: j,
                degree: self.degree(),
            });
        }
        let start = j - 1;
        let mut len = 1;
        let mut k = self.images[start];
        while k != start {
            len += 1;
            k = self.images[k];
        }
        Ok(len)
    }

    /// Parses cycle notation with an explicit degree.
    pub fn parse_with_degree(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let p = parse_one_line(s)?;
            if p.degree() != n {
                return Err(Error::DegreeMismatch {
                    expected: n,
                    found: p.degree(),
                });
            }
            return Ok(p);
        }
        Self::from_cycles(&parse_cycles(s)?, n)
    }
}

fn parse_one_line(s: &str) -> Result<Permutation> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::InvalidPermutation(format!("malformed one-line form `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Permutation::identity(0));
    }
    let images = inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidPermutation(format!("bad point `{}`", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_images(&images)
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::InvalidPermutation(format!("expected `(` in `{s}`")))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in `{s}`")))?;
        let body = &body_start[..close];
        let cycle = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad point `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `[2,3,1,5,4]` or cycle notation `(1 2 3)(4 5)`; for cycle
    /// notation the degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            return parse_one_line(s);
        }
        let cycles = parse_cycles(s)?;
        let n = cycles.iter().flatten().copied().max().unwrap_or(0);
        Permutation::from_cycles(&cycles, n)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles() {
            if cycle.len() > 1 {
                any = true;
                let pts: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", pts.join(" "))?;
            }
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.images.iter().map(|v| v + 1))
    }
}

/// `ℓ ↦ #_ℓ σ` for lengths that occur.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleStats {
    pub counts: BTreeMap<usize, usize>,
}

impl CycleStats {
    pub fn get(&self, len: usize) -> usize {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.counts.iter().map(|(l, c)| l * c).sum()
    }
}

/// Lexicographic successor of a 0-based arrangement; false at the last one.
pub(crate) fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Every element of `S_n` in lexicographic order of one-line form.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut state: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let current = state.take()?;
        let mut next = current.clone();
        if next_permutation(&mut next) {
            state = Some(next);
        }
        Some(Permutation { images: current })
    })
}

/// Every permutation of the given cycle type, each exactly once.
///
/// Cycles are generated in order of their smallest point, so equal-length
/// cycles are never produced twice.
pub fn class_elements(cycle_type: &YoungDiagram) -> Vec<Permutation> {
    let n = cycle_type.size();
    let mut lengths: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in cycle_type.rows() {
        *lengths.entry(r).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; n];
    class_rec(&mut images, &mut lengths, &mut out);
    out
}

fn class_rec(images: &mut Vec<usize>, lengths: &mut BTreeMap<usize, usize>, out: &mut Vec<Permutation>) {
    let Some(start) = images.iter().position(|&v| v == usize::MAX) else {
        out.push(Permutation {
            images: images.clone(),
        });
        return;
    };
    let choices: Vec<usize> = lengths
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(&l, _)| l)
        .collect();
    for len in choices {
        *lengths.get_mut(&len).unwrap() -= 1;
        let mut cycle = vec![start];
        // mark start as taken while choosing the rest
        images[start] = start;
        extend_cycle(images, &mut cycle, len, lengths, out);
        images[start] = usize::MAX;
        *lengths.get_mut(&len).unwrap() += 1;
    }
}

fn extend_cycle(
    images: &mut Vec<usize>,
    cycle: &mut Vec<usize>,
    len: usize,
    lengths: &mut BTreeMap<usize, usize>,
    out: &mut Vec<Permutation>,
) {
    if cycle.len() == len {
        for i in 0..len {
            images[cycle[i]] = cycle[(i + 1) % len];
        }
        class_rec(images, lengths, out);
        for &p in cycle.iter() {
            images[p] = usize::MAX;
        }
        images[cycle[0]] = cycle[0];
        return;
    }
    for p in cycle[0] + 1..images.len() {
        if images[p] == usize::MAX {
            images[p] = p;
            cycle.push(p);
            extend_cycle(images, cycle, len, lengths, out);
            cycle.pop();
            images[p] = usize::MAX;
        }
    }
}
