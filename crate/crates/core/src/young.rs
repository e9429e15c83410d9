//! Young diagrams as row multisets, admissible fillings and partition counts.
//!
//! A diagram doubles as the cycle type of a permutation. Containment `μ ⊂ λ`
//! means `μ` is obtained from `λ` by deleting whole rows.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numbers::falling_factorial;
use crate::perm::Permutation;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    /// Validates that `rows` is weakly decreasing and positive.
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::InvalidDiagram("rows must be positive".into()));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(format!(
                "rows {rows:?} are not weakly decreasing"
            )));
        }
        Ok(YoungDiagram { rows })
    }

    /// Sorts arbitrary positive row lengths into diagram order.
    pub fn from_unsorted(mut rows: Vec<usize>) -> Result<Self> {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(rows)
    }

    pub fn empty() -> Self {
        YoungDiagram::default()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Number of rows, `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of boxes, `|λ|`.
    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &r in &self.rows {
            *m.entry(r).or_insert(0) += 1;
        }
        m
    }

    /// `mu ⊂ self`: the rows of `mu` form a sub-multiset of the rows of `self`.
    pub fn contains(&self, mu: &YoungDiagram) -> bool {
        let mine = self.multiplicities();
        mu.multiplicities()
            .iter()
            .all(|(row, &count)| mine.get(row).copied().unwrap_or(0) >= count)
    }

    /// Every distinct diagram obtained by deleting rows, including `∅` and `self`.
    pub fn sub_diagrams(&self) -> Vec<YoungDiagram> {
        let groups: Vec<(usize, usize)> = self.multiplicities().into_iter().rev().collect();
        let mut out = vec![Vec::new()];
        for (row, count) in groups {
            let mut next = Vec::with_capacity(out.len() * (count + 1));
            for prefix in &out {
                for take in 0..=count {
                    let mut rows: Vec<usize> = prefix.clone();
                    rows.extend(std::iter::repeat_n(row, take));
                    next.push(rows);
                }
            }
            out = next;
        }
        out.into_iter().map(|rows| YoungDiagram { rows }).collect()
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for YoungDiagram {
    type Err = Error;

    /// Parses `3,3,1`; the empty string and `0` denote the empty diagram.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" || s == "∅" {
            return Ok(YoungDiagram::empty());
        }
        let rows = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidDiagram(format!("bad row `{}`", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        YoungDiagram::from_unsorted(rows)
    }
}

/// `K_{λ,μ,n}` in factored form `coefficient · (n-ℓ(λ))! / (n-|μ|)!`.
///
/// The entries `1..=ℓ(λ)` ("small" entries) are placed explicitly; every
/// remaining box takes a distinct entry from `ℓ(λ)+1..=n`, and these large
/// entries are unconstrained, which produces the falling factorial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillingCount {
    pub coefficient: u64,
    pub small_entries: usize,
    pub boxes: usize,
}

impl FillingCount {
    pub fn eval(&self, n: usize) -> BigUint {
        if self.coefficient == 0 || n < self.small_entries {
            return BigUint::zero();
        }
        BigUint::from(self.coefficient)
            * falling_factorial(n - self.small_entries, self.boxes - self.small_entries)
    }
}

/// Counts admissible fillings of type `(λ, μ, n)`.
///
/// A filling places distinct entries of `1..=n` in the boxes of `μ` such that
/// the first column increases, each row starts with its smallest entry, every
/// `i <= ℓ(λ)` lies in a row of length `λ_i`, and every row holds at least one
/// entry `<= ℓ(λ)` (rows are the cycles through the marked points).
pub fn admissible_fillings_count(
    lambda: &YoungDiagram,
    mu: &YoungDiagram,
    n: usize,
) -> Result<FillingCount> {
    if !lambda.contains(mu) {
        return Err(Error::NotContained {
            lambda: lambda.to_string(),
            mu: mu.to_string(),
        });
    }
    if n < lambda.len() {
        return Err(Error::DegreeTooSmall {
            n,
            needed: lambda.len(),
        });
    }
    Ok(FillingCount {
        coefficient: small_entry_placements(lambda, mu),
        small_entries: lambda.len(),
        boxes: mu.size(),
    })
}

/// Number of ways to distribute `1..=ℓ(λ)` into the rows of `μ`.
///
/// Entries are grouped by their required row length. Within a group of `c`
/// entries destined for the `r` rows of length `L`, we split the entries into
/// exactly `r` non-empty blocks of size `<= L`; the block minimum heads the
/// row and the other `b-1` entries pick ordered slots among `L-1`.
fn small_entry_placements(lambda: &YoungDiagram, mu: &YoungDiagram) -> u64 {
    let want = lambda.multiplicities();
    let have = mu.multiplicities();
    let mut total = 1u64;
    for (&len, &entries) in &want {
        let rows = have.get(&len).copied().unwrap_or(0);
        total *= block_placements(entries, rows, len);
        if total == 0 {
            return 0;
        }
    }
    total
}

/// Set partitions of `entries` labelled items into exactly `rows` unlabeled
/// blocks, each of size `<= len`, weighted by `(len-1)!/(len-b)!` per block.
fn block_placements(entries: usize, rows: usize, len: usize) -> u64 {
    // items arrive in increasing order: each opens a new block (becoming its
    // minimum) or joins an open block with spare room
    fn go(remaining: usize, open: &mut Vec<usize>, rows: usize, len: usize) -> u64 {
        if remaining == 0 {
            if open.len() != rows {
                return 0;
            }
            return open
                .iter()
                .map(|&b| ((len - b + 1)..len).product::<usize>() as u64)
                .product();
        }
        let mut acc = 0;
        if open.len() < rows {
            open.push(1);
            acc += go(remaining - 1, open, rows, len);
            open.pop();
        }
        for i in 0..open.len() {
            if open[i] < len {
                open[i] += 1;
                acc += go(remaining - 1, open, rows, len);
                open[i] -= 1;
            }
        }
        acc
    }
    if rows > entries {
        return 0;
    }
    go(entries, &mut Vec::new(), rows, len)
}

/// Direct enumeration of admissible fillings with entries in `1..=n`.
///
/// Exponential; intended as a cross-check for small diagrams.
pub fn count_fillings_by_enumeration(lambda: &YoungDiagram, mu: &YoungDiagram, n: usize) -> Result<u64> {
    if !lambda.contains(mu) {
        return Err(Error::NotContained {
            lambda: lambda.to_string(),
            mu: mu.to_string(),
        });
    }
    let size = crate::numbers::falling_factorial(n, mu.size());
    let cap = BigUint::from(5_000_000u32);
    if size > cap {
        return Err(Error::CapExceeded {
            size: u128::try_from(&size).unwrap_or(u128::MAX),
            cap: 5_000_000,
        });
    }
    let boxes = mu.size();
    let mut used = vec![false; n + 1];
    let mut entries = Vec::with_capacity(boxes);
    let mut count = 0;
    enumerate_fillings(n, boxes, &mut used, &mut entries, &mut |flat| {
        let rows = split_rows(flat, mu.rows());
        if is_admissible(&rows, lambda) {
            count += 1;
        }
    });
    Ok(count)
}

fn enumerate_fillings(
    n: usize,
    boxes: usize,
    used: &mut [bool],
    entries: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if entries.len() == boxes {
        visit(entries);
        return;
    }
    for v in 1..=n {
        if !used[v] {
            used[v] = true;
            entries.push(v);
            enumerate_fillings(n, boxes, used, entries, visit);
            entries.pop();
            used[v] = false;
        }
    }
}

fn split_rows<'a>(flat: &'a [usize], shape: &[usize]) -> Vec<&'a [usize]> {
    let mut out = Vec::with_capacity(shape.len());
    let mut start = 0;
    for &len in shape {
        out.push(&flat[start..start + len]);
        start += len;
    }
    out
}

/// Checks the admissibility conditions for rows listed top to bottom.
pub fn is_admissible(rows: &[&[usize]], lambda: &YoungDiagram) -> bool {
    let marked = lambda.len();
    if rows.windows(2).any(|w| w[0][0] >= w[1][0]) {
        return false;
    }
    for row in rows {
        if row.iter().skip(1).any(|&v| v < row[0]) {
            return false;
        }
        if !row.iter().any(|&v| v <= marked) {
            return false;
        }
    }
    (1..=marked).all(|i| {
        rows.iter()
            .any(|row| row.contains(&i) && row.len() == lambda.rows()[i - 1])
    })
}

/// `𝒫(p, t)`: partitions of `p` into exactly `t` positive parts.
pub fn partitions_with_parts(p: usize, t: usize) -> BigUint {
    // table[q][s] = 𝒫(q, s), filled by 𝒫(q,s) = 𝒫(q-1,s-1) + 𝒫(q-s,s)
    let mut table = vec![vec![BigUint::zero(); t + 1]; p + 1];
    table[0][0] = BigUint::from(1u32);
    for q in 1..=p {
        for s in 1..=t.min(q) {
            let mut v = table[q - 1][s - 1].clone();
            v += &table[q - s][s];
            table[q][s] = v;
        }
    }
    table[p][t].clone()
}

/// The tableau `f_π(σ)`: cycles of `σ` through `1..=ℓ(π)`, each written from
/// its smallest element, rows ordered by first entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filling {
    pub shape: YoungDiagram,
    pub rows: Vec<Vec<usize>>,
}

impl Filling {
    pub fn row_slices(&self) -> Vec<&[usize]> {
        self.rows.iter().map(|r| r.as_slice()).collect()
    }
}

impl fmt::Display for Filling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn filling_of(sigma: &Permutation, pi: &YoungDiagram) -> Result<Filling> {
    let n = sigma.degree();
    if pi.len() > n {
        return Err(Error::DegreeTooSmall {
            n,
            needed: pi.len(),
        });
    }
    let mut seen = vec![false; n + 1];
    let mut rows = Vec::new();
    for start in 1..=pi.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut next = sigma.apply(start);
        while next != start {
            seen[next] = true;
            cycle.push(next);
            next = sigma.apply(next);
        }
        let min_pos = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap();
        cycle.rotate_left(min_pos);
        rows.push(cycle);
    }
    rows.sort_by_key(|r| r[0]);
    let shape = YoungDiagram::from_unsorted(rows.iter().map(Vec::len).collect())?;
    Ok(Filling { shape, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yd(s: &str) -> YoungDiagram {
        s.parse().unwrap()
    }

    #[test]
    fn containment_examples() {
        assert!(yd("3,3,1").contains(&yd("3,1")));
        assert!(yd("3,3,1").contains(&yd("3,3,1")));
        assert!(!yd("3,1").contains(&yd("2")));
        assert!(yd("2").contains(&YoungDiagram::empty()));
        assert!(!yd("3,1").contains(&yd("3,3")));
    }

    #[test]
    fn rejects_increasing_rows() {
        assert!(YoungDiagram::new(vec![1, 2]).is_err());
        assert!(YoungDiagram::new(vec![2, 0]).is_err());
        assert_eq!(yd("1,3,2").rows(), &[3, 2, 1]);
    }

    #[test]
    fn sub_diagram_enumeration() {
        let mut subs = yd("1").sub_diagrams();
        subs.sort();
        assert_eq!(subs, vec![YoungDiagram::empty(), yd("1")]);
        let mut subs = yd("2,1").sub_diagrams();
        subs.sort();
        assert_eq!(subs, vec![YoungDiagram::empty(), yd("1"), yd("2"), yd("2,1")]);
        // sub-multisets of {3,3,1}: 3 choices for the 3s times 2 for the 1
        assert_eq!(yd("3,3,1").sub_diagrams().len(), 6);
    }

    #[test]
    fn worked_filling_counts() {
        for n in 4..=8 {
            let k = admissible_fillings_count(&yd("3,1"), &yd("1"), n).unwrap();
            assert_eq!(k.eval(n), BigUint::zero());
            let k = admissible_fillings_count(&yd("2,2,2,1"), &yd("2,1"), n).unwrap();
            assert_eq!(k.eval(n), BigUint::zero());
            let k = admissible_fillings_count(&yd("3,3,1"), &yd("3,1"), n).unwrap();
            assert_eq!(k.eval(n), BigUint::from(2 * (n - 3)));
        }
        // (7-2)!/(7-5)! = 60
        let k = admissible_fillings_count(&yd("3,2"), &yd("3,2"), 7).unwrap();
        assert_eq!(k.eval(7), BigUint::from(60u32));
        assert_eq!(count_fillings_by_enumeration(&yd("3,2"), &yd("3,2"), 7).unwrap(), 60);
    }

    #[test]
    fn filling_count_errors() {
        assert!(matches!(
            admissible_fillings_count(&yd("3,1"), &yd("2"), 5),
            Err(Error::NotContained { .. })
        ));
        assert!(matches!(
            admissible_fillings_count(&yd("1,1,1"), &yd("1"), 2),
            Err(Error::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn partition_counts() {
        for p in 1..10 {
            assert_eq!(partitions_with_parts(p, 1), BigUint::from(1u32));
        }
        assert_eq!(partitions_with_parts(4, 2), BigUint::from(2u32));
        assert_eq!(partitions_with_parts(0, 0), BigUint::from(1u32));
        assert_eq!(partitions_with_parts(3, 5), BigUint::zero());
        // brute force: non-increasing triples summing to 10
        let mut brute = 0u32;
        for a in 1..=10 {
            for b in 1..=a {
                for c in 1..=b {
                    if a + b + c == 10 {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(brute, 8);
        assert_eq!(partitions_with_parts(10, 3), BigUint::from(brute));
    }

    #[test]
    fn filling_of_worked_example() {
        let sigma: Permutation = "(1 7 8)(9 3 2)(4 6)(10 13 5)(12 11)".parse().unwrap();
        let f = filling_of(&sigma, &yd("3,3,3,2")).unwrap();
        assert_eq!(f.rows, vec![vec![1, 7, 8], vec![2, 9, 3], vec![4, 6]]);
        assert_eq!(f.shape, yd("3,3,2"));

        let id = Permutation::identity(3);
        let f = filling_of(&id, &yd("1,1,1")).unwrap();
        assert_eq!(f.rows, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(f.to_string(), "1\n2\n3\n");
    }
}
