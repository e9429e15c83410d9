//! Trajectory graphs of word evaluations and their classes `C_{γ,γ'}`.
//!
//! Every subgraph of a permutation graph `g_σ` is a partial injection: its
//! non-trivial components are straight paths (counted by edge number, `γ`)
//! and directed cycles (counted by length, `γ'`). Loops are 1-cycles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mc::{self, Accumulator};
use crate::numbers::falling_factorial;
use crate::perm::Permutation;
use crate::sampler::{sample, SamplerKind, SamplerSpec, EXACT_SUPPORT_CAP};
use crate::word::{check_tuple, Word};
use crate::young::YoungDiagram;

/// Oriented graph on `{1, …, n}` with in- and out-degrees at most one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialPermGraph {
    degree: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl PartialPermGraph {
    pub fn new(degree: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        let mut out_seen = vec![false; degree + 1];
        let mut in_seen = vec![false; degree + 1];
        for &(a, b) in &edges {
            for p in [a, b] {
                if p == 0 || p > degree {
                    return Err(Error::PointOutOfRange { point: p, degree });
                }
            }
            if std::mem::replace(&mut out_seen[a], true) {
                return Err(Error::InvalidGraph(format!("vertex {a} has out-degree > 1")));
            }
            if std::mem::replace(&mut in_seen[b], true) {
                return Err(Error::InvalidGraph(format!("vertex {b} has in-degree > 1")));
            }
        }
        Ok(PartialPermGraph { degree, edges })
    }

    pub fn empty(degree: usize) -> Self {
        PartialPermGraph {
            degree,
            edges: BTreeSet::new(),
        }
    }

    /// `g_σ`, the full functional graph of `σ`.
    pub fn of_permutation(sigma: &Permutation) -> Self {
        PartialPermGraph {
            degree: sigma.degree(),
            edges: (1..=sigma.degree()).map(|j| (j, sigma.apply(j))).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Image of every vertex under `τ`.
    pub fn relabel(&self, tau: &Permutation) -> Result<Self> {
        if tau.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: tau.degree(),
            });
        }
        PartialPermGraph::new(
            self.degree,
            self.edges.iter().map(|&(a, b)| (tau.apply(a), tau.apply(b))),
        )
    }

    pub fn is_subgraph_of(&self, other: &PartialPermGraph) -> bool {
        self.degree == other.degree && self.edges.is_subset(&other.edges)
    }

    pub fn parse_with_degree(s: &str, degree: usize) -> Result<Self> {
        PartialPermGraph::new(degree, parse_edges(s)?)
    }
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::InvalidGraph(format!("expected `{{…}}`, got `{s}`")))?;
    let mut edges = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::InvalidGraph(format!("expected `(` in `{s}`")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::InvalidGraph(format!("unclosed edge in `{s}`")))?;
        let pts: Vec<usize> = body[..close]
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::InvalidGraph(format!("bad vertex `{}`", t.trim())))
            })
            .collect::<Result<_>>()?;
        if pts.len() != 2 {
            return Err(Error::InvalidGraph(format!("edge needs two vertices in `{s}`")));
        }
        edges.push((pts[0], pts[1]));
        rest = body[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(edges)
}

impl FromStr for PartialPermGraph {
    type Err = Error;

    /// `{(1,5),(5,6),(3,2)}`; the degree is the largest vertex mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let edges = parse_edges(s)?;
        let degree = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
        PartialPermGraph::new(degree, edges)
    }
}

impl fmt::Display for PartialPermGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `C_{γ,γ'}` as two multisets stored in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GraphClass {
    pub straight: Vec<usize>,
    pub cycles: Vec<usize>,
}

impl GraphClass {
    pub fn new(mut straight: Vec<usize>, mut cycles: Vec<usize>) -> Result<Self> {
        if straight.contains(&0) || cycles.contains(&0) {
            return Err(Error::InvalidGraph("component sizes must be positive".into()));
        }
        straight.sort_unstable_by(|a, b| b.cmp(a));
        cycles.sort_unstable_by(|a, b| b.cmp(a));
        Ok(GraphClass { straight, cycles })
    }

    /// `T_γ = C_{γ,∅}`.
    pub fn straight_only(straight: Vec<usize>) -> Result<Self> {
        GraphClass::new(straight, Vec::new())
    }

    pub fn is_straight(&self) -> bool {
        self.cycles.is_empty()
    }

    /// `h·γ`: every straight component repeated `h` times.
    pub fn repeated(&self, h: usize) -> GraphClass {
        let rep = |v: &[usize]| v.iter().flat_map(|&x| std::iter::repeat_n(x, h)).collect();
        GraphClass::new(rep(&self.straight), rep(&self.cycles)).expect("sizes stay positive")
    }

    pub fn edge_count(&self) -> usize {
        self.straight.iter().sum::<usize>() + self.cycles.iter().sum::<usize>()
    }

    /// `ℓ + Σγ + Σγ'`, the number of non-isolated vertices.
    pub fn vertex_count(&self) -> usize {
        self.straight.len() + self.edge_count()
    }

    /// A representative graph on `{1, …, n}` using the canonical placement.
    pub fn representative(&self, n: usize) -> Result<PartialPermGraph> {
        canonical_placement(&self.straight, &self.cycles, n)
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if self.cycles.is_empty() {
            write!(f, "T[({})]", list(&self.straight))
        } else {
            write!(
                f,
                "C[straight=({}); cycles=({})]",
                list(&self.straight),
                list(&self.cycles)
            )
        }
    }
}

/// Decomposes a partial injection into straight paths and directed cycles,
/// ignoring isolated vertices.
pub fn classify(g: &PartialPermGraph) -> GraphClass {
    let succ: BTreeMap<usize, usize> = g.edges.iter().copied().collect();
    let has_pred: BTreeSet<usize> = g.edges.iter().map(|&(_, b)| b).collect();
    let mut visited: BTreeSet<usize> = BTreeSet::new();
    let mut straight = Vec::new();
    for &head in succ.keys() {
        if has_pred.contains(&head) {
            continue;
        }
        let mut len = 0;
        let mut v = head;
        visited.insert(v);
        while let Some(&next) = succ.get(&v) {
            len += 1;
            v = next;
            visited.insert(v);
        }
        straight.push(len);
    }
    let mut cycles = Vec::new();
    for &start in succ.keys() {
        if visited.contains(&start) {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        loop {
            visited.insert(v);
            len += 1;
            v = succ[&v];
            if v == start {
                break;
            }
        }
        cycles.push(len);
    }
    GraphClass::new(straight, cycles).expect("component sizes are positive")
}

/// The placement `g_{γ,γ'}`: cycle `j` passes through representative `j`
/// (`j <= ℓ'`), straight component `j` has its head at `ℓ'+j`, and all other
/// vertices are fresh consecutive points starting at `ℓ+ℓ'+1`.
pub fn canonical_placement(
    gamma: &[usize],
    gamma_prime: &[usize],
    n: usize,
) -> Result<PartialPermGraph> {
    if gamma.contains(&0) || gamma_prime.contains(&0) {
        return Err(Error::InvalidGraph("component sizes must be positive".into()));
    }
    let needed = gamma.len() + gamma.iter().sum::<usize>() + gamma_prime.iter().sum::<usize>();
    if n < needed {
        return Err(Error::DegreeTooSmall { n, needed });
    }
    let (l, lp) = (gamma.len(), gamma_prime.len());
    let mut fresh = l + lp + 1;
    let mut edges = Vec::new();
    for (j, &len) in gamma_prime.iter().enumerate() {
        let mut pts = vec![j + 1];
        for _ in 1..len {
            pts.push(fresh);
            fresh += 1;
        }
        for i in 0..len {
            edges.push((pts[i], pts[(i + 1) % len]));
        }
    }
    for (j, &len) in gamma.iter().enumerate() {
        let mut v = lp + j + 1;
        for _ in 0..len {
            edges.push((v, fresh));
            v = fresh;
            fresh += 1;
        }
    }
    PartialPermGraph::new(n, edges)
}

/// Points `i_0 = m, i_1, …, i_r` visited while applying the letters of a
/// word right to left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub start: usize,
    pub points: Vec<usize>,
}

impl Trajectory {
    pub fn end(&self) -> usize {
        *self.points.last().expect("trajectory has its start")
    }
}

pub fn trajectory(w: &Word, sigmas: &[Permutation], m: usize) -> Result<Trajectory> {
    let n = check_tuple(w, sigmas)?;
    if m == 0 || m > n {
        return Err(Error::PointOutOfRange { point: m, degree: n });
    }
    let inverses: Vec<Permutation> = sigmas.iter().map(Permutation::inverse).collect();
    let mut points = Vec::with_capacity(w.len() + 1);
    points.push(m);
    let mut cur = m;
    for l in w.letters().iter().rev() {
        let s = if l.inverse {
            &inverses[l.generator - 1]
        } else {
            &sigmas[l.generator - 1]
        };
        cur = s.apply(cur);
        points.push(cur);
    }
    Ok(Trajectory { start: m, points })
}

/// `G_i^{S,w}(σ)` for each generator `i`: the union over starts `m ∈ S` of the
/// edges traversed by letters of generator `i`, oriented along `σ_i` (a step
/// by `σ_i^{-1}` from `a` to `b` contributes the edge `(b, a)`).
pub fn letter_graphs(
    w: &Word,
    sigmas: &[Permutation],
    starts: &[usize],
) -> Result<Vec<PartialPermGraph>> {
    if starts.is_empty() {
        return Err(Error::InvalidConfig("at least one start point is required".into()));
    }
    let n = check_tuple(w, sigmas)?;
    let mut edges: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); w.num_generators()];
    for &m in starts {
        let t = trajectory(w, sigmas, m)?;
        for (step, l) in w.letters().iter().rev().enumerate() {
            let (a, b) = (t.points[step], t.points[step + 1]);
            let e = if l.inverse { (b, a) } else { (a, b) };
            edges[l.generator - 1].insert(e);
        }
    }
    edges
        .into_iter()
        .map(|e| PartialPermGraph::new(n, e))
        .collect()
}

/// `σ ∈ 𝔖_{n,g}`: every edge of `g` is an edge of `g_σ`.
pub fn in_s_ng(sigma: &Permutation, g: &PartialPermGraph) -> Result<bool> {
    if sigma.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            expected: g.degree(),
            found: sigma.degree(),
        });
    }
    Ok(g.edges.iter().all(|&(a, b)| sigma.apply(a) == b))
}

/// `σ ∈ A^{γ'}`: point `j` lies on a cycle of length `γ'_j` for every
/// `j <= ℓ'`, and the points `1..=ℓ'` lie on pairwise distinct cycles.
pub fn in_a_gamma_prime(sigma: &Permutation, gamma_prime: &[usize]) -> bool {
    let lp = gamma_prime.len();
    if lp > sigma.degree() {
        return false;
    }
    for (j, &want) in gamma_prime.iter().enumerate() {
        let start = j + 1;
        let mut len = 1;
        let mut v = sigma.apply(start);
        while v != start {
            if v <= lp {
                return false;
            }
            len += 1;
            if len > want {
                return false;
            }
            v = sigma.apply(v);
        }
        if len != want {
            return false;
        }
    }
    true
}

/// `σ ∈ A^{μ,w}_{1,…,j}`: the points `1..=j` of `w(σ)` lie on distinct
/// cycles of lengths `μ_1, …, μ_j`.
pub fn in_a_mu_w(sigmas: &[Permutation], w: &Word, mu: &YoungDiagram, j: usize) -> Result<bool> {
    if j > mu.len() {
        return Err(Error::InvalidConfig(format!(
            "j = {j} exceeds the {} rows of ({mu})",
            mu.len()
        )));
    }
    let image = w.evaluate(sigmas)?;
    if mu.len() > image.degree() {
        return Err(Error::DegreeTooSmall {
            n: image.degree(),
            needed: mu.len(),
        });
    }
    Ok(in_a_gamma_prime(&image, &mu.rows()[..j]))
}

/// `P(ρ_n ∈ 𝔖_{n,g}) = (n-e)!/n!` for uniform `ρ_n` and `e` edges.
pub fn exact_prob_s_ng_uniform(g: &PartialPermGraph) -> BigRational {
    let n = g.degree();
    let e = g.edge_count();
    BigRational::new(BigInt::one(), BigInt::from(falling_factorial(n, e)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaMode {
    Exact,
    MonteCarlo { n_samples: u64, seed: u64 },
    /// Exact when the sampler's support fits the enumeration cap.
    Auto { n_samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub stderr: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub gamma: Vec<usize>,
    pub gamma_prime: Vec<usize>,
    pub sampler: SamplerKind,
    pub exact: bool,
    pub n_samples: u64,
    pub graph: String,
    pub prob_s_ng: f64,
    pub prob_a: f64,
    /// `(n-e)!/n!` for the uniform law, as an exact fraction.
    pub uniform_prob_s_ng: String,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Indicator features evaluated on one permutation:
/// `[1, σ ∈ 𝔖_{n,g}, σ ∈ A^{γ'}, c_1(σ) <= γ_1, …, c_1(σ) <= γ_ℓ]`.
fn features(sigma: &Permutation, g: &PartialPermGraph, gamma: &[usize], gamma_prime: &[usize]) -> Vec<bool> {
    let c1 = sigma.cycle_length_at(1).expect("n >= 1");
    let mut f = vec![
        true,
        g.edges.iter().all(|&(a, b)| sigma.apply(a) == b),
        in_a_gamma_prime(sigma, gamma_prime),
    ];
    f.extend(gamma.iter().map(|&gi| c1 <= gi));
    f
}

/// A bound `lhs <= rhs` with both sides linear in the feature expectations.
struct LinearBound {
    name: &'static str,
    lhs: Vec<BigRational>,
    rhs: Vec<BigRational>,
}

fn dot_exact(coef: &[BigRational], expect: &[BigRational]) -> BigRational {
    coef.iter().zip(expect).map(|(c, e)| c * e).sum()
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn lemma_bounds(
    n: usize,
    gamma: &[usize],
    gamma_prime: &[usize],
    kind: &SamplerKind,
) -> Vec<LinearBound> {
    let (l, lp) = (gamma.len(), gamma_prime.len());
    let sg: usize = gamma.iter().sum();
    let sgp: usize = gamma_prime.iter().sum();
    let width = 3 + l;
    let zero = || vec![BigRational::zero(); width];
    // (n-ℓ-ℓ')!/(n-v)!: the vertices outside 1..=ℓ+ℓ' are free
    let norm = BigRational::from_integer(BigInt::from(falling_factorial(n - l - lp, sg + sgp - lp)));
    let ratio = {
        let mut v = zero();
        v[1] = norm.clone();
        v
    };
    let mut out = Vec::new();
    if lp == 0 {
        let mut one = zero();
        one[0] = BigRational::one();
        out.push(LinearBound {
            name: "upper: P(S_ng)(n-l)!/(n-l-|γ|)! <= 1",
            lhs: ratio.clone(),
            rhs: one,
        });
        // 1 - Σ P(c_1 <= γ_i) - (ℓ-1)/(n-1) Σγ
        let mut lower = zero();
        lower[0] = BigRational::one() - rat((l - 1) * sg) / rat(n - 1);
        for i in 0..l {
            lower[3 + i] = -BigRational::one();
        }
        out.push(LinearBound {
            name: "lower: 1 - ΣP(c_1<=γ_i) - (l-1)|γ|/(n-1) <= P(S_ng)(n-l)!/(n-l-|γ|)!",
            lhs: lower,
            rhs: ratio,
        });
    } else {
        let mut pa = zero();
        pa[2] = BigRational::one();
        out.push(LinearBound {
            name: "upper: P(S_ng)(n-l-l')!/(n-v)! <= P(A^γ')",
            lhs: ratio.clone(),
            rhs: pa,
        });
        if *kind == SamplerKind::Uniform {
            let f1 = BigRational::one()
                - rat(l * gamma_prime.iter().map(|g| g - 1).sum::<usize>()) / rat(n - lp);
            let f2 = BigRational::one() - rat(l * sg) / rat(n - sgp);
            let mut lower = zero();
            lower[2] = f1 * f2;
            out.push(LinearBound {
                name: "lower (uniform): P(A^γ')(1-l Σ(γ'_i-1)/(n-l'))(1-l|γ|/(n-|γ'|)) <= P(S_ng)(n-l-l')!/(n-v)!",
                lhs: lower,
                rhs: ratio,
            });
        }
    }
    out
}

/// Evaluates both sides of the graph-event inequalities for the canonical
/// graph of class `C_{γ,γ'}` under the sampler `spec`.
pub fn verify_lemma_bounds(
    n: usize,
    gamma: &[usize],
    gamma_prime: &[usize],
    spec: &SamplerSpec,
    mode: LemmaMode,
) -> Result<BoundReport> {
    if spec.degree != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: spec.degree,
        });
    }
    if gamma.is_empty() && gamma_prime.is_empty() {
        return Err(Error::InvalidConfig("γ and γ' cannot both be empty".into()));
    }
    let g = canonical_placement(gamma, gamma_prime, n)?;
    let bounds = lemma_bounds(n, gamma, gamma_prime, &spec.kind);
    let exact = match mode {
        LemmaMode::Exact => true,
        LemmaMode::MonteCarlo { .. } => false,
        LemmaMode::Auto { .. } => spec.support_size() <= EXACT_SUPPORT_CAP,
    };
    let uniform_prob_s_ng = exact_prob_s_ng_uniform(&g).to_string();
    let mut report = BoundReport {
        n,
        gamma: gamma.to_vec(),
        gamma_prime: gamma_prime.to_vec(),
        sampler: spec.kind.clone(),
        exact,
        n_samples: 0,
        graph: g.to_string(),
        prob_s_ng: 0.0,
        prob_a: 0.0,
        uniform_prob_s_ng,
        checks: Vec::new(),
    };
    if exact {
        let width = 3 + gamma.len();
        let mut expect = vec![BigRational::zero(); width];
        for (sigma, p) in spec.exact_law()? {
            for (slot, on) in expect.iter_mut().zip(features(&sigma, &g, gamma, gamma_prime)) {
                if on {
                    *slot += &p;
                }
            }
        }
        report.prob_s_ng = to_f64(&expect[1]);
        report.prob_a = to_f64(&expect[2]);
        for b in &bounds {
            let lhs = dot_exact(&b.lhs, &expect);
            let rhs = dot_exact(&b.rhs, &expect);
            report.checks.push(BoundCheck {
                name: b.name.to_string(),
                lhs: to_f64(&lhs),
                rhs: to_f64(&rhs),
                slack: to_f64(&(&rhs - &lhs)),
                stderr: 0.0,
                holds: lhs <= rhs,
            });
        }
    } else {
        let (n_samples, seed) = match mode {
            LemmaMode::MonteCarlo { n_samples, seed } | LemmaMode::Auto { n_samples, seed } => {
                (n_samples, seed)
            }
            LemmaMode::Exact => unreachable!(),
        };
        if n_samples == 0 {
            return Err(Error::InvalidConfig("sample count must be positive".into()));
        }
        let coef: Vec<(Vec<f64>, Vec<f64>)> = bounds
            .iter()
            .map(|b| (b.lhs.iter().map(to_f64).collect(), b.rhs.iter().map(to_f64).collect()))
            .collect();
        let dot = |c: &[f64], f: &[bool]| -> f64 {
            c.iter().zip(f).filter(|(_, &on)| on).map(|(c, _)| c).sum()
        };
        // accumulators: P(S_ng), P(A), then (lhs, rhs, rhs-lhs) per bound
        let slots = 2 + 3 * coef.len();
        let parts = mc::run_chunks(n_samples, seed, &[0x004c_454d_4d41, n as u64], |rng, len| {
            let mut acc = vec![Accumulator::default(); slots];
            for _ in 0..len {
                let sigma = sample(spec, rng);
                let f = features(&sigma, &g, gamma, gamma_prime);
                acc[0].push(f[1] as u8 as f64);
                acc[1].push(f[2] as u8 as f64);
                for (i, (cl, cr)) in coef.iter().enumerate() {
                    let (lv, rv) = (dot(cl, &f), dot(cr, &f));
                    acc[2 + 3 * i].push(lv);
                    acc[3 + 3 * i].push(rv);
                    acc[4 + 3 * i].push(rv - lv);
                }
            }
            acc
        });
        let acc = parts.into_iter().fold(vec![Accumulator::default(); slots], |a, b| {
            a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()
        });
        report.n_samples = n_samples;
        report.prob_s_ng = acc[0].mean();
        report.prob_a = acc[1].mean();
        for (i, b) in bounds.iter().enumerate() {
            let diff = acc[4 + 3 * i].estimate();
            report.checks.push(BoundCheck {
                name: b.name.to_string(),
                lhs: acc[2 + 3 * i].mean(),
                rhs: acc[3 + 3 * i].mean(),
                slack: diff.mean,
                stderr: diff.stderr,
                holds: diff.mean >= -4.0 * diff.stderr,
            });
        }
    }
    Ok(report)
}

/// Exact `P(σ ∈ 𝔖_{n,g})` by enumerating the sampler's support.
pub fn exact_prob_s_ng(spec: &SamplerSpec, g: &PartialPermGraph) -> Result<BigRational> {
    if spec.degree != g.degree() {
        return Err(Error::DegreeMismatch {
            expected: g.degree(),
            found: spec.degree,
        });
    }
    Ok(spec
        .exact_law()?
        .into_iter()
        .filter(|(s, _)| g.edges.iter().all(|&(a, b)| s.apply(a) == b))
        .map(|(_, p)| p)
        .sum())
}
