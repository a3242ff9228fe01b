//! Exact Markov partitions for rational parameters, topological entropy and the
//! Hausdorff dimension of the survivor set of the open map.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::covers::{DoubleCover, PlateauConfig};
use crate::error::{Error, Result};
use crate::parallel::par_map;
use crate::rational::{fmt_rational, Rational};

/// Closed interval `[lo, hi]` with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "crate::rational::serde_pq")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_pq")]
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }
}

/// Transition structure of a piecewise affine map refined by its critical orbits.
///
/// `partition` holds the intervals on which the map is a single expanding branch; they
/// index the rows and columns of the 0/1 matrix. Intervals collapsed to a point by a
/// plateau, or lying in the hole of an open map, go to `remainder`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkovSystem {
    pub partition: Vec<Interval>,
    pub remainder: Vec<Interval>,
    /// Sparse rows: `edges[i]` lists every `j` with `T[i][j] = 1`.
    pub edges: Vec<Vec<usize>>,
}

impl MarkovSystem {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Dense 0/1 matrix.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let n = self.size();
        let mut m = vec![vec![0u8; n]; n];
        for (i, row) in self.edges.iter().enumerate() {
            for &j in row {
                m[i][j] = 1;
            }
        }
        m
    }

    pub fn from_matrix(matrix: &[Vec<u8>]) -> Self {
        let edges = matrix
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, _)| j).collect())
            .collect();
        MarkovSystem { partition: Vec::new(), remainder: Vec::new(), edges }
    }

    /// `i j 1` per nonzero entry, after a `n n nnz` header line.
    pub fn to_triplets(&self) -> String {
        let nnz: usize = self.edges.iter().map(Vec::len).sum();
        let mut out = format!("{} {} {}\n", self.size(), self.size(), nnz);
        for (i, row) in self.edges.iter().enumerate() {
            for j in row {
                let _ = writeln!(out, "{i} {j} 1");
            }
        }
        out
    }

    /// Sorted endpoints of every interval, one per line.
    pub fn partition_endpoints(&self) -> Vec<String> {
        let pts: BTreeSet<&Rational> = self
            .partition
            .iter()
            .chain(&self.remainder)
            .flat_map(|iv| [&iv.lo, &iv.hi])
            .collect();
        pts.into_iter().map(fmt_rational).collect()
    }

    /// Strongly connected components (iterative Tarjan).
    pub fn components(&self) -> Vec<Vec<usize>> {
        tarjan(&self.edges)
    }

    /// Number of points of least period `p` carried by closed walks in the graph,
    /// `Σ_{d | p} μ(p/d) tr(T^d)`.
    ///
    /// Partition endpoints are shared by two intervals, so an orbit through them may be
    /// counted more than once; a positive count always certifies an orbit.
    pub fn primitive_periodic_count(&self, p: usize) -> BigInt {
        let mut total = BigInt::zero();
        for d in (1..=p).filter(|d| p.is_multiple_of(*d)) {
            let mu = mobius(p / d);
            if mu != 0 {
                total += BigInt::from(mu) * self.closed_walks(d);
            }
        }
        total
    }

    /// `tr(T^len)`.
    pub fn closed_walks(&self, len: usize) -> BigInt {
        let n = self.size();
        let mut total = BigInt::zero();
        for start in 0..n {
            let mut counts: HashMap<usize, BigInt> = HashMap::from([(start, BigInt::from(1))]);
            for _ in 0..len {
                let mut next: HashMap<usize, BigInt> = HashMap::new();
                for (v, c) in &counts {
                    for &w in &self.edges[*v] {
                        *next.entry(w).or_default() += c;
                    }
                }
                counts = next;
            }
            if let Some(c) = counts.get(&start) {
                total += c;
            }
        }
        total
    }
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn tarjan(edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < edges[v].len() {
                let w = edges[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Refines the domain by the forward orbits of `seeds` under the cover restricted to
/// `[a_m, a] ∪ [b, b_m]` and returns the transition structure on the laps there.
fn build(cover: &DoubleCover, a: &Rational, b: &Rational, seeds: Vec<Rational>) -> Result<MarkovSystem> {
    let budget = 10 * crate::covers::orbit_budget(&seeds.iter().collect::<Vec<_>>());
    let left = cover.branch(0);
    let right = cover.branch(1);
    let mut points: BTreeSet<Rational> = seeds.iter().cloned().collect();
    let mut todo: Vec<Rational> = seeds;
    while let Some(x) = todo.pop() {
        if points.len() > budget {
            return Err(Error::OrbitBudget { budget });
        }
        let mut images = Vec::with_capacity(2);
        if &x <= a {
            images.push(left.apply(&x));
        }
        if &x >= b {
            images.push(right.apply(&x));
        }
        for y in images {
            if points.insert(y.clone()) {
                todo.push(y);
            }
        }
    }
    let pts: Vec<Rational> = points.into_iter().collect();
    let rank: HashMap<&Rational, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let intervals: Vec<Interval> =
        pts.windows(2).map(|w| Interval::new(w[0].clone(), w[1].clone())).collect();
    let is_lap = |iv: &Interval| &iv.hi <= a || &iv.lo >= b;
    let mut state = vec![usize::MAX; intervals.len()];
    let mut partition = Vec::new();
    let mut remainder = Vec::new();
    for (k, iv) in intervals.iter().enumerate() {
        if is_lap(iv) {
            state[k] = partition.len();
            partition.push(iv.clone());
        } else {
            remainder.push(iv.clone());
        }
    }
    let mut edges = Vec::with_capacity(partition.len());
    for iv in &partition {
        let f = if &iv.hi <= a { left } else { right };
        let (u, v) = (f.apply(&iv.lo), f.apply(&iv.hi));
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let (Some(&i), Some(&j)) = (rank.get(&lo), rank.get(&hi)) else {
            return Err(Error::oracle(format!(
                "image [{}, {}] of a lap is not a union of partition intervals",
                fmt_rational(&lo),
                fmt_rational(&hi)
            )));
        };
        edges.push((i..j).filter(|&k| state[k] != usize::MAX).map(|k| state[k]).collect());
    }
    Ok(MarkovSystem { partition, remainder, edges })
}

/// Markov system of the plateau map: laps are the intervals inside `[a_m, a]` or
/// `[b, b_m]`; the plateaus `(a, c)` and `(c, b)` carry no transitions.
pub fn build_markov(config: &PlateauConfig) -> Result<MarkovSystem> {
    let cover = config.cover();
    let seeds = vec![
        cover.a_m().clone(),
        config.a().clone(),
        config.c().clone(),
        config.b().clone(),
        cover.b_m().clone(),
    ];
    build(cover, config.a(), config.b(), seeds)
}

/// Markov system of the open map with hole `(a, b)`.
pub fn build_open_markov(cover: &DoubleCover, a: &Rational, b: &Rational) -> Result<MarkovSystem> {
    check_hole(cover, a, b)?;
    let seeds = vec![cover.a_m().clone(), a.clone(), b.clone(), cover.b_m().clone()];
    build(cover, a, b, seeds)
}

fn check_hole(cover: &DoubleCover, a: &Rational, b: &Rational) -> Result<()> {
    if a < cover.a_m() || a > cover.a_max() || b < cover.b_max() || b > cover.b_m() {
        return Err(Error::precondition(format!(
            "hole ({}, {}) must satisfy a_m <= a <= a_M and b_M <= b <= b_m",
            fmt_rational(a),
            fmt_rational(b)
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    /// Decided from the graph structure, never from `value`.
    pub positive: bool,
    /// `log ρ(T)` (0 when the spectral radius is at most 1).
    pub value: f64,
    /// Rigorous enclosure of `value` up to floating-point rounding.
    pub lower: f64,
    pub upper: f64,
    pub matrix_size: usize,
}

impl EntropyResult {
    pub fn error_bound(&self) -> f64 {
        (self.upper - self.lower) / 2.0
    }
}

/// Positive entropy iff some strongly connected component is more than a single cycle.
pub fn has_positive_entropy(sys: &MarkovSystem) -> bool {
    positive_components(sys).next().is_some()
}

fn positive_components(sys: &MarkovSystem) -> impl Iterator<Item = Vec<usize>> + '_ {
    let comps = sys.components();
    let mut owner = vec![0usize; sys.size()];
    for (k, comp) in comps.iter().enumerate() {
        comp.iter().for_each(|&v| owner[v] = k);
    }
    comps.into_iter().enumerate().filter_map(move |(k, comp)| {
        let branching = comp
            .iter()
            .any(|&v| sys.edges[v].iter().filter(|&&w| owner[w] == k).count() >= 2);
        branching.then_some(comp)
    })
}

const POWER_TOL: f64 = 1e-14;
const POWER_MAX_ITER: usize = 200_000;

/// Collatz–Wielandt enclosure of the spectral radius of an irreducible component,
/// iterating `I + T` (primitive, same Perron vector).
fn spectral_enclosure(sys: &MarkovSystem, comp: &[usize]) -> (f64, f64) {
    let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = comp
        .iter()
        .map(|v| sys.edges[*v].iter().filter_map(|w| local.get(w).copied()).collect())
        .collect();
    let n = comp.len();
    let mut x = vec![1.0f64; n];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for _ in 0..POWER_MAX_ITER {
        let y: Vec<f64> = (0..n).map(|i| x[i] + adj[i].iter().map(|&j| x[j]).sum::<f64>()).collect();
        let ratios = (0..n).map(|i| y[i] / x[i]);
        let (rmin, rmax) = ratios.fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r), b.max(r)));
        lo = lo.max(rmin - 1.0);
        hi = hi.min(rmax - 1.0);
        let norm = y.iter().cloned().fold(0.0f64, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
        if hi - lo <= POWER_TOL * hi.max(1.0) {
            break;
        }
    }
    (lo, hi)
}

pub fn entropy(sys: &MarkovSystem) -> EntropyResult {
    let mut best = (1.0f64, 1.0f64);
    let mut positive = false;
    for comp in positive_components(sys) {
        positive = true;
        let (lo, hi) = spectral_enclosure(sys, &comp);
        if lo > best.0 {
            best.0 = lo;
        }
        if hi > best.1 {
            best.1 = hi;
        }
    }
    let (lower, upper) = if positive {
        (best.0.max(1.0).ln(), best.1.max(1.0).ln())
    } else {
        (0.0, 0.0)
    };
    EntropyResult { positive, value: (lower + upper) / 2.0, lower, upper, matrix_size: sys.size() }
}

/// Exact verdict `h_top(F_{a,b}) > 0`.
pub fn is_chaotic(config: &PlateauConfig) -> Result<bool> {
    Ok(has_positive_entropy(&build_markov(config)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionMethod {
    MarkovExact,
    CylinderCount,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: DimensionMethod,
    /// Word length for the cylinder method.
    pub n: Option<usize>,
}

/// `dim_H S = log ρ / log λ` for the survivor set of the open map with hole `(a, b)`.
pub fn survivor_dimension(cover: &DoubleCover, a: &Rational, b: &Rational) -> Result<DimensionResult> {
    let sys = build_open_markov(cover, a, b)?;
    let h = entropy(&sys);
    let scale = (cover.lambda() as f64).ln();
    Ok(DimensionResult {
        value: h.value / scale,
        lower: h.lower / scale,
        upper: h.upper / scale,
        method: DimensionMethod::MarkovExact,
        n: None,
    })
}

type IntervalSet = Vec<(Rational, Rational)>;

fn surviving_step(cover: &DoubleCover, a: &Rational, b: &Rational, set: &IntervalSet, symbol: u8) -> IntervalSet {
    let (dom_lo, dom_hi) = if symbol == 0 {
        (cover.a_m().clone(), a.clone())
    } else {
        (b.clone(), cover.b_m().clone())
    };
    let f = cover.branch(symbol);
    set.iter()
        .filter_map(|(u, v)| {
            let lo = if *u > dom_lo { u.clone() } else { dom_lo.clone() };
            let hi = if *v < dom_hi { v.clone() } else { dom_hi.clone() };
            (lo <= hi).then(|| {
                let (x, y) = (f.apply(&lo), f.apply(&hi));
                if x <= y { (x, y) } else { (y, x) }
            })
        })
        .collect()
}

fn count_words(cover: &DoubleCover, a: &Rational, b: &Rational, set: IntervalSet, depth: usize) -> u64 {
    if set.is_empty() {
        return 0;
    }
    if depth == 0 {
        return 1;
    }
    (0..2u8)
        .map(|s| count_words(cover, a, b, surviving_step(cover, a, b, &set, s), depth - 1))
        .sum()
}

/// Number of length-`n` branch words realised by some point whose first `n` iterates
/// avoid the open hole `(a, b)`. The hole is open, so its endpoints survive.
pub fn cylinder_count(cover: &DoubleCover, a: &Rational, b: &Rational, n: usize) -> Result<u64> {
    check_hole(cover, a, b)?;
    if n == 0 {
        return Err(Error::precondition("cylinder length must be at least 1"));
    }
    let root: IntervalSet = vec![(cover.a_m().clone(), cover.b_m().clone())];
    let split = n.min(4);
    let mut frontier = vec![root];
    for _ in 0..split {
        frontier = frontier
            .iter()
            .flat_map(|set| (0..2u8).map(move |s| surviving_step(cover, a, b, set, s)))
            .filter(|s| !s.is_empty())
            .collect();
    }
    let counts = par_map(frontier, |set| count_words(cover, a, b, set, n - split));
    Ok(counts.into_iter().sum())
}

/// Cylinder-count estimate `log N_n / (n log λ)`.
pub fn cylinder_dimension(cover: &DoubleCover, a: &Rational, b: &Rational, n: usize) -> Result<DimensionResult> {
    let count = cylinder_count(cover, a, b, n)?;
    let value = if count <= 1 {
        0.0
    } else {
        (count.to_f64().unwrap_or(f64::MAX)).ln() / (n as f64 * (cover.lambda() as f64).ln())
    };
    Ok(DimensionResult { value, lower: value, upper: value, method: DimensionMethod::CylinderCount, n: Some(n) })
}
