//! Random graphs in the evolution model G(n, M, sigma) and in G(n, p),
//! with minimum-degree hitting times.
//!
//! All sampling is driven by ChaCha8 seeded through `seed_from_u64`, with
//! uniform integers drawn by rejection from `next_u64` and uniform doubles
//! as `(next_u64 >> 11) * 2^-53`. Nothing here depends on platform word
//! size or a library's default generator, so identical seeds reproduce
//! identical samples everywhere.

use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RandomError {
    #[error("edge ordering needs n >= 2, got {0}")]
    TooFewVertices(usize),
    #[error("edge count {0} out of range 0..={1}")]
    EdgeCountOutOfRange(usize, usize),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("degree target {0} out of range 1..={1}")]
    BadDegreeTarget(usize, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Deterministic uniform sampler over ChaCha8.
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound` by rejection, so the distribution is exact.
    pub fn index(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let x = self.0.next_u64();
            if x <= zone {
                return (x % bound) as usize;
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform double in [-1, 1).
    pub fn symmetric_unit(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }
}

/// A bijection from the edge slots of K_n to ranks `1..=C(n,2)`: one full
/// run of the random-graph evolution process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrdering {
    n: usize,
    /// `slots[r - 1]` is the edge inserted at rank r, as `(u, v)`, `u < v`.
    slots: Vec<(usize, usize)>,
}

impl EdgeOrdering {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    /// Edge with rank `r` (1-based).
    pub fn edge_at_rank(&self, r: usize) -> (usize, usize) {
        self.slots[r - 1]
    }

    /// Rank of the edge `{u, v}` (1-based).
    pub fn rank(&self, u: usize, v: usize) -> usize {
        let key = (u.min(v), u.max(v));
        self.slots.iter().position(|&e| e == key).expect("edge of K_n") + 1
    }

    /// Serialization: header `n`, then one `u v rank` line per edge of K_n
    /// in lexicographic edge order.
    pub fn to_text(&self) -> String {
        let mut ranked: Vec<(usize, usize, usize)> = self
            .slots
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, i + 1))
            .collect();
        ranked.sort_unstable();
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.n);
        for (u, v, r) in ranked {
            let _ = writeln!(s, "{u} {v} {r}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, RandomError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or(RandomError::Parse { line: 1, msg: "missing header".into() })?;
        let n: usize = header.trim().parse().map_err(|e| RandomError::Parse {
            line: 1,
            msg: format!("{e}"),
        })?;
        if n < 2 {
            return Err(RandomError::TooFewVertices(n));
        }
        let slot_count = n * (n - 1) / 2;
        let mut slots = vec![None; slot_count];
        let mut seen = 0usize;
        for (lineno, line) in lines {
            let mut it = line.split_whitespace();
            let mut field = |name: &str| -> Result<usize, RandomError> {
                it.next()
                    .ok_or(RandomError::Parse { line: lineno + 1, msg: format!("missing {name}") })?
                    .parse()
                    .map_err(|e| RandomError::Parse { line: lineno + 1, msg: format!("{e}") })
            };
            let u = field("u")?;
            let v = field("v")?;
            let r = field("rank")?;
            if u >= n || v >= n || u == v {
                return Err(RandomError::Parse { line: lineno + 1, msg: "bad edge".into() });
            }
            if r < 1 || r > slot_count || slots[r - 1].is_some() {
                return Err(RandomError::Parse { line: lineno + 1, msg: "bad rank".into() });
            }
            slots[r - 1] = Some((u.min(v), u.max(v)));
            seen += 1;
        }
        if seen != slot_count {
            return Err(RandomError::Parse {
                line: 1,
                msg: format!("expected {slot_count} edges, found {seen}"),
            });
        }
        let slots: Vec<(usize, usize)> = slots.into_iter().map(Option::unwrap).collect();
        let mut check: Vec<_> = slots.clone();
        check.sort_unstable();
        check.dedup();
        if check.len() != slot_count {
            return Err(RandomError::Parse { line: 1, msg: "ranks do not form a bijection".into() });
        }
        Ok(EdgeOrdering { n, slots })
    }
}

/// Uniformly random edge ordering of K_n: Fisher-Yates over the
/// lexicographically listed edge slots.
pub fn sample_edge_ordering(n: usize, seed: u64) -> Result<EdgeOrdering, RandomError> {
    if n < 2 {
        return Err(RandomError::TooFewVertices(n));
    }
    let mut slots = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            slots.push((u, v));
        }
    }
    let mut rng = SeededRng::new(seed);
    for i in (1..slots.len()).rev() {
        let j = rng.index(i + 1);
        slots.swap(i, j);
    }
    Ok(EdgeOrdering { n, slots })
}

/// The graph after the first `m` insertions of the evolution: edges with
/// rank `<= m`.
pub fn graph_at(ordering: &EdgeOrdering, m: usize) -> Result<Graph, RandomError> {
    if m > ordering.slot_count() {
        return Err(RandomError::EdgeCountOutOfRange(m, ordering.slot_count()));
    }
    Graph::new(ordering.n, &ordering.slots[..m]).map_err(|_| unreachable!())
}

/// Hitting time M_d: the first edge count at which the minimum degree
/// reaches `d`, found by replaying the ordering once.
pub fn min_degree_threshold(ordering: &EdgeOrdering, d: usize) -> Result<usize, RandomError> {
    let n = ordering.n;
    if d < 1 || d > n - 1 {
        return Err(RandomError::BadDegreeTarget(d, n - 1));
    }
    let mut degree = vec![0usize; n];
    let mut below = n;
    for (i, &(u, v)) in ordering.slots.iter().enumerate() {
        for w in [u, v] {
            degree[w] += 1;
            if degree[w] == d {
                below -= 1;
            }
        }
        if below == 0 {
            return Ok(i + 1);
        }
    }
    unreachable!("K_n has minimum degree n - 1 >= d")
}

/// All hitting times M_1..=M_dmax from a single replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingTimes {
    thresholds: Vec<usize>,
}

impl HittingTimes {
    pub fn compute(ordering: &EdgeOrdering, d_max: usize) -> Result<Self, RandomError> {
        let n = ordering.n;
        if d_max < 1 || d_max > n - 1 {
            return Err(RandomError::BadDegreeTarget(d_max, n - 1));
        }
        let mut degree = vec![0usize; n];
        let mut thresholds = Vec::with_capacity(d_max);
        let mut next_d = 1usize;
        let mut below = n;
        for (i, &(u, v)) in ordering.slots.iter().enumerate() {
            for w in [u, v] {
                degree[w] += 1;
                if degree[w] == next_d {
                    below -= 1;
                }
            }
            while below == 0 {
                thresholds.push(i + 1);
                if next_d == d_max {
                    return Ok(HittingTimes { thresholds });
                }
                next_d += 1;
                below = degree.iter().filter(|&&x| x < next_d).count();
            }
        }
        unreachable!("replay of the full ordering reaches minimum degree n - 1")
    }

    pub fn get(&self, d: usize) -> usize {
        self.thresholds[d - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.thresholds
    }
}

/// Binomial random graph: each edge present independently with
/// probability `p`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, RandomError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(RandomError::BadProbability(p));
    }
    let mut rng = SeededRng::new(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.unit() < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(n, &edges).expect("gnp edges are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_a_bijection() {
        let ord = sample_edge_ordering(3, 7).unwrap();
        let mut ranks: Vec<usize> = (1..=3).map(|r| r).collect();
        ranks.sort_unstable();
        assert_eq!(ord.slot_count(), 3);
        let mut seen: Vec<(usize, usize)> = (1..=3).map(|r| ord.edge_at_rank(r)).collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn same_seed_same_ordering() {
        let a = sample_edge_ordering(4, 42).unwrap();
        let b = sample_edge_ordering(4, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_edge_ordering(4, 43).unwrap());
    }

    #[test]
    fn graph_at_extremes() {
        let ord = sample_edge_ordering(5, 1).unwrap();
        assert_eq!(graph_at(&ord, 0).unwrap(), Graph::empty(5));
        assert_eq!(graph_at(&ord, 10).unwrap(), Graph::complete(5));
        assert!(graph_at(&ord, 11).is_err());
    }

    #[test]
    fn graph_at_reads_off_ranks() {
        // Fixed ordering on K_3: {0,1} -> 1, {0,2} -> 2, {1,2} -> 3.
        let ord = EdgeOrdering { n: 3, slots: vec![(0, 1), (0, 2), (1, 2)] };
        let g = graph_at(&ord, 2).unwrap();
        assert!(g.has_edge(0, 1) && g.has_edge(0, 2) && !g.has_edge(1, 2));
        assert_eq!(min_degree_threshold(&ord, 1).unwrap(), 2);
        assert_eq!(min_degree_threshold(&ord, 2).unwrap(), 3);
    }

    #[test]
    fn hitting_time_is_the_threshold() {
        for seed in 0..20 {
            let ord = sample_edge_ordering(20, seed).unwrap();
            for d in 1..=4 {
                let m = min_degree_threshold(&ord, d).unwrap();
                assert!(graph_at(&ord, m).unwrap().min_degree() >= d);
                assert!(graph_at(&ord, m - 1).unwrap().min_degree() < d);
            }
            let times = HittingTimes::compute(&ord, 4).unwrap();
            for d in 1..=4 {
                assert_eq!(times.get(d), min_degree_threshold(&ord, d).unwrap());
            }
            assert!(times.as_slice().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(sample_gnp(6, 0.0, 1).unwrap(), Graph::empty(6));
        assert_eq!(sample_gnp(6, 1.0, 1).unwrap(), Graph::complete(6));
        assert!(sample_gnp(6, 1.5, 1).is_err());
    }

    #[test]
    fn ordering_serialization_round_trips() {
        for seed in [0, 1, 99] {
            let ord = sample_edge_ordering(6, seed).unwrap();
            let text = ord.to_text();
            assert_eq!(EdgeOrdering::from_text(&text).unwrap(), ord);
        }
    }

    #[test]
    fn first_rank_distribution_is_uniform() {
        // Chi-square over the 435 slots of K_30, 10000 seeded samples.
        let n = 30;
        let slots = n * (n - 1) / 2;
        let samples = 10_000usize;
        let mut counts = vec![0usize; slots];
        for seed in 0..samples as u64 {
            let ord = sample_edge_ordering(n, seed).unwrap();
            let (u, v) = ord.edge_at_rank(1);
            counts[u * n + v - (u + 1) * (u + 2) / 2] += 1;
        }
        let expected = samples as f64 / slots as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // Mean slots - 1, sigma = sqrt(2 (slots - 1)).
        let dof = (slots - 1) as f64;
        let sigma = (2.0 * dof).sqrt();
        assert!((chi2 - dof).abs() <= 3.0 * sigma, "chi2 = {chi2}, dof = {dof}");
    }

    #[test]
    fn gnp_edge_count_matches_binomial_moment() {
        let n = 50;
        let p = 0.3;
        let pairs = (n * (n - 1) / 2) as f64;
        let samples = 2000usize;
        let total: usize =
            (0..samples as u64).map(|s| sample_gnp(n, p, s).unwrap().edge_count()).sum();
        let mean = total as f64 / samples as f64;
        let expected = p * pairs;
        let sigma_mean = (pairs * p * (1.0 - p)).sqrt() / (samples as f64).sqrt();
        assert!((mean - expected).abs() <= 3.0 * sigma_mean, "mean = {mean}");
    }
}
