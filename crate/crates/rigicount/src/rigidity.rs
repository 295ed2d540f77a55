//! Randomized generic rigidity tests: rigidity-matrix rank at random points
//! of GF(p), and the stress-matrix test for generic global rigidity.
//!
//! Both verdicts are one-sided Monte Carlo: a positive answer can be wrong
//! only if every random trial hit a proper subvariety, which happens with
//! probability O(trials * poly(n) / p) for p = 2^31 - 1. Downstream
//! certificates label these verdicts as randomized evidence.

use num_complex::Complex64;
use serde::Serialize;

use crate::field::NumField;
use crate::gfp::{self, MatGf};
use crate::graph::Graph;
use crate::random::SeededRng;

/// Number of independent random evaluations per rank question.
const TRIALS: usize = 3;

/// A concrete realisation: the graph together with one d-vector of
/// coordinates per vertex. Real frameworks keep zero imaginary parts
/// throughout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Framework {
    #[serde(skip)]
    pub graph: Graph,
    pub d: usize,
    pub field: NumField,
    pub coords: Vec<Vec<Complex64>>,
}

impl Framework {
    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    /// Squared length of the segment between u and v under the bilinear
    /// form sum x_i^2 (not the Hermitian norm).
    pub fn squared_length(&self, u: usize, v: usize) -> Complex64 {
        self.coords[u]
            .iter()
            .zip(&self.coords[v])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

fn random_coordinates(n: usize, d: usize, rng: &mut SeededRng) -> Vec<u64> {
    (0..n * d).map(|_| rng.next_u64() % gfp::MODULUS).collect()
}

fn rigidity_matrix(g: &Graph, d: usize, coords: &[u64]) -> MatGf {
    let edges = g.edges();
    let mut m = MatGf::zeros(edges.len(), d * g.vertex_count());
    for (row, &(u, v)) in edges.iter().enumerate() {
        for i in 0..d {
            let diff = gfp::sub(coords[u * d + i], coords[v * d + i]);
            m.set(row, u * d + i, diff);
            m.set(row, v * d + i, gfp::sub(0, diff));
        }
    }
    m
}

/// Rank of the rigidity matrix at random coordinates, maximized over a
/// fixed number of trials.
pub fn rigidity_rank(g: &Graph, d: usize, seed: u64) -> usize {
    assert!(d >= 1, "d must be positive");
    let mut rng = SeededRng::new(seed);
    let mut best = 0;
    for _ in 0..TRIALS {
        let coords = random_coordinates(g.vertex_count(), d, &mut rng);
        best = best.max(rigidity_matrix(g, d, &coords).rank());
    }
    best
}

/// Full rank target for a spanning framework: dn - d(d+1)/2.
fn rigid_rank_target(n: usize, d: usize) -> usize {
    d * n - d * (d + 1) / 2
}

/// Generic d-rigidity via the rank criterion. Graphs on at most d+1
/// vertices are rigid exactly when complete.
pub fn is_generically_d_rigid(g: &Graph, d: usize, seed: u64) -> bool {
    assert!(d >= 1, "d must be positive");
    let n = g.vertex_count();
    if n <= d + 1 {
        return g.is_complete();
    }
    rigidity_rank(g, d, seed) == rigid_rank_target(n, d)
}

/// Generic global d-rigidity: rigidity plus a generic equilibrium stress
/// whose stress matrix has rank n - d - 1. Graphs on at most d+1 vertices
/// are globally rigid exactly when complete.
pub fn is_generically_globally_d_rigid(g: &Graph, d: usize, seed: u64) -> bool {
    assert!(d >= 1, "d must be positive");
    let n = g.vertex_count();
    if n <= d + 1 {
        return g.is_complete();
    }
    let target = rigid_rank_target(n, d);
    let edges = g.edges();
    let mut rng = SeededRng::new(seed);
    for _ in 0..TRIALS {
        let coords = random_coordinates(n, d, &mut rng);
        let r = rigidity_matrix(g, d, &coords);
        if r.rank() != target {
            continue;
        }
        // Equilibrium stresses are the left kernel of the rigidity matrix.
        let kernel = r.left_null_space();
        if kernel.is_empty() {
            // Isostatic: only the zero stress, and n >= d + 2 demands a
            // stress of rank n - d - 1 > 0.
            continue;
        }
        let omega: Vec<u64> = (0..edges.len())
            .map(|e| {
                kernel.iter().fold(0u64, |acc, basis| {
                    gfp::add(acc, gfp::mul(rng.next_u64() % gfp::MODULUS, basis[e]))
                })
            })
            .collect();
        let mut stress = MatGf::zeros(n, n);
        for (e, &(u, v)) in edges.iter().enumerate() {
            let w = omega[e];
            stress.set(u, v, gfp::sub(0, w));
            stress.set(v, u, gfp::sub(0, w));
            stress.set(u, u, gfp::add(stress.get(u, u), w));
            stress.set(v, v, gfp::add(stress.get(v, v), w));
        }
        if stress.rank() == n - d - 1 {
            return true;
        }
    }
    false
}
