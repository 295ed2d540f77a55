//! Numerical enumeration of the real and complex realisations of a graph
//! that decomposes as a base plus a chain of vertex additions.
//!
//! Each added vertex solves the intersection of d spheres centred at
//! already-placed neighbours, a two-branch step. Leaves are Newton-refined
//! on the full defining system, residual-checked against every edge,
//! canonically pinned and deduplicated. The base realisation is taken as
//! the unique one modulo congruence; that assumption is imported from a
//! certificate (globally rigid base) or is classical (complete base) and
//! is recorded on the output.

mod pin;
mod solve;
mod tower;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::field::{format_complex, parse_complex, NumField};
use crate::graph::Graph;
use crate::random::SeededRng;
use crate::rigidity::Framework;

pub use pin::{pin_solution, placement_distance};
pub use solve::sphere_intersection;
pub use tower::{decompose_exact, decompose_greedy, default_base, ExtensionStep, TowerDecomposition};

use solve::{dot, Anchor, EdgeEquation, C};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EnumerateError {
    #[error("degenerate configuration ({0}); resample with a fresh seed")]
    GenericityFailure(String),
    #[error("base has {0} vertices, need at least d + 1 = {1}")]
    BaseTooSmall(usize, usize),
    #[error("vertex {vertex} reaches its solve step with {degree} < d constraints")]
    Underdetermined { vertex: usize, degree: usize },
    #[error("graph does not decompose onto the base; stuck with {remaining:?}")]
    NotATower { remaining: Vec<usize> },
    #[error("no squared length supplied for edge {{{0}, {1}}}")]
    MissingLength(usize, usize),
    #[error("base placement violates the length of edge {{{0}, {1}}}")]
    InconsistentBase(usize, usize),
    #[error("sanity violation: real count {real} vs complex count {complex}")]
    Sandwich { real: usize, complex: usize },
    #[error("retry budget exhausted after {0} genericity failures")]
    RetriesExhausted(usize),
    #[error("lengths parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Numeric thresholds of the enumeration pipeline. Defaults assume
/// coordinates sampled in [-1, 1] and at most a dozen extension steps.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Discriminants, pivots and pin normalisers below this are treated as
    /// genericity failures.
    pub degeneracy: f64,
    /// Pinned placements closer than this are the same solution.
    pub separation: f64,
    /// Accepted relative residual per edge equation after refinement.
    pub residual: f64,
    /// Mid-branch surplus-edge pruning threshold (loose; leaves decide).
    pub surplus_prune: f64,
    pub max_newton_iters: usize,
    /// Reseed attempts for sampling entry points.
    pub retry_budget: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            degeneracy: 1e-10,
            separation: 1e-6,
            residual: 1e-8,
            surplus_prune: 1e-3,
            max_newton_iters: 40,
            retry_budget: 8,
        }
    }
}

/// Squared lengths per edge, over either field.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LengthAssignment {
    map: BTreeMap<(usize, usize), Complex64>,
}

impl LengthAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, u: usize, v: usize, value: Complex64) {
        self.map.insert((u.min(v), u.max(v)), value);
    }

    pub fn get(&self, u: usize, v: usize) -> Option<Complex64> {
        self.map.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Complex64)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Lines `u v squared_length`, lexicographic edge order; values in
    /// `a+bi` form when complex.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (&(u, v), &l) in &self.map {
            let _ = writeln!(s, "{u} {v} {}", format_complex(l));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, EnumerateError> {
        let mut out = LengthAssignment::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut field = |name: &str| -> Result<&str, EnumerateError> {
                it.next().ok_or(EnumerateError::Parse {
                    line: lineno + 1,
                    msg: format!("missing {name}"),
                })
            };
            let u: usize = field("u")?.parse().map_err(|e| EnumerateError::Parse {
                line: lineno + 1,
                msg: format!("{e}"),
            })?;
            let v: usize = field("v")?.parse().map_err(|e| EnumerateError::Parse {
                line: lineno + 1,
                msg: format!("{e}"),
            })?;
            let l = parse_complex(field("value")?).map_err(|e| EnumerateError::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            out.insert(u, v, l);
        }
        Ok(out)
    }
}

/// Coordinates for a chosen base vertex set, usually a framework
/// restricted to a core.
#[derive(Debug, Clone)]
pub struct BasePlacement {
    pub vertices: Vec<usize>,
    pub coords: Vec<Vec<Complex64>>,
}

impl BasePlacement {
    pub fn restrict(framework: &Framework, vertices: &[usize]) -> Self {
        BasePlacement {
            vertices: vertices.to_vec(),
            coords: vertices.iter().map(|&v| framework.coords[v].clone()).collect(),
        }
    }
}

/// One pinned realisation.
#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub coords: Vec<Vec<Complex64>>,
    /// Set when another solution sits within 10x the separation tolerance.
    pub near_degenerate: bool,
}

/// All non-congruent realisations found for one instance.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionSet {
    pub field: NumField,
    pub base_vertices: Vec<usize>,
    pub solutions: Vec<Solution>,
    /// Base uniqueness was assumed (non-complete base) rather than
    /// classical (complete graph on the base).
    pub assumed_unique_base: bool,
    /// Some vertex carried more than d edges to earlier vertices; counts
    /// from such runs are not certificate-grade.
    pub surplus_pruning_used: bool,
}

impl SolutionSet {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// Samples coordinates uniformly from [-1, 1) per component (real and
/// imaginary parts drawn in that order when complex).
pub fn sample_framework(g: &Graph, d: usize, field: NumField, seed: u64) -> Framework {
    let mut rng = SeededRng::new(seed);
    let coords = (0..g.vertex_count())
        .map(|_| {
            (0..d)
                .map(|_| {
                    let re = rng.symmetric_unit();
                    let im = match field {
                        NumField::Real => 0.0,
                        NumField::Complex => rng.symmetric_unit(),
                    };
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    Framework { graph: g.clone(), d, field, coords }
}

/// Squared lengths of every edge under the bilinear form.
pub fn edge_lengths(framework: &Framework) -> LengthAssignment {
    let mut out = LengthAssignment::new();
    for (u, v) in framework.graph.edges() {
        out.insert(u, v, framework.squared_length(u, v));
    }
    out
}

struct Enumeration<'a> {
    d: usize,
    lengths: &'a LengthAssignment,
    field: NumField,
    tol: &'a Tolerances,
    tower: &'a TowerDecomposition,
    /// Coordinates per vertex; base filled, steps filled during the DFS.
    placed: Vec<Option<Vec<C>>>,
    leaves: Vec<Vec<Vec<C>>>,
}

impl Enumeration<'_> {
    fn length(&self, u: usize, v: usize) -> Result<C, EnumerateError> {
        self.lengths.get(u, v).ok_or(EnumerateError::MissingLength(u.min(v), u.max(v)))
    }

    fn dfs(&mut self, step_idx: usize) -> Result<(), EnumerateError> {
        if step_idx == self.tower.steps.len() {
            let leaf: Vec<Vec<C>> = self
                .tower
                .steps
                .iter()
                .map(|s| self.placed[s.vertex].clone().expect("step vertex placed"))
                .collect();
            self.leaves.push(leaf);
            return Ok(());
        }
        let step = &self.tower.steps[step_idx];
        let centers: Vec<Vec<C>> = step
            .defining
            .iter()
            .map(|&u| self.placed[u].clone().expect("defining neighbour placed"))
            .collect();
        let lengths: Vec<C> = step
            .defining
            .iter()
            .map(|&u| self.length(step.vertex, u))
            .collect::<Result<_, _>>()?;
        let candidates = sphere_intersection(&centers, &lengths, self.field, self.tol)?;
        let surplus: Vec<(Vec<C>, C)> = step
            .surplus
            .iter()
            .map(|&u| {
                Ok((
                    self.placed[u].clone().expect("surplus neighbour placed"),
                    self.length(step.vertex, u)?,
                ))
            })
            .collect::<Result<_, EnumerateError>>()?;
        for cand in candidates {
            let violates = surplus.iter().any(|(p, l)| {
                let diff: Vec<C> = (0..self.d).map(|j| cand[j] - p[j]).collect();
                let f = dot(&diff, &diff) - l;
                f.norm() / l.norm().max(1.0) > self.tol.surplus_prune
            });
            if violates {
                continue;
            }
            self.placed[step.vertex] = Some(cand);
            self.dfs(step_idx + 1)?;
            self.placed[step.vertex] = None;
        }
        Ok(())
    }
}

/// Enumerates all realisations of `g` with the given edge lengths that
/// extend the base placement, modulo congruence. The graph minus the base
/// must decompose into single-vertex additions with at least d placed
/// neighbours each: exactly d unless `allow_surplus` is set.
pub fn enumerate_realisations(
    g: &Graph,
    d: usize,
    lengths: &LengthAssignment,
    base: &BasePlacement,
    field: NumField,
    allow_surplus: bool,
    tol: &Tolerances,
) -> Result<SolutionSet, EnumerateError> {
    assert!(d >= 1, "d must be positive");
    let n = g.vertex_count();
    if base.vertices.len() < d + 1 {
        return Err(EnumerateError::BaseTooSmall(base.vertices.len(), d + 1));
    }
    assert_eq!(base.vertices.len(), base.coords.len(), "base coords must match base vertices");
    for (u, v) in g.edges() {
        let l = lengths.get(u, v).ok_or(EnumerateError::MissingLength(u, v))?;
        if l.norm() < tol.degeneracy {
            return Err(EnumerateError::GenericityFailure(format!(
                "edge {{{u}, {v}}} has a near-zero squared length"
            )));
        }
    }

    let mut placed: Vec<Option<Vec<C>>> = vec![None; n];
    for (&v, coords) in base.vertices.iter().zip(&base.coords) {
        assert_eq!(coords.len(), d, "base coordinates must be d-dimensional");
        placed[v] = Some(coords.clone());
    }
    // The base must already satisfy its own edge lengths.
    for (u, v) in g.edges() {
        if let (Some(pu), Some(pv)) = (&placed[u], &placed[v]) {
            let diff: Vec<C> = (0..d).map(|j| pu[j] - pv[j]).collect();
            let l = lengths.get(u, v).expect("checked above");
            let f = dot(&diff, &diff) - l;
            if f.norm() / l.norm().max(1.0) > tol.residual {
                return Err(EnumerateError::InconsistentBase(u, v));
            }
        }
    }

    let tower = if allow_surplus {
        decompose_greedy(g, d, &base.vertices)?
    } else {
        decompose_exact(g, d, &base.vertices)?
    };

    let mut enumeration = Enumeration {
        d,
        lengths,
        field,
        tol,
        tower: &tower,
        placed,
        leaves: Vec::new(),
    };
    enumeration.dfs(0)?;
    let leaves = std::mem::take(&mut enumeration.leaves);

    // Refinement system: one equation per defining edge, anchored at base
    // coordinates or earlier steps.
    let mut slot_of = vec![usize::MAX; n];
    for (i, step) in tower.steps.iter().enumerate() {
        slot_of[step.vertex] = i;
    }
    let base_coord = |v: usize| -> Vec<C> {
        let idx = base.vertices.iter().position(|&b| b == v).expect("base vertex");
        base.coords[idx].clone()
    };
    let mut equations = Vec::new();
    for step in &tower.steps {
        for &u in &step.defining {
            equations.push(EdgeEquation {
                slot: slot_of[step.vertex],
                other: if slot_of[u] == usize::MAX {
                    Anchor::Fixed(base_coord(u))
                } else {
                    Anchor::Slot(slot_of[u])
                },
                length: lengths.get(step.vertex, u).expect("defining edge length"),
            });
        }
    }

    let pin: Vec<usize> = base.vertices[..=d].to_vec();
    let mut accepted: Vec<Vec<Vec<C>>> = Vec::new();
    'leaf: for mut leaf in leaves {
        if !tower.steps.is_empty() {
            solve::newton_refine(&mut leaf, &equations, d, tol)?;
        }
        let mut full: Vec<Vec<C>> = vec![Vec::new(); n];
        for (&v, coords) in base.vertices.iter().zip(&base.coords) {
            full[v] = coords.clone();
        }
        for (i, step) in tower.steps.iter().enumerate() {
            full[step.vertex] = leaf[i].clone();
        }
        for (u, v) in g.edges() {
            let diff: Vec<C> = (0..d).map(|j| full[u][j] - full[v][j]).collect();
            let l = lengths.get(u, v).expect("checked above");
            let r = (dot(&diff, &diff) - l).norm() / l.norm().max(1.0);
            if r > tol.residual {
                if tower.has_surplus {
                    // A branch that survived loose pruning but fails the
                    // refined check is simply not a solution.
                    continue 'leaf;
                }
                return Err(EnumerateError::GenericityFailure(format!(
                    "edge {{{u}, {v}}} residual {r:.3e} after refinement"
                )));
            }
        }
        pin_solution(&mut full, &pin, tol.degeneracy)?;
        accepted.push(full);
    }

    // Deduplicate modulo congruence: pinned placements are equal iff the
    // realisations are congruent.
    let mut kept: Vec<Vec<Vec<C>>> = Vec::new();
    for sol in accepted {
        if !kept.iter().any(|k| placement_distance(k, &sol) < tol.separation) {
            kept.push(sol);
        }
    }
    let near: Vec<bool> = (0..kept.len())
        .map(|i| {
            kept.iter().enumerate().any(|(j, other)| {
                i != j && placement_distance(&kept[i], other) < 10.0 * tol.separation
            })
        })
        .collect();
    let solutions = kept
        .into_iter()
        .zip(near)
        .map(|(coords, near_degenerate)| Solution { coords, near_degenerate })
        .collect();

    let base_complete = {
        let b = &base.vertices;
        b.iter().enumerate().all(|(i, &u)| b[i + 1..].iter().all(|&v| g.has_edge(u, v)))
    };
    Ok(SolutionSet {
        field,
        base_vertices: base.vertices.clone(),
        solutions,
        assumed_unique_base: !base_complete,
        surplus_pruning_used: tower.has_surplus,
    })
}

/// Real and complex counts for one sampled generic length assignment.
#[derive(Debug, Clone, Serialize)]
pub struct RealComplexCounts {
    pub real: usize,
    pub complex: usize,
    pub base: Vec<usize>,
    pub extensions: usize,
    pub assumed_unique_base: bool,
}

/// Samples a real framework, extracts its lengths and enumerates both
/// fields over the default base (the (d+1)-core, or the complete floor of
/// a pure tower). Genericity failures trigger a reseed up to the retry
/// budget.
pub fn count_real_and_complex(
    g: &Graph,
    d: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<RealComplexCounts, EnumerateError> {
    let base_set = default_base(g, d)?;
    let mut failures = 0usize;
    for attempt in 0..=tol.retry_budget as u64 {
        let framework = sample_framework(g, d, NumField::Real, seed.wrapping_add(attempt));
        let lengths = edge_lengths(&framework);
        let base = BasePlacement::restrict(&framework, &base_set);
        let complex =
            match enumerate_realisations(g, d, &lengths, &base, NumField::Complex, false, tol) {
                Ok(set) => set,
                Err(EnumerateError::GenericityFailure(_)) => {
                    failures += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
        let real = match enumerate_realisations(g, d, &lengths, &base, NumField::Real, false, tol)
        {
            Ok(set) => set,
            Err(EnumerateError::GenericityFailure(_)) => {
                failures += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if real.count() < 1 || real.count() > complex.count() {
            return Err(EnumerateError::Sandwich { real: real.count(), complex: complex.count() });
        }
        return Ok(RealComplexCounts {
            real: real.count(),
            complex: complex.count(),
            base: base_set,
            extensions: g.vertex_count() - base.vertices.len(),
            assumed_unique_base: complex.assumed_unique_base,
        });
    }
    Err(EnumerateError::RetriesExhausted(failures))
}
