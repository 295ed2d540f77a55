//! Decomposing a graph into a base plus a sequence of vertex additions,
//! the shape the branch enumeration consumes.

use crate::graph::Graph;

use super::EnumerateError;

/// One vertex addition: `defining` are the placed neighbours whose edges
/// determine the two candidate positions, `surplus` the remaining placed
/// neighbours whose edges only prune branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionStep {
    pub vertex: usize,
    pub defining: Vec<usize>,
    pub surplus: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerDecomposition {
    /// Sorted base vertex set.
    pub base: Vec<usize>,
    /// Additions in placement order.
    pub steps: Vec<ExtensionStep>,
    pub has_surplus: bool,
}

/// Exact 0-extension decomposition: peels non-base vertices of current
/// degree at most d, lowest label first. Every removal must happen at
/// degree exactly d (fewer leaves the vertex underdetermined, and the
/// total removed-degree count rules out compensating surpluses).
pub fn decompose_exact(
    g: &Graph,
    d: usize,
    base: &[usize],
) -> Result<TowerDecomposition, EnumerateError> {
    let n = g.vertex_count();
    let mut in_base = vec![false; n];
    for &v in base {
        in_base[v] = true;
    }
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| !in_base[v] && degree[v] <= d).collect();
    let mut removals: Vec<ExtensionStep> = Vec::new();
    while let Some(&v) = queue.iter().next() {
        queue.remove(&v);
        if degree[v] < d {
            return Err(EnumerateError::Underdetermined { vertex: v, degree: degree[v] });
        }
        alive[v] = false;
        let neighbors: Vec<usize> =
            g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
        for &w in &neighbors {
            degree[w] -= 1;
            if !in_base[w] && degree[w] <= d {
                queue.insert(w);
            }
        }
        removals.push(ExtensionStep { vertex: v, defining: neighbors, surplus: Vec::new() });
    }
    let remaining: Vec<usize> = (0..n).filter(|&v| alive[v] && !in_base[v]).collect();
    if !remaining.is_empty() {
        return Err(EnumerateError::NotATower { remaining });
    }
    removals.reverse();
    Ok(TowerDecomposition { base: base.to_vec(), steps: removals, has_surplus: false })
}

/// Greedy cover with surplus filtering: starting from the base, repeatedly
/// places the lowest-labelled vertex with at least d placed neighbours.
/// The d earliest-placed neighbours define the solve; the rest prune.
pub fn decompose_greedy(
    g: &Graph,
    d: usize,
    base: &[usize],
) -> Result<TowerDecomposition, EnumerateError> {
    let n = g.vertex_count();
    let mut place_index = vec![usize::MAX; n];
    for (i, &v) in base.iter().enumerate() {
        place_index[v] = i;
    }
    let mut placed_count = base.len();
    let mut steps = Vec::new();
    let mut has_surplus = false;
    while placed_count < n {
        let candidate = (0..n)
            .filter(|&v| place_index[v] == usize::MAX)
            .find(|&v| {
                g.neighbors(v).iter().filter(|&&u| place_index[u] != usize::MAX).count() >= d
            });
        let Some(v) = candidate else {
            let remaining: Vec<usize> =
                (0..n).filter(|&v| place_index[v] == usize::MAX).collect();
            return Err(EnumerateError::NotATower { remaining });
        };
        let mut placed_neighbors: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| place_index[u] != usize::MAX)
            .collect();
        placed_neighbors.sort_by_key(|&u| place_index[u]);
        let surplus = placed_neighbors.split_off(d);
        has_surplus |= !surplus.is_empty();
        place_index[v] = base.len() + steps.len();
        steps.push(ExtensionStep { vertex: v, defining: placed_neighbors, surplus });
        placed_count += 1;
    }
    Ok(TowerDecomposition { base: base.to_vec(), steps, has_surplus })
}

/// Default enumeration base: peel vertices of degree exactly d until
/// either every remaining vertex has degree at least d + 1 (the remainder
/// is then precisely the (d+1)-core) or the remainder is a complete graph
/// on d + 1 vertices (the floor of a pure extension tower). A vertex of
/// degree below d anywhere along the way means the instance has an
/// underdetermined vertex and no finite count.
pub fn default_base(g: &Graph, d: usize) -> Result<Vec<usize>, EnumerateError> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive_count = n;
    loop {
        let mut min_deg = usize::MAX;
        let mut pick = None;
        for v in 0..n {
            if alive[v] && degree[v] < min_deg {
                min_deg = degree[v];
                pick = Some(v);
            }
        }
        if min_deg >= d + 1 || alive_count == 0 {
            break;
        }
        if alive_count == d + 1 && min_deg == d {
            // Complete graph on d + 1 vertices.
            break;
        }
        if min_deg < d {
            let v = pick.expect("alive vertex exists");
            return Err(EnumerateError::Underdetermined { vertex: v, degree: min_deg });
        }
        // Remove the lowest-labelled vertex of degree exactly d.
        let v = (0..n).find(|&v| alive[v] && degree[v] == d).expect("min degree is d");
        alive[v] = false;
        alive_count -= 1;
        for &w in g.neighbors(v) {
            if alive[w] {
                degree[w] -= 1;
            }
        }
    }
    Ok((0..n).filter(|&v| alive[v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> Graph {
        Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn default_base_of_fig1_is_a_triangle() {
        // Exact degree-2 peel: 4, then 2, stopping at the triangle 0-1-3.
        let base = default_base(&fig1(), 2).unwrap();
        assert_eq!(base, vec![0, 1, 3]);
        let tower = decompose_exact(&fig1(), 2, &base).unwrap();
        assert_eq!(tower.steps.len(), 2);
        // Reverse peel order: 2 placed first from {0, 1}, then 4 from {2, 3}.
        assert_eq!(tower.steps[0].vertex, 2);
        assert_eq!(tower.steps[0].defining, vec![0, 1]);
        assert_eq!(tower.steps[1].vertex, 4);
        assert_eq!(tower.steps[1].defining, vec![2, 3]);
    }

    #[test]
    fn default_base_keeps_a_d1_core() {
        // K_5 with a pendant chain keeps K_5 (its 3-core) as base at d = 2.
        let mut edges = Graph::complete(5).edges();
        edges.extend([(0, 5), (1, 5), (5, 6), (2, 6)]);
        let g = Graph::new(7, &edges).unwrap();
        let base = default_base(&g, 2).unwrap();
        assert_eq!(base, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn non_tower_leftovers_are_reported() {
        // Two disjoint K_4s cannot peel to one of them at d = 2.
        let mut edges = Graph::complete(4).edges();
        for (u, v) in Graph::complete(4).edges() {
            edges.push((u + 4, v + 4));
        }
        let g = Graph::new(8, &edges).unwrap();
        let err = decompose_exact(&g, 2, &[0, 1, 2, 3]).unwrap_err();
        assert!(matches!(err, EnumerateError::NotATower { .. }));
    }

    #[test]
    fn low_degree_vertex_is_underdetermined() {
        // Triangle with a pendant at d = 2: the pendant has one constraint.
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let err = default_base(&g, 2).unwrap_err();
        assert!(matches!(err, EnumerateError::Underdetermined { vertex: 3, degree: 1 }));
    }

    #[test]
    fn greedy_cover_collects_surplus_edges() {
        let g = Graph::complete(4);
        let tower = decompose_greedy(&g, 2, &[0, 1]).unwrap();
        assert_eq!(tower.steps.len(), 2);
        assert!(tower.has_surplus);
        // Vertex 3 is placed last and sees all three earlier vertices.
        assert_eq!(tower.steps[1].vertex, 3);
        assert_eq!(tower.steps[1].defining.len(), 2);
        assert_eq!(tower.steps[1].surplus.len(), 1);
    }
}
