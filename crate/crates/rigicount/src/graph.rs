//! Finite simple undirected graphs on vertex set `0..n`, with the peeling
//! and connectivity primitives the rest of the crate is built on.
//!
//! Graphs are immutable values: every operation returns a new structure or a
//! trace, so they can be shared freely across threads.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph. Vertex labels are exactly `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted neighbour lists; `adj[v]` never contains `v` or duplicates.
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicates and
    /// out-of-range labels.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, adj, m: seen.len() })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("complete graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).expect("cycle is valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("path is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        self.m == self.n * self.n.saturating_sub(1) / 2
    }

    /// Edges as sorted pairs `(u, v)` with `u < v`, lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Subgraph induced by `keep`; vertex `keep[i]` becomes label `i`.
    /// `keep` must be sorted and duplicate-free.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            debug_assert!(i == 0 || keep[i - 1] < v, "keep must be sorted");
            index[v] = i;
        }
        let mut edges = Vec::new();
        for &u in keep {
            for &v in &self.adj[u] {
                if u < v && index[v] != usize::MAX {
                    edges.push((index[u], index[v]));
                }
            }
        }
        Graph::new(keep.len(), &edges).expect("induced subgraph is valid")
    }

    /// Returns the graph plus one new vertex (label `n`) adjacent to every
    /// existing vertex.
    pub fn cone(&self) -> Graph {
        let mut edges = self.edges();
        for v in 0..self.n {
            edges.push((v, self.n));
        }
        Graph::new(self.n + 1, &edges).expect("cone is valid")
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let mut edges = self.edges();
        edges.push((u, v));
        Graph::new(self.n, &edges)
    }

    pub fn remove_edge(&self, u: usize, v: usize) -> Graph {
        let key = (u.min(v), u.max(v));
        let edges: Vec<_> = self.edges().into_iter().filter(|&e| e != key).collect();
        Graph::new(self.n, &edges).expect("edge removal is valid")
    }

    /// Canonical text form: first line `n m`, then one `u v` line per edge,
    /// edges sorted lexicographically, LF line endings.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (lineno, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header line".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse = |tok: Option<&str>, lineno: usize| -> Result<usize, GraphError> {
            tok.ok_or(GraphError::Parse { line: lineno + 1, msg: "missing field".into() })?
                .parse()
                .map_err(|e| GraphError::Parse { line: lineno + 1, msg: format!("{e}") })
        };
        let n = parse(it.next(), lineno)?;
        let m = parse(it.next(), lineno)?;
        let mut edges = Vec::with_capacity(m);
        for (lineno, line) in lines {
            let mut it = line.split_whitespace();
            let u = parse(it.next(), lineno)?;
            let v = parse(it.next(), lineno)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, &edges)
    }
}

/// One removal step of a peel: the vertex, its degree when removed and its
/// neighbour set at removal time (the data a 0-extension replay needs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelStep {
    pub vertex: usize,
    pub degree: usize,
    pub neighbors: Vec<usize>,
}

/// Record of peeling a graph down to its k-core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelTrace {
    pub removed: Vec<PeelStep>,
    /// Sorted vertex set of the k-core (possibly empty).
    pub survivors: Vec<usize>,
}

impl PeelTrace {
    /// True when every removal happened at degree exactly `d`. This is the
    /// structural condition for the reverse peel to be a chain of
    /// d-dimensional 0-extensions.
    pub fn all_removals_exactly(&self, d: usize) -> bool {
        self.removed.iter().all(|s| s.degree == d)
    }
}

/// Peels vertices of degree `<= k - 1` until the k-core remains. Among the
/// removable vertices the lowest label always goes first, so the trace is
/// deterministic even though the surviving core is order-independent.
pub fn k_core(g: &Graph, k: usize) -> PeelTrace {
    assert!(k >= 1, "k must be positive");
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    let mut removed = Vec::new();
    while let Some(&v) = queue.iter().next() {
        queue.remove(&v);
        alive[v] = false;
        let neighbors: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
        for &w in &neighbors {
            degree[w] -= 1;
            if degree[w] < k {
                queue.insert(w);
            }
        }
        removed.push(PeelStep { vertex: v, degree: neighbors.len(), neighbors });
    }
    let survivors = (0..n).filter(|&v| alive[v]).collect();
    PeelTrace { removed, survivors }
}

/// Same peel as [`k_core`]; the name marks call sites that consume the
/// per-removal neighbour sets rather than just the surviving core.
pub fn peel_to_core(g: &Graph, k: usize) -> PeelTrace {
    k_core(g, k)
}

/// Exact vertex k-connectivity via unit-capacity max flow on the split
/// network (Menger). True iff the graph has more than `k` vertices and no
/// vertex cut of size `< k`.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    assert!(k >= 1, "k must be positive");
    let n = g.vertex_count();
    if n <= k {
        return false;
    }
    if g.is_complete() {
        return true;
    }
    if g.min_degree() < k {
        return false;
    }
    // A minimum vertex cut of a non-complete graph separates some
    // non-adjacent pair, so checking local connectivity over those pairs
    // is exact.
    for u in 0..n {
        for v in (u + 1)..n {
            if !g.has_edge(u, v) && vertex_flow_at_least(g, u, v, k).is_none() {
                return false;
            }
        }
    }
    true
}

/// Menger value between two non-adjacent vertices, capped at `want`:
/// returns `Some(flow)` once `flow >= want`, or `None` with the max flow
/// below `want`. Unit vertex capacities via the standard in/out split.
fn vertex_flow_at_least(g: &Graph, s: usize, t: usize, want: usize) -> Option<usize> {
    let n = g.vertex_count();
    // Node 2v = v_in, 2v+1 = v_out. Arcs: v_in -> v_out (cap 1, except s, t
    // which are uncapped), and u_out -> v_in for each edge uv.
    let node = |v: usize, out: bool| 2 * v + usize::from(out);
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut cap: Vec<i32> = Vec::new();
    let mut push = |arcs: &mut Vec<(usize, usize)>, cap: &mut Vec<i32>, head: &mut Vec<Vec<usize>>, a: usize, b: usize, c: i32| {
        head[a].push(arcs.len());
        arcs.push((a, b));
        cap.push(c);
        head[b].push(arcs.len());
        arcs.push((b, a));
        cap.push(0);
    };
    for v in 0..n {
        let c = if v == s || v == t { i32::MAX / 2 } else { 1 };
        push(&mut arcs, &mut cap, &mut head, node(v, false), node(v, true), c);
    }
    for (u, v) in g.edges() {
        push(&mut arcs, &mut cap, &mut head, node(u, true), node(v, false), i32::MAX / 2);
        push(&mut arcs, &mut cap, &mut head, node(v, true), node(u, false), i32::MAX / 2);
    }
    let source = node(s, true);
    let sink = node(t, false);
    let mut flow = 0usize;
    while flow < want {
        // BFS for an augmenting path of residual capacity >= 1.
        let mut prev_arc = vec![usize::MAX; 2 * n];
        let mut visited = vec![false; 2 * n];
        let mut queue = std::collections::VecDeque::new();
        visited[source] = true;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &a in &head[x] {
                if arcs[a].0 == x && cap[a] > 0 && !visited[arcs[a].1] {
                    visited[arcs[a].1] = true;
                    prev_arc[arcs[a].1] = a;
                    queue.push_back(arcs[a].1);
                }
            }
        }
        if !visited[sink] {
            return None;
        }
        let mut x = sink;
        while x != source {
            let a = prev_arc[x];
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            x = arcs[a].0;
        }
        flow += 1;
    }
    Some(flow)
}

/// Convenience wrapper returning the cone (used by the spherical pipeline).
pub fn cone(g: &Graph) -> Graph {
    g.cone()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 5-vertex, 7-edge graph used as the running counterexample:
    /// a triangle with two chained degree-2 attachments.
    pub(crate) fn fig1() -> Graph {
        // 1-based in the source material; shifted down to 0-based here.
        Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn rejects_invalid_edges() {
        assert_eq!(Graph::new(3, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(Graph::new(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(Graph::new(3, &[(0, 3)]), Err(GraphError::VertexOutOfRange(3, 3)));
    }

    #[test]
    fn k4_is_its_own_3_core() {
        let trace = k_core(&Graph::complete(4), 3);
        assert_eq!(trace.survivors, vec![0, 1, 2, 3]);
        assert!(trace.removed.is_empty());
    }

    #[test]
    fn fig1_3_core_is_empty() {
        let trace = k_core(&fig1(), 3);
        assert!(trace.survivors.is_empty());
        // Lowest-label-first: 4 goes first (only vertex of degree <= 2),
        // then 2, then the triangle 0, 1, 3 cascades.
        let order: Vec<usize> = trace.removed.iter().map(|s| s.vertex).collect();
        assert_eq!(order, vec![4, 2, 0, 1, 3]);
        let degrees: Vec<usize> = trace.removed.iter().map(|s| s.degree).collect();
        assert_eq!(degrees, vec![2, 2, 2, 1, 0]);
    }

    #[test]
    fn path_2_core_is_empty() {
        let trace = k_core(&Graph::path(4), 2);
        assert!(trace.survivors.is_empty());
    }

    #[test]
    fn peel_exposes_neighbor_sets() {
        // K_4 plus one vertex joined to two of its vertices.
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4)])
            .unwrap();
        let trace = peel_to_core(&g, 3);
        assert_eq!(trace.survivors, vec![0, 1, 2, 3]);
        assert_eq!(trace.removed.len(), 1);
        assert_eq!(trace.removed[0].vertex, 4);
        assert_eq!(trace.removed[0].degree, 2);
        assert_eq!(trace.removed[0].neighbors, vec![0, 1]);
        assert!(trace.all_removals_exactly(2));
    }

    #[test]
    fn chained_attachments_peel_at_degree_two() {
        // K_4 plus a chain of two degree-2 attachments.
        let g = Graph::new(
            6,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4), (4, 5), (2, 5)],
        )
        .unwrap();
        let trace = peel_to_core(&g, 3);
        assert_eq!(trace.survivors, vec![0, 1, 2, 3]);
        let degrees: Vec<usize> = trace.removed.iter().map(|s| s.degree).collect();
        assert_eq!(degrees, vec![2, 2]);
    }

    #[test]
    fn reverse_replay_reconstructs_vertex_set() {
        let g = fig1();
        let trace = k_core(&g, 3);
        let mut set: BTreeSet<usize> = trace.survivors.iter().copied().collect();
        for step in trace.removed.iter().rev() {
            set.insert(step.vertex);
        }
        assert_eq!(set.len(), g.vertex_count());
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_k_connected(&Graph::complete(5), 4));
        assert!(!is_k_connected(&Graph::cycle(5), 3));
        assert!(is_k_connected(&Graph::cycle(5), 2));
        assert!(!is_k_connected(&fig1(), 3));
        assert!(is_k_connected(&fig1(), 2));
        // K_n is not n-connected: too few vertices.
        assert!(!is_k_connected(&Graph::complete(4), 4));
    }

    #[test]
    fn cone_examples() {
        assert_eq!(Graph::complete(3).cone(), Graph::complete(4));
        assert_eq!(Graph::empty(1).cone(), Graph::complete(2));
        let fan = Graph::path(3).cone();
        assert_eq!(fan.vertex_count(), 4);
        assert_eq!(fan.edge_count(), 5);
    }

    #[test]
    fn text_round_trip_is_canonical() {
        let g = fig1();
        let text = g.to_text();
        assert_eq!(text, "5 7\n0 1\n0 2\n0 3\n1 2\n1 3\n2 4\n3 4\n");
        assert_eq!(Graph::from_text(&text).unwrap(), g);
    }
}
