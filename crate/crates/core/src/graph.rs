//! Undirected simple graph over dense integer node ids, plus the path and
//! centrality primitives everything else is built on.
//!
//! Removal never renumbers: a removed node is marked dead and stripped of its
//! edges, so ids stay meaningful across a whole attack sequence.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense node index, stable for the lifetime of a trial.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sentinel hop count for pairs with no connecting path.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node {0} rejected: graph is simple")]
    SelfLoop(NodeId),
    #[error("node {0} is dead")]
    DeadNode(NodeId),
    #[error("node {0} out of range")]
    OutOfRange(NodeId),
}

/// Result of an edge insertion; duplicates are reported, not rejected,
/// because generators retry on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeInsert {
    Added,
    AlreadyPresent,
}

/// Hop distances from one source over the alive part of the graph.
#[derive(Debug, Clone)]
pub struct DistanceRow {
    source: NodeId,
    dist: Vec<u32>,
}

impl DistanceRow {
    pub fn source(&self) -> NodeId {
        self.source
    }

    /// Hop count to `v`, or `None` when no path exists (or `v` is dead).
    pub fn distance(&self, v: NodeId) -> Option<u32> {
        match self.dist.get(v.index()) {
            Some(&d) if d != UNREACHABLE => Some(d),
            _ => None,
        }
    }

    /// Raw per-node distances with [`UNREACHABLE`] sentinels.
    pub fn raw(&self) -> &[u32] {
        &self.dist
    }
}

/// Undirected simple graph with alive/dead node marking.
///
/// Invariants, kept by every mutation: adjacency symmetry, no self-loops,
/// `edge_count` equals half the sum of alive degrees, and dead nodes have
/// empty adjacency and appear in nobody's list.
#[derive(Debug, Clone)]
pub struct Graph {
    alive: Vec<bool>,
    adj: Vec<Vec<u32>>,
    alive_count: usize,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` alive nodes and no edges.
    pub fn with_nodes(n: usize) -> Self {
        Graph {
            alive: vec![true; n],
            adj: vec![Vec::new(); n],
            alive_count: n,
            edge_count: 0,
        }
    }

    /// Convenience constructor for fixtures; panics on invalid edges.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Graph::with_nodes(n);
        for &(u, v) in edges {
            g.add_edge(NodeId(u), NodeId(v)).expect("valid fixture edge");
        }
        g
    }

    /// Total nodes ever created (alive + dead).
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        self.alive.get(v.index()).copied().unwrap_or(false)
    }

    /// Degree of an alive node (0 for dead nodes).
    pub fn degree(&self, v: NodeId) -> usize {
        self.adj.get(v.index()).map_or(0, Vec::len)
    }

    /// Alive neighbors of `v`, in insertion order.
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[v.index()].iter().map(|&w| NodeId(w))
    }

    /// Alive nodes in ascending id order.
    pub fn alive_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| NodeId(i as u32))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj
            .get(u.index())
            .is_some_and(|row| row.contains(&v.0))
    }

    fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v.index() >= self.adj.len() {
            Err(GraphError::OutOfRange(v))
        } else if !self.alive[v.index()] {
            Err(GraphError::DeadNode(v))
        } else {
            Ok(())
        }
    }

    /// Insert the undirected edge `{u, v}`. Re-inserting an existing edge is
    /// a no-op reported as [`EdgeInsert::AlreadyPresent`].
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<EdgeInsert, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.check_node(u)?;
        self.check_node(v)?;
        if self.adj[u.index()].contains(&v.0) {
            return Ok(EdgeInsert::AlreadyPresent);
        }
        self.adj[u.index()].push(v.0);
        self.adj[v.index()].push(u.0);
        self.edge_count += 1;
        debug_assert!(self.adj[v.index()].contains(&u.0));
        Ok(EdgeInsert::Added)
    }

    /// Mark `v` dead and strip its incident edges. Returns the former alive
    /// neighborhood in ascending id order (the rewiring module consumes it).
    pub fn remove_node(&mut self, v: NodeId) -> Result<Vec<NodeId>, GraphError> {
        self.check_node(v)?;
        let row = std::mem::take(&mut self.adj[v.index()]);
        for &u in &row {
            let list = &mut self.adj[u as usize];
            let pos = list
                .iter()
                .position(|&w| w == v.0)
                .expect("adjacency symmetry");
            list.swap_remove(pos);
        }
        self.edge_count -= row.len();
        self.alive[v.index()] = false;
        self.alive_count -= 1;
        let mut out: Vec<NodeId> = row.into_iter().map(NodeId).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Hop distances from `s` over alive nodes; unreachable nodes (and all
    /// dead nodes) carry the [`UNREACHABLE`] sentinel.
    pub fn bfs_distances(&self, s: NodeId) -> Result<DistanceRow, GraphError> {
        self.check_node(s)?;
        let mut dist = vec![UNREACHABLE; self.adj.len()];
        let mut queue: Vec<u32> = Vec::with_capacity(self.alive_count);
        dist[s.index()] = 0;
        queue.push(s.0);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            let du = dist[u];
            for &w in &self.adj[u] {
                if dist[w as usize] == UNREACHABLE {
                    dist[w as usize] = du + 1;
                    queue.push(w);
                }
            }
        }
        Ok(DistanceRow { source: s, dist })
    }

    /// Partition of the alive nodes into maximal connected sets, largest
    /// first (equal sizes ordered by smallest member id). Members ascend.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut comps: Vec<Vec<NodeId>> = Vec::new();
        let mut queue: Vec<u32> = Vec::new();
        for start in 0..n {
            if !self.alive[start] || seen[start] {
                continue;
            }
            queue.clear();
            queue.push(start as u32);
            seen[start] = true;
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head] as usize;
                head += 1;
                for &w in &self.adj[u] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push(w);
                    }
                }
            }
            let mut comp: Vec<NodeId> = queue.iter().map(|&u| NodeId(u)).collect();
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    /// Alive nodes at hop distance exactly 2 from `v`, ascending.
    ///
    /// Panics if `v` is dead; callers only ask about survivors.
    pub fn second_neighbors(&self, v: NodeId) -> Vec<NodeId> {
        assert!(self.is_alive(v), "second_neighbors of dead node {v}");
        let mut excluded = vec![false; self.adj.len()];
        excluded[v.index()] = true;
        for &u in &self.adj[v.index()] {
            excluded[u as usize] = true;
        }
        let mut out: Vec<u32> = Vec::new();
        for &u in &self.adj[v.index()] {
            for &w in &self.adj[u as usize] {
                if !excluded[w as usize] {
                    excluded[w as usize] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out.into_iter().map(NodeId).collect()
    }

    /// Betweenness centrality over unordered alive pairs, endpoints excluded,
    /// with 0/0 counted as 0 for disconnected pairs. Brandes accumulation,
    /// one BFS per source.
    ///
    /// Scores are unnormalized; every consumer only ranks them. Dead nodes
    /// score 0. The parallel reduction is chunked in a fixed order, so the
    /// result is bit-identical regardless of thread count.
    pub fn betweenness(&self) -> Vec<f64> {
        use rayon::prelude::*;

        let n = self.adj.len();
        let mut scores = vec![0.0f64; n];
        if self.alive_count < 3 {
            return scores;
        }

        // CSR copy of the alive adjacency; dense arrays keep the per-source
        // sweeps cache-friendly.
        let mut row_ptr = vec![0u32; n + 1];
        for i in 0..n {
            row_ptr[i + 1] = row_ptr[i] + self.adj[i].len() as u32;
        }
        let mut cols = vec![0u32; row_ptr[n] as usize];
        for i in 0..n {
            let start = row_ptr[i] as usize;
            cols[start..start + self.adj[i].len()].copy_from_slice(&self.adj[i]);
        }

        // Sources in components of size <= 2 contribute nothing: there is no
        // interior node between their pairs. Skipping them makes the per-step
        // recomputation cheap once an attack has shattered the graph.
        let mut comp_size = vec![0u32; n];
        for comp in self.connected_components() {
            let size = comp.len() as u32;
            for v in comp {
                comp_size[v.index()] = size;
            }
        }
        let sources: Vec<u32> = (0..n as u32).filter(|&v| comp_size[v as usize] > 2).collect();

        const SRC_CHUNK: usize = 128;
        let partials: Vec<Vec<f64>> = sources
            .par_chunks(SRC_CHUNK)
            .map(|chunk| {
                let mut local = vec![0.0f64; n];
                let mut state = vec![
                    SourceState {
                        dist: UNREACHABLE,
                        sigma: 0.0,
                    };
                    n
                ];
                let mut delta = vec![0.0f64; n];
                let mut order: Vec<u32> = Vec::with_capacity(n);
                let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
                for &s in chunk {
                    brandes_source(
                        s, &row_ptr, &cols, &mut state, &mut delta, &mut order, &mut preds,
                        &mut local,
                    );
                }
                local
            })
            .collect();

        for partial in partials {
            for (acc, p) in scores.iter_mut().zip(partial) {
                *acc += p;
            }
        }
        // Each unordered pair was accumulated from both endpoints.
        for s in scores.iter_mut() {
            *s *= 0.5;
        }
        scores
    }

    /// Full structural invariant scan; used by tests and after generation.
    pub fn check_invariants(&self) {
        let mut degree_sum = 0usize;
        for (i, row) in self.adj.iter().enumerate() {
            if !self.alive[i] {
                assert!(row.is_empty(), "dead node {i} has adjacency");
                continue;
            }
            degree_sum += row.len();
            for &w in row {
                assert_ne!(w as usize, i, "self-loop on {i}");
                assert!(self.alive[w as usize], "alive {i} linked to dead {w}");
                assert!(
                    self.adj[w as usize].contains(&(i as u32)),
                    "asymmetric edge {i}-{w}"
                );
                assert_eq!(
                    row.iter().filter(|&&x| x == w).count(),
                    1,
                    "duplicate edge {i}-{w}"
                );
            }
        }
        assert_eq!(degree_sum, 2 * self.edge_count, "edge count drift");
        assert_eq!(
            self.alive.iter().filter(|&&a| a).count(),
            self.alive_count,
            "alive count drift"
        );
    }
}

/// Per-node BFS state for one Brandes source. Distance and path count live
/// in one 16-byte slot so the hot loops touch a single cache line per
/// neighbor. Path counts are integers, exactly representable in f64.
#[derive(Clone, Copy)]
struct SourceState {
    dist: u32,
    sigma: f64,
}

/// One Brandes source sweep: BFS forward pass counting shortest paths and
/// collecting predecessor lists, then dependency accumulation over exactly
/// the shortest-path DAG edges, in reverse visit order. `order` doubles as
/// the BFS queue; touched entries are reset before returning. This sweep
/// dominates the whole simulator's runtime under recalculated-betweenness
/// attacks, hence the unchecked indexing (ids are < n by CSR construction,
/// asserted in debug builds).
#[allow(clippy::too_many_arguments)]
fn brandes_source(
    s: u32,
    row_ptr: &[u32],
    cols: &[u32],
    state: &mut [SourceState],
    delta: &mut [f64],
    order: &mut Vec<u32>,
    preds: &mut [Vec<u32>],
    scores: &mut [f64],
) {
    debug_assert!(state.len() == delta.len() && state.len() + 1 == row_ptr.len());
    debug_assert!(cols.iter().all(|&w| (w as usize) < state.len()));
    order.clear();
    state[s as usize] = SourceState { dist: 0, sigma: 1.0 };
    order.push(s);
    let mut head = 0;
    while head < order.len() {
        let u = order[head] as usize;
        head += 1;
        unsafe {
            let next = state.get_unchecked(u).dist + 1;
            let su = state.get_unchecked(u).sigma;
            for &w in cols.get_unchecked(
                *row_ptr.get_unchecked(u) as usize..*row_ptr.get_unchecked(u + 1) as usize,
            ) {
                let w = w as usize;
                let entry = state.get_unchecked_mut(w);
                let d = entry.dist;
                if d == UNREACHABLE {
                    *entry = SourceState { dist: next, sigma: su };
                    order.push(w as u32);
                    preds.get_unchecked_mut(w).push(u as u32);
                } else if d == next {
                    entry.sigma += su;
                    preds.get_unchecked_mut(w).push(u as u32);
                }
            }
        }
    }
    for &w in order[1..].iter().rev() {
        let w = w as usize;
        unsafe {
            let dw = *delta.get_unchecked(w);
            let coef = (1.0 + dw) / state.get_unchecked(w).sigma;
            for &v in preds.get_unchecked(w) {
                let v = v as usize;
                *delta.get_unchecked_mut(v) += state.get_unchecked(v).sigma * coef;
            }
            *scores.get_unchecked_mut(w) += dw;
        }
    }
    for &v in order.iter() {
        let v = v as usize;
        state[v].dist = UNREACHABLE;
        state[v].sigma = 0.0;
        delta[v] = 0.0;
        preds[v].clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u32) -> NodeId {
        NodeId(v)
    }

    #[test]
    fn self_loop_rejected() {
        let mut g = Graph::with_nodes(4);
        assert_eq!(g.add_edge(n(3), n(3)), Err(GraphError::SelfLoop(n(3))));
    }

    #[test]
    fn duplicate_edge_is_reported_noop() {
        let mut g = Graph::with_nodes(2);
        assert_eq!(g.add_edge(n(0), n(1)), Ok(EdgeInsert::Added));
        assert_eq!(g.add_edge(n(1), n(0)), Ok(EdgeInsert::AlreadyPresent));
        assert_eq!(g.edge_count(), 1);
        g.check_invariants();
    }

    #[test]
    fn add_edge_is_symmetric() {
        let mut g = Graph::with_nodes(2);
        g.add_edge(n(0), n(1)).unwrap();
        assert_eq!(g.neighbors(n(0)).collect::<Vec<_>>(), vec![n(1)]);
        assert_eq!(g.neighbors(n(1)).collect::<Vec<_>>(), vec![n(0)]);
    }

    #[test]
    fn star_center_removal_returns_leaves() {
        // S4: center 0, leaves 1..3
        let mut g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(g.edge_count(), 3);
        let exposed = g.remove_node(n(0)).unwrap();
        assert_eq!(exposed, vec![n(1), n(2), n(3)]);
        assert_eq!(g.edge_count(), 0);
        g.check_invariants();
    }

    #[test]
    fn removing_isolated_node_returns_empty() {
        let mut g = Graph::with_nodes(3);
        assert_eq!(g.remove_node(n(1)).unwrap(), vec![]);
    }

    #[test]
    fn removing_dead_node_is_an_error() {
        let mut g = Graph::with_nodes(3);
        g.remove_node(n(1)).unwrap();
        assert_eq!(g.remove_node(n(1)), Err(GraphError::DeadNode(n(1))));
    }

    #[test]
    fn path_mid_removal_splits_components() {
        let mut g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.remove_node(n(1)).unwrap(), vec![n(0), n(2)]);
        let comps = g.connected_components();
        assert_eq!(comps, vec![vec![n(0)], vec![n(2)]]);
    }

    #[test]
    fn bfs_along_a_path() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let row = g.bfs_distances(n(0)).unwrap();
        assert_eq!(row.raw(), &[0, 1, 2]);
    }

    #[test]
    fn bfs_marks_other_component_unreachable() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let row = g.bfs_distances(n(0)).unwrap();
        assert_eq!(row.distance(n(1)), Some(1));
        assert_eq!(row.distance(n(2)), None);
        assert_eq!(row.distance(n(3)), None);
    }

    #[test]
    fn bfs_on_four_cycle() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let row = g.bfs_distances(n(0)).unwrap();
        assert_eq!(row.raw(), &[0, 1, 2, 1]);
    }

    #[test]
    fn bfs_from_dead_source_is_an_error() {
        let mut g = Graph::with_nodes(2);
        g.remove_node(n(0)).unwrap();
        assert!(matches!(g.bfs_distances(n(0)), Err(GraphError::DeadNode(_))));
    }

    #[test]
    fn components_of_path_and_pairs() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.connected_components(), vec![vec![n(0), n(1), n(2)]]);

        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let sizes: Vec<usize> = g.connected_components().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![2, 2]);
    }

    #[test]
    fn edgeless_nodes_are_singletons() {
        let g = Graph::with_nodes(5);
        assert_eq!(g.connected_components().len(), 5);
        assert!(Graph::with_nodes(0).connected_components().is_empty());
    }

    #[test]
    fn second_neighbors_on_path_triangle_star() {
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(path.second_neighbors(n(0)), vec![n(2)]);

        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(tri.second_neighbors(n(0)).is_empty());

        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(star.second_neighbors(n(0)).is_empty());
        assert_eq!(star.second_neighbors(n(1)), vec![n(2), n(3)]);
    }

    #[test]
    fn betweenness_path_endpoints_zero() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let b = g.betweenness();
        assert_eq!(b, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn betweenness_four_cycle_splits_pairs() {
        // Hand enumeration: each distance-2 pair has two shortest paths, so
        // each midpoint collects 1/2 from exactly one pair.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        for (v, score) in g.betweenness().into_iter().enumerate() {
            assert!((score - 0.5).abs() < 1e-12, "node {v}: {score}");
        }
    }

    #[test]
    fn betweenness_complete_graph_is_zero() {
        let mut g = Graph::with_nodes(6);
        for u in 0..6 {
            for v in (u + 1)..6 {
                g.add_edge(n(u), n(v)).unwrap();
            }
        }
        assert!(g.betweenness().iter().all(|&b| b == 0.0));
    }

    #[test]
    fn betweenness_ignores_dead_nodes() {
        // Path 0-1-2-3-4: interior scores 3, 4, 3. Killing 4 leaves 0-1-2-3.
        let mut g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        g.remove_node(n(4)).unwrap();
        let b = g.betweenness();
        assert_eq!(b, vec![0.0, 2.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn components_never_contain_removed_node() {
        let mut g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        g.remove_node(n(2)).unwrap();
        for comp in g.connected_components() {
            assert!(!comp.contains(&n(2)));
        }
    }
}
