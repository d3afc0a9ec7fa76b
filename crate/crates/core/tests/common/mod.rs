//! Brute-force reference implementations used to check the fast paths.
//! Everything here recomputes from plain adjacency lists with naive
//! algorithms (fresh BFS per pair, exhaustive shortest-path enumeration,
//! union-find connectivity) and stays independent of the library's own
//! traversal, component, and centrality code.

#![allow(dead_code)]

use overlay_siege_core::graph::{Graph, NodeId};
use rand::Rng;

/// Alive-only adjacency pulled through the public accessors.
pub fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.node_count())
        .map(|v| {
            let v = NodeId(v as u32);
            if g.is_alive(v) {
                g.neighbors(v).map(|w| w.index()).collect()
            } else {
                Vec::new()
            }
        })
        .collect()
}

fn alive_ids(g: &Graph) -> Vec<usize> {
    g.alive_nodes().map(|v| v.index()).collect()
}

/// Plain queue BFS; `None` for unreachable or dead nodes.
pub fn naive_bfs(adj: &[Vec<usize>], alive: &[bool], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    if !alive[s] {
        return dist;
    }
    dist[s] = Some(0);
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn alive_mask(g: &Graph) -> Vec<bool> {
    (0..g.node_count())
        .map(|v| g.is_alive(NodeId(v as u32)))
        .collect()
}

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

pub fn oracle_cost(g: &Graph) -> f64 {
    let alive = alive_ids(g);
    let n = alive.len();
    if n <= 1 {
        return 0.0;
    }
    let adj = adjacency(g);
    let edges: usize = alive.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    2.0 * edges as f64 / (n as f64 * (n - 1) as f64)
}

pub fn oracle_global_efficiency(g: &Graph) -> f64 {
    let alive = alive_ids(g);
    let n = alive.len();
    if n <= 1 {
        return 0.0;
    }
    let adj = adjacency(g);
    let mask = alive_mask(g);
    let mut total = 0.0;
    for &s in &alive {
        let dist = naive_bfs(&adj, &mask, s);
        for &t in &alive {
            if t != s {
                if let Some(d) = dist[t] {
                    total += 1.0 / d as f64;
                }
            }
        }
    }
    total / (n as f64 * (n - 1) as f64)
}

pub fn oracle_local_efficiency(g: &Graph) -> f64 {
    let alive = alive_ids(g);
    if alive.is_empty() {
        return 0.0;
    }
    let adj = adjacency(g);
    let mut total = 0.0;
    for &v in &alive {
        let members = adj[v].clone();
        let k = members.len();
        if k < 2 {
            continue;
        }
        // Induced subgraph on v's neighbors, rebuilt naively.
        let index: std::collections::HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut sub: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, &m) in members.iter().enumerate() {
            for &w in &adj[m] {
                if let Some(&j) = index.get(&w) {
                    if j != i {
                        sub[i].push(j);
                    }
                }
            }
        }
        let sub_alive = vec![true; k];
        let mut inv = 0.0;
        for s in 0..k {
            let dist = naive_bfs(&sub, &sub_alive, s);
            for (t, d) in dist.iter().enumerate() {
                if t != s {
                    if let Some(d) = d {
                        inv += 1.0 / *d as f64;
                    }
                }
            }
        }
        total += inv / (k as f64 * (k - 1) as f64);
    }
    total / alive.len() as f64
}

pub fn oracle_giant(g: &Graph) -> usize {
    let alive = alive_ids(g);
    if alive.is_empty() {
        return 0;
    }
    let adj = adjacency(g);
    let mut uf = UnionFind::new(g.node_count());
    for &v in &alive {
        for &w in &adj[v] {
            uf.union(v, w);
        }
    }
    let mut counts = std::collections::HashMap::new();
    for &v in &alive {
        *counts.entry(uf.find(v)).or_insert(0usize) += 1;
    }
    counts.into_values().max().unwrap_or(0)
}

pub fn oracle_connected(g: &Graph) -> bool {
    g.alive_count() <= 1 || oracle_giant(g) == g.alive_count()
}

/// Exhaustive betweenness: for every unordered alive pair, enumerate every
/// shortest path by walking the distance-pruned DAG, and credit interior
/// nodes with their share. Only sane for small graphs.
pub fn oracle_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let adj = adjacency(g);
    let mask = alive_mask(g);
    let alive = alive_ids(g);
    let mut scores = vec![0.0f64; n];
    for (i, &s) in alive.iter().enumerate() {
        for &t in &alive[i + 1..] {
            let dist_to_t = naive_bfs(&adj, &mask, t);
            if dist_to_t[s].is_none() {
                continue; // disconnected pair: 0/0 counts as 0
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![s];
            enumerate_paths(&adj, &dist_to_t, t, &mut stack, &mut paths);
            let total = paths.len() as f64;
            let mut interior_hits = vec![0usize; n];
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    interior_hits[v] += 1;
                }
            }
            for (v, &hits) in interior_hits.iter().enumerate() {
                if hits > 0 {
                    scores[v] += hits as f64 / total;
                }
            }
        }
    }
    scores
}

fn enumerate_paths(
    adj: &[Vec<usize>],
    dist_to_t: &[Option<usize>],
    t: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let u = *stack.last().unwrap();
    if u == t {
        out.push(stack.clone());
        return;
    }
    let du = dist_to_t[u].unwrap();
    for &w in &adj[u] {
        if dist_to_t[w] == Some(du - 1) {
            stack.push(w);
            enumerate_paths(adj, dist_to_t, t, stack, out);
            stack.pop();
        }
    }
}

/// G(n, p) built through the public mutation API.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_nodes(n);
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if rng.random_bool(p) {
                g.add_edge(NodeId(u), NodeId(v)).unwrap();
            }
        }
    }
    g
}

/// Exact one-sided sign test: probability of at least `positives` successes
/// in `trials` fair coin flips (ties must be excluded by the caller).
pub fn sign_test_p_value(positives: usize, trials: usize) -> f64 {
    let mut p = 0.0;
    for k in positives..=trials {
        p += binomial(trials, k) * 0.5f64.powi(trials as i32);
    }
    p
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
