//! Undirected simple graphs, Barabási–Albert growth and the classical
//! structural metrics used by the analyses.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

/// Undirected simple graph on nodes `0..n`, stored as sorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, out-of-range
    /// endpoints and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at node {a}")));
            }
            if !g.insert_edge(a, b) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(g)
    }

    /// Inserts `{a, b}`; returns false if it was already present.
    fn insert_edge(&mut self, a: usize, b: usize) -> bool {
        match self.adj[a].binary_search(&b) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[a].insert(pos, b);
                let pos = self.adj[b].binary_search(&a).unwrap_err();
                self.adj[b].insert(pos, a);
                true
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn connected_distances(&self, source: usize) -> Result<Vec<usize>> {
        self.bfs_distances(source)
            .into_iter()
            .map(|d| d.ok_or(Error::Disconnected))
            .collect()
    }
}

/// Grows a Barabási–Albert graph.
///
/// The seed graph is the complete graph on `m + 1` nodes. Every later node
/// attaches to `m` distinct existing nodes picked with probability
/// proportional to their current degree; a draw that hits an already chosen
/// target is discarded and redrawn.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!("m must be at least 1, got {m}")));
    }
    if n <= m {
        return Err(Error::InvalidParameter(format!(
            "n must exceed m (n = {n}, m = {m})"
        )));
    }
    let mut rng = seed::stream_rng(seed, seed::GRAPH_STREAM);
    let mut g = Graph::empty(n);
    // Each node appears once per incident edge, so a uniform pick from this
    // list is a degree-proportional pick.
    let mut stubs = Vec::with_capacity(2 * (m * (m + 1) / 2 + m * (n - m - 1)));
    for a in 0..=m {
        for b in (a + 1)..=m {
            g.insert_edge(a, b);
            stubs.push(a);
            stubs.push(b);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let t = stubs[rng.random_range(0..stubs.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            g.insert_edge(v, t);
            stubs.push(v);
            stubs.push(t);
        }
    }
    Ok(g)
}

pub fn degree(g: &Graph, v: usize) -> usize {
    g.degree(v)
}

/// Unnormalized betweenness (Brandes), each unordered pair counted once.
pub fn betweenness(g: &Graph) -> Result<Vec<f64>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut cb = vec![0.0; n];
    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        stack.clear();
        for p in preds.iter_mut() {
            p.clear();
        }
        sigma.fill(0.0);
        dist.fill(usize::MAX);
        delta.fill(0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                cb[w] += delta[w];
            }
        }
    }
    // Every unordered pair was visited from both ends.
    cb.iter_mut().for_each(|c| *c /= 2.0);
    Ok(cb)
}

/// `(n - 1) / Σ_u d(v, u)`.
pub fn closeness(g: &Graph, v: usize) -> Result<f64> {
    let dist = g.connected_distances(v)?;
    let total: usize = dist.iter().sum();
    if total == 0 {
        // Single-node graph.
        return Ok(0.0);
    }
    Ok((g.n() - 1) as f64 / total as f64)
}

/// Perron vector of the adjacency matrix with unit Euclidean norm.
///
/// Iterates `x <- (F + I) x / |(F + I) x|` from the all-ones vector. The
/// shift leaves the eigenvectors unchanged and keeps bipartite graphs (whose
/// spectrum is symmetric) from oscillating. Stops once two successive iterates
/// differ by less than `tol` in the sup norm.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iters: usize) -> Result<Vec<f64>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];
    let mut gap = f64::INFINITY;
    for _ in 0..max_iters {
        for (v, out) in next.iter_mut().enumerate() {
            *out = x[v] + g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>();
        }
        let norm = next.iter().map(|y| y * y).sum::<f64>().sqrt();
        next.iter_mut().for_each(|y| *y /= norm);
        gap = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if gap < tol {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iters,
        gap,
    })
}

/// Fraction of neighbor pairs of `v` that are adjacent; 0 when deg(v) < 2.
pub fn local_clustering(g: &Graph, v: usize) -> f64 {
    let nb = g.neighbors(v);
    let k = nb.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (a_idx, &a) in nb.iter().enumerate() {
        for &b in &nb[a_idx + 1..] {
            if g.has_edge(a, b) {
                links += 1;
            }
        }
    }
    links as f64 / (k * (k - 1) / 2) as f64
}

pub fn mean_clustering(g: &Graph) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    (0..g.n()).map(|v| local_clustering(g, v)).sum::<f64>() / g.n() as f64
}

pub fn diameter(g: &Graph) -> Result<usize> {
    let mut best = 0;
    for v in 0..g.n() {
        let far = g.connected_distances(v)?.into_iter().max().unwrap_or(0);
        best = best.max(far);
    }
    Ok(best)
}

/// Per-node structural centralities of one connected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityReport {
    pub degree: Vec<usize>,
    pub betweenness: Vec<f64>,
    pub closeness: Vec<f64>,
    pub eigenvector: Vec<f64>,
    pub clustering: Vec<f64>,
}

pub const EIGENVECTOR_TOL: f64 = 1e-12;
pub const EIGENVECTOR_MAX_ITERS: usize = 100_000;

impl CentralityReport {
    pub fn compute(g: &Graph) -> Result<Self> {
        let n = g.n();
        Ok(CentralityReport {
            degree: (0..n).map(|v| g.degree(v)).collect(),
            betweenness: betweenness(g)?,
            closeness: (0..n).map(|v| closeness(g, v)).collect::<Result<_>>()?,
            eigenvector: eigenvector_centrality(g, EIGENVECTOR_TOL, EIGENVECTOR_MAX_ITERS)?,
            clustering: (0..n).map(|v| local_clustering(g, v)).collect(),
        })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|b| (b - 1, b)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|a| (a.min((a + 1) % n), a.max((a + 1) % n))).collect();
        Graph::from_edges(n, &edges).unwrap()
    }
}
