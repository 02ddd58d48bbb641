//! Simple graphs and bipartite Tanner graphs.
//!
//! Both types are immutable once built and keep their adjacency lists
//! sorted, so every iteration order in the crate is deterministic.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Length of the shortest cycle of a graph.
///
/// `Finite` sorts before `Infinite`, so `min` over girths behaves as expected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Girth::Infinite
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Girth::Finite(g) => s.serialize_u64(*g as u64),
            Girth::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Exact girth by breadth-first search from every node.
///
/// A non-tree edge met while exploring from `root` closes a closed walk of
/// length `dist[u] + dist[w] + 1` through `root`; the minimum of these over
/// all roots is the girth. Exploration from a root stops once no shorter
/// cycle can be found.
pub(crate) fn shortest_cycle(adj: &[Vec<usize>]) -> Girth {
    let n = adj.len();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for root in 0..n {
        if adj[root].len() < 2 {
            continue;
        }
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] >= best {
                break;
            }
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if w != parent[u] {
                    let len = dist[u] + dist[w] + 1;
                    if len < best {
                        best = len;
                    }
                    if best <= 3 {
                        break 'bfs;
                    }
                }
            }
        }
        for &t in &touched {
            dist[t] = usize::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        if best == 3 {
            break;
        }
    }

    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// Simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `node_count` nodes, rejecting self-loops, parallel
    /// edges and out-of-range endpoints.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); node_count];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= node_count {
                    return Err(Error::IndexOutOfRange {
                        kind: "node",
                        index: x,
                        count: node_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateGraphEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj })
    }

    /// The cycle `C_len`.
    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3, "a cycle needs at least three nodes");
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Self::from_edges(len, &edges).expect("cycle edges are simple")
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).expect("complete graph edges are simple")
    }

    /// The complete bipartite graph `K_{a,b}`; the first `a` nodes form one side.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Self::from_edges(a + b, &edges).expect("complete bipartite edges are simple")
    }

    /// Graph given in LCF notation: a Hamiltonian cycle on `n` nodes plus a
    /// chord from node `i` to `i + pattern[i mod len]`, repeated around.
    pub fn lcf(n: usize, pattern: &[isize]) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        for i in 0..n {
            let j = (i as isize + pattern[i % pattern.len()]).rem_euclid(n as isize) as usize;
            let e = (i.min(j), i.max(j));
            if !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == e) {
                edges.push(e);
            }
        }
        Self::from_edges(n, &edges)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Common degree if every node has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adj.first()?.len();
        self.adj.iter().all(|l| l.len() == first).then_some(first)
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn girth(&self) -> Girth {
        shortest_cycle(&self.adj)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

/// Bipartite graph of `n` variable nodes and `m` check nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TannerGraph {
    var_adj: Vec<Vec<usize>>,
    check_adj: Vec<Vec<usize>>,
    gamma: Option<usize>,
    rho: Option<usize>,
}

impl TannerGraph {
    /// Builds a Tanner graph from `(variable, check)` pairs.
    pub fn from_edges(n: usize, m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut var_adj = vec![Vec::new(); n];
        for &(v, c) in edges {
            if v >= n {
                return Err(Error::IndexOutOfRange {
                    kind: "variable",
                    index: v,
                    count: n,
                });
            }
            if c >= m {
                return Err(Error::IndexOutOfRange {
                    kind: "check",
                    index: c,
                    count: m,
                });
            }
            var_adj[v].push(c);
        }
        Self::from_var_adjacency(m, var_adj)
    }

    /// Builds a Tanner graph from per-variable check lists.
    pub fn from_var_adjacency(m: usize, mut var_adj: Vec<Vec<usize>>) -> Result<Self> {
        let mut check_adj = vec![Vec::new(); m];
        for (v, list) in var_adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge {
                    var: v,
                    check: w[0],
                });
            }
            for &c in list.iter() {
                if c >= m {
                    return Err(Error::IndexOutOfRange {
                        kind: "check",
                        index: c,
                        count: m,
                    });
                }
                check_adj[c].push(v);
            }
        }
        // Variables are visited in ascending order, so check lists are sorted.
        let gamma = uniform_degree(&var_adj);
        let rho = uniform_degree(&check_adj);
        Ok(TannerGraph {
            var_adj,
            check_adj,
            gamma,
            rho,
        })
    }

    /// Number of variable nodes.
    pub fn n(&self) -> usize {
        self.var_adj.len()
    }

    /// Number of check nodes.
    pub fn m(&self) -> usize {
        self.check_adj.len()
    }

    /// Left degree, present when every variable has the same positive degree.
    pub fn gamma(&self) -> Option<usize> {
        self.gamma
    }

    /// Right degree, present when every check has the same positive degree.
    pub fn rho(&self) -> Option<usize> {
        self.rho
    }

    pub fn var_neighbors(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    pub fn check_neighbors(&self, c: usize) -> &[usize] {
        &self.check_adj[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_adj[v].len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_adj[c].len()
    }

    pub fn var_adjacency(&self) -> &[Vec<usize>] {
        &self.var_adj
    }

    pub fn check_adjacency(&self) -> &[Vec<usize>] {
        &self.check_adj
    }

    pub fn edge_count(&self) -> usize {
        self.var_adj.iter().map(Vec::len).sum()
    }

    /// `(variable, check)` pairs in variable-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.var_adj
            .iter()
            .enumerate()
            .flat_map(|(v, list)| list.iter().map(move |&c| (v, c)))
    }

    /// The same graph as a simple graph: variable `v` is node `v`, check `c`
    /// is node `n + c`.
    pub fn to_graph(&self) -> Graph {
        let n = self.n();
        let mut adj: Vec<Vec<usize>> = self
            .var_adj
            .iter()
            .map(|l| l.iter().map(|&c| n + c).collect())
            .collect();
        adj.extend(self.check_adj.iter().cloned());
        Graph { adj }
    }

    pub fn girth(&self) -> Girth {
        self.to_graph().girth()
    }

    /// Splits the checks touched by `subset` by the parity of their degree in
    /// the induced subgraph.
    pub fn induced_check_partition(&self, subset: &[usize]) -> Result<CheckPartition> {
        self.validate_subset(subset)?;
        let mut counts = std::collections::BTreeMap::new();
        let mut induced_edge_count = 0;
        for &v in subset {
            induced_edge_count += self.var_adj[v].len();
            for &c in &self.var_adj[v] {
                *counts.entry(c).or_insert(0usize) += 1;
            }
        }
        let mut part = CheckPartition {
            induced_edge_count,
            ..CheckPartition::default()
        };
        for (c, k) in counts {
            if k % 2 == 0 {
                part.even.push(c);
            } else {
                part.odd.push(c);
                if k == 1 {
                    part.pendant.push(c);
                }
            }
        }
        Ok(part)
    }

    pub(crate) fn validate_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut seen = vec![false; self.n()];
        for &v in subset {
            if v >= self.n() {
                return Err(Error::IndexOutOfRange {
                    kind: "variable",
                    index: v,
                    count: self.n(),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::RepeatedSubsetEntry(v));
            }
        }
        Ok(())
    }
}

fn uniform_degree(adj: &[Vec<usize>]) -> Option<usize> {
    let d = adj.first()?.len();
    (d > 0 && adj.iter().all(|l| l.len() == d)).then_some(d)
}

/// Checks adjacent to a variable subset, split by induced degree parity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckPartition {
    /// Checks with even, nonzero induced degree.
    pub even: Vec<usize>,
    /// Checks with odd induced degree.
    pub odd: Vec<usize>,
    /// Checks with induced degree one; always a subset of `odd`.
    pub pendant: Vec<usize>,
    /// Edges of the induced subgraph.
    pub induced_edge_count: usize,
}
