//! Random (γ, ρ)-regular Tanner graphs with a minimum girth.
//!
//! Sockets are matched at random, then edges lying on short cycles (parallel
//! edges count as 2-cycles) are repaired by edge swaps
//! `(v1,c1),(v2,c2) -> (v1,c2),(v2,c1)`. The target girth is raised in steps
//! of two; at each step a swap is kept only when neither new edge closes a
//! cycle shorter than the current step. When the swap budget of a step runs
//! out the matching is redrawn.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::TannerGraph;

/// Number of fresh matchings tried before giving up.
pub const DEFAULT_ATTEMPTS: usize = 40;

/// Swap proposals per edge within one attempt.
const SWAPS_PER_EDGE: usize = 150;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerateOptions {
    pub attempts: usize,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            attempts: DEFAULT_ATTEMPTS,
        }
    }
}

struct Work {
    n: usize,
    edges: Vec<(usize, usize)>,
    var_adj: Vec<Vec<usize>>,
    check_adj: Vec<Vec<usize>>,
    // BFS scratch over nodes: variables 0..n, checks n..n+m
    dist: Vec<usize>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

fn remove_one(list: &mut Vec<usize>, x: usize) {
    let pos = list.iter().position(|&y| y == x).expect("edge present");
    list.swap_remove(pos);
}

impl Work {
    fn new(n: usize, m: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut var_adj = vec![Vec::new(); n];
        let mut check_adj = vec![Vec::new(); m];
        for &(v, c) in &edges {
            var_adj[v].push(c);
            check_adj[c].push(v);
        }
        Self {
            n,
            edges,
            var_adj,
            check_adj,
            dist: vec![usize::MAX; n + m],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn unlink(&mut self, v: usize, c: usize) {
        remove_one(&mut self.var_adj[v], c);
        remove_one(&mut self.check_adj[c], v);
    }

    fn link(&mut self, v: usize, c: usize) {
        self.var_adj[v].push(c);
        self.check_adj[c].push(v);
    }

    /// Length of the shortest cycle through edge `(v, c)`, or `None` if it is
    /// at least `limit`.
    fn cycle_through(&mut self, v: usize, c: usize, limit: usize) -> Option<usize> {
        if self.var_adj[v].iter().filter(|&&x| x == c).count() > 1 {
            return Some(2);
        }
        // a path v..c of length L closes a cycle of length L + 1
        let n = self.n;
        self.bfs(v, n + c, limit.saturating_sub(2), true)
            .map(|d| d + 1)
    }

    /// BFS over nodes (variables `0..n`, checks `n..`) from `start` to depth
    /// `max_depth`, ignoring the edge `start`-`skip`. With `stop` set, returns
    /// the distance to `skip` as soon as it is reached; otherwise `dist` holds
    /// every distance within the depth.
    fn bfs(&mut self, start: usize, skip: usize, max_depth: usize, stop: bool) -> Option<usize> {
        let n = self.n;
        for &u in &self.touched {
            self.dist[u] = usize::MAX;
        }
        self.touched.clear();
        self.queue.clear();
        self.dist[start] = 0;
        self.touched.push(start);
        self.queue.push_back(start);
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du >= max_depth {
                continue;
            }
            let nbrs: &[usize] = if u < n {
                &self.var_adj[u]
            } else {
                &self.check_adj[u - n]
            };
            for &w in nbrs {
                let w = if u < n { n + w } else { w };
                if u == start && w == skip {
                    continue;
                }
                if self.dist[w] == usize::MAX {
                    if stop && w == skip {
                        return Some(du + 1);
                    }
                    self.dist[w] = du + 1;
                    self.touched.push(w);
                    self.queue.push_back(w);
                }
            }
        }
        None
    }

    /// Indices of edges on a cycle shorter than `limit`, and the shortest such
    /// cycle.
    fn bad_edges(&mut self, limit: usize) -> (Vec<usize>, Option<usize>) {
        let mut bad = Vec::new();
        let mut shortest = None::<usize>;
        for i in 0..self.edges.len() {
            let (v, c) = self.edges[i];
            if let Some(len) = self.cycle_through(v, c, limit) {
                bad.push(i);
                shortest = Some(shortest.map_or(len, |s| s.min(len)));
            }
        }
        (bad, shortest)
    }

    fn try_swap(&mut self, i: usize, j: usize, limit: usize) -> bool {
        let (v1, c1) = self.edges[i];
        let (v2, c2) = self.edges[j];
        if v1 == v2 || c1 == c2 {
            return false;
        }
        self.unlink(v1, c1);
        self.unlink(v2, c2);
        self.link(v1, c2);
        self.link(v2, c1);
        if self.cycle_through(v1, c2, limit).is_none()
            && self.cycle_through(v2, c1, limit).is_none()
        {
            self.edges[i] = (v1, c2);
            self.edges[j] = (v2, c1);
            return true;
        }
        self.unlink(v1, c2);
        self.unlink(v2, c1);
        self.link(v1, c1);
        self.link(v2, c2);
        false
    }
}

/// Swaps edges until no edge lies on a cycle shorter than `limit`; false if
/// the swap budget runs out first.
///
/// For a bad edge `(v1, c1)` the partner `(v2, c2)` is drawn from edges with
/// `c2` far from `v1` and `v2` far from `c1`, so both new edges are usually
/// clean; the swap is still fully rechecked.
fn repair(w: &mut Work, limit: usize, rng: &mut ChaCha8Rng) -> bool {
    let n = w.n;
    let e = w.edges.len();
    let mut budget = SWAPS_PER_EDGE * e;
    let mut far_check = vec![false; w.check_adj.len()];
    let mut far_var = vec![false; n];
    let mut candidates = Vec::with_capacity(e);
    loop {
        let (bad, shortest) = w.bad_edges(limit);
        if shortest.is_none() {
            return true;
        }
        for i in bad {
            let (v1, c1) = w.edges[i];
            if w.cycle_through(v1, c1, limit).is_none() {
                continue;
            }
            let depth = limit.saturating_sub(3);
            w.bfs(v1, n + c1, depth, false);
            for (c, far) in far_check.iter_mut().enumerate() {
                *far = w.dist[n + c] == usize::MAX;
            }
            w.bfs(n + c1, v1, depth, false);
            for (v, far) in far_var.iter_mut().enumerate() {
                *far = w.dist[v] == usize::MAX;
            }
            candidates.clear();
            candidates.extend((0..e).filter(|&j| far_var[w.edges[j].0] && far_check[w.edges[j].1]));
            loop {
                if budget == 0 {
                    return false;
                }
                budget -= 1;
                let j = if candidates.is_empty() {
                    rng.gen_range(0..e)
                } else {
                    candidates[rng.gen_range(0..candidates.len())]
                };
                if j != i && w.try_swap(i, j, limit) {
                    break;
                }
            }
        }
    }
}

fn random_matching(
    n: usize,
    gamma: usize,
    m: usize,
    rho: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    let mut checks: Vec<usize> = (0..m).flat_map(|c| std::iter::repeat_n(c, rho)).collect();
    checks.shuffle(rng);
    (0..n)
        .flat_map(|v| std::iter::repeat_n(v, gamma))
        .zip(checks)
        .collect()
}

/// Random (γ, ρ)-regular Tanner graph of length `n` and girth at least
/// `min_girth`, deterministic in `seed`.
pub fn generate_code(
    n: usize,
    gamma: usize,
    rho: usize,
    min_girth: usize,
    seed: u64,
) -> Result<TannerGraph> {
    generate_code_with(n, gamma, rho, min_girth, seed, GenerateOptions::default())
}

pub fn generate_code_with(
    n: usize,
    gamma: usize,
    rho: usize,
    min_girth: usize,
    seed: u64,
    opts: GenerateOptions,
) -> Result<TannerGraph> {
    if n == 0 || gamma == 0 || rho == 0 {
        return Err(Error::InvalidParameter(
            "n, gamma and rho must be positive".into(),
        ));
    }
    if !(n * gamma).is_multiple_of(rho) {
        return Err(Error::InvalidParameter(format!(
            "n * gamma = {} is not divisible by rho = {rho}",
            n * gamma
        )));
    }
    if !min_girth.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "min_girth must be even, got {min_girth}"
        )));
    }
    let m = n * gamma / rho;
    if rho > n || gamma > m {
        return Err(Error::InvalidParameter(format!(
            "no simple ({gamma}, {rho})-regular graph with n = {n}, m = {m}"
        )));
    }
    // any simple bipartite graph has girth ≥ 4
    let limit = min_girth.max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;

    for _ in 0..opts.attempts {
        let mut w = Work::new(n, m, random_matching(n, gamma, m, rho, &mut rng));
        let mut reached = 2;
        // raise the girth one step at a time; each stage only has to avoid
        // recreating cycles the previous stages removed
        for stage in (4..=limit).step_by(2) {
            if !repair(&mut w, stage, &mut rng) {
                break;
            }
            reached = stage;
        }
        best = best.max(reached);
        if reached >= limit {
            let var_adj = w
                .edges
                .iter()
                .fold(vec![Vec::new(); n], |mut acc, &(v, c)| {
                    acc[v].push(c);
                    acc
                });
            return TannerGraph::from_var_adjacency(m, var_adj);
        }
    }
    Err(Error::GenerationFailed {
        attempts: opts.attempts,
        best,
        target: min_girth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Girth;

    fn check_regular(t: &TannerGraph, gamma: usize, rho: usize) {
        assert_eq!(t.gamma(), Some(gamma));
        assert_eq!(t.rho(), Some(rho));
    }

    #[test]
    fn small_girth_six() {
        let t = generate_code(12, 3, 4, 6, 1).unwrap();
        check_regular(&t, 3, 4);
        assert!(t.girth() >= Girth::Finite(6));
    }

    #[test]
    fn girth_eight_codes() {
        for (n, gamma, rho) in [(200, 3, 6), (120, 4, 4)] {
            let t = generate_code(n, gamma, rho, 8, 7).unwrap();
            check_regular(&t, gamma, rho);
            assert!(t.girth() >= Girth::Finite(8), "{n} {gamma} {rho}");
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = generate_code(40, 3, 4, 6, 99).unwrap();
        let b = generate_code(40, 3, 4, 6, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            generate_code(5, 3, 4, 6, 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            generate_code(12, 3, 4, 7, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn infeasible_girth_exhausts_budget() {
        let err = generate_code_with(12, 3, 4, 20, 1, GenerateOptions { attempts: 3 }).unwrap_err();
        match err {
            Error::GenerationFailed { target, best, .. } => {
                assert_eq!(target, 20);
                assert!(best < 20);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
