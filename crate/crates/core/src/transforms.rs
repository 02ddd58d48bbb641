//! Graph transformations between simple graphs and Tanner graphs: pendant
//! removal, padding to a fixed left degree, and the edge-vertex incidence
//! construction with its inverse.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, TannerGraph};

/// Removes every degree-one check and its edge. Variables are kept, even
/// when left isolated; surviving checks keep their relative order.
pub fn reduced_graph(h: &TannerGraph) -> TannerGraph {
    let mut new_index = vec![usize::MAX; h.m()];
    let mut m = 0;
    for (c, slot) in new_index.iter_mut().enumerate() {
        if h.check_degree(c) != 1 {
            *slot = m;
            m += 1;
        }
    }
    let var_adj = h
        .var_adjacency()
        .iter()
        .map(|l| {
            l.iter()
                .filter(|&&c| new_index[c] != usize::MAX)
                .map(|&c| new_index[c])
                .collect()
        })
        .collect();
    TannerGraph::from_var_adjacency(m, var_adj).expect("subgraph of a valid graph")
}

/// Pads every variable with fresh pendant checks until it has degree
/// `gamma`. New checks follow the existing ones, ordered by variable and
/// then by copy.
pub fn augmented_graph(h: &TannerGraph, gamma: usize) -> Result<TannerGraph> {
    let mut m = h.m();
    let mut var_adj = h.var_adjacency().to_vec();
    for (v, list) in var_adj.iter_mut().enumerate() {
        let degree = list.len();
        if degree > gamma {
            return Err(Error::DegreeExceedsGamma {
                var: v,
                degree,
                gamma,
            });
        }
        list.extend(m..m + gamma - degree);
        m += gamma - degree;
    }
    TannerGraph::from_var_adjacency(m, var_adj)
}

/// Bipartite graph with a variable per node of `g` and a degree-two check
/// per edge of `g` (checks in lexicographic edge order).
pub fn edge_vertex_incidence(g: &Graph) -> TannerGraph {
    let edges: Vec<_> = g.edges().collect();
    let mut pairs = Vec::with_capacity(2 * edges.len());
    for (c, &(u, v)) in edges.iter().enumerate() {
        pairs.push((u, c));
        pairs.push((v, c));
    }
    TannerGraph::from_edges(g.node_count(), edges.len(), &pairs).expect("edges of a simple graph")
}

/// Which neighbor of each check becomes the hub of its star.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum RootPolicy {
    #[default]
    LowestIndex,
    HighestIndex,
    /// Explicit root variable per check; it must be a neighbor of the check.
    PerCheck(Vec<usize>),
}

/// Result of [`inverse_edge_vertex_incidence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseIncidence {
    pub graph: Graph,
    /// Star edges produced before duplicates were merged.
    pub star_edges: usize,
    /// Duplicate variable pairs merged into a single edge.
    pub collapsed: usize,
}

/// Replaces each check by a star centered on a chosen root neighbor.
///
/// Two checks joining the same variable pair would give a parallel edge;
/// those are merged and counted in [`InverseIncidence::collapsed`].
pub fn inverse_edge_vertex_incidence(
    h: &TannerGraph,
    policy: &RootPolicy,
) -> Result<InverseIncidence> {
    if let RootPolicy::PerCheck(roots) = policy {
        if roots.len() != h.m() {
            return Err(Error::InvalidParameter(format!(
                "root list has {} entries for {} checks",
                roots.len(),
                h.m()
            )));
        }
    }
    let mut edges = BTreeSet::new();
    let mut star_edges = 0;
    for c in 0..h.m() {
        let nbrs = h.check_neighbors(c);
        match nbrs.len() {
            0 => continue,
            1 => return Err(Error::PendantCheck(c)),
            _ => {}
        }
        let root = match policy {
            RootPolicy::LowestIndex => nbrs[0],
            RootPolicy::HighestIndex => nbrs[nbrs.len() - 1],
            RootPolicy::PerCheck(roots) => {
                let r = roots[c];
                if nbrs.binary_search(&r).is_err() {
                    return Err(Error::InvalidParameter(format!(
                        "root {r} is not a neighbor of check {c}"
                    )));
                }
                r
            }
        };
        for &v in nbrs.iter().filter(|&&v| v != root) {
            star_edges += 1;
            edges.insert((root.min(v), root.max(v)));
        }
    }
    let list: Vec<_> = edges.into_iter().collect();
    let collapsed = star_edges - list.len();
    Ok(InverseIncidence {
        graph: Graph::from_edges(h.n(), &list)?,
        star_edges,
        collapsed,
    })
}
