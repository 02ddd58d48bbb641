//! Small cage graphs and the trapping-set gadget built from them.
//!
//! Cage orders are taken from the literature; what is machine-checked when
//! an entry is loaded is regularity, girth, and that the order sits between
//! the Moore bound and the cage upper bound. Minimality is never checked.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{cage_upper_bound, moore_formula};
use crate::error::{Error, Result};
use crate::graph::{Girth, Graph, TannerGraph};
use crate::transforms::{augmented_graph, edge_vertex_incidence};
use crate::Rational;

/// A catalogued cage with its load-time certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CageEntry {
    pub d: usize,
    pub g: usize,
    pub name: String,
    pub graph: Graph,
    pub certificate: CageCertificate,
}

impl CageEntry {
    pub fn order(&self) -> usize {
        self.graph.node_count()
    }

    /// All three certificate checks passed.
    pub fn certified(&self) -> bool {
        self.certificate.all()
    }

    fn load(d: usize, g: usize, name: impl Into<String>, graph: Graph) -> Self {
        let certificate = verify_cage_candidate(&graph, d, g);
        CageEntry {
            d,
            g,
            name: name.into(),
            graph,
            certificate,
        }
    }
}

/// Necessary conditions for a graph to be a `(d, g)`-cage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CageCertificate {
    pub regular: bool,
    pub girth_ok: bool,
    pub within_bounds: bool,
}

impl CageCertificate {
    pub fn all(&self) -> bool {
        self.regular && self.girth_ok && self.within_bounds
    }
}

/// Checks `d`-regularity, girth and the Moore / upper bound window.
///
/// For `d = 1` the only candidate is `K2`, which is acyclic; an infinite
/// girth is accepted there.
pub fn verify_cage_candidate(graph: &Graph, d: usize, girth_target: usize) -> CageCertificate {
    let regular = graph.node_count() > 0 && graph.regular_degree() == Some(d);
    let girth_ok = match graph.girth() {
        Girth::Finite(g) => g == girth_target,
        Girth::Infinite => d == 1,
    };
    let order = Rational::from_integer(graph.node_count() as i128);
    let within_bounds = d >= 1
        && girth_target >= 3
        && moore_formula(Rational::from_integer(d as i128), girth_target) <= order
        && cage_upper_bound::<Rational>(d, girth_target).is_ok_and(|hi| order <= hi);
    CageCertificate {
        regular,
        girth_ok,
        within_bounds,
    }
}

/// Robertson graph: 19-cycle plus one chord offset per node.
const ROBERTSON_CHORDS: [usize; 19] = [8, 4, 7, 4, 8, 5, 7, 4, 7, 8, 4, 5, 7, 8, 4, 8, 4, 8, 4];

fn robertson() -> Graph {
    let n = ROBERTSON_CHORDS.len();
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend(
        ROBERTSON_CHORDS
            .iter()
            .enumerate()
            .map(|(i, &j)| (i, (i + j) % n)),
    );
    Graph::from_edges(n, &edges).expect("Robertson graph data is simple")
}

fn named(d: usize, g: usize) -> Option<(&'static str, Graph)> {
    let lcf = |n, p: &[isize]| Graph::lcf(n, p).expect("LCF data is simple");
    Some(match (d, g) {
        (3, 5) => ("Petersen", {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5));
                edges.push((i, i + 5));
                edges.push((i + 5, (i + 2) % 5 + 5));
            }
            Graph::from_edges(10, &edges).expect("Petersen data is simple")
        }),
        (3, 6) => ("Heawood", lcf(14, &[5, -5])),
        (3, 7) => ("McGee", lcf(24, &[12, 7, -7])),
        (3, 8) => ("Tutte-Coxeter", lcf(30, &[-13, -9, 7, -7, 9, 13])),
        (4, 5) => ("Robertson", robertson()),
        _ => return None,
    })
}

/// The `(d, g)`-cage, when known.
///
/// Families: `K2` for `d = 1`, `C_g` for `d = 2`, `K_{d+1}` for `g = 3`,
/// `K_{d,d}` for `g = 4`; plus the Petersen, Heawood, McGee, Tutte-Coxeter
/// and Robertson graphs. Anything else is [`Error::UnknownCage`] carrying
/// the Moore / upper-bound interval.
pub fn cage(d: usize, g: usize) -> Result<CageEntry> {
    if d == 0 || g < 3 {
        return Err(Error::InvalidParameter(format!(
            "cage needs d >= 1 and g >= 3, got ({d}, {g})"
        )));
    }
    let entry = match (d, g) {
        (1, _) => CageEntry::load(1, g, "K2", Graph::complete(2)),
        (2, _) => CageEntry::load(2, g, format!("C{g}"), Graph::cycle(g)),
        (_, 3) => CageEntry::load(d, 3, format!("K{}", d + 1), Graph::complete(d + 1)),
        (_, 4) => CageEntry::load(d, 4, format!("K{d},{d}"), Graph::complete_bipartite(d, d)),
        _ => match named(d, g) {
            Some((name, graph)) => CageEntry::load(d, g, name, graph),
            None => {
                let lower = moore_formula(Rational::from_integer(d as i128), g)
                    .ceil()
                    .to_integer() as u128;
                let upper = cage_upper_bound::<Rational>(d, g)?.floor().to_integer() as u128;
                return Err(Error::UnknownCage { d, g, lower, upper });
            }
        },
    };
    Ok(entry)
}

/// The fixed catalog: small cycles, complete graphs and the named cages.
pub fn catalog() -> Vec<CageEntry> {
    let mut out = Vec::new();
    for g in 3..=12 {
        out.push(cage(2, g).expect("cycles are always known"));
    }
    for (d, g) in [
        (3, 3),
        (3, 4),
        (4, 3),
        (4, 4),
        (3, 5),
        (3, 6),
        (3, 7),
        (3, 8),
        (4, 5),
    ] {
        out.push(cage(d, g).expect("catalogued"));
    }
    out
}

/// The gadget: the edge-vertex incidence graph of the
/// `(ceil(gamma/2), g')`-cage, padded to left degree `gamma`.
///
/// Returns the Tanner graph and the variable subset (all of them), which is
/// a potential trapping set of size `n_c(ceil(gamma/2), g')`.
pub fn build_gadget(gamma: usize, g_prime: usize) -> Result<(TannerGraph, Vec<usize>)> {
    if gamma < 2 {
        return Err(Error::InvalidParameter(format!(
            "column weight must be >= 2, got {gamma}"
        )));
    }
    let entry = cage(gamma.div_ceil(2), g_prime)?;
    let t = augmented_graph(&edge_vertex_incidence(&entry.graph), gamma)?;
    let subset = (0..t.n()).collect();
    Ok((t, subset))
}

/// A host code with a gadget spliced in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub code: TannerGraph,
    /// The gadget's variables in the combined code.
    pub subset: Vec<usize>,
    /// `(gadget pendant check, host check)` pairs that were merged.
    pub merges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct EmbedOptions {
    pub seed: u64,
    /// Reject embeddings whose combined girth is below this.
    pub min_girth: Option<usize>,
    /// Randomized restarts before giving up.
    pub attempts: usize,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        EmbedOptions {
            seed: 0,
            min_girth: None,
            attempts: 64,
        }
    }
}

fn pendant_checks(gadget: &TannerGraph) -> Vec<usize> {
    (0..gadget.m())
        .filter(|&c| gadget.check_degree(c) == 1)
        .collect()
}

/// Splices `gadget` into `host` using an explicit merge: pendant check
/// `pendants[i]` of the gadget (ascending order) is identified with host
/// check `assignment[i]`. Condition (b) is not enforced here.
pub fn embed_gadget_with(
    host: &TannerGraph,
    gadget: &TannerGraph,
    assignment: &[usize],
) -> Result<Embedding> {
    let pendants = pendant_checks(gadget);
    if assignment.len() != pendants.len() {
        return Err(Error::EmbedFailed(format!(
            "{} host checks given for {} pendant checks",
            assignment.len(),
            pendants.len()
        )));
    }
    let mut used = vec![false; host.m()];
    for &h in assignment {
        if h >= host.m() {
            return Err(Error::IndexOutOfRange {
                kind: "check",
                index: h,
                count: host.m(),
            });
        }
        if std::mem::replace(&mut used[h], true) {
            return Err(Error::EmbedFailed(format!("host check {h} used twice")));
        }
    }

    let mut check_map = vec![usize::MAX; gadget.m()];
    for (&p, &h) in pendants.iter().zip(assignment) {
        check_map[p] = h;
    }
    let mut m = host.m();
    for slot in check_map.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = m;
        m += 1;
    }
    let mut var_adj = host.var_adjacency().to_vec();
    var_adj.extend(
        gadget
            .var_adjacency()
            .iter()
            .map(|l| l.iter().map(|&c| check_map[c]).collect::<Vec<_>>()),
    );
    let code = TannerGraph::from_var_adjacency(m, var_adj)?;
    Ok(Embedding {
        code,
        subset: (host.n()..host.n() + gadget.n()).collect(),
        merges: pendants
            .into_iter()
            .zip(assignment.iter().copied())
            .collect(),
    })
}

/// Splices `gadget` into `host` so that its variables form a genuine
/// trapping set of the combined code.
///
/// Each gadget pendant check is merged into a distinct host check, chosen so
/// that no host variable ends up next to more than `floor(gamma/2)` merged
/// checks (condition (b)). Choices are randomized by `opts.seed` with
/// backtracking; a merge that passes is re-verified on the combined code.
/// An empty host returns the gadget unchanged.
pub fn embed_gadget(
    host: &TannerGraph,
    gadget: &TannerGraph,
    opts: &EmbedOptions,
) -> Result<Embedding> {
    if host.n() == 0 {
        return Ok(Embedding {
            code: gadget.clone(),
            subset: (0..gadget.n()).collect(),
            merges: Vec::new(),
        });
    }
    let gamma = host.gamma().ok_or(Error::NotLeftRegular)?;
    if gadget.gamma() != Some(gamma) {
        return Err(Error::EmbedFailed(format!(
            "gadget left degree {:?} differs from host {gamma}",
            gadget.gamma()
        )));
    }
    let needed = pendant_checks(gadget).len();
    let cap = gamma / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    for _ in 0..opts.attempts.max(1) {
        let mut order: Vec<usize> = (0..host.m()).collect();
        order.shuffle(&mut rng);
        let mut picker = Picker {
            host,
            order: &order,
            cap,
            load: vec![0; host.n()],
            chosen: Vec::with_capacity(needed),
            steps: 0,
        };
        if !picker.search(0, needed) {
            continue;
        }
        let emb = embed_gadget_with(host, gadget, &picker.chosen)?;
        let report = crate::analysis::is_trapping_set(&emb.code, &emb.subset)?;
        if !report.is_trapping {
            continue;
        }
        if let Some(min) = opts.min_girth {
            if emb.code.girth() < Girth::Finite(min) {
                continue;
            }
        }
        return Ok(emb);
    }
    Err(Error::EmbedFailed(format!(
        "no merge of {needed} pendant checks satisfies condition (b){} after {} attempts",
        opts.min_girth
            .map(|g| format!(" with girth >= {g}"))
            .unwrap_or_default(),
        opts.attempts.max(1)
    )))
}

/// Backtracking choice of host checks under the per-variable cap.
struct Picker<'a> {
    host: &'a TannerGraph,
    order: &'a [usize],
    cap: usize,
    load: Vec<usize>,
    chosen: Vec<usize>,
    steps: usize,
}

const PICKER_STEP_LIMIT: usize = 100_000;

impl Picker<'_> {
    fn search(&mut self, from: usize, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        for i in from..self.order.len() {
            self.steps += 1;
            if self.steps > PICKER_STEP_LIMIT || self.order.len() - i < remaining {
                return false;
            }
            let c = self.order[i];
            let nbrs = self.host.check_neighbors(c);
            if nbrs.iter().any(|&u| self.load[u] + 1 > self.cap) {
                continue;
            }
            for &u in nbrs {
                self.load[u] += 1;
            }
            self.chosen.push(c);
            if self.search(i + 1, remaining - 1) {
                return true;
            }
            self.chosen.pop();
            for &u in nbrs {
                self.load[u] -= 1;
            }
        }
        false
    }
}
