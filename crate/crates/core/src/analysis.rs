//! Subset-level analysis of Tanner graphs.
//!
//! Expansion is measured exactly and certified by exhaustive enumeration of
//! variable subsets below the Moore-bound size. Trapping sets are recognized
//! structurally through the even/odd split of the induced checks:
//!
//! * condition (a): every subset variable has at least `ceil(d/2)` neighbors
//!   among the even checks (a *potential* trapping set);
//! * condition (b): no outside variable has more than `floor(d/2)` neighbors
//!   among the odd checks.
//!
//! `d` is the degree of the variable in question, which is `gamma` for a
//! left-regular graph. Together the two conditions say exactly that no
//! variable meets the flip rule, so they match the decoder's fixed points.
//!
//! Enumeration is lexicographic per size, sizes ascending. Sweeps fan out
//! over the first subset element and merge results in that order, so every
//! report is independent of thread scheduling.

use std::cmp::Ordering;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, brute_force_f, Hypothesis, BRUTE_FORCE_MAX_NODES};
use crate::decoder::{decode, Algorithm, DecodeStatus, ErrorPattern};
use crate::error::{Error, Result};
use crate::graph::{Girth, TannerGraph};
use crate::scalar::serde_rational;
use crate::Rational;

/// Default cap on subsets visited by the exhaustive routines.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Visits every `k`-subset of `0..n` whose smallest element is `first`, in
/// lexicographic order.
pub(crate) fn subsets_with_first<F>(
    n: usize,
    k: usize,
    first: usize,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if k == 0 || first + k > n {
        return ControlFlow::Continue(());
    }
    let mut combo: Vec<usize> = (first..first + k).collect();
    loop {
        visit(&combo)?;
        let Some(i) = (1..k).rev().find(|&i| combo[i] < n - (k - i)) else {
            return ControlFlow::Continue(());
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Per-worker buffers for evaluating many subsets of one graph.
pub(crate) struct Scratch {
    check_count: Vec<u32>,
    touched: Vec<usize>,
    in_subset: Vec<bool>,
    outside: Vec<u32>,
    touched_vars: Vec<usize>,
}

impl Scratch {
    pub(crate) fn new(t: &TannerGraph) -> Self {
        Scratch {
            check_count: vec![0; t.m()],
            touched: Vec::new(),
            in_subset: vec![false; t.n()],
            outside: vec![0; t.n()],
            touched_vars: Vec::new(),
        }
    }

    fn load(&mut self, t: &TannerGraph, subset: &[usize]) {
        for &v in subset {
            self.in_subset[v] = true;
            for &c in t.var_neighbors(v) {
                if self.check_count[c] == 0 {
                    self.touched.push(c);
                }
                self.check_count[c] += 1;
            }
        }
    }

    fn clear(&mut self, subset: &[usize]) {
        for &c in &self.touched {
            self.check_count[c] = 0;
        }
        self.touched.clear();
        for &v in subset {
            self.in_subset[v] = false;
        }
    }

    fn neighbor_count(&self) -> usize {
        self.touched.len()
    }

    fn condition_a(&self, t: &TannerGraph, subset: &[usize]) -> bool {
        subset.iter().all(|&v| {
            let nbrs = t.var_neighbors(v);
            let even = nbrs
                .iter()
                .filter(|&&c| self.check_count[c].is_multiple_of(2))
                .count();
            2 * even >= nbrs.len()
        })
    }

    fn condition_b(&mut self, t: &TannerGraph) -> bool {
        let mut ok = true;
        'scan: for &c in &self.touched {
            if self.check_count[c].is_multiple_of(2) {
                continue;
            }
            for &u in t.check_neighbors(c) {
                if self.in_subset[u] {
                    continue;
                }
                if self.outside[u] == 0 {
                    self.touched_vars.push(u);
                }
                self.outside[u] += 1;
                if 2 * self.outside[u] as usize > t.var_degree(u) {
                    ok = false;
                    break 'scan;
                }
            }
        }
        for &u in &self.touched_vars {
            self.outside[u] = 0;
        }
        self.touched_vars.clear();
        ok
    }

    /// `(neighbor count, potential, trapping)` for one subset.
    fn classify(&mut self, t: &TannerGraph, subset: &[usize], need_b: bool) -> (usize, bool, bool) {
        self.load(t, subset);
        let neighbors = self.neighbor_count();
        let a = self.condition_a(t, subset);
        let b = a && need_b && self.condition_b(t);
        self.clear(subset);
        (neighbors, a, b)
    }

    fn neighbors_of(&mut self, t: &TannerGraph, subset: &[usize]) -> usize {
        self.load(t, subset);
        let k = self.neighbor_count();
        self.clear(subset);
        k
    }
}

/// `|N(S)| / |S|`.
pub fn expansion(t: &TannerGraph, subset: &[usize]) -> Result<Rational> {
    t.validate_subset(subset)?;
    let mut scratch = Scratch::new(t);
    let nbrs = scratch.neighbors_of(t, subset);
    Ok(Rational::new(nbrs as i128, subset.len() as i128))
}

/// Structural report for one variable subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetReport {
    pub subset: Vec<usize>,
    pub neighbor_count: usize,
    #[serde(with = "serde_rational")]
    pub expansion: Rational,
    pub even_checks: Vec<usize>,
    pub odd_checks: Vec<usize>,
    pub pendant_checks: Vec<usize>,
    pub condition_a: bool,
    pub condition_b: bool,
    pub is_trapping: bool,
    /// `(a, b)`: subset size and number of odd induced checks.
    pub ab_signature: (usize, usize),
}

/// Condition (a) alone.
pub fn is_potential_trapping_set(t: &TannerGraph, subset: &[usize]) -> Result<bool> {
    t.validate_subset(subset)?;
    let mut scratch = Scratch::new(t);
    Ok(scratch.classify(t, subset, false).1)
}

/// Evaluates both trapping-set conditions.
///
/// Condition (b) scans the outside variables adjacent to odd checks; this
/// matches the pairwise statement "no `floor(gamma/2) + 1` odd checks share
/// an outside neighbor" while staying linear in the boundary size.
pub fn is_trapping_set(t: &TannerGraph, subset: &[usize]) -> Result<SubsetReport> {
    let partition = t.induced_check_partition(subset)?;
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut scratch = Scratch::new(t);
    scratch.load(t, &sorted);
    let neighbor_count = scratch.neighbor_count();
    let condition_a = scratch.condition_a(t, &sorted);
    let condition_b = scratch.condition_b(t);
    scratch.clear(&sorted);
    Ok(SubsetReport {
        neighbor_count,
        expansion: Rational::new(neighbor_count as i128, sorted.len() as i128),
        ab_signature: (sorted.len(), partition.odd.len()),
        subset: sorted,
        even_checks: partition.even,
        odd_checks: partition.odd,
        pendant_checks: partition.pendant,
        condition_a,
        condition_b,
        is_trapping: condition_a && condition_b,
    })
}

/// Tuning for the exhaustive routines.
#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Largest number of subsets to visit. A size class is enumerated only
    /// if it fits entirely in the remaining budget.
    pub budget: u64,
    /// Expansion threshold; `None` means `3 gamma / 4`.
    pub threshold: Option<Rational>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            budget: DEFAULT_BUDGET,
            threshold: None,
        }
    }
}

/// Outcome of [`verify_main_theorem`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionCertificate {
    pub gamma: usize,
    pub girth: usize,
    /// Largest `k` with `k < n0(gamma/2, g')`, capped at `n`.
    pub k_target: usize,
    /// Every subset of size `1..=k_max_checked` was enumerated.
    pub k_max_checked: usize,
    #[serde(with = "serde_rational")]
    pub threshold: Rational,
    pub worst_subset: Vec<usize>,
    pub worst_neighbor_count: usize,
    #[serde(with = "serde_rational")]
    pub worst_expansion: Rational,
    pub subsets_visited: u64,
    /// Every enumerated subset had `|N(S)| > threshold * |S|`.
    pub pass: bool,
    /// `k_max_checked == k_target`.
    pub complete: bool,
    pub hypothesis: Hypothesis,
}

fn left_degree_and_half_girth(t: &TannerGraph) -> Result<(usize, usize, usize)> {
    let gamma = t.gamma().ok_or(Error::NotLeftRegular)?;
    let girth = t.girth().finite().ok_or(Error::InfiniteGirth)?;
    Ok((gamma, girth, girth / 2))
}

/// Sizes `1..=k` that fit in `budget`, and the number of subsets they hold.
fn sizes_within_budget(n: usize, k_target: usize, budget: u64) -> (usize, u64) {
    let mut total: u128 = 0;
    let mut covered = 0;
    for k in 1..=k_target {
        let next = total.saturating_add(binomial(n, k));
        if next > budget as u128 {
            break;
        }
        total = next;
        covered = k;
    }
    (covered, total as u64)
}

/// Worst subset seen by one worker: `(neighbors, subset)`; ordered by
/// expansion ratio, then size, then lexicographically.
type Worst = Option<(usize, Vec<usize>)>;

fn worse(a: &(usize, Vec<usize>), b: &(usize, Vec<usize>)) -> bool {
    // a.0 / |a| < b.0 / |b|
    let lhs = a.0 * b.1.len();
    let rhs = b.0 * a.1.len();
    match lhs.cmp(&rhs) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => (a.1.len(), &a.1) < (b.1.len(), &b.1),
    }
}

fn merge_worst(acc: Worst, next: Worst) -> Worst {
    match (acc, next) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if worse(&b, &a) { b } else { a }),
    }
}

/// Exhaustively checks that every set of `k < n0(gamma/2, g')` variables
/// has more than `threshold * k` check neighbors.
pub fn verify_main_theorem(t: &TannerGraph, opts: &SweepOptions) -> Result<ExpansionCertificate> {
    let (gamma, girth, g_prime) = left_degree_and_half_girth(t)?;
    let threshold = opts
        .threshold
        .unwrap_or_else(|| Rational::new(3 * gamma as i128, 4));
    let k_target = (bounds::expansion_size_limit(gamma, g_prime) as usize).min(t.n());
    let (k_max_checked, subsets_visited) = sizes_within_budget(t.n(), k_target, opts.budget);
    let (num, den) = (*threshold.numer(), *threshold.denom());

    let per_first: Vec<(Worst, bool)> = (0..t.n())
        .into_par_iter()
        .map_init(
            || Scratch::new(t),
            |scratch, first| {
                let mut worst: Worst = None;
                let mut pass = true;
                for k in 1..=k_max_checked {
                    let _ = subsets_with_first(t.n(), k, first, |s| {
                        let nbrs = scratch.neighbors_of(t, s);
                        if (nbrs as i128) * den <= num * k as i128 {
                            pass = false;
                        }
                        let cand = (nbrs, s.to_vec());
                        if worst.as_ref().is_none_or(|w| worse(&cand, w)) {
                            worst = Some(cand);
                        }
                        ControlFlow::Continue(())
                    });
                }
                (worst, pass)
            },
        )
        .collect();

    let pass = per_first.iter().all(|(_, p)| *p);
    let worst = per_first
        .into_iter()
        .fold(None, |acc, (w, _)| merge_worst(acc, w));
    let (worst_neighbor_count, worst_subset) = worst.unwrap_or((0, Vec::new()));
    let worst_expansion = if worst_subset.is_empty() {
        Rational::from_integer(0)
    } else {
        Rational::new(worst_neighbor_count as i128, worst_subset.len() as i128)
    };
    let hypothesis = if gamma >= 4 {
        Hypothesis::Supported
    } else {
        Hypothesis::UnsupportedHypothesis
    };
    Ok(ExpansionCertificate {
        gamma,
        girth,
        k_target,
        k_max_checked,
        threshold,
        worst_subset,
        worst_neighbor_count,
        worst_expansion,
        subsets_visited,
        pass,
        complete: k_max_checked == k_target,
        hypothesis,
    })
}

/// The two counting lemmas evaluated on one subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub k: usize,
    /// Edges of the induced subgraph after pendant checks are removed.
    pub edge_r: usize,
    /// `2 f(k, g')`.
    pub bound_2f: usize,
    /// Checks adjacent to the subset.
    pub check_count: usize,
    /// `gamma k - f(k, g')`, with `gamma k` read as the induced edge count.
    pub bound_gamma_k_minus_f: i64,
    pub lemma1_pass: bool,
    pub lemma2_pass: bool,
}

/// Evaluates both counting lemmas against an exact `f(k, g')`.
///
/// With infinite girth every induced subgraph is a forest; `f` is then taken
/// at girth `k + 1`, which admits only forests.
pub struct LemmaChecker<'a> {
    t: &'a TannerGraph,
    f_by_k: Vec<usize>,
}

impl<'a> LemmaChecker<'a> {
    pub fn new(t: &'a TannerGraph) -> Result<Self> {
        let f_by_k = (0..=BRUTE_FORCE_MAX_NODES)
            .map(|k| {
                let g = match t.girth() {
                    Girth::Finite(g) => g / 2,
                    Girth::Infinite => k + 1,
                };
                brute_force_f(k, g)
            })
            .collect::<Result<_>>()?;
        Ok(LemmaChecker { t, f_by_k })
    }

    pub fn check(&self, subset: &[usize]) -> Result<LemmaReport> {
        let k = subset.len();
        if k > BRUTE_FORCE_MAX_NODES {
            return Err(Error::TooLarge {
                k,
                limit: BRUTE_FORCE_MAX_NODES,
            });
        }
        let part = self.t.induced_check_partition(subset)?;
        Ok(self.report(
            k,
            part.induced_edge_count,
            part.even.len() + part.odd.len(),
            part.pendant.len(),
        ))
    }

    fn report(&self, k: usize, edges: usize, checks: usize, pendants: usize) -> LemmaReport {
        let f = self.f_by_k[k];
        let edge_r = edges - pendants;
        let bound = edges as i64 - f as i64;
        LemmaReport {
            k,
            edge_r,
            bound_2f: 2 * f,
            check_count: checks,
            bound_gamma_k_minus_f: bound,
            lemma1_pass: edge_r <= 2 * f,
            lemma2_pass: checks as i64 >= bound,
        }
    }
}

/// One-shot form of [`LemmaChecker::check`].
pub fn check_lemmas(t: &TannerGraph, subset: &[usize]) -> Result<LemmaReport> {
    if subset.len() > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge {
            k: subset.len(),
            limit: BRUTE_FORCE_MAX_NODES,
        });
    }
    LemmaChecker::new(t)?.check(subset)
}

/// Counts of a lemma sweep over all small subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSweep {
    pub max_size: usize,
    pub subsets_visited: u64,
    pub lemma1_failures: u64,
    pub lemma2_failures: u64,
    /// First failing subset in (size, lexicographic) order.
    pub first_failure: Option<Vec<usize>>,
}

/// Runs [`check_lemmas`] on every subset of size `1..=max_size`.
pub fn check_lemmas_exhaustive(t: &TannerGraph, max_size: usize) -> Result<LemmaSweep> {
    if max_size > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge {
            k: max_size,
            limit: BRUTE_FORCE_MAX_NODES,
        });
    }
    let checker = LemmaChecker::new(t)?;
    let mut sweep = LemmaSweep {
        max_size,
        subsets_visited: 0,
        lemma1_failures: 0,
        lemma2_failures: 0,
        first_failure: None,
    };
    for k in 1..=max_size.min(t.n()) {
        let parts: Vec<(u64, u64, u64, Option<Vec<usize>>)> = (0..t.n())
            .into_par_iter()
            .map_init(
                || Scratch::new(t),
                |scratch, first| {
                    let (mut seen, mut f1, mut f2, mut first_fail) = (0, 0, 0, None);
                    let _ = subsets_with_first(t.n(), k, first, |s| {
                        scratch.load(t, s);
                        let edges: usize = s.iter().map(|&v| t.var_degree(v)).sum();
                        let pendants = scratch
                            .touched
                            .iter()
                            .filter(|&&c| scratch.check_count[c] == 1)
                            .count();
                        let r = checker.report(k, edges, scratch.neighbor_count(), pendants);
                        scratch.clear(s);
                        seen += 1;
                        if !r.lemma1_pass {
                            f1 += 1;
                        }
                        if !r.lemma2_pass {
                            f2 += 1;
                        }
                        if (!r.lemma1_pass || !r.lemma2_pass) && first_fail.is_none() {
                            first_fail = Some(s.to_vec());
                        }
                        ControlFlow::Continue(())
                    });
                    (seen, f1, f2, first_fail)
                },
            )
            .collect();
        for (seen, f1, f2, fail) in parts {
            sweep.subsets_visited += seen;
            sweep.lemma1_failures += f1;
            sweep.lemma2_failures += f2;
            if sweep.first_failure.is_none() {
                sweep.first_failure = fail;
            }
        }
    }
    Ok(sweep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Both conditions: genuine trapping sets.
    Trapping,
    /// Condition (a) only; the smallest such set lower-bounds the smallest
    /// trapping set.
    PotentialOnly,
}

/// Outcome of [`search_min_trapping_set`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrappingSearch {
    pub mode: SearchMode,
    pub max_size: usize,
    /// Lexicographically first hit of the smallest size, if any.
    pub found: Option<SubsetReport>,
    /// Sizes `1..=sizes_covered` were searched exhaustively.
    pub sizes_covered: usize,
    pub subsets_visited: u64,
    /// All sizes up to `max_size` (or up to the hit) were covered.
    pub complete: bool,
}

/// Smallest trapping (or potential trapping) set of size at most
/// `max_size`, by exhaustive search in increasing size.
///
/// Supersets of non-trapping sets are not pruned: the property is not
/// monotone under inclusion.
pub fn search_min_trapping_set(
    t: &TannerGraph,
    max_size: usize,
    mode: SearchMode,
    opts: &SweepOptions,
) -> Result<TrappingSearch> {
    let need_b = mode == SearchMode::Trapping;
    let limit = max_size.min(t.n());
    let mut visited: u64 = 0;
    let mut covered = 0;
    for k in 1..=limit {
        let size_count = binomial(t.n(), k);
        if visited as u128 + size_count > opts.budget as u128 {
            return Ok(TrappingSearch {
                mode,
                max_size,
                found: None,
                sizes_covered: covered,
                subsets_visited: visited,
                complete: false,
            });
        }
        let hit = (0..t.n()).into_par_iter().find_map_first(|first| {
            let mut scratch = Scratch::new(t);
            let mut hit = None;
            let _ = subsets_with_first(t.n(), k, first, |s| {
                let (_, a, b) = scratch.classify(t, s, need_b);
                if (need_b && b) || (!need_b && a) {
                    hit = Some(s.to_vec());
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            hit
        });
        if let Some(subset) = hit {
            // Visits are counted as if the whole size class was scanned.
            visited += size_count as u64;
            return Ok(TrappingSearch {
                mode,
                max_size,
                found: Some(is_trapping_set(t, &subset)?),
                sizes_covered: k,
                subsets_visited: visited,
                complete: true,
            });
        }
        visited += size_count as u64;
        covered = k;
    }
    Ok(TrappingSearch {
        mode,
        max_size,
        found: None,
        sizes_covered: covered,
        subsets_visited: visited,
        complete: true,
    })
}

/// Disagreements between the structural conditions and the decoder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceSweep {
    pub max_size: usize,
    pub subsets_visited: u64,
    pub trapping_sets: u64,
    pub disagreements: Vec<Vec<usize>>,
}

/// Compares `is_trapping_set` with `decoder::is_fixed_point` on the
/// indicator of every subset of size `1..=max_size`.
pub fn trapping_fixed_point_equivalence(
    t: &TannerGraph,
    max_size: usize,
) -> Result<EquivalenceSweep> {
    let mut out = EquivalenceSweep {
        max_size,
        subsets_visited: 0,
        trapping_sets: 0,
        disagreements: Vec::new(),
    };
    for k in 1..=max_size.min(t.n()) {
        let parts: Vec<(u64, u64, Vec<Vec<usize>>)> = (0..t.n())
            .into_par_iter()
            .map_init(
                || Scratch::new(t),
                |scratch, first| {
                    let (mut seen, mut traps, mut bad) = (0, 0, Vec::new());
                    let _ = subsets_with_first(t.n(), k, first, |s| {
                        let (_, _, trapping) = scratch.classify(t, s, true);
                        let e = ErrorPattern::from_support(t.n(), s).expect("valid subset");
                        let fixed = crate::decoder::is_fixed_point(t, &e).expect("length matches");
                        seen += 1;
                        traps += trapping as u64;
                        if trapping != fixed {
                            bad.push(s.to_vec());
                        }
                        ControlFlow::Continue(())
                    });
                    (seen, traps, bad)
                },
            )
            .collect();
        for (seen, traps, bad) in parts {
            out.subsets_visited += seen;
            out.trapping_sets += traps;
            out.disagreements.extend(bad);
        }
    }
    Ok(out)
}

/// Failing pattern found by [`verify_correction`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrectionFailure {
    pub support: Vec<usize>,
    pub status: DecodeStatus,
    pub rounds: usize,
}

/// Result of an exhaustive fixed-weight decoding sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrectionSweep {
    pub weight: usize,
    pub algorithm: Algorithm,
    pub max_iters: usize,
    pub patterns_visited: u64,
    pub failure_count: u64,
    /// Up to [`MAX_REPORTED_FAILURES`] failures, in lexicographic order.
    pub failures: Vec<CorrectionFailure>,
    /// Largest round count among corrected patterns.
    pub max_rounds: usize,
}

pub const MAX_REPORTED_FAILURES: usize = 100;

/// Per-worker tally: (visited, failures, reported failures, max rounds).
type SweepPart = (u64, u64, Vec<CorrectionFailure>, usize);

/// Decodes every error pattern of the given weight.
pub fn verify_correction(
    t: &TannerGraph,
    weight: usize,
    algorithm: Algorithm,
    max_iters: usize,
    budget: u64,
) -> Result<CorrectionSweep> {
    let total = binomial(t.n(), weight);
    if total > budget as u128 {
        return Err(Error::InvalidParameter(format!(
            "C({}, {weight}) = {total} patterns exceeds the budget of {budget}",
            t.n()
        )));
    }
    let mut sweep = CorrectionSweep {
        weight,
        algorithm,
        max_iters,
        patterns_visited: 0,
        failure_count: 0,
        failures: Vec::new(),
        max_rounds: 0,
    };
    if weight == 0 {
        let r = decode(t, &ErrorPattern::zeros(t.n()), algorithm, max_iters)?;
        sweep.patterns_visited = 1;
        sweep.max_rounds = r.rounds;
        return Ok(sweep);
    }
    let parts: Vec<Result<SweepPart>> = (0..t.n())
        .into_par_iter()
        .map(|first| {
            let (mut seen, mut count, mut fails, mut max_rounds) = (0, 0, Vec::new(), 0);
            let mut err = None;
            let _ = subsets_with_first(t.n(), weight, first, |s| {
                let e = ErrorPattern::from_support(t.n(), s).expect("valid support");
                match decode(t, &e, algorithm, max_iters) {
                    Ok(r) => {
                        seen += 1;
                        if r.status == DecodeStatus::Corrected {
                            max_rounds = max_rounds.max(r.rounds);
                        } else {
                            count += 1;
                            if fails.len() < MAX_REPORTED_FAILURES {
                                fails.push(CorrectionFailure {
                                    support: s.to_vec(),
                                    status: r.status,
                                    rounds: r.rounds,
                                });
                            }
                        }
                        ControlFlow::Continue(())
                    }
                    Err(e) => {
                        err = Some(e);
                        ControlFlow::Break(())
                    }
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok((seen, count, fails, max_rounds)),
            }
        })
        .collect();
    for part in parts {
        let (seen, count, fails, rounds) = part?;
        sweep.patterns_visited += seen;
        sweep.failure_count += count;
        sweep.max_rounds = sweep.max_rounds.max(rounds);
        let room = MAX_REPORTED_FAILURES - sweep.failures.len();
        sweep.failures.extend(fails.into_iter().take(room));
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cages::build_gadget;
    use crate::graph::Graph;
    use crate::transforms::edge_vertex_incidence;

    fn pair() -> TannerGraph {
        TannerGraph::from_var_adjacency(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap()
    }

    fn heawood_code() -> TannerGraph {
        edge_vertex_incidence(&Graph::lcf(14, &[5, -5]).unwrap())
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(30, 4), 27_405);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(200, 3), 1_313_400);
    }

    #[test]
    fn lexicographic_enumeration() {
        let mut all = Vec::new();
        for first in 0..5 {
            let _ = subsets_with_first(5, 3, first, |s| {
                all.push(s.to_vec());
                ControlFlow::Continue(())
            });
        }
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
    }

    #[test]
    fn expansion_examples() {
        let t = pair();
        assert_eq!(expansion(&t, &[0]).unwrap(), Rational::from_integer(3));
        assert_eq!(expansion(&t, &[0, 1]).unwrap(), Rational::new(5, 2));
        assert_eq!(expansion(&t, &[]), Err(Error::EmptySubset));
    }

    #[test]
    fn pairs_in_high_girth_code_expand_by_five_halves() {
        let t = heawood_code();
        for a in 0..t.n() {
            for b in a + 1..t.n() {
                let e = expansion(&t, &[a, b]).unwrap();
                // girth 12: no two variables share two checks
                assert!(e == Rational::new(5, 2) || e == Rational::from_integer(3));
            }
        }
    }

    #[test]
    fn potential_examples() {
        let t = pair();
        assert!(!is_potential_trapping_set(&t, &[0]).unwrap());
        let (g, s) = build_gadget(3, 4).unwrap();
        assert!(is_potential_trapping_set(&g, &s).unwrap());
        // a proper subset of the gadget fails condition (a)
        assert!(!is_potential_trapping_set(&g, &s[..3]).unwrap());
    }

    #[test]
    fn gadget_report() {
        let (g, s) = build_gadget(3, 4).unwrap();
        let r = is_trapping_set(&g, &s).unwrap();
        assert!(r.condition_a && r.condition_b && r.is_trapping);
        assert_eq!(r.ab_signature, (4, 4));
        assert_eq!(r.even_checks.len(), 4);
        assert_eq!(r.pendant_checks.len(), 4);
    }

    #[test]
    fn single_variable_is_not_trapping() {
        let r = is_trapping_set(&pair(), &[1]).unwrap();
        assert!(!r.condition_a);
        assert!(!r.is_trapping);
        assert_eq!(r.ab_signature, (1, 3));
    }

    #[test]
    fn heawood_certificate() {
        // gamma = 3, girth 12: n0(3/2, 6) = 2(1 + 1/2 + 1/4) = 7/2, so k <= 3
        let t = heawood_code();
        let cert = verify_main_theorem(&t, &SweepOptions::default()).unwrap();
        assert_eq!(cert.k_target, 3);
        assert!(cert.pass && cert.complete);
        assert_eq!(cert.subsets_visited, 14 + 91 + 364);
        assert!(cert.worst_expansion > Rational::new(9, 4));
        assert_eq!(cert.hypothesis, Hypothesis::UnsupportedHypothesis);
    }

    #[test]
    fn certificate_respects_budget() {
        let t = heawood_code();
        let opts = SweepOptions {
            budget: 100,
            threshold: None,
        };
        let cert = verify_main_theorem(&t, &opts).unwrap();
        assert_eq!(cert.k_max_checked, 1);
        assert!(!cert.complete);
        assert_eq!(cert.subsets_visited, 14);
    }

    #[test]
    fn certificate_needs_regular_graph() {
        let t = TannerGraph::from_var_adjacency(3, vec![vec![0, 1], vec![1]]).unwrap();
        assert_eq!(
            verify_main_theorem(&t, &SweepOptions::default()),
            Err(Error::NotLeftRegular)
        );
    }

    #[test]
    fn single_variable_lemmas() {
        let t = heawood_code();
        let r = check_lemmas(&t, &[0]).unwrap();
        assert_eq!(r.edge_r, 0);
        assert_eq!(r.bound_2f, 0);
        assert_eq!(r.check_count, 3);
        assert!(r.lemma1_pass && r.lemma2_pass);
    }

    #[test]
    fn lemma_sweep_on_heawood() {
        let t = heawood_code();
        let sweep = check_lemmas_exhaustive(&t, 5).unwrap();
        assert_eq!(sweep.lemma1_failures + sweep.lemma2_failures, 0);
        assert_eq!(
            sweep.subsets_visited,
            (1..=5).map(|k| binomial(14, k) as u64).sum()
        );
        assert!(check_lemmas(&t, &(0..9).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn search_zero_and_gadget() {
        let (g, _) = build_gadget(3, 4).unwrap();
        let none =
            search_min_trapping_set(&g, 0, SearchMode::Trapping, &SweepOptions::default()).unwrap();
        assert!(none.found.is_none() && none.complete);
        let hit =
            search_min_trapping_set(&g, 6, SearchMode::Trapping, &SweepOptions::default()).unwrap();
        assert_eq!(hit.found.unwrap().subset, vec![0, 1, 2, 3]);
        assert_eq!(hit.sizes_covered, 4);
    }

    #[test]
    fn equivalence_on_gadget_and_heawood() {
        let (g, _) = build_gadget(3, 4).unwrap();
        let sweep = trapping_fixed_point_equivalence(&g, 4).unwrap();
        assert!(sweep.disagreements.is_empty());
        assert_eq!(sweep.trapping_sets, 1);
        let h = heawood_code();
        assert!(trapping_fixed_point_equivalence(&h, 4)
            .unwrap()
            .disagreements
            .is_empty());
    }

    #[test]
    fn correction_sweep_on_heawood() {
        let t = heawood_code();
        let s = verify_correction(&t, 1, Algorithm::Parallel, 14, DEFAULT_BUDGET).unwrap();
        assert_eq!((s.patterns_visited, s.failure_count), (14, 0));
        assert!(verify_correction(&t, 3, Algorithm::Serial, 14, 10).is_err());
    }
}
