//! Moore-type bounds and the correction guarantees derived from them.
//!
//! Everything that decides a strict inequality ("weight less than ...") is
//! evaluated with exact rationals; `f64` evaluation of the same generic
//! formulas is only used to reject inputs whose values would overflow.

use num_traits::Zero;
use serde::Serialize;

use crate::cages;
use crate::error::{Error, Result};
use crate::scalar::{from_u64, powi, ratio, serde_rational, Scalar};
use crate::Rational;

/// Largest node count accepted by [`brute_force_f`].
pub const BRUTE_FORCE_MAX_NODES: usize = 8;

/// Values above this are rejected instead of risking `i128` overflow.
const MAGNITUDE_LIMIT: f64 = 1e30;

/// The Moore formula `n0(d, g)` with no hypothesis check on `d`.
///
/// Odd `g = 2r + 1`: `1 + d * sum_{i<r} (d-1)^i`. Even `g = 2r`:
/// `2 * sum_{i<r} (d-1)^i`. Defined for any `g >= 2`.
pub fn moore_formula<T: Scalar>(d: T, g: usize) -> T {
    let r = g / 2;
    let dm1 = d.clone() - T::one();
    let mut sum = T::zero();
    let mut term = T::one();
    for _ in 0..r {
        sum = sum + term.clone();
        term = term * dm1.clone();
    }
    if g % 2 == 1 {
        T::one() + d * sum
    } else {
        from_u64::<T>(2) * sum
    }
}

/// Moore bound `n0(d, g)`: a lower bound on the order of any graph of girth
/// `g` with average degree at least `d >= 2`.
pub fn moore_bound<T: Scalar>(d: T, g: usize) -> Result<T> {
    if d < from_u64::<T>(2) {
        return Err(Error::InvalidParameter(format!(
            "Moore bound needs average degree >= 2, got {d:?}"
        )));
    }
    if g < 3 {
        return Err(Error::InvalidParameter(format!(
            "Moore bound needs girth >= 3, got {g}"
        )));
    }
    Ok(moore_formula(d, g))
}

/// Upper bound `n_u(d, g)` on the order of a `(d, g)`-cage.
///
/// `d = 1` and `d = 2` are answered exactly (`K2` and `C_g`).
pub fn cage_upper_bound<T: Scalar>(d: usize, g: usize) -> Result<T> {
    if d == 0 || g < 3 {
        return Err(Error::InvalidParameter(format!(
            "cage bound needs d >= 1 and g >= 3, got ({d}, {g})"
        )));
    }
    let odd = g % 2 == 1;
    Ok(match d {
        1 => from_u64(2),
        2 => from_u64(g as u64),
        3 => {
            let head: T = if odd { ratio(4, 3) } else { ratio(2, 3) };
            head + ratio::<T>(29, 12) * powi(from_u64::<T>(2), (g - 2) as u32)
        }
        _ => {
            let base = from_u64::<T>(d as u64 - 1);
            if odd {
                from_u64::<T>(2) * powi(base, (g - 2) as u32)
            } else {
                from_u64::<T>(4) * powi(base, (g - 3) as u32)
            }
        }
    })
}

fn check_magnitude(d: usize, g: usize) -> Result<()> {
    let approx: f64 = cage_upper_bound(d.max(1), g.max(3))?;
    if approx > MAGNITUDE_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "({d}, {g}) gives values beyond exact range"
        )));
    }
    Ok(())
}

fn half_girth(girth: usize) -> Result<usize> {
    if !girth.is_multiple_of(2) || girth < 6 {
        return Err(Error::InvalidParameter(format!(
            "Tanner graph girth must be even and >= 6, got {girth}"
        )));
    }
    Ok(girth / 2)
}

/// Whether the average-degree Moore bound hypothesis (`d >= 2`) covers the
/// degree `gamma / 2` used by the correction guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Hypothesis {
    Supported,
    UnsupportedHypothesis,
}

/// Guaranteed correction count for column weight `gamma` and girth `2g'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrectionGuarantee {
    /// `n0(gamma/2, g')`.
    #[serde(with = "serde_rational")]
    pub moore_n0: Rational,
    /// Largest weight strictly below `n0 / 2`.
    pub t_max: u64,
    pub hypothesis: Hypothesis,
}

/// Every error pattern of weight at most `t_max` is corrected, where
/// `t_max` is the largest integer strictly below `n0(gamma/2, g') / 2`.
///
/// `gamma = 3` puts `gamma/2` below the Moore-bound hypothesis; the value is
/// still computed and flagged [`Hypothesis::UnsupportedHypothesis`].
pub fn guaranteed_correction_count(gamma: usize, girth: usize) -> Result<CorrectionGuarantee> {
    if gamma < 3 {
        return Err(Error::InvalidParameter(format!(
            "column weight must be >= 3, got {gamma}"
        )));
    }
    let g_prime = half_girth(girth)?;
    check_magnitude(gamma.div_ceil(2), g_prime)?;
    let d: Rational = ratio(gamma as u64, 2);
    let hypothesis = if d >= from_u64(2) {
        Hypothesis::Supported
    } else {
        Hypothesis::UnsupportedHypothesis
    };
    let moore_n0 = moore_formula(d, g_prime);
    let half = moore_n0 / from_u64::<Rational>(2);
    // largest integer strictly less than `half`
    let t_max = half.ceil().to_integer() - 1;
    Ok(CorrectionGuarantee {
        moore_n0,
        t_max: t_max.max(0) as u64,
        hypothesis,
    })
}

/// Interval for the size of the smallest trapping set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrappingBound {
    /// Moore bound at degree `ceil(gamma/2)`.
    pub lower: u128,
    /// Floor of the cage upper bound at degree `ceil(gamma/2)`.
    pub upper: u128,
    /// Cage order from the catalog, when known.
    pub exact: Option<u128>,
}

/// Bounds on `|T(gamma, 2g')| = n_c(ceil(gamma/2), g')`.
pub fn trapping_set_size_bound(gamma: usize, girth: usize) -> Result<TrappingBound> {
    if gamma < 2 {
        return Err(Error::InvalidParameter(format!(
            "column weight must be >= 2, got {gamma}"
        )));
    }
    let g_prime = half_girth(girth)?;
    let d = gamma.div_ceil(2);
    check_magnitude(d, g_prime)?;
    let lower = moore_formula(Rational::from_integer(d as i128), g_prime)
        .ceil()
        .to_integer() as u128;
    let upper = cage_upper_bound::<Rational>(d, g_prime)?
        .floor()
        .to_integer() as u128;
    let exact = cages::cage(d, g_prime).ok().map(|e| e.order() as u128);
    Ok(TrappingBound {
        lower,
        upper,
        exact,
    })
}

/// Everything the bounds module says about a `(gamma, girth)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub gamma: usize,
    pub girth: usize,
    pub g_prime: usize,
    #[serde(with = "serde_rational")]
    pub moore_n0: Rational,
    pub t_max: u64,
    pub hypothesis: Hypothesis,
    pub trapping_lower: u128,
    pub trapping_upper: u128,
    pub trapping_exact: Option<u128>,
}

impl BoundReport {
    pub fn new(gamma: usize, girth: usize) -> Result<Self> {
        let guarantee = guaranteed_correction_count(gamma, girth)?;
        let trapping = trapping_set_size_bound(gamma, girth)?;
        Ok(BoundReport {
            gamma,
            girth,
            g_prime: girth / 2,
            moore_n0: guarantee.moore_n0,
            t_max: guarantee.t_max,
            hypothesis: guarantee.hypothesis,
            trapping_lower: trapping.lower,
            trapping_upper: trapping.upper,
            trapping_exact: trapping.exact,
        })
    }
}

/// Upper bound on `f(k, g)`, the maximum edge count of a `k`-node graph
/// with girth at least `g`.
///
/// A graph with `e >= k` edges has average degree `2e/k >= 2`, so it needs
/// `n0(2e/k, g) <= k`. The bound is the largest such `e`, found by bisection
/// on `e` with exact arithmetic; `k - 1` when no cycle of length `g` fits.
pub fn max_edges_girth_bound(k: usize, g: usize) -> Result<Rational> {
    if k == 0 {
        return Ok(Rational::zero());
    }
    if g < 3 {
        let complete = (k * (k - 1) / 2) as i128;
        return Ok(Rational::from_integer(complete));
    }
    let k_r = Rational::from_integer(k as i128);
    let fits = |e: usize| -> bool {
        let d = Rational::new(2 * e as i128, k as i128);
        moore_formula(d, g) <= k_r
    };
    if k < g || !fits(k) {
        return Ok(Rational::from_integer(k as i128 - 1));
    }
    let (mut lo, mut hi) = (k, k * (k - 1) / 2);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(Rational::from_integer(lo as i128))
}

/// Exact `f(k, g)` by exhaustive search over edge subsets of `K_k`.
///
/// Branches that close a cycle shorter than `g` are cut, as are branches
/// that cannot beat the best count found so far.
pub fn brute_force_f(k: usize, g: usize) -> Result<usize> {
    if k > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge {
            k,
            limit: BRUTE_FORCE_MAX_NODES,
        });
    }
    let mut pairs = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            pairs.push((u, v));
        }
    }
    let mut search = EdgeSearch {
        pairs: &pairs,
        girth: g,
        adj: [0u8; BRUTE_FORCE_MAX_NODES],
        best: 0,
    };
    search.run(0, 0);
    Ok(search.best)
}

struct EdgeSearch<'a> {
    pairs: &'a [(usize, usize)],
    girth: usize,
    adj: [u8; BRUTE_FORCE_MAX_NODES],
    best: usize,
}

impl EdgeSearch<'_> {
    fn run(&mut self, idx: usize, count: usize) {
        if count > self.best {
            self.best = count;
        }
        if idx == self.pairs.len() || count + (self.pairs.len() - idx) <= self.best {
            return;
        }
        let (u, v) = self.pairs[idx];
        if !self.closes_short_cycle(u, v) {
            self.adj[u] |= 1 << v;
            self.adj[v] |= 1 << u;
            self.run(idx + 1, count + 1);
            self.adj[u] &= !(1 << v);
            self.adj[v] &= !(1 << u);
        }
        self.run(idx + 1, count);
    }

    /// True if `v` is within `girth - 2` steps of `u`, so the edge `uv`
    /// would close a cycle shorter than `girth`.
    fn closes_short_cycle(&self, u: usize, v: usize) -> bool {
        if self.girth <= 3 {
            return false;
        }
        let target = 1u8 << v;
        let mut seen = 1u8 << u;
        let mut frontier = seen;
        for _ in 0..self.girth - 2 {
            let mut next = 0u8;
            let mut bits = frontier;
            while bits != 0 {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= self.adj[x];
            }
            next &= !seen;
            if next & target != 0 {
                return true;
            }
            if next == 0 {
                return false;
            }
            seen |= next;
            frontier = next;
        }
        false
    }
}

/// `gamma * k / 4` as an exact rational.
pub fn quarter_gamma_k(gamma: usize, k: usize) -> Rational {
    Rational::new((gamma * k) as i128, 4)
}

/// The largest integer `k` with `k < n0(gamma/2, g')`, i.e. the subset sizes
/// covered by the expansion guarantee.
pub fn expansion_size_limit(gamma: usize, g_prime: usize) -> u64 {
    let n0: Rational = moore_formula(ratio(gamma as u64, 2), g_prime);
    let k = n0.ceil().to_integer() - 1;
    k.max(0) as u64
}

impl Hypothesis {
    pub fn is_supported(self) -> bool {
        self == Hypothesis::Supported
    }
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;

    fn q(p: i128, d: i128) -> Rational {
        Rational::new(p, d)
    }

    /// Independent Moore count for integer `d`: nodes of the `d`-regular
    /// tree within distance `r` of a root node (odd girth `2r + 1`) or of a
    /// root edge (even girth `2r`), counted level by level.
    fn tree_count(d: u64, g: usize) -> u64 {
        let r = g / 2;
        if g % 2 == 1 {
            let mut total = 1;
            let mut level = d;
            for _ in 0..r {
                total += level;
                level *= d - 1;
            }
            total
        } else {
            let mut total = 2;
            let mut level = 2 * (d - 1);
            for _ in 1..r {
                total += level;
                level *= d - 1;
            }
            total
        }
    }

    #[test]
    fn moore_examples() {
        assert_eq!(moore_bound(q(3, 1), 5).unwrap(), q(10, 1));
        assert_eq!(moore_bound(q(2, 1), 6).unwrap(), q(6, 1));
        assert_eq!(moore_bound(q(2, 1), 4).unwrap(), q(4, 1));
        assert_eq!(moore_bound(q(5, 2), 5).unwrap(), q(29, 4));
        assert_eq!(moore_formula(q(3, 2), 4), q(3, 1));
    }

    #[test]
    fn moore_rejects_small_degree_and_girth() {
        assert!(moore_bound(q(3, 2), 4).is_err());
        assert!(moore_bound(q(3, 1), 2).is_err());
    }

    #[test]
    fn moore_matches_tree_count() {
        for d in 2..7u64 {
            for g in 3..12 {
                let exact = moore_bound(Rational::from_integer(d as i128), g).unwrap();
                assert_eq!(
                    exact,
                    Rational::from_integer(tree_count(d, g) as i128),
                    "d={d} g={g}"
                );
            }
        }
    }

    #[test]
    fn generic_float_agrees_with_exact() {
        for (p, den) in [(3, 2), (5, 2), (7, 3), (4, 1)] {
            for g in 3..10 {
                let exact = moore_formula(q(p, den), g);
                let approx = moore_formula(p as f64 / den as f64, g);
                let exact_f = crate::scalar::rational_to_f64(&exact);
                assert!((exact_f - approx).abs() < 1e-9 * exact_f.max(1.0));
            }
        }
    }

    #[test]
    fn cage_upper_examples() {
        assert_eq!(cage_upper_bound::<Rational>(3, 5).unwrap(), q(62, 3));
        assert_eq!(cage_upper_bound::<Rational>(3, 6).unwrap(), q(118, 3));
        assert_eq!(cage_upper_bound::<Rational>(4, 5).unwrap(), q(54, 1));
        assert_eq!(cage_upper_bound::<Rational>(2, 7).unwrap(), q(7, 1));
    }

    #[test]
    fn cage_upper_dominates_moore() {
        for d in 2..8 {
            for g in 3..14 {
                let lo = moore_bound(Rational::from_integer(d as i128), g).unwrap();
                let hi: Rational = cage_upper_bound(d, g).unwrap();
                assert!(lo <= hi, "d={d} g={g}");
            }
        }
    }

    #[test]
    fn correction_examples() {
        assert_eq!(guaranteed_correction_count(4, 12).unwrap().t_max, 2);
        assert_eq!(guaranteed_correction_count(5, 10).unwrap().t_max, 3);
        assert_eq!(guaranteed_correction_count(4, 8).unwrap().t_max, 1);
        let g3 = guaranteed_correction_count(3, 8).unwrap();
        assert_eq!(g3.moore_n0, q(3, 1));
        assert_eq!(g3.t_max, 1);
        assert_eq!(g3.hypothesis, Hypothesis::UnsupportedHypothesis);
        assert_eq!(
            guaranteed_correction_count(4, 8).unwrap().hypothesis,
            Hypothesis::Supported
        );
        assert!(guaranteed_correction_count(2, 8).is_err());
        assert!(guaranteed_correction_count(4, 7).is_err());
    }

    #[test]
    fn t_max_exactly_below_half() {
        // n0(2, 4) = 4 lands exactly on an even integer: t < 2 gives 1, not 2.
        for gamma in 3..10 {
            for girth in (6..=16).step_by(2) {
                let r = guaranteed_correction_count(gamma, girth).unwrap();
                let t = Rational::from_integer(r.t_max as i128);
                let two = Rational::from_integer(2);
                assert!(t * two < r.moore_n0);
                assert!((t + Rational::one()) * two >= r.moore_n0);
            }
        }
    }

    #[test]
    fn trapping_examples() {
        assert_eq!(trapping_set_size_bound(3, 8).unwrap().exact, Some(4));
        assert_eq!(trapping_set_size_bound(5, 10).unwrap().exact, Some(10));
        assert_eq!(trapping_set_size_bound(6, 12).unwrap().exact, Some(14));
        let b = trapping_set_size_bound(2, 10).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (2, 2, Some(2)));
    }

    #[test]
    fn trapping_interval_contains_exact() {
        for gamma in 2..9 {
            for girth in (6..=20).step_by(2) {
                let b = trapping_set_size_bound(gamma, girth).unwrap();
                assert!(b.lower <= b.upper);
                if let Some(e) = b.exact {
                    assert!(b.lower <= e && e <= b.upper, "gamma={gamma} girth={girth}");
                }
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_f(4, 4).unwrap(), 4);
        assert_eq!(brute_force_f(4, 3).unwrap(), 6);
        assert_eq!(brute_force_f(5, 4).unwrap(), 6);
        assert_eq!(brute_force_f(5, 5).unwrap(), 5);
        assert_eq!(brute_force_f(6, 5).unwrap(), 6);
        assert_eq!(brute_force_f(1, 4).unwrap(), 0);
        assert_eq!(brute_force_f(2, 9).unwrap(), 1);
        assert!(brute_force_f(9, 4).is_err());
    }

    #[test]
    fn brute_force_forest_when_no_cycle_fits() {
        for k in 1..=8 {
            assert_eq!(brute_force_f(k, k + 1).unwrap(), k - 1);
        }
    }

    #[test]
    fn max_edges_bound_dominates_oracle() {
        for k in 1..=BRUTE_FORCE_MAX_NODES {
            for g in 3..=8 {
                let oracle = brute_force_f(k, g).unwrap();
                let bound = max_edges_girth_bound(k, g).unwrap();
                assert!(
                    Rational::from_integer(oracle as i128) <= bound,
                    "k={k} g={g}: f={oracle} bound={bound}"
                );
            }
        }
        assert_eq!(max_edges_girth_bound(4, 4).unwrap(), q(4, 1));
        assert_eq!(max_edges_girth_bound(5, 4).unwrap(), q(6, 1));
        assert_eq!(max_edges_girth_bound(5, 5).unwrap(), q(5, 1));
        assert_eq!(max_edges_girth_bound(3, 4).unwrap(), q(2, 1));
    }

    #[test]
    fn key_inequality_below_moore() {
        // f(k, g') < gamma k / 4 for every k < n0(gamma/2, g')
        for gamma in 3..=8 {
            for g_prime in 3..=8 {
                let limit = expansion_size_limit(gamma, g_prime) as usize;
                for k in 1..=limit.min(BRUTE_FORCE_MAX_NODES) {
                    let f = brute_force_f(k, g_prime).unwrap();
                    assert!(
                        Rational::from_integer(f as i128) < quarter_gamma_k(gamma, k),
                        "gamma={gamma} g'={g_prime} k={k} f={f}"
                    );
                }
            }
        }
    }

    #[test]
    fn moore_monotone() {
        for g in 3..10 {
            let mut prev = moore_bound(q(2, 1), g).unwrap();
            for step in 1..20 {
                let next = moore_bound(q(2, 1) + q(step, 4), g).unwrap();
                assert!(next > prev);
                prev = next;
            }
        }
        for num in 4..12 {
            let d = q(num, 2);
            for g in 3..12 {
                assert!(moore_bound(d, g).unwrap() <= moore_bound(d, g + 1).unwrap());
            }
        }
    }
}
