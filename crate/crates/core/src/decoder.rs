//! Parallel and serial bit-flipping decoders.
//!
//! Decoding is analyzed relative to the all-zero codeword: the input is the
//! error pattern itself and decoding succeeds when its support is emptied.
//! The flip rule reads only check parities, so this loses no generality.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::TannerGraph;

/// A binary word of length `n`, stored with its support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ErrorPattern {
    length: usize,
    support: Vec<usize>,
    #[serde(skip)]
    bits: Vec<bool>,
}

impl ErrorPattern {
    pub fn zeros(length: usize) -> Self {
        ErrorPattern {
            length,
            support: Vec::new(),
            bits: vec![false; length],
        }
    }

    /// Word with ones exactly at `support`; order is irrelevant, repeats and
    /// out-of-range positions are rejected.
    pub fn from_support(length: usize, support: &[usize]) -> Result<Self> {
        let mut bits = vec![false; length];
        for &i in support {
            if i >= length {
                return Err(Error::IndexOutOfRange {
                    kind: "variable",
                    index: i,
                    count: length,
                });
            }
            if std::mem::replace(&mut bits[i], true) {
                return Err(Error::RepeatedSubsetEntry(i));
            }
        }
        Ok(Self::from_bits(bits))
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        let support = bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        ErrorPattern {
            length: bits.len(),
            support,
            bits,
        }
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Sorted positions of the ones.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Componentwise XOR with another word of the same length.
    pub fn xor(&self, other: &ErrorPattern) -> Result<Self> {
        if self.length != other.length {
            return Err(Error::LengthMismatch {
                expected: self.length,
                got: other.length,
            });
        }
        Ok(Self::from_bits(
            self.bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecodeStatus {
    /// The support was emptied.
    Corrected,
    /// A full round flipped nothing on a nonzero word.
    FixedPoint,
    /// A previously visited word came back.
    Oscillation,
    /// The round budget ran out first.
    MaxIters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Parallel,
    Serial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub final_pattern: ErrorPattern,
    pub rounds: usize,
    /// Variables flipped in each round, in flip order.
    pub flips_per_round: Vec<Vec<usize>>,
}

fn check_length(t: &TannerGraph, e: &ErrorPattern) -> Result<()> {
    if e.len() != t.n() {
        return Err(Error::LengthMismatch {
            expected: t.n(),
            got: e.len(),
        });
    }
    Ok(())
}

/// Checks with an odd number of ones among their neighbors.
pub fn unsatisfied_checks(t: &TannerGraph, e: &ErrorPattern) -> Result<Vec<usize>> {
    check_length(t, e)?;
    let parity = syndrome(t, e.bits());
    Ok(parity
        .iter()
        .enumerate()
        .filter_map(|(c, &p)| p.then_some(c))
        .collect())
}

fn syndrome(t: &TannerGraph, bits: &[bool]) -> Vec<bool> {
    let mut parity = vec![false; t.m()];
    for (v, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        for &c in t.var_neighbors(v) {
            parity[c] ^= true;
        }
    }
    parity
}

/// Flip rule: strictly more unsatisfied than satisfied checks. Ties hold.
#[inline]
fn wants_flip(t: &TannerGraph, parity: &[bool], v: usize) -> bool {
    let nbrs = t.var_neighbors(v);
    let unsat = nbrs.iter().filter(|&&c| parity[c]).count();
    2 * unsat > nbrs.len()
}

fn parallel_flips(t: &TannerGraph, parity: &[bool]) -> Vec<usize> {
    (0..t.n()).filter(|&v| wants_flip(t, parity, v)).collect()
}

/// One parallel round against the pre-round syndrome. Returns the new word
/// and the flipped variables.
pub fn parallel_round(t: &TannerGraph, e: &ErrorPattern) -> Result<(ErrorPattern, Vec<usize>)> {
    check_length(t, e)?;
    let parity = syndrome(t, e.bits());
    let flipped = parallel_flips(t, &parity);
    let mut bits = e.bits().to_vec();
    for &v in &flipped {
        bits[v] ^= true;
    }
    Ok((ErrorPattern::from_bits(bits), flipped))
}

/// True when no variable satisfies the flip rule, for either schedule.
pub fn is_fixed_point(t: &TannerGraph, e: &ErrorPattern) -> Result<bool> {
    check_length(t, e)?;
    let parity = syndrome(t, e.bits());
    Ok(!(0..t.n()).any(|v| wants_flip(t, &parity, v)))
}

/// Decoding working state: the current word and its syndrome.
struct State<'a> {
    t: &'a TannerGraph,
    bits: Vec<bool>,
    parity: Vec<bool>,
    weight: usize,
}

impl<'a> State<'a> {
    fn new(t: &'a TannerGraph, e: &ErrorPattern) -> Self {
        State {
            t,
            bits: e.bits().to_vec(),
            parity: syndrome(t, e.bits()),
            weight: e.weight(),
        }
    }

    fn flip(&mut self, v: usize) {
        self.bits[v] ^= true;
        if self.bits[v] {
            self.weight += 1;
        } else {
            self.weight -= 1;
        }
        for &c in self.t.var_neighbors(v) {
            self.parity[c] ^= true;
        }
    }

    fn parallel_round(&mut self) -> Vec<usize> {
        let flips = parallel_flips(self.t, &self.parity);
        for &v in &flips {
            self.flip(v);
        }
        flips
    }

    fn serial_round(&mut self) -> Vec<usize> {
        let mut flips = Vec::new();
        for v in 0..self.t.n() {
            if wants_flip(self.t, &self.parity, v) {
                self.flip(v);
                flips.push(v);
            }
        }
        flips
    }
}

/// Runs the decoder until the word is zero, a round flips nothing, a word
/// repeats, or `max_iters` rounds have run.
pub fn decode(
    t: &TannerGraph,
    e: &ErrorPattern,
    algorithm: Algorithm,
    max_iters: usize,
) -> Result<DecodeResult> {
    check_length(t, e)?;
    if max_iters == 0 {
        return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
    }
    let mut state = State::new(t, e);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(state.bits.clone());
    let mut flips_per_round = Vec::new();

    let status = loop {
        if state.weight == 0 {
            break DecodeStatus::Corrected;
        }
        if flips_per_round.len() == max_iters {
            break DecodeStatus::MaxIters;
        }
        let flips = match algorithm {
            Algorithm::Parallel => state.parallel_round(),
            Algorithm::Serial => state.serial_round(),
        };
        let stalled = flips.is_empty();
        flips_per_round.push(flips);
        if stalled {
            break DecodeStatus::FixedPoint;
        }
        if state.weight != 0 && !seen.insert(state.bits.clone()) {
            break DecodeStatus::Oscillation;
        }
    };

    Ok(DecodeResult {
        status,
        rounds: flips_per_round.len(),
        final_pattern: ErrorPattern::from_bits(state.bits),
        flips_per_round,
    })
}

pub fn decode_parallel(
    t: &TannerGraph,
    e: &ErrorPattern,
    max_iters: usize,
) -> Result<DecodeResult> {
    decode(t, e, Algorithm::Parallel, max_iters)
}

/// Serial schedule: variables scanned in ascending index order, each flip
/// applied to the syndrome immediately. One scan is one round.
pub fn decode_serial(t: &TannerGraph, e: &ErrorPattern, max_iters: usize) -> Result<DecodeResult> {
    decode(t, e, Algorithm::Serial, max_iters)
}

/// Default round budget: the code length, but at least one round.
pub fn default_max_iters(t: &TannerGraph) -> usize {
    t.n().max(1)
}
