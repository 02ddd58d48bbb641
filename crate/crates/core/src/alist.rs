//! alist reading and writing, plus DOT export.
//!
//! Layout (indices 1-based in the file, 0-based everywhere else):
//!
//! ```text
//! n m
//! max_var_degree max_check_degree
//! <n variable degrees>
//! <m check degrees>
//! <n lines: checks of each variable>
//! <m lines: variables of each check>
//! ```
//!
//! Zero entries in the adjacency lines are padding and are skipped. The two
//! adjacency blocks must describe the same edge set. Canonical output has no
//! padding, single spaces and a trailing newline.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, TannerGraph};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    /// Returns `(1-based line number, numbers on it)`.
    fn next_numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        let lineno = self.pos + 1;
        let line = *self
            .lines
            .get(self.pos)
            .ok_or_else(|| parse_err(lineno, format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        let nums = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| parse_err(lineno, format!("bad integer {tok:?} in {what}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((lineno, nums))
    }

    fn expect_count(&mut self, count: usize, what: &str) -> Result<(usize, Vec<usize>)> {
        let (lineno, nums) = self.next_numbers(what)?;
        if nums.len() != count {
            return Err(parse_err(
                lineno,
                format!("expected {count} entries for {what}, found {}", nums.len()),
            ));
        }
        Ok((lineno, nums))
    }
}

/// Reads one adjacency block; returns per-node neighbor lists (0-based) and
/// the line each node was read from.
fn read_block(
    lines: &mut Lines<'_>,
    degrees: &[usize],
    other_count: usize,
    what: &str,
) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let mut lists = Vec::with_capacity(degrees.len());
    let mut at = Vec::with_capacity(degrees.len());
    for (i, &deg) in degrees.iter().enumerate() {
        let (lineno, nums) = lines.next_numbers(what)?;
        let mut list = Vec::with_capacity(deg);
        for x in nums.into_iter().filter(|&x| x != 0) {
            if x > other_count {
                return Err(parse_err(
                    lineno,
                    format!(
                        "index {x} out of range 1..={other_count} in {what} {}",
                        i + 1
                    ),
                ));
            }
            list.push(x - 1);
        }
        if list.len() != deg {
            return Err(parse_err(
                lineno,
                format!(
                    "{what} {} declares degree {deg} but lists {}",
                    i + 1,
                    list.len()
                ),
            ));
        }
        let mut sorted = list.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(parse_err(
                lineno,
                format!("{what} {} lists {} twice", i + 1, w[0] + 1),
            ));
        }
        lists.push(list);
        at.push(lineno);
    }
    Ok((lists, at))
}

/// Parses alist text.
pub fn parse_alist(text: &str) -> Result<TannerGraph> {
    let mut lines = Lines {
        lines: text.lines().collect(),
        pos: 0,
    };
    let (_, head) = lines.expect_count(2, "the size line \"n m\"")?;
    let (n, m) = (head[0], head[1]);
    let (max_line, maxes) = lines.expect_count(2, "the maximum degree line")?;
    let (_, var_deg) = lines.expect_count(n, "variable degrees")?;
    let (_, check_deg) = lines.expect_count(m, "check degrees")?;
    let actual = (
        var_deg.iter().copied().max().unwrap_or(0),
        check_deg.iter().copied().max().unwrap_or(0),
    );
    if (maxes[0], maxes[1]) != actual {
        return Err(parse_err(
            max_line,
            format!(
                "maximum degrees {} {} disagree with the degree lists ({} {})",
                maxes[0], maxes[1], actual.0, actual.1
            ),
        ));
    }

    let (var_lists, var_at) = read_block(&mut lines, &var_deg, m, "variable")?;
    let (check_lists, check_at) = read_block(&mut lines, &check_deg, n, "check")?;

    for (extra, line) in lines.lines[lines.pos..].iter().enumerate() {
        if !line.trim().is_empty() {
            return Err(parse_err(
                lines.pos + extra + 1,
                "trailing content after check block",
            ));
        }
    }

    let from_vars: BTreeSet<(usize, usize)> = var_lists
        .iter()
        .enumerate()
        .flat_map(|(v, l)| l.iter().map(move |&c| (v, c)))
        .collect();
    let from_checks: BTreeSet<(usize, usize)> = check_lists
        .iter()
        .enumerate()
        .flat_map(|(c, l)| l.iter().map(move |&v| (v, c)))
        .collect();
    if let Some(&(v, c)) = from_vars.difference(&from_checks).next() {
        return Err(parse_err(
            var_at[v],
            format!(
                "edge (variable {}, check {}) is missing from the check block",
                v + 1,
                c + 1
            ),
        ));
    }
    if let Some(&(v, c)) = from_checks.difference(&from_vars).next() {
        return Err(parse_err(
            check_at[c],
            format!(
                "edge (variable {}, check {}) is missing from the variable block",
                v + 1,
                c + 1
            ),
        ));
    }

    TannerGraph::from_var_adjacency(m, var_lists)
}

/// Canonical alist text.
pub fn to_alist_string(t: &TannerGraph) -> String {
    fn join(it: impl Iterator<Item = usize>) -> String {
        it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
    let var_deg: Vec<usize> = (0..t.n()).map(|v| t.var_degree(v)).collect();
    let check_deg: Vec<usize> = (0..t.m()).map(|c| t.check_degree(c)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", t.n(), t.m());
    let _ = writeln!(
        out,
        "{} {}",
        var_deg.iter().max().unwrap_or(&0),
        check_deg.iter().max().unwrap_or(&0)
    );
    let _ = writeln!(out, "{}", join(var_deg.iter().copied()));
    let _ = writeln!(out, "{}", join(check_deg.iter().copied()));
    for v in 0..t.n() {
        let _ = writeln!(out, "{}", join(t.var_neighbors(v).iter().map(|c| c + 1)));
    }
    for c in 0..t.m() {
        let _ = writeln!(out, "{}", join(t.check_neighbors(c).iter().map(|v| v + 1)));
    }
    out
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

pub fn read_alist(path: impl AsRef<Path>) -> Result<TannerGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_alist(&text)
}

pub fn write_alist(t: &TannerGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_alist_string(t)).map_err(|e| io_err(path, e))
}

/// Undirected DOT rendering of a simple graph.
pub fn graph_to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("graph \"{name}\" {{\n");
    for u in 0..g.node_count() {
        let _ = writeln!(out, "  {u};");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a Tanner graph: variables `v<i>` as circles, checks
/// `c<j>` as boxes.
pub fn tanner_to_dot(t: &TannerGraph, name: &str) -> String {
    let mut out = format!("graph \"{name}\" {{\n");
    for v in 0..t.n() {
        let _ = writeln!(out, "  v{v} [shape=circle];");
    }
    for c in 0..t.m() {
        let _ = writeln!(out, "  c{c} [shape=box];");
    }
    for (v, c) in t.edges() {
        let _ = writeln!(out, "  v{v} -- c{c};");
    }
    out.push_str("}\n");
    out
}
