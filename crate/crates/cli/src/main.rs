//! `bitflip-girth`: bounds, girth, decoding sweeps and trapping-set tools
//! for alist-encoded LDPC codes.
//!
//! Every command writes a JSON report to stdout and a short text summary to
//! stderr. Exit codes: 0 pass/found, 1 verified failure, 2 usage or input
//! error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bitflip_girth::alist::{graph_to_dot, parse_alist, to_alist_string};
use bitflip_girth::analysis::{
    is_trapping_set, search_min_trapping_set, verify_correction, verify_main_theorem, SearchMode,
    SweepOptions, DEFAULT_BUDGET,
};
use bitflip_girth::bounds::{cage_upper_bound, moore_bound, BoundReport};
use bitflip_girth::cages::{build_gadget, cage, embed_gadget, EmbedOptions};
use bitflip_girth::decoder::{decode, default_max_iters, Algorithm, ErrorPattern};
use bitflip_girth::generate::generate_code;
use bitflip_girth::scalar::rational_to_f64;
use bitflip_girth::{Error, Rational, TannerGraph};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "bitflip-girth",
    version,
    about = "Girth-based guarantees for bit-flipping LDPC decoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Parallel,
    Serial,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoChoice {
    Parallel,
    Serial,
    Both,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Parallel => Algorithm::Parallel,
            AlgoArg::Serial => Algorithm::Serial,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Moore value, guaranteed correction count and trapping-set size bound.
    Bounds {
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        girth: usize,
    },
    /// Girth and degree profile of a code.
    Girth {
        #[arg(long)]
        code: PathBuf,
    },
    /// Decode one error pattern.
    Decode {
        #[arg(long)]
        code: PathBuf,
        /// Comma-separated 0-based variable indices.
        #[arg(long, value_delimiter = ',')]
        errors: Vec<usize>,
        #[arg(long, value_enum, default_value = "parallel")]
        algo: AlgoArg,
        /// Defaults to the code length.
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Exhaustive expansion check over all small variable subsets.
    VerifyExpansion {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Decode every error pattern of one weight.
    VerifyCorrection {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        weight: usize,
        #[arg(long, value_enum, default_value = "both")]
        algo: AlgoChoice,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Smallest trapping set (or potential trapping set) up to a size.
    FindTrappingSets {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        max_size: usize,
        /// Require condition (a) only.
        #[arg(long)]
        potential_only: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Cage gadget for (gamma, g'), optionally spliced into a host code.
    MakeGadget {
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        gprime: usize,
        #[arg(long)]
        out: PathBuf,
        /// Host code to embed the gadget into.
        #[arg(long)]
        host: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Catalogued (d, g)-cage.
    Cage {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        g: usize,
        /// Write the cage as a DOT graph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Random (gamma, rho)-regular code with a minimum girth.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: usize,
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        min_girth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    inputs_digest: String,
    results: Value,
    version: &'static str,
    seed: Option<u64>,
}

struct Outcome {
    results: Value,
    summary: String,
    seed: Option<u64>,
    exit: u8,
}

struct Failure {
    exit: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::GenerationFailed { .. } | Error::EmbedFailed(_) | Error::UnknownCage { .. } => 1,
            _ => 2,
        };
        Failure {
            exit,
            msg: e.to_string(),
        }
    }
}

/// Accumulates the bytes that identify a run: the arguments and the
/// contents of every input file.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new(args: &[String]) -> Self {
        let mut hasher = Sha256::new();
        for a in args {
            hasher.update(a.as_bytes());
            hasher.update([0]);
        }
        Inputs { hasher }
    }

    fn read_code(&mut self, path: &Path) -> Result<TannerGraph, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure {
            exit: 2,
            msg: format!("{}: {e}", path.display()),
        })?;
        self.hasher.update(text.as_bytes());
        parse_alist(&text).map_err(|e| Failure {
            exit: 2,
            msg: format!("{}: {e}", path.display()),
        })
    }

    fn digest(self) -> String {
        self.hasher
            .finalize()
            .iter()
            .fold(String::new(), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            })
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure {
        exit: 2,
        msg: format!("{}: {e}", path.display()),
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn code_summary(t: &TannerGraph) -> Value {
    json!({
        "n": t.n(),
        "m": t.m(),
        "edges": t.edge_count(),
        "gamma": t.gamma(),
        "rho": t.rho(),
        "girth": t.girth(),
    })
}

fn run(cmd: Command, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let ok = |results: Value, summary: String| Outcome {
        results,
        summary,
        seed: None,
        exit: 0,
    };
    match cmd {
        Command::Bounds { gamma, girth } => {
            let r = BoundReport::new(gamma, girth)?;
            let summary = format!(
                "gamma={gamma} girth={girth}: n0={} t_max={} trapping in [{}, {}]{} ({:?})",
                r.moore_n0,
                r.t_max,
                r.trapping_lower,
                r.trapping_upper,
                r.trapping_exact
                    .map(|e| format!(", exact {e}"))
                    .unwrap_or_default(),
                r.hypothesis
            );
            Ok(ok(to_value(&r), summary))
        }
        Command::Girth { code } => {
            let t = inputs.read_code(&code)?;
            let summary = format!("n={} m={} girth={}", t.n(), t.m(), t.girth());
            Ok(ok(code_summary(&t), summary))
        }
        Command::Decode {
            code,
            errors,
            algo,
            max_iters,
        } => {
            let t = inputs.read_code(&code)?;
            let e = ErrorPattern::from_support(t.n(), &errors)?;
            let max_iters = max_iters.unwrap_or_else(|| default_max_iters(&t));
            let r = decode(&t, &e, algo.into(), max_iters)?;
            let mut out = ok(
                json!({ "errors": e.support(), "algorithm": Algorithm::from(algo), "max_iters": max_iters, "decode": r }),
                format!(
                    "{:?} after {} rounds, residual weight {}",
                    r.status,
                    r.rounds,
                    r.final_pattern.weight()
                ),
            );
            if r.status != bitflip_girth::decoder::DecodeStatus::Corrected {
                out.exit = 1;
            }
            Ok(out)
        }
        Command::VerifyExpansion { code, budget } => {
            let t = inputs.read_code(&code)?;
            let opts = SweepOptions {
                budget,
                ..SweepOptions::default()
            };
            let c = verify_main_theorem(&t, &opts)?;
            let summary = format!(
                "{} subsets up to size {} of {}: worst |N(S)|/|S| = {} ({:.4}) vs threshold {}; {}{}",
                c.subsets_visited,
                c.k_max_checked,
                c.k_target,
                c.worst_expansion,
                rational_to_f64(&c.worst_expansion),
                c.threshold,
                if c.pass { "pass" } else { "FAIL" },
                if c.complete { "" } else { " (incomplete: budget)" }
            );
            let exit = if c.pass && c.complete { 0 } else { 1 };
            Ok(Outcome {
                exit,
                ..ok(to_value(&c), summary)
            })
        }
        Command::VerifyCorrection {
            code,
            weight,
            algo,
            max_iters,
            budget,
        } => {
            let t = inputs.read_code(&code)?;
            let max_iters = max_iters.unwrap_or_else(|| default_max_iters(&t));
            let algos: &[Algorithm] = match algo {
                AlgoChoice::Parallel => &[Algorithm::Parallel],
                AlgoChoice::Serial => &[Algorithm::Serial],
                AlgoChoice::Both => &[Algorithm::Parallel, Algorithm::Serial],
            };
            let sweeps = algos
                .iter()
                .map(|&a| verify_correction(&t, weight, a, max_iters, budget))
                .collect::<Result<Vec<_>, _>>()?;
            let summary = sweeps
                .iter()
                .map(|s| {
                    format!(
                        "{:?}: {} patterns of weight {}, {} failures",
                        s.algorithm, s.patterns_visited, s.weight, s.failure_count
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let exit = if sweeps.iter().all(|s| s.failure_count == 0) {
                0
            } else {
                1
            };
            Ok(Outcome {
                exit,
                ..ok(json!({ "sweeps": sweeps }), summary)
            })
        }
        Command::FindTrappingSets {
            code,
            max_size,
            potential_only,
            budget,
        } => {
            let t = inputs.read_code(&code)?;
            let mode = if potential_only {
                SearchMode::PotentialOnly
            } else {
                SearchMode::Trapping
            };
            let opts = SweepOptions {
                budget,
                ..SweepOptions::default()
            };
            let s = search_min_trapping_set(&t, max_size, mode, &opts)?;
            let summary = match &s.found {
                Some(r) => format!(
                    "found {:?} of size {} with (a, b) = {:?}",
                    r.subset,
                    r.subset.len(),
                    r.ab_signature
                ),
                None if s.complete => format!("none of size <= {max_size}"),
                None => format!(
                    "none of size <= {} (budget stopped the search)",
                    s.sizes_covered
                ),
            };
            let exit = if s.found.is_some() { 0 } else { 1 };
            Ok(Outcome {
                exit,
                ..ok(to_value(&s), summary)
            })
        }
        Command::MakeGadget {
            gamma,
            gprime,
            out,
            host,
            seed,
        } => {
            let (gadget, subset) = build_gadget(gamma, gprime)?;
            let (code, subset, merges) = match host {
                Some(path) => {
                    let h = inputs.read_code(&path)?;
                    let opts = EmbedOptions {
                        seed,
                        ..EmbedOptions::default()
                    };
                    let e = embed_gadget(&h, &gadget, &opts)?;
                    (e.code, e.subset, Some(e.merges))
                }
                None => (gadget, subset, None),
            };
            write_file(&out, &to_alist_string(&code))?;
            let report = is_trapping_set(&code, &subset)?;
            let summary = format!(
                "{} variables, {} checks; gadget subset {:?} trapping = {}",
                code.n(),
                code.m(),
                report.subset,
                report.is_trapping
            );
            Ok(Outcome {
                seed: merges.as_ref().map(|_| seed),
                ..ok(
                    json!({
                        "out": out.display().to_string(),
                        "code": code_summary(&code),
                        "subset": report,
                        "merges": merges,
                    }),
                    summary,
                )
            })
        }
        Command::Cage { d, g, dot } => {
            let entry = cage(d, g)?;
            if let Some(path) = &dot {
                write_file(path, &graph_to_dot(&entry.graph, &entry.name))?;
            }
            let lower =
                (d >= 2).then(|| moore_bound::<Rational>(Rational::from_integer(d as i128), g));
            let upper = cage_upper_bound::<Rational>(d, g)?;
            let summary = format!("({d}, {g})-cage: {} of order {}", entry.name, entry.order());
            Ok(ok(
                json!({
                    "d": d,
                    "g": g,
                    "name": entry.name,
                    "order": entry.order(),
                    "edges": entry.graph.edge_count(),
                    "certificate": entry.certificate,
                    "certified": entry.certified(),
                    "moore_bound": lower.transpose()?.map(|r| r.to_string()),
                    "upper_bound": upper.to_string(),
                    "dot": dot.map(|p| p.display().to_string()),
                }),
                summary,
            ))
        }
        Command::Gen {
            n,
            gamma,
            rho,
            min_girth,
            seed,
            out,
        } => {
            let t = generate_code(n, gamma, rho, min_girth, seed)?;
            write_file(&out, &to_alist_string(&t))?;
            let summary = format!(
                "({gamma}, {rho})-regular code n={n} m={} girth={} -> {}",
                t.m(),
                t.girth(),
                out.display()
            );
            Ok(Outcome {
                seed: Some(seed),
                ..ok(
                    json!({ "out": out.display().to_string(), "code": code_summary(&t) }),
                    summary,
                )
            })
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut inputs = Inputs::new(&args);
    match run(cli.command, &mut inputs) {
        Ok(outcome) => {
            let report = Report {
                command: args,
                inputs_digest: inputs.digest(),
                results: outcome.results,
                version: env!("CARGO_PKG_VERSION"),
                seed: outcome.seed,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            eprintln!("{}", outcome.summary);
            ExitCode::from(outcome.exit)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.exit)
        }
    }
}
