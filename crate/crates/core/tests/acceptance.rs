//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its runtime; the process exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use bitflip_girth::analysis::{
    binomial, check_lemmas_exhaustive, is_trapping_set, search_min_trapping_set,
    trapping_fixed_point_equivalence, verify_correction, verify_main_theorem, SearchMode,
    SweepOptions, DEFAULT_BUDGET,
};
use bitflip_girth::bounds::{
    brute_force_f, cage_upper_bound, guaranteed_correction_count, moore_bound, moore_formula,
    trapping_set_size_bound,
};
use bitflip_girth::cages::{build_gadget, cage, catalog, embed_gadget, EmbedOptions};
use bitflip_girth::decoder::{decode, default_max_iters, Algorithm, DecodeStatus, ErrorPattern};
use bitflip_girth::generate::generate_code;
use bitflip_girth::transforms::{edge_vertex_incidence, inverse_edge_vertex_incidence, RootPolicy};
use bitflip_girth::{Girth, Graph, Rational, TannerGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(p: i128, q: i128) -> Rational {
    Rational::new(p, q)
}

fn code(
    n: usize,
    gamma: usize,
    rho: usize,
    girth: usize,
    seed: u64,
) -> Result<TannerGraph, String> {
    let t = generate_code(n, gamma, rho, girth, seed)
        .map_err(|e| format!("generate ({n},{gamma},{rho},{girth}): {e}"))?;
    ensure(t.girth() >= Girth::Finite(girth), || {
        format!("generated code has girth {} < {girth}", t.girth())
    })?;
    Ok(t)
}

/// Largest k with k < n0(gamma/2, g'), from the formula's definition.
fn k_target_oracle(gamma: usize, g_prime: usize) -> usize {
    let n0: Rational = moore_formula(r(gamma as i128, 2), g_prime);
    (0..)
        .take_while(|&k| Rational::from_integer(k as i128) < n0)
        .last()
        .unwrap_or(0)
}

fn bound_table() -> Check {
    let moore = [
        (r(3, 1), 5, r(10, 1)),
        (r(2, 1), 6, r(6, 1)),
        (r(2, 1), 4, r(4, 1)),
        (r(5, 2), 5, r(29, 4)),
    ];
    for (d, g, want) in moore {
        let got = moore_bound(d, g).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("n0({d},{g}) = {got}, want {want}"))?;
    }
    // d = 3/2 is outside the checked domain; the formula itself is exact.
    let got = moore_formula(r(3, 2), 4);
    ensure(got == r(3, 1), || format!("n0(3/2,4) = {got}, want 3"))?;
    ensure(moore_bound(r(3, 2), 4).is_err(), || {
        "moore_bound accepted d = 3/2".into()
    })?;
    for (d, g, want) in [(3, 5, r(62, 3)), (3, 6, r(118, 3)), (4, 5, r(54, 1))] {
        let got: Rational = cage_upper_bound(d, g).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("n_u({d},{g}) = {got}, want {want}"))?;
    }
    Ok("n0(3,5)=10 n0(2,6)=6 n0(2,4)=4 n0(3/2,4)=3 n0(5/2,5)=29/4; n_u(3,5)=62/3 n_u(3,6)=118/3 n_u(4,5)=54".into())
}

fn weight_one_sweeps() -> Check {
    let mut notes = Vec::new();
    for (n, gamma, rho, seed) in [(200, 3, 6, 1), (120, 4, 4, 1)] {
        let t = code(n, gamma, rho, 8, seed)?;
        let t_max = guaranteed_correction_count(gamma, 8)
            .map_err(|e| e.to_string())?
            .t_max;
        ensure(t_max == 1, || format!("t_max({gamma},8) = {t_max}, want 1"))?;
        for algo in [Algorithm::Parallel, Algorithm::Serial] {
            let s = verify_correction(&t, 1, algo, default_max_iters(&t), DEFAULT_BUDGET)
                .map_err(|e| e.to_string())?;
            ensure(s.patterns_visited == n as u64, || {
                format!("visited {} patterns, want {n}", s.patterns_visited)
            })?;
            ensure(s.failure_count == 0, || {
                format!(
                    "gamma={gamma} {algo:?}: {} failures, first {:?}",
                    s.failure_count,
                    s.failures.first()
                )
            })?;
        }
        notes.push(format!("gamma={gamma} n={n}: 0/{n} failures x2"));
    }
    Ok(notes.join("; "))
}

fn main_theorem_certificates() -> Check {
    let shapes = [
        (60, 3, 6, 6, 1),
        (100, 3, 4, 8, 1),
        (120, 4, 8, 6, 1),
        (120, 4, 4, 8, 1),
        (100, 5, 5, 6, 1),
        (150, 5, 10, 6, 2),
    ];
    let mut notes = Vec::new();
    for (n, gamma, rho, girth, seed) in shapes {
        let t = code(n, gamma, rho, girth, seed)?;
        let c = verify_main_theorem(&t, &SweepOptions::default()).map_err(|e| e.to_string())?;
        let g_prime = t.girth().finite().unwrap() / 2;
        let k_want = k_target_oracle(gamma, g_prime).min(n);
        ensure(c.k_target == k_want, || {
            format!("k_target {} != {k_want}", c.k_target)
        })?;
        ensure(c.complete && c.k_max_checked == k_want, || {
            "sweep incomplete".into()
        })?;
        let visited: u128 = (1..=k_want).map(|k| binomial(n, k)).sum();
        ensure(c.subsets_visited as u128 == visited, || {
            format!("visited {} subsets, want {visited}", c.subsets_visited)
        })?;
        let threshold = r(3 * gamma as i128, 4);
        ensure(c.pass && c.worst_expansion > threshold, || {
            format!(
                "({n},{gamma},{rho},girth {}): worst {} at {:?} vs {threshold}",
                c.girth, c.worst_expansion, c.worst_subset
            )
        })?;
        notes.push(format!(
            "g={gamma} girth={} k<={} worst={}>{}",
            c.girth, c.k_target, c.worst_expansion, threshold
        ));
    }
    Ok(notes.join("; "))
}

fn lemma_oracles() -> Check {
    for (k, g, want) in [(4, 4, 4), (5, 4, 6), (5, 5, 5), (4, 3, 6)] {
        let got = brute_force_f(k, g).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("f({k},{g}) = {got}, want {want}"))?;
    }
    let mut notes = vec!["f(4,4)=4 f(5,4)=6 f(5,5)=5 f(4,3)=6".to_string()];
    // Tutte-Coxeter graph split by parity: a 3-regular code with girth 8
    let tc = cage(3, 8).map_err(|e| e.to_string())?.graph;
    let tc_code = TannerGraph::from_var_adjacency(
        tc.node_count() / 2,
        (0..tc.node_count())
            .step_by(2)
            .map(|u| tc.neighbors(u).iter().map(|&w| w / 2).collect())
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let fixtures = [
        code(24, 3, 4, 6, 1)?,
        tc_code,
        // Petersen incidence code: 3-regular variables, girth 10
        edge_vertex_incidence(&cage(3, 5).map_err(|e| e.to_string())?.graph),
    ];
    for t in &fixtures {
        let n = t.n();
        let s = check_lemmas_exhaustive(t, 6).map_err(|e| e.to_string())?;
        let visited: u128 = (1..=6).map(|k| binomial(n, k)).sum();
        ensure(s.subsets_visited as u128 == visited, || {
            format!("visited {} subsets, want {visited}", s.subsets_visited)
        })?;
        ensure(s.lemma1_failures == 0 && s.lemma2_failures == 0, || {
            format!(
                "n={n}: {} / {} lemma failures, first {:?}",
                s.lemma1_failures, s.lemma2_failures, s.first_failure
            )
        })?;
        notes.push(format!(
            "n={n} girth={}: {} subsets ok",
            t.girth(),
            s.subsets_visited
        ));
    }
    Ok(notes.join("; "))
}

fn gadget_witness() -> Check {
    let (gadget, subset) = build_gadget(3, 4).map_err(|e| e.to_string())?;
    let exact = trapping_set_size_bound(3, 8)
        .map_err(|e| e.to_string())?
        .exact;
    ensure(
        gadget.n() == 4 && subset.len() == 4 && exact == Some(4),
        || format!("gadget has {} variables, bound exact {exact:?}", gadget.n()),
    )?;
    let host = code(100, 3, 4, 8, 4)?;
    let opts = EmbedOptions {
        seed: 1,
        ..EmbedOptions::default()
    };
    let emb = embed_gadget(&host, &gadget, &opts).map_err(|e| e.to_string())?;
    let report = is_trapping_set(&emb.code, &emb.subset).map_err(|e| e.to_string())?;
    ensure(report.is_trapping, || {
        format!("{:?} is not trapping", emb.subset)
    })?;
    let e = ErrorPattern::from_support(emb.code.n(), &emb.subset).map_err(|e| e.to_string())?;
    for algo in [Algorithm::Parallel, Algorithm::Serial] {
        let d =
            decode(&emb.code, &e, algo, default_max_iters(&emb.code)).map_err(|e| e.to_string())?;
        ensure(
            d.status == DecodeStatus::FixedPoint && d.rounds == 1,
            || format!("{algo:?}: {:?} after {} rounds", d.status, d.rounds),
        )?;
        ensure(d.final_pattern == e, || format!("{algo:?} moved the word"))?;
    }
    Ok(format!(
        "4-variable gadget = exact bound 4; embedded at {:?}, (a,b)={:?}; FIXED_POINT in 1 round x2",
        emb.subset, report.ab_signature
    ))
}

fn no_small_potential_sets() -> Check {
    let mut notes = Vec::new();
    for (n, rho, seed) in [(100, 4, 1), (120, 4, 2), (200, 6, 3)] {
        let t = code(n, 3, rho, 8, seed)?;
        let s = search_min_trapping_set(&t, 3, SearchMode::PotentialOnly, &SweepOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(s.complete && s.sizes_covered == 3, || {
            "search incomplete".into()
        })?;
        ensure(s.found.is_none(), || {
            format!(
                "n={n}: potential trapping set {:?}",
                s.found.as_ref().map(|f| &f.subset)
            )
        })?;
        notes.push(format!("n={n}: NONE ({} subsets)", s.subsets_visited));
    }
    Ok(notes.join("; "))
}

fn iff_equivalence() -> Check {
    let mut notes = Vec::new();
    for (n, rho, girth, seed) in [(30, 3, 6, 1), (28, 4, 4, 1)] {
        let t = code(n, 3, rho, girth, seed)?;
        let s = trapping_fixed_point_equivalence(&t, 4).map_err(|e| e.to_string())?;
        let visited: u128 = (1..=4).map(|k| binomial(n, k)).sum();
        ensure(s.subsets_visited as u128 == visited, || {
            format!("visited {} subsets, want {visited}", s.subsets_visited)
        })?;
        ensure(s.disagreements.is_empty(), || {
            format!(
                "{} disagreements, first {:?}",
                s.disagreements.len(),
                s.disagreements[0]
            )
        })?;
        notes.push(format!(
            "n={n} girth={}: {} subsets, {} trapping, 0 disagreements",
            t.girth(),
            s.subsets_visited,
            s.trapping_sets
        ));
    }
    Ok(notes.join("; "))
}

fn transform_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut graphs = Vec::new();
    for _ in 0..50 {
        let n = rng.gen_range(3..=14);
        let p = rng.gen_range(0.15..0.6);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        graphs.push(Graph::from_edges(n, &edges).map_err(|e| e.to_string())?);
    }
    let cages = catalog();
    graphs.extend(cages.iter().map(|c| c.graph.clone()));
    for g in &graphs {
        let h = edge_vertex_incidence(g);
        let want = match g.girth() {
            Girth::Finite(k) => Girth::Finite(2 * k),
            Girth::Infinite => Girth::Infinite,
        };
        ensure(h.girth() == want, || {
            format!("girth {} -> {}", g.girth(), h.girth())
        })?;
        ensure((0..h.m()).all(|c| h.check_degree(c) == 2), || {
            "check degree != 2".into()
        })?;
        let back = inverse_edge_vertex_incidence(&h, &RootPolicy::LowestIndex)
            .map_err(|e| e.to_string())?;
        ensure(back.graph == *g && back.collapsed == 0, || {
            "inverse is not identity".into()
        })?;
    }
    Ok(format!("50 random graphs + {} catalog cages", cages.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 bound-formula table", Duration::from_secs(1), bound_table),
        (
            "2 weight-1 correction sweeps",
            Duration::from_secs(60),
            weight_one_sweeps,
        ),
        (
            "3 expansion certificates",
            Duration::from_secs(300),
            main_theorem_certificates,
        ),
        (
            "4 lemma oracle agreement",
            Duration::from_secs(60),
            lemma_oracles,
        ),
        (
            "5 gadget trapping-set witness",
            Duration::from_secs(1),
            gadget_witness,
        ),
        (
            "6 no potential trapping sets below 4",
            Duration::from_secs(60),
            no_small_potential_sets,
        ),
        (
            "7 trapping set iff fixed point",
            Duration::from_secs(60),
            iff_equivalence,
        ),
        (
            "8 transform round trip and girth doubling",
            Duration::from_secs(60),
            transform_properties,
        ),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow (limit {limit:?})")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "[{}] {name} ({:.3}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
