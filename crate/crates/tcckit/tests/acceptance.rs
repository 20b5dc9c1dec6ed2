//! End-to-end acceptance suite: exact charge arithmetic, oracle-checked
//! chromatic numbers, pipeline verification on sampled hosts, extension
//! procedure soundness, reducibility of the small configurations, and
//! matcher equivalence.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use tcckit::coloring::{
    solve, solve_omitting_randomized, solve_randomized, total_chromatic_number, validate,
    ChiResult, PartialTotalColoring, SolveOutcome,
};
use tcckit::discharge::{
    apply_phase1, apply_phase2, audit, initial_charges, parametric_analysis, ChargeElem,
    DischargeParams, DonorMode,
};
use tcckit::extension::{
    derive_facts, extend_edge_uv, extend_vertex_u, locate_config, reducibility_test, replay,
    Config646, Hypothesis, Reducibility, PALETTE,
};
use tcckit::generate::{
    configuration_host, connected_graphs_up_to_iso, cycle, gen_planar, partial_wheel_links,
    sample_theorem_class, star, GenMode, GenSpec, HostKind,
};
use tcckit::graph::{Element, FaceSet, Graph};
use tcckit::patterns::{builtin_catalog, naive_matches, subgraph_match, MatchOptions, PatternGraph};

type Rat = Ratio<i64>;

fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

fn corpus(count: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for i in 0..count {
        let spec = GenSpec {
            budget: 3 + (i * 197) / count.max(1), // spreads 3..=200
            seed: i as u64,
            mode: if i % 2 == 0 { GenMode::Triangulation } else { GenMode::Sparse },
            max_degree: None,
        };
        out.push(gen_planar(&spec).expect("generation succeeds"));
    }
    out
}

/// Charge conservation: initial and final sums are exactly -8 on 200 seeded
/// embedded planar graphs, under shared-donor splitting, in under 10 s.
#[test]
fn acceptance_1_charge_conservation() {
    let started = Instant::now();
    let params = DischargeParams { donor_mode: DonorMode::Split };
    let graphs = corpus(200);
    for (i, g) in graphs.iter().enumerate() {
        assert!(g.is_connected(), "graph {i} disconnected");
        let n = g.vertex_count();
        assert!((3..=200).contains(&n), "graph {i} has {n} vertices");
        let fs = FaceSet::trace(g);
        let report = audit(g, &fs, &params).unwrap_or_else(|e| panic!("graph {i}: {e}"));
        assert_eq!(report.sum_initial.to_rat(), rat(-8, 1), "graph {i} initial");
        assert_eq!(report.sum_final.to_rat(), rat(-8, 1), "graph {i} final");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!("PASS: 200 graphs conserve total charge -8 in {elapsed:?}");
}

/// Admissible triangle faces end phase 1 with charge exactly 0.
#[test]
fn acceptance_2_triangle_face_charges() {
    for (a, b, c) in [(4, 5, 6), (4, 6, 6), (5, 5, 5), (5, 5, 6), (5, 6, 6), (6, 6, 6)] {
        let (g, planted) = configuration_host(&HostKind::Triangle(a, b, c), 0).unwrap();
        let fs = FaceSet::trace(&g);
        let ledger = initial_charges(&g, &fs).unwrap();
        let (after1, _) = apply_phase1(&g, &fs, &ledger);
        let f = planted.face.expect("planted face");
        assert_eq!(
            after1.get(ChargeElem::Face(f)),
            rat(0, 1),
            "({a},{b},{c}) face should end at 0"
        );
    }
    println!("PASS: admissible triangle faces end phase 1 at charge 0");
}

/// Receiver 4-vertices end at charge 0 for both donor degrees; the 5-wheel
/// center ends at charge 1.
#[test]
fn acceptance_3_receiver_charges() {
    let params = DischargeParams::default();
    for donor_degree in [5, 6] {
        let (g, planted) =
            configuration_host(&HostKind::FanReceiver5 { donor_degree }, 0).unwrap();
        let fs = FaceSet::trace(&g);
        let ledger = initial_charges(&g, &fs).unwrap();
        let (after1, _) = apply_phase1(&g, &fs, &ledger);
        let (fin, _) = apply_phase2(&g, &fs, &after1, &params).unwrap();
        assert_eq!(
            fin.get(ChargeElem::Vertex(planted.role("receiver"))),
            rat(0, 1),
            "donor degree {donor_degree}"
        );
    }
    let (g, planted) = configuration_host(&HostKind::WheelReceiver5, 0).unwrap();
    let fs = FaceSet::trace(&g);
    let ledger = initial_charges(&g, &fs).unwrap();
    let (after1, _) = apply_phase1(&g, &fs, &ledger);
    let (fin, _) = apply_phase2(&g, &fs, &after1, &params).unwrap();
    assert_eq!(fin.get(ChargeElem::Vertex(planted.role("receiver"))), rat(1, 1));
    println!("PASS: fan receivers end at 0, wheel receiver at 1");
}

/// Parametric identity sums to -2 for three weightings; the frontier value at
/// (1/4, max degree 6) is exactly -1/10.
#[test]
fn acceptance_4_parametric_checks() {
    for g in corpus(40) {
        let fs = FaceSet::trace(&g);
        for lambda in [rat(1, 8), rat(1, 4), rat(3, 8)] {
            let (sum, _) = parametric_analysis(&g, &fs, lambda).unwrap();
            assert_eq!(sum, rat(-2, 1), "lambda {lambda}");
        }
    }
    let g = tcckit::generate::wheel(6);
    let fs = FaceSet::trace(&g);
    let (_, frontier) = parametric_analysis(&g, &fs, rat(1, 4)).unwrap();
    assert_eq!(frontier, rat(-1, 10));
    println!("PASS: parametric sum -2 on 40 graphs; frontier(1/4, 6) = -1/10");
}

/// Known total chromatic numbers with explicit infeasibility certificates one
/// palette below, plus the Delta+1..Delta+2 bounds on every connected graph
/// with at most 7 vertices.
#[test]
fn acceptance_5_oracle_sanity() {
    let started = Instant::now();
    let budget = 100_000_000;
    let cases: Vec<(Graph, usize, &str)> = vec![
        (cycle(3), 3, "C3"),
        (cycle(4), 4, "C4"),
        (cycle(6), 3, "C6"),
        (tcckit::generate::complete_k4(), 5, "K4"),
        (star(3), 4, "K1,3"),
    ];
    for (g, expected, name) in &cases {
        let res = total_chromatic_number(g, g.max_degree() + 2, budget).unwrap();
        let ChiResult::Exact { chi, witness, .. } = res else {
            panic!("{name}: no exact result");
        };
        assert_eq!(chi, *expected, "{name}");
        assert!(witness.is_total(g));
        assert!(validate(g, &witness).unwrap().is_empty(), "{name} witness");
        // independent infeasibility certificate at chi - 1
        let empty = PartialTotalColoring::new(chi - 1);
        match solve(g, chi - 1, &empty, budget).unwrap() {
            SolveOutcome::Infeasible { nodes } => assert!(nodes > 0, "{name}"),
            other => panic!("{name}: expected infeasible at {}, got {other:?}", chi - 1),
        }
    }
    let all = connected_graphs_up_to_iso(7);
    assert_eq!(all.len(), 996);
    for (i, g) in all.iter().enumerate() {
        let lower = g.max_degree() + 1;
        let res = total_chromatic_number(g, g.max_degree() + 2, budget).unwrap();
        let ChiResult::Exact { chi, witness, .. } = res else {
            panic!("graph {i}: search did not finish");
        };
        assert!(chi >= lower && chi <= lower + 1, "graph {i}: chi {chi}");
        assert!(validate(g, &witness).unwrap().is_empty(), "graph {i}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    println!("PASS: oracle values and bounds over 996 graphs in {elapsed:?}");
}

/// Full pipeline: 50 admissible samples (max degree 6, 15..=30 vertices) all
/// verify with exit 0 and a re-validated witness.
#[test]
fn acceptance_6_pipeline_on_samples() {
    let catalog = builtin_catalog();
    let dir = tempfile::tempdir().unwrap();
    let mut done = 0;
    let mut seed = 0u64;
    while done < 50 {
        let spec = GenSpec {
            budget: 15 + (seed as usize % 16),
            seed,
            mode: GenMode::Sparse,
            max_degree: Some(6),
        };
        seed += 1;
        let Ok((g, _)) = sample_theorem_class(&spec, &catalog) else {
            continue;
        };
        let n = g.vertex_count();
        assert!((15..=30).contains(&n));
        assert_eq!(g.max_degree(), 6);
        let tcg = dir.path().join(format!("s{done}.tcg"));
        std::fs::write(&tcg, tcckit::graph::write_tcg(&g)).unwrap();
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_tcckit"))
            .args(["verify", tcg.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "sample {done}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let witness = tcg.with_extension("tcc");
        let c =
            tcckit::coloring::parse_tcc(&std::fs::read_to_string(&witness).unwrap()).unwrap();
        assert!(c.is_total(&g));
        assert!(validate(&g, &c).unwrap().is_empty());
        done += 1;
    }
    println!("PASS: 50 samples verified end to end with valid witnesses");
}

fn vert(v: usize) -> Element {
    Element::Vertex(v)
}

fn edge(u: usize, v: usize) -> Element {
    Element::edge(u, v)
}

fn frame_pins(g: &Graph, cfg: &Config646) -> PartialTotalColoring {
    let mut pin = PartialTotalColoring::new(PALETTE);
    pin.set(vert(cfg.x), 1);
    pin.set(vert(cfg.w), 2);
    pin.set(vert(cfg.v), 3);
    pin.set(vert(cfg.y), 4);
    pin.set(edge(cfg.x, cfg.u), 5);
    pin.set(edge(cfg.w, cfg.u), 6);
    pin.set(edge(cfg.u, cfg.v), 7);
    pin.set(edge(cfg.u, cfg.y), 8);
    assert!(validate(g, &pin).unwrap().is_empty());
    pin
}

/// Host with the fan, a second 4-neighbor of v, and a 3-neighbor of v.
fn three_neighbor_host() -> (Graph, Config646) {
    let mut emb = partial_wheel_links(6, &[(1, 2), (2, 3)]);
    for (v, d) in [(1, 6), (2, 4), (3, 6), (4, 4), (5, 6), (6, 3)] {
        emb.pad_to_degree(v, d).unwrap();
    }
    let g = emb.to_graph();
    let cfg = locate_config(&g)
        .into_iter()
        .find(|c| c.hypothesis == Hypothesis::ThreeNeighbor)
        .expect("three-neighbor hypothesis");
    (g, cfg)
}

/// Edge procedure: at least 1000 hypothesis-satisfying instances, all
/// completed without fallback, every trace replaying step-properly.
#[test]
fn acceptance_7a_edge_procedure() {
    let mut hosts = Vec::new();
    for kind in [HostKind::Around646Plus4, HostKind::Around4646, HostKind::Around466466] {
        let (g, _) = configuration_host(&kind, 0).unwrap();
        let cfg = locate_config(&g).into_iter().max_by_key(|c| c.hypothesis).unwrap();
        hosts.push((g, cfg));
    }
    let empty = PartialTotalColoring::new(PALETTE);
    let mut instances = 0usize;
    let mut seed = 0u64;
    while instances < 1000 {
        let (g, cfg) = &hosts[seed as usize % hosts.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seed += 1;
        // randomized total coloring; sometimes pre-pack C[v] so no free color
        // is available and the deep cases fire
        let start = if rng.gen_bool(0.4) {
            let mut pin = PartialTotalColoring::new(PALETTE);
            pin.set(vert(cfg.v), 1);
            pin.set(edge(cfg.w, cfg.v), 6);
            pin.set(edge(cfg.v, cfg.y), 2);
            for (i, &z) in cfg.others.iter().enumerate() {
                pin.set(edge(cfg.v, z), 3 + i as u8);
            }
            pin.set(edge(cfg.u, cfg.y), 7);
            pin.set(edge(cfg.x, cfg.u), 8);
            if !validate(g, &pin).unwrap().is_empty() {
                continue;
            }
            let omit = [vert(cfg.u), edge(cfg.u, cfg.v)];
            match solve_omitting_randomized(g, PALETTE, &pin, &omit, 10_000_000, &mut rng) {
                Ok(SolveOutcome::Solution(s)) => s,
                _ => continue,
            }
        } else {
            let Ok(SolveOutcome::Solution(mut s)) =
                solve_randomized(g, PALETTE, &empty, 10_000_000, &mut rng)
            else {
                continue;
            };
            s.unset(vert(cfg.u));
            s.unset(edge(cfg.u, cfg.v));
            s
        };
        let out = extend_edge_uv(g, &start, cfg)
            .unwrap_or_else(|e| panic!("instance {instances}: {e}"));
        assert!(!out.used_fallback, "instance {instances} fell back");
        assert!(out.coloring.get(edge(cfg.u, cfg.v)).is_some());
        assert!(out.coloring.get(vert(cfg.u)).is_none());
        assert!(validate(g, &out.coloring).unwrap().is_empty());
        let replayed = replay(g, &start, &out.trace).unwrap();
        assert_eq!(replayed, out.coloring);
        instances += 1;
    }
    println!("PASS: {instances} edge-procedure instances, zero fallbacks");
}

/// Vertex procedure: at least 1000 instances per hypothesis variant, all
/// completed without fallback; the derived intermediate facts hold on every
/// constrained instance.
#[test]
fn acceptance_7b_vertex_procedure() {
    let mut hosts: Vec<(Graph, Config646)> = Vec::new();
    for kind in [HostKind::Around4646, HostKind::Around466466] {
        let (g, _) = configuration_host(&kind, 0).unwrap();
        let cfg = locate_config(&g).into_iter().max_by_key(|c| c.hypothesis).unwrap();
        hosts.push((g, cfg));
    }
    hosts.push(three_neighbor_host());
    for (g, cfg) in &hosts {
        let pin = frame_pins(g, cfg);
        let mut instances = 0usize;
        let mut constrained = 0usize;
        let mut seed = 0u64;
        while instances < 1000 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            seed += 1;
            assert!(seed < 5000, "{:?}: instance drought", cfg.hypothesis);
            let Ok(SolveOutcome::Solution(start)) = solve_omitting_randomized(
                g,
                PALETTE,
                &pin,
                &[vert(cfg.u)],
                10_000_000,
                &mut rng,
            ) else {
                continue;
            };
            let report = derive_facts(g, &start, cfg).unwrap();
            assert!(!report.any_failed(), "{:?} seed {seed}: {report:?}", cfg.hypothesis);
            if report.applicable {
                constrained += 1;
            }
            let out = extend_vertex_u(g, &start, cfg)
                .unwrap_or_else(|e| panic!("{:?} seed {seed}: {e}", cfg.hypothesis));
            assert!(!out.used_fallback, "{:?} seed {seed} fell back", cfg.hypothesis);
            assert!(out.coloring.is_total(g));
            assert!(validate(g, &out.coloring).unwrap().is_empty());
            let replayed = replay(g, &start, &out.trace).unwrap();
            assert_eq!(replayed, out.coloring);
            instances += 1;
        }
        assert!(constrained > 0, "{:?}: no constrained instance", cfg.hypothesis);
        println!(
            "PASS: {instances} vertex-procedure instances for {:?} ({constrained} constrained), zero fallbacks",
            cfg.hypothesis
        );
    }
}

/// The small configurations are reducible at 8 colors: every realizable
/// boundary pattern extends over the removed vertex.
#[test]
fn acceptance_8_reducibility() {
    let budget = 200_000_000;
    let (g, p) = configuration_host(&HostKind::TwoVertex, 0).unwrap();
    match reducibility_test(&g, vert(p.role("target")), 8, budget) {
        Reducibility::Reducible { boundary_size, patterns_checked } => {
            println!("PASS: 2-vertex reducible ({boundary_size} boundary elements, {patterns_checked} patterns)");
        }
        other => panic!("2-vertex: {other:?}"),
    }
    for (a, b, c) in [(4, 4, 5), (4, 5, 5)] {
        let (g, p) = configuration_host(&HostKind::Triangle(a, b, c), 0).unwrap();
        match reducibility_test(&g, vert(p.role("t0")), 8, budget) {
            Reducibility::Reducible { boundary_size, patterns_checked } => {
                println!("PASS: ({a},{b},{c})-triangle reducible ({boundary_size} boundary elements, {patterns_checked} patterns)");
            }
            other => panic!("({a},{b},{c}): {other:?}"),
        }
    }
}

/// The pruned matcher agrees exactly with the naive injection enumerator on
/// 500 random host/pattern pairs.
#[test]
fn acceptance_9_matcher_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0usize;
    let mut seed = 0u64;
    while checked < 500 {
        let host_spec = GenSpec {
            budget: 3 + (rng.gen::<usize>() % 8), // 3..=10 vertices
            seed,
            mode: if rng.gen_bool(0.5) { GenMode::Triangulation } else { GenMode::Sparse },
            max_degree: None,
        };
        seed += 1;
        let Ok(host) = gen_planar(&host_spec) else { continue };
        // random connected pattern on up to 6 vertices
        let pn = 2 + (rng.gen::<usize>() % 5);
        let mut edges: Vec<(usize, usize)> = (1..pn).map(|v| (rng.gen::<usize>() % v, v)).collect();
        for u in 0..pn {
            for v in u + 1..pn {
                if !edges.contains(&(u, v)) && rng.gen_bool(0.3) {
                    edges.push((u, v));
                }
            }
        }
        let pat = PatternGraph::new(pn, edges);
        for induced in [false, true] {
            let opts = MatchOptions { induced, ..MatchOptions::default() };
            let mut fast = subgraph_match(&host, &pat, opts);
            let mut slow = naive_matches(&host, &pat, induced);
            fast.sort_by(|a, b| a.map.cmp(&b.map));
            slow.sort_by(|a, b| a.map.cmp(&b.map));
            assert_eq!(fast, slow, "host seed {} induced {induced}", host_spec.seed);
        }
        checked += 1;
    }
    println!("PASS: matcher equivalence on {checked} host/pattern pairs");
}
