//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::collections::BTreeSet;
use std::num::NonZeroUsize;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spul::bench::{bench, BenchConfig};
use spul::graph::{GraphBuilder, Label, LabeledDigraph, VertexId};
use spul::oracle::{enumerate_rainbow, sat_brute_force, sdr_matching, OracleLimits};
use spul::reduction::{decode, encode, find_witness, Literal, SatInstance};
use spul::{alg_a, alg_b, bfs, sdr_backtrack, SearchBudget, TargetStatus};

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn detour() -> LabeledDigraph {
    LabeledDigraph::from_triples([
        ("S", "A", "1"),
        ("A", "B", "2"),
        ("B", "T", "1"),
        ("A", "C", "2"),
        ("C", "D", "3"),
        ("D", "T", "4"),
    ])
}

fn random_graph(rng: &mut ChaCha8Rng, max_v: usize, max_e: usize, max_l: usize) -> LabeledDigraph {
    let n = rng.gen_range(1..=max_v);
    let labels = rng.gen_range(1..=max_l);
    let edges = rng.gen_range(0..=max_e);
    let mut b = GraphBuilder::new();
    for v in 0..n {
        b.add_vertex(&format!("v{v}"));
    }
    for _ in 0..edges {
        let (s, t, l) = (
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..labels),
        );
        b.add_edge(&format!("v{s}"), &format!("v{t}"), &format!("l{l}"));
    }
    b.build()
}

fn ac1_worked_examples() -> Result<(), String> {
    let start = Instant::now();
    let g = detour();
    let (s, t) = (g.vertex_id("S").unwrap(), g.vertex_id("T").unwrap());
    let names = |labels: Vec<Label>| {
        labels
            .into_iter()
            .map(|l| g.label_name(l).to_owned())
            .collect::<Vec<_>>()
    };

    let tree = bfs(&g, s);
    ensure(tree.distance(t) == Some(3), || {
        format!("bfs distance {:?}", tree.distance(t))
    })?;
    let bfs_labels = names(
        tree.path_edges(&g, t)
            .unwrap()
            .iter()
            .map(|&e| g.edge(e).label)
            .collect(),
    );
    ensure(bfs_labels == ["1", "2", "1"], || {
        format!("bfs labels {bfs_labels:?}")
    })?;

    for (alg, r) in [
        ("a", alg_a(&g, s, Some(&[t]), SearchBudget::unlimited())),
        ("b", alg_b(&g, s, Some(&[t]), SearchBudget::unlimited())),
    ] {
        let w = r
            .outcome(t)
            .and_then(|o| o.witness.clone())
            .ok_or(format!("alg {alg}: T not found"))?;
        ensure(w.len() == 4, || format!("alg {alg}: distance {}", w.len()))?;
        let labels = names(w.labels(&g));
        ensure(labels == ["1", "2", "3", "4"], || {
            format!("alg {alg}: labels {labels:?}")
        })?;
        let via: Vec<_> = w
            .vertices(&g)
            .into_iter()
            .map(|v| g.vertex_name(v).to_owned())
            .collect();
        ensure(via == ["S", "A", "C", "D", "T"], || {
            format!("alg {alg}: vertices {via:?}")
        })?;
    }
    within(start, Duration::from_secs(1))
}

fn random_cnf(rng: &mut ChaCha8Rng) -> SatInstance {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(0..=6);
    let clauses = (0..m)
        .map(|_| {
            let width = rng.gen_range(1..=3);
            (0..width)
                .map(|_| {
                    let v = rng.gen_range(1..=n as i32);
                    Literal::from_dimacs(if rng.gen_bool(0.5) { -v } else { v })
                })
                .collect()
        })
        .collect();
    SatInstance::new(n, clauses).unwrap()
}

fn ac2_reduction_equivalence() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
    let (mut sat_count, mut unsat_count) = (0, 0);
    for case in 0..200 {
        let inst = random_cnf(&mut rng);
        let rmap = encode(&inst);
        let witness = find_witness(&rmap);
        let sat = sat_brute_force(&inst).map_err(|e| e.to_string())?.is_some();
        ensure(witness.is_some() == sat, || {
            format!(
                "case {case}: rainbow path {} but satisfiable {sat}",
                witness.is_some()
            )
        })?;
        if let Some(w) = witness {
            sat_count += 1;
            let a = decode(&rmap, &w).map_err(|e| format!("case {case}: {e}"))?;
            ensure(inst.is_satisfied_by(&a), || {
                format!("case {case}: decoded assignment fails")
            })?;
        } else {
            unsat_count += 1;
        }
    }
    ensure(sat_count > 0 && unsat_count > 0, || {
        format!("degenerate sample: {sat_count} sat, {unsat_count} unsat")
    })?;
    within(start, Duration::from_secs(30))
}

fn ac3_oracle_equivalence() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ac1e);
    let limits = OracleLimits::default();
    for case in 0..500 {
        let g = random_graph(
            &mut rng,
            limits.max_vertices,
            limits.max_edges,
            limits.max_labels,
        );
        let s = VertexId(0);
        let truth = enumerate_rainbow(&g, s, limits).map_err(|e| e.to_string())?;
        let a = alg_a(&g, s, None, SearchBudget::unlimited());
        let b = alg_b(&g, s, None, SearchBudget::unlimited());
        for v in g.vertices() {
            let expected = truth.get(&v).map(|st| st.distance);
            ensure(
                a.distance(v) == expected && b.distance(v) == expected,
                || {
                    format!(
                        "case {case}, vertex {}: oracle {expected:?}, a {:?}, b {:?}",
                        g.vertex_name(v),
                        a.distance(v),
                        b.distance(v)
                    )
                },
            )?;
        }
    }
    within(start, Duration::from_secs(60))
}

fn ac4_sdr_cross_check() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5d8);
    let (mut yes, mut no) = (0, 0);
    for case in 0..1000 {
        let positions = rng.gen_range(0..=8);
        let universe = rng.gen_range(1..=8u32);
        let sets: Vec<Vec<Label>> = (0..positions)
            .map(|_| {
                let picked: BTreeSet<u32> = (0..rng.gen_range(0..=universe))
                    .map(|_| rng.gen_range(0..universe))
                    .collect();
                picked.into_iter().map(Label).collect()
            })
            .collect();
        let backtrack = sdr_backtrack(&sets);
        let matching = sdr_matching(&sets);
        ensure(backtrack.is_some() == matching, || {
            format!("case {case}: backtrack {backtrack:?}, matching {matching}, sets {sets:?}")
        })?;
        if let Some(reps) = backtrack {
            let distinct: BTreeSet<_> = reps.iter().collect();
            ensure(
                distinct.len() == reps.len() && reps.iter().zip(&sets).all(|(r, s)| s.contains(r)),
                || format!("case {case}: invalid representatives {reps:?}"),
            )?;
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure(yes > 0 && no > 0, || {
        format!("degenerate sample: {yes} yes, {no} no")
    })?;
    within(start, Duration::from_secs(5))
}

fn ac5_bench_invariants() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe7c);
    for case in 0..100 {
        let g = random_graph(&mut rng, 10, 25, 8);
        let sources: Vec<_> = g.vertices().collect();
        let report = bench(&g, &sources, BenchConfig::default());
        for row in &report.rows {
            let c = &row.counts;
            ensure(c.sp_correct + c.sp_infeasible == c.sp_total, || {
                format!("case {case}: {c:?}")
            })?;
            ensure(
                c.sp_correct <= c.spul_found && c.spul_found <= c.sp_total,
                || format!("case {case}: {c:?}"),
            )?;
        }
        ensure(report.rows.len() == g.vertex_count(), || {
            format!("case {case}: missing rows")
        })?;
    }
    within(start, Duration::from_secs(30))
}

/// `stages` bundles of `width` parallel edges in a row, each bundle with
/// its own fresh labels, so every stage multiplies the feasible paths.
fn bundle_chain(stages: usize, width: usize) -> LabeledDigraph {
    let mut b = GraphBuilder::new();
    for k in 0..stages {
        for j in 0..width {
            b.add_edge(
                &format!("v{k}"),
                &format!("v{}", k + 1),
                &format!("r{k}.{j}"),
            );
        }
    }
    b.build()
}

fn ac6_budget_semantics() -> Result<(), String> {
    let start = Instant::now();
    let g = bundle_chain(10, 4);
    let s = g.vertex_id("v0").unwrap();
    let run = |n: usize| {
        alg_a(
            &g,
            s,
            None,
            SearchBudget::with_max_tree_nodes(NonZeroUsize::new(n).unwrap()),
        )
    };
    let small = run(10_000);
    let large = run(20_000);
    let found = |r: &spul::SearchResult| r.found().collect::<BTreeSet<_>>();
    ensure(small.aborted, || "10^4 budget did not abort".into())?;
    ensure(small.nodes_allocated <= 10_000, || {
        format!("allocated {}", small.nodes_allocated)
    })?;
    ensure(found(&small).len() > 1, || "no partial results".into())?;
    ensure(
        small
            .outcomes
            .iter()
            .any(|o| o.status == TargetStatus::NotFoundBeforeBudget),
        || "no target marked not-found-before-budget".into(),
    )?;
    ensure(found(&small).is_subset(&found(&large)), || {
        "doubling the budget lost targets".into()
    })?;
    for v in found(&small) {
        ensure(small.distance(v) == large.distance(v), || {
            "distance changed with budget".into()
        })?;
    }
    within(start, Duration::from_secs(10))
}

fn ac7_bench_statistics_golden() -> Result<(), String> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let cases: [(&[&str], &str, i32); 4] = [
        (
            &["--graph", "detour.tsv", "--all-sources"],
            "bench_detour_all_a.tsv",
            0,
        ),
        (
            &["--graph", "parallel.tsv", "--all-sources"],
            "bench_parallel_all_a.tsv",
            0,
        ),
        (
            &[
                "--graph",
                "parallel.tsv",
                "--all-sources",
                "--algorithm",
                "b",
            ],
            "bench_parallel_all_b.tsv",
            0,
        ),
        (
            &[
                "--graph",
                "parallel.tsv",
                "--source",
                "S",
                "--max-nodes",
                "2",
            ],
            "bench_parallel_S_a_max2.tsv",
            2,
        ),
    ];
    for (args, golden, code) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_spul"))
            .current_dir(&data)
            .arg("bench")
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(code), || {
            format!("{golden}: exit {:?}", out.status.code())
        })?;
        let expected =
            std::fs::read_to_string(data.join("golden").join(golden)).map_err(|e| e.to_string())?;
        let actual = String::from_utf8_lossy(&out.stdout);
        ensure(actual == expected, || {
            format!("{golden} differs:\n{actual}")
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        (
            "AC1 worked examples: BFS 3 via (1,2,1), SPUL 4 via C,D",
            ac1_worked_examples,
        ),
        (
            "AC2 reduction: 200 CNFs, rainbow s-t path iff satisfiable",
            ac2_reduction_equivalence,
        ),
        (
            "AC3 oracle equivalence: 500 graphs, alg a = alg b = enumeration",
            ac3_oracle_equivalence,
        ),
        (
            "AC4 SDR cross-check: 1000 families, backtracking = matching",
            ac4_sdr_cross_check,
        ),
        (
            "AC5 bench invariants: 100 graphs, every source",
            ac5_bench_invariants,
        ),
        (
            "AC6 budget semantics: 10x4 bundle chain, 10^4 aborts, 2x superset",
            ac6_budget_semantics,
        ),
        (
            "AC7 bench statistic columns: golden files",
            ac7_bench_statistics_golden,
        ),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(()) => println!("PASS  {name}  ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of 7 criteria passed", 7 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
