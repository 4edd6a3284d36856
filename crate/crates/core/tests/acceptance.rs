//! Acceptance criteria. Each test prints one PASS/FAIL line with its
//! running time and limit.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use citrus_core::citrus::{bush_from_stem, citrus_of, detect_cycle_bush};
use citrus_core::dichotomy::{classify_deletion, classify_h, maximal_poly, Case, Complexity};
use citrus_core::dispatch::{dispatch_solve, DispatchOptions};
use citrus_core::graph::{longest_path, Edge, UnionFind};
use citrus_core::hardness::{check_deletion_set, check_tw3_certificate, csp_to_sf, decode_assignment, CspInstance};
use citrus_core::lemon::{solve_citrus, solve_cycle_bush, CitrusSolveMode, LemonBounds};
use citrus_core::oracle::{solve_exact, solve_exhaustive, solve_exhaustive_filtered, TerminalSet};
use citrus_core::reductions::{contract_terminal_edge, remove_dominated, split_blocks, wedge_transform};
use citrus_core::tangle::solve_entangled;
use citrus_core::tw2::{is_tw_at_most_2, solve_tw2};
use citrus_core::{Error, Graph};
use common::fixtures::*;
use common::*;
use rand::seq::SliceRandom;
use rand::Rng;

const ELL: usize = 5;

/// Runs one criterion, prints its line outside the test capture, and
/// fails the test on a deviation or an overrun.
fn criterion(number: u8, name: &str, limit: Duration, body: impl FnOnce() -> String) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let took = start.elapsed();
    let (ok, note) = match &result {
        Ok(note) if took <= limit => (true, note.clone()),
        Ok(note) => (false, format!("{note}; over the time limit")),
        Err(_) => (false, "deviation found".to_string()),
    };
    let line = format!(
        "criterion {number} {}: {name} ({note}; {:.1}s of {}s)\n",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        limit.as_secs()
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    match result {
        Err(p) => resume_unwind(p),
        Ok(_) => assert!(ok, "criterion {number} exceeded {limit:?}"),
    }
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn opt(g: &Graph, t: &TerminalSet) -> usize {
    solve_exact(g, t).unwrap().size()
}

/// One representative per isomorphism class of connected graphs on n
/// vertices, as edge bitmasks over the pairs of 0..n.
fn connected_catalog(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let mut perms = vec![Vec::<usize>::new()];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..n)
                    .filter(|x| !p.contains(x))
                    .map(|x| [p.clone(), vec![x]].concat())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let canon = maps
            .iter()
            .map(|m| (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).fold(0u32, |c, i| c | 1 << m[i]))
            .min()
            .unwrap_or(mask);
        if !seen.insert(canon) {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let g = Graph::build(n, &edges);
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

#[test]
fn criterion_1_oracle_consistency() {
    criterion(1, "exact oracle equals exhaustive search", minutes(2), || {
        let mut r = rng(1);
        let mut instances = 0;
        let mut graphs = 0;
        for n in 1..=6 {
            let catalog = connected_catalog(n);
            // connected graphs up to isomorphism: 1, 1, 2, 6, 21, 112
            assert_eq!(catalog.len(), [1, 1, 2, 6, 21, 112][n - 1]);
            graphs += catalog.len();
            for g in &catalog {
                for _ in 0..3 {
                    let pairs = r.gen_range(1..=3);
                    let t = random_terminals(&mut r, g, &all_vertices(g), pairs);
                    let e = solve_exact(g, &t).unwrap();
                    let x = solve_exhaustive(g, &t).unwrap();
                    assert!(check_forest(g, &t, e.edges()));
                    assert_eq!(e.size(), x.size(), "g={:?} t={t:?}", g.edges());
                    instances += 1;
                }
            }
        }
        format!("{graphs} graphs, {instances} instances")
    });
}

#[test]
fn criterion_2_reduction_safety() {
    criterion(2, "safe reductions keep the optimum", minutes(2), || {
        let mut r = rng(2);
        let mut counts = [0usize; 4];
        let mut changed = [0usize; 4];
        while counts.iter().any(|&c| c < 200) {
            let n = r.gen_range(3..=10);
            let density = r.gen_range(0.1..0.6);
            let g = random_connected(&mut r, n, density);
            let pairs = r.gen_range(1..=3);
            let t = random_terminals(&mut r, &g, &all_vertices(&g), pairs);
            let base = opt(&g, &t);
            if counts[0] < 200 {
                let red = remove_dominated(&g, &t);
                assert_eq!(opt(&red.graph, &red.terminals), base, "dominated g={:?} t={t:?}", g.edges());
                changed[0] += usize::from(red.graph.n() < g.n());
                counts[0] += 1;
            }
            if counts[1] < 200 {
                // make sure some pair is an edge
                let (u, v) = *g.edges().choose(&mut r).unwrap();
                let tc = t.with_pair(u, v);
                let before = opt(&g, &tc);
                let c = contract_terminal_edge(&g, &tc, g.n()).expect("an adjacent pair exists");
                assert_eq!(opt(&c.graph, &c.terminals) + 1, before, "contract g={:?} t={tc:?}", g.edges());
                changed[1] += 1;
                counts[1] += 1;
            }
            if counts[2] < 200 {
                let h = wedge_transform(&g, &t);
                assert_eq!(opt(&h, &t), base, "wedge g={:?} t={t:?}", g.edges());
                changed[2] += usize::from(h.m() < g.m());
                counts[2] += 1;
            }
            if counts[3] < 200 {
                let blocks = split_blocks(&g, &t).unwrap();
                let sum: usize = blocks.iter().map(|b| opt(&b.graph, &b.terminals)).sum();
                assert_eq!(sum, base, "blocks g={:?} t={t:?}", g.edges());
                changed[3] += usize::from(blocks.len() > 1);
                counts[3] += 1;
            }
        }
        assert!(changed.iter().all(|&c| c > 0), "some rule never changed its input: {changed:?}");
        format!("200 instances per rule, rule fired {changed:?} times")
    });
}

#[test]
fn criterion_3_treewidth_two() {
    criterion(3, "treewidth-2 solver equals the oracle", minutes(2), || {
        let mut r = rng(3);
        for _ in 0..200 {
            let n = r.gen_range(2..=12);
            let keep = r.gen_range(0.5..1.0);
            let g = random_partial_2tree(&mut r, n, keep);
            assert!(is_tw_at_most_2(&g));
            let pairs = r.gen_range(1..=4);
            let t = random_terminals(&mut r, &g, &all_vertices(&g), pairs);
            let f = solve_tw2(&g, &t).unwrap();
            assert!(check_forest(&g, &t, f.edges()));
            assert_eq!(f.size(), opt(&g, &t), "g={:?} t={t:?}", g.edges());
        }
        "200 instances".into()
    });
}

fn joined(n: usize, edges: &[Edge], a: usize, b: usize) -> bool {
    let mut uf = UnionFind::new(n);
    for &(u, v) in edges {
        uf.union(u, v);
    }
    uf.same(a, b)
}

/// Acyclic with the ends merged, and every pair joined.
fn identified_ok(g: &Graph, t: &TerminalSet, x: usize, y: usize, edges: &[Edge]) -> bool {
    let mut uf = UnionFind::new(g.n());
    uf.union(x, y);
    for &(u, v) in edges {
        if !uf.union(u, v) {
            return false;
        }
    }
    t.pairs().iter().all(|&(s, u)| uf.same(s, u))
}

#[test]
fn criterion_4_citrus_solver() {
    criterion(4, "citrus solver in all three modes", minutes(5), || {
        let mut r = rng(4);
        let b = LemonBounds::new(ELL);
        let mut pulped = 0;
        for _ in 0..100 {
            let g = random_lemon(&mut r, ELL, 2, 14);
            let c = citrus_of(&g, 0, 1, ELL).unwrap();
            assert!(c.check_lemon(ELL).is_ok());
            pulped += c.pulped_count();
            let pairs = r.gen_range(1..=3);
            let t = random_terminals(&mut r, &g, &all_vertices(&g), pairs);
            let edges = g.edges();
            let ctx = format!("g={:?} t={t:?}", g.edges());

            let free = solve_citrus(&g, &c, &t, CitrusSolveMode::Free, b).unwrap();
            assert!(check_forest(&g, &t, free.edges()));
            assert_eq!(free.size(), opt(&g, &t), "free {ctx}");

            let inter = solve_citrus(&g, &c, &t, CitrusSolveMode::Intertwined, b).unwrap();
            let want = solve_exhaustive_filtered(&g, &t, &edges, |f| joined(g.n(), f, 0, 1)).unwrap();
            assert!(check_forest(&g, &t, inter.edges()) && joined(g.n(), inter.edges(), 0, 1));
            assert_eq!(inter.size(), want.size(), "intertwined {ctx}");

            let ident = solve_citrus(&g, &c, &t, CitrusSolveMode::Identified, b).unwrap();
            let want =
                solve_exhaustive_filtered(&g, &TerminalSet::empty(), &edges, |f| identified_ok(&g, &t, 0, 1, f)).unwrap();
            assert!(identified_ok(&g, &t, 0, 1, ident.edges()));
            assert_eq!(ident.size(), want.size(), "identified {ctx}");
        }
        assert!(pulped > 0);
        format!("100 lemons, {pulped} pulped wedges")
    });
}

#[test]
fn criterion_5_cycle_bush() {
    criterion(5, "cycle-bush solver equals the oracle", minutes(10), || {
        let mut r = rng(5);
        let b = LemonBounds::new(ELL);
        let mut cases = [0usize; 3];
        let mut checked = 0;
        while checked < 100 {
            let stems = r.gen_range(3..=5);
            let g = random_cycle_bush(&mut r, stems, ELL, 2, 16);
            let cb = detect_cycle_bush(&g, ELL).unwrap();
            // small wedges can merge two generated citruses into one
            if !(3..=5).contains(&cb.bush.citruses.len()) {
                continue;
            }
            checked += 1;
            let pairs = r.gen_range(1..=4);
            let t = random_terminals(&mut r, &g, &all_vertices(&g), pairs);
            let s = solve_cycle_bush(&g, &cb, &t, b).unwrap();
            assert!(check_forest(&g, &t, s.forest.edges()));
            assert_eq!(s.forest.size(), opt(&g, &t), "g={:?} t={t:?}", g.edges());
            cases[s.case as usize - 1] += 1;
        }
        assert!(cases.iter().all(|&c| c > 0), "cases {cases:?}");
        format!("100 bushes, cases 1/2/3 chosen {cases:?} times")
    });
}

#[test]
fn criterion_6_entangled_bush() {
    criterion(6, "entangled-bush solver equals the oracle", minutes(10), || {
        let mut r = rng(6);
        let b = LemonBounds::new(ELL);
        let mut checked = 0;
        let mut tangled = 0;
        while checked < 200 {
            let k = r.gen_range(1..=4);
            let (g, tangle) = random_entangled_bush(&mut r, k, ELL, 14);
            let stem: Vec<usize> = (0..k).collect();
            let Some(bush) = bush_from_stem(&g, &stem, ELL, true) else {
                continue;
            };
            let pairs = r.gen_range(1..=4);
            let t = random_terminals(&mut r, &g, &all_vertices(&g), pairs);
            let s = solve_entangled(&g, &bush, &t, b).unwrap();
            assert!(check_forest(&g, &t, s.forest.edges()));
            assert_eq!(s.forest.size(), opt(&g, &t), "g={:?} t={t:?}", g.edges());
            tangled += usize::from(!tangle.is_empty());
            checked += 1;
        }
        format!("200 bushes, {tangled} with tangle vertices")
    });
}

#[test]
fn criterion_7_dichotomy_tables() {
    criterion(7, "classification tables", minutes(1), || {
        let mut instances = 0;
        for (case, answer, cited, members) in claw_bullets() {
            let mut graphs: Vec<Graph> = members.iter().map(|m| named_graph(m)).collect();
            let mut seed = 0;
            while graphs.len() < 3 {
                let mut perm: Vec<usize> = (0..graphs[0].n()).collect();
                perm.shuffle(&mut rng(seed));
                graphs.push(graphs[0].relabel(&perm));
                seed += 1;
            }
            for h in &graphs {
                let v = classify_h(h).unwrap();
                assert_eq!((v.case, v.answer), (Case::Claw(case), answer));
                assert!(v.witness.starts_with(cited) && witness_holds(&v.witness, h));
                instances += 1;
            }
        }
        let hosts: Vec<Graph> = maximal_poly().iter().map(|s| named_graph(&s.to_string())).collect();
        let mut members = 0;
        for size in 1..=9 {
            let mut shapes = vec![explicit_path(size)];
            for h in 1..size {
                for i in h..size {
                    for j in i..size {
                        if 1 + h + i + j == size {
                            shapes.push(explicit_claw([h, i, j]));
                        }
                    }
                }
            }
            for g in shapes {
                let v = classify_h(&g).unwrap();
                let inside = hosts.iter().any(|host| is_subgraph(&g, host));
                assert_eq!(v.answer == Complexity::Poly, inside);
                members += 1;
            }
        }
        for c in 1..=6 {
            for k in 0..=6 {
                let poly = k == 0 || c == 1 || (c == 2 && k <= 2) || (c >= 3 && k == 1);
                assert_eq!(classify_deletion(c, k).answer == Complexity::Poly, poly, "c={c} k={k}");
            }
        }
        format!("{instances} bullet instances, {members} connected graphs, 42 deletion cells")
    });
}

fn satisfiable(csp: &CspInstance) -> bool {
    (0..3usize.pow(csp.n as u32)).any(|mut code| {
        let a: Vec<u8> = (0..csp.n)
            .map(|_| {
                let d = (code % 3) as u8;
                code /= 3;
                d
            })
            .collect();
        csp.satisfied_by(&a)
    })
}

#[test]
fn criterion_8_hardness_round_trip() {
    criterion(8, "CSP to Steiner forest round trip", minutes(5), || {
        let mut r = rng(8);
        let (mut sat, mut unsat) = (0, 0);
        let mut drawn = 0;
        while drawn < 100 {
            let n = r.gen_range(1..=6);
            let mut csp = CspInstance {
                n,
                ..Default::default()
            };
            for x in 0..n {
                for d in 0..3u8 {
                    if r.gen_bool(0.25) {
                        csp.unary.push((x, d));
                    }
                }
            }
            for _ in 0..r.gen_range(1..=6) {
                csp.binary.push((r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..3)));
            }
            // every variable must sit in a binary constraint
            if csp.padded().n != n {
                continue;
            }
            drawn += 1;
            let h = csp_to_sf(&csp).unwrap();
            assert_eq!(h.budget, csp.n + 2 * csp.binary.len());
            assert!(check_deletion_set(&h.graph, &h.hubs, 2));
            assert!(check_tw3_certificate(&h));
            let s = satisfiable(&csp);
            // a variable with every value forbidden has no forest at all
            let f = match solve_exact(&h.graph, &h.terminals) {
                Ok(f) => Some(f),
                Err(Error::Infeasible(_)) => None,
                Err(e) => panic!("{e}"),
            };
            assert_eq!(f.as_ref().is_some_and(|f| f.size() <= h.budget), s, "{csp:?}");
            if let (true, Some(f)) = (s, f) {
                assert!(csp.satisfied_by(&decode_assignment(&h, f.edges()).unwrap()));
                sat += 1;
            } else {
                unsat += 1;
            }
        }
        let fig = CspInstance {
            n: 2,
            unary: vec![(0, 1), (1, 2)],
            binary: vec![(0, 1, 0)],
        };
        let h = csp_to_sf(&fig).unwrap();
        assert_eq!(h.budget, 4);
        let f = solve_exact(&h.graph, &h.terminals).unwrap();
        assert_eq!(f.size(), 4);
        assert!(fig.satisfied_by(&decode_assignment(&h, f.edges()).unwrap()));
        format!("100 instances ({sat} satisfiable, {unsat} not), figure instance ok")
    });
}

#[test]
fn criterion_9_dispatcher() {
    criterion(9, "dispatcher avoids the exponential fallback", minutes(10), || {
        let mut r = rng(9);
        let opts = DispatchOptions::default();
        let mut runs = 0;
        let mut check = |g: &Graph, r: &mut rand_chacha::ChaCha8Rng| {
            let pairs = r.gen_range(1..=4);
            let t = random_terminals(r, g, &all_vertices(g), pairs);
            let rep = dispatch_solve(g, &t, &opts).unwrap();
            assert!(!rep.used_fallback(), "fallback on g={:?}: {:?}", g.edges(), rep.trace);
            assert!(check_forest(g, &t, rep.forest.edges()));
            if g.n() <= 16 {
                assert_eq!(rep.forest.size(), opt(g, &t), "g={:?} t={t:?}", g.edges());
            }
            runs += 1;
        };
        for _ in 0..100 {
            let stems = r.gen_range(3..=6);
            let g = random_cycle_bush(&mut r, stems, ELL, 2, 16);
            check(&g, &mut r);
        }
        // stems are longest paths, as in subgraph-free inputs
        let entangled = |r: &mut rand_chacha::ChaCha8Rng, ks: std::ops::RangeInclusive<usize>| loop {
            let k = r.gen_range(ks.clone());
            let (g, _) = random_entangled_bush(r, k, ELL, 16);
            let stem: Vec<usize> = (0..k).collect();
            if bush_from_stem(&g, &stem, ELL, true).is_some() && longest_path(&g).vertices.len() <= 13 {
                return g;
            }
        };
        for _ in 0..100 {
            let g = entangled(&mut r, 2..=8);
            check(&g, &mut r);
        }
        for _ in 0..20 {
            let g = entangled(&mut r, 9..=13);
            check(&g, &mut r);
        }
        format!("{runs} fixtures")
    });
}
