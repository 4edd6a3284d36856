mod common;

use citrus_core::citrus::{bush_from_stem, BushDecomposition};
use citrus_core::graph::{edge, Edge, UnionFind};
use citrus_core::lemon::LemonBounds;
use citrus_core::oracle::{solve_exact, TerminalSet};
use citrus_core::tangle::{enumerate_patterns, prepare, solve_entangled, solve_entangled_within, PatternOutcome};
use citrus_core::{Error, Graph};
use common::fixtures::*;
use common::*;
use proptest::prelude::*;
use rand::Rng;

const ELL: usize = 5;

fn bounds() -> LemonBounds {
    LemonBounds::new(ELL)
}

fn bush(g: &Graph, stem: &[usize]) -> BushDecomposition {
    bush_from_stem(g, stem, ELL, true).expect("entangled bush")
}

/// Patterns counted from the definition: edge subsets of the flower plus
/// the stem–tangle edges that form a forest in which every tangle vertex
/// has degree zero or at least two.
fn brute_pattern_count(g: &Graph, b: &BushDecomposition) -> usize {
    let mut edges: Vec<Edge> = b.flower.clone();
    for &y in &b.tangle {
        for &x in g.neighbors(y) {
            edges.push(edge(x, y));
        }
    }
    assert!(edges.len() <= 20);
    let mut count = 0;
    for mask in 0u32..1 << edges.len() {
        let mut uf = UnionFind::new(g.n());
        let mut deg = vec![0usize; g.n()];
        let mut ok = true;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                ok &= uf.union(u, v);
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        if ok && b.tangle.iter().all(|&y| deg[y] != 1) {
            count += 1;
        }
    }
    count
}

fn pattern_count(g: &Graph, b: &BushDecomposition) -> usize {
    enumerate_patterns(&b.stem, &b.tangle, &b.flower, g).len()
}

#[test]
fn pattern_counts_small() {
    let g = Graph::build(2, &[(0, 1)]);
    let b = bush(&g, &[0]);
    assert_eq!(pattern_count(&g, &b), 1);

    let g = Graph::build(2, &[(0, 1)]);
    let b = bush(&g, &[0, 1]);
    assert_eq!(b.flower.len(), 1);
    assert_eq!(pattern_count(&g, &b), 2);

    let g = Graph::build(4, &[(3, 0), (3, 1), (3, 2)]);
    let b = bush(&g, &[0, 1, 2]);
    assert_eq!(b.tangle, vec![3]);
    assert_eq!(pattern_count(&g, &b), brute_pattern_count(&g, &b));
    assert_eq!(pattern_count(&g, &b), 5);
}

#[test]
fn pattern_counts_match_definition() {
    let mut r = rng(31);
    for _ in 0..150 {
        let k = r.gen_range(1..=4);
        let (g, _) = random_entangled_bush(&mut r, k, ELL, 12);
        let stem: Vec<usize> = (0..k).collect();
        let Some(b) = bush_from_stem(&g, &stem, ELL, true) else {
            continue;
        };
        let h = b.flower.len() + b.tangle.iter().map(|&y| g.degree(y)).sum::<usize>();
        if h > 16 {
            continue;
        }
        assert_eq!(pattern_count(&g, &b), brute_pattern_count(&g, &b));
    }
}

#[test]
fn star_with_one_leaf_pair() {
    let g = Graph::build(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
    let b = bush(&g, &[0]);
    let t = TerminalSet::new(&[(1, 3)]).unwrap();
    let s = solve_entangled(&g, &b, &t, bounds()).unwrap();
    assert_eq!(s.forest.size(), 2);
    assert!(check_forest(&g, &t, s.forest.edges()));
}

#[test]
fn stem_terminals_use_pendant_copies() {
    let g = Graph::build(5, &[(0, 1), (1, 2), (0, 3), (1, 3), (2, 3), (4, 0), (4, 2)]);
    let b = bush(&g, &[0, 1, 2]);
    let t = TerminalSet::new(&[(0, 2)]).unwrap();
    let s = solve_entangled(&g, &b, &t, bounds()).unwrap();
    assert_eq!(s.forest.size(), solve_exact(&g, &t).unwrap().size());
    assert!(s.forest.edges().iter().all(|&(u, v)| u < g.n() && v < g.n()));
}

#[test]
fn figure_bush_with_tangle_vertex() {
    let (mut g, stems) = figure_bush();
    let y = g.add_vertex();
    for &x in &[0, 2, 4] {
        g.add_edge(y, x);
    }
    let b = bush(&g, &stems);
    assert_eq!(b.tangle, vec![y]);
    let mut r = rng(7);
    let pool = all_vertices(&g);
    for _ in 0..25 {
        let pairs = r.gen_range(1..=3);
        let t = random_terminals(&mut r, &g, &pool, pairs);
        let s = solve_entangled(&g, &b, &t, bounds()).unwrap();
        let opt = solve_exact(&g, &t).unwrap();
        assert!(check_forest(&g, &t, s.forest.edges()));
        assert_eq!(s.forest.size(), opt.size(), "{t:?}");
    }
}

#[test]
fn pattern_budget_is_respected() {
    let g = Graph::build(4, &[(3, 0), (3, 1), (3, 2)]);
    let b = bush(&g, &[0, 1, 2]);
    let t = TerminalSet::new(&[(0, 1)]).unwrap();
    let r = solve_entangled_within(&g, &b, &t, bounds(), 2);
    assert!(matches!(r, Err(Error::NotApplicable(_))));
    assert!(solve_entangled_within(&g, &b, &t, bounds(), 10).is_ok());
}

#[test]
fn infeasible_instance() {
    let g = Graph::build(3, &[(0, 1)]);
    let b = bush(&g, &[0]);
    let t = TerminalSet::new(&[(1, 2)]).unwrap();
    assert!(matches!(solve_entangled(&g, &b, &t, bounds()), Err(Error::Infeasible(_))));
}

fn random_case(r: &mut impl Rng) -> Option<(Graph, BushDecomposition, TerminalSet)> {
    let k = r.gen_range(1..=4);
    let (g, _) = random_entangled_bush(r, k, ELL, 14);
    let stem: Vec<usize> = (0..k).collect();
    let b = bush_from_stem(&g, &stem, ELL, true)?;
    let pool = all_vertices(&g);
    let pairs = r.gen_range(1..=4);
    let t = random_terminals(r, &g, &pool, pairs);
    Some((g, b, t))
}

#[test]
fn random_entangled_bushes_match_oracle() {
    let mut r = rng(2024);
    let mut checked = 0;
    while checked < 200 {
        let Some((g, b, t)) = random_case(&mut r) else {
            continue;
        };
        let opt = solve_exact(&g, &t).unwrap();
        let s = solve_entangled(&g, &b, &t, bounds()).unwrap();
        assert!(check_forest(&g, &t, s.forest.edges()));
        assert_eq!(s.forest.size(), opt.size(), "g={:?} stem={:?} t={:?}", g.edges(), b.stem, t);
        checked += 1;
    }
}

#[test]
fn optimal_pattern_survives_and_reaches_optimum() {
    let mut r = rng(99);
    let mut checked = 0;
    while checked < 120 {
        let Some((g, b, t)) = random_case(&mut r) else {
            continue;
        };
        let prep = prepare(&g, &b, &t, bounds()).unwrap();
        let opt = solve_exact(&prep.graph, &prep.terminals).unwrap();
        let p = prep.pattern_of(opt.edges());
        assert!(prep.patterns().contains(&p));
        match prep.solve_pattern(&p).unwrap() {
            PatternOutcome::Solved { forest: Some(f), .. } => {
                assert_eq!(f.size(), opt.size(), "g={:?} t={:?} p={:?}", g.edges(), t, p)
            }
            other => panic!("optimal pattern {p:?} gave {other:?} on g={:?} t={:?}", g.edges(), t),
        }
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn solution_is_feasible_and_not_below_optimum(seed in any::<u64>()) {
        let mut r = rng(seed);
        if let Some((g, b, t)) = random_case(&mut r) {
            let s = solve_entangled(&g, &b, &t, bounds()).unwrap();
            prop_assert!(check_forest(&g, &t, s.forest.edges()));
            prop_assert!(s.forest.size() >= solve_exact(&g, &t).unwrap().size());
            prop_assert!(s.stats.candidates >= 1);
            prop_assert_eq!(
                s.stats.patterns,
                s.stats.candidates + s.stats.infeasible
                    + s.stats.rejected_by_rule.iter().sum::<usize>()
                    + s.stats.rejected_by_reduction.iter().sum::<usize>()
            );
        }
    }
}

#[test]
fn delicate_triangle_is_rejected() {
    // lemons 0–1, 1–2, 0–2 with interiors 3, 4, 5; tangle vertex 6 sees all
    let g = Graph::build(7, &[(0, 3), (3, 1), (1, 4), (4, 2), (0, 5), (5, 2), (6, 0), (6, 1), (6, 2)]);
    let b = bush(&g, &[0, 1, 2]);
    assert_eq!(b.flower.len(), 3);
    let t = TerminalSet::new(&[(3, 4), (4, 5)]).unwrap();
    let s = solve_entangled(&g, &b, &t, bounds()).unwrap();
    assert!(s.stats.rejected_by_rule[3] > 0);
    assert_eq!(s.forest.size(), solve_exact(&g, &t).unwrap().size());
}

#[test]
fn random_cases_reach_every_rule_family() {
    let mut r = rng(2024);
    let (mut rules, mut failed, mut reduced, mut folds) = ([0usize; 5], [0usize; 3], [0usize; 3], 0);
    for _ in 0..400 {
        let Some((g, b, t)) = random_case(&mut r) else {
            continue;
        };
        let s = solve_entangled(&g, &b, &t, bounds()).unwrap();
        for i in 0..5 {
            rules[i] += s.stats.rejected_by_rule[i];
        }
        for i in 0..3 {
            failed[i] += s.stats.rejected_by_reduction[i];
            reduced[i] += s.stats.reductions[i];
        }
        folds += s.stats.folds;
    }
    for i in [0, 1, 2, 4] {
        assert!(rules[i] > 0, "rule {} never fired", i + 1);
    }
    assert!(failed.iter().all(|&c| c > 0));
    assert!(reduced.iter().all(|&c| c > 0));
    assert!(folds > 0);
}
