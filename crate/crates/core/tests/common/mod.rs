//! Shared random generators and independent reference checks for tests.
#![allow(dead_code)]

pub mod fixtures;

use citrus_core::graph::{Edge, Graph, UnionFind};
use citrus_core::oracle::TerminalSet;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected(rng: &mut impl Rng, n: usize, extra_p: f64) -> Graph {
    let mut g = Graph::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j]);
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(extra_p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Random subgraph of a random 2-tree, hence treewidth at most two.
pub fn random_partial_2tree(rng: &mut impl Rng, n: usize, keep_p: f64) -> Graph {
    let mut g = Graph::new(n);
    if n < 2 {
        return g;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<Edge> = vec![(order[0], order[1])];
    g.add_edge(order[0], order[1]);
    for &v in &order[2..] {
        let (a, b) = edges[rng.gen_range(0..edges.len())];
        g.add_edge(v, a);
        g.add_edge(v, b);
        edges.push((v, a));
        edges.push((v, b));
    }
    let mut h = Graph::new(n);
    for (u, v) in g.edges() {
        if rng.gen_bool(keep_p) {
            h.add_edge(u, v);
        }
    }
    h
}

/// Random terminal pairs drawn from `pool`, all inside one component of g.
pub fn random_terminals(rng: &mut impl Rng, g: &Graph, pool: &[usize], pairs: usize) -> TerminalSet {
    let comp = g.component_ids();
    let mut out = Vec::new();
    if pool.len() < 2 {
        return TerminalSet::empty();
    }
    for _ in 0..pairs * 4 {
        if out.len() == pairs {
            break;
        }
        let s = pool[rng.gen_range(0..pool.len())];
        let t = pool[rng.gen_range(0..pool.len())];
        if s != t && comp[s] == comp[t] {
            out.push((s, t));
        }
    }
    TerminalSet::new(&out).expect("non-trivial pairs")
}

pub fn all_vertices(g: &Graph) -> Vec<usize> {
    (0..g.n()).collect()
}

/// Treewidth by minimising the largest elimination clique over all orders
/// (memoised over eliminated sets). Small graphs only.
pub fn treewidth_bruteforce(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 12);
    if n == 0 {
        return 0;
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    // q(S, v): vertices outside S ∪ {v} reachable from v through S
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(x) = stack.pop() {
            let mut nb = adj[x] & !seen;
            while nb != 0 {
                let y = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << y;
                if s >> y & 1 == 1 {
                    stack.push(y);
                } else {
                    out |= 1 << y;
                }
            }
        }
        out
    };
    let size = 1usize << n;
    let mut tw = vec![usize::MAX; size];
    tw[0] = 0;
    for s in 1..size as u32 {
        let mut best = usize::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let prev = s & !(1 << v);
            let cost = tw[prev as usize].max(q(prev, v).count_ones() as usize);
            best = best.min(cost);
        }
        tw[s as usize] = best;
    }
    tw[size - 1]
}

/// Independent feasibility check: edges exist, no cycle, every pair joined.
pub fn check_forest(g: &Graph, t: &TerminalSet, edges: &[Edge]) -> bool {
    let mut uf = UnionFind::new(g.n());
    for &(u, v) in edges {
        if !g.has_edge(u, v) || !uf.union(u, v) {
            return false;
        }
    }
    t.pairs().iter().all(|&(s, u)| uf.same(s, u))
}

/// Path on `r` vertices followed in order.
pub fn explicit_path(r: usize) -> Graph {
    let mut g = Graph::new(r);
    for v in 1..r {
        g.add_edge(v - 1, v);
    }
    g
}

/// Centre 0 with three legs of the given lengths in edges.
pub fn explicit_claw(legs: [usize; 3]) -> Graph {
    let mut g = Graph::new(1);
    for len in legs {
        let mut prev = 0;
        for _ in 0..len {
            let v = g.add_vertex();
            g.add_edge(prev, v);
            prev = v;
        }
    }
    g
}

/// Disjoint union.
pub fn disjoint_union(parts: &[Graph]) -> Graph {
    let mut g = Graph::new(0);
    for p in parts {
        let base = g.n();
        for _ in 0..p.n() {
            g.add_vertex();
        }
        for (u, v) in p.edges() {
            g.add_edge(base + u, base + v);
        }
    }
    g
}

/// Whether `a` is a (not necessarily induced) subgraph of `b`, by
/// backtracking over injective vertex maps.
pub fn is_subgraph(a: &Graph, b: &Graph) -> bool {
    fn extend(a: &Graph, b: &Graph, order: &[usize], map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = map.len();
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for w in 0..b.n() {
            if used[w] || b.degree(w) < a.degree(v) {
                continue;
            }
            let ok = order[..i]
                .iter()
                .zip(map.iter())
                .all(|(&u, &x)| !a.has_edge(u, v) || b.has_edge(x, w));
            if ok {
                used[w] = true;
                map.push(w);
                if extend(a, b, order, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    if a.n() > b.n() || a.m() > b.m() {
        return false;
    }
    // breadth-first order keeps each new vertex adjacent to a placed one
    let mut order = Vec::new();
    let mut seen = vec![false; a.n()];
    for s in 0..a.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = std::collections::VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &u in a.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    q.push_back(u);
                }
            }
        }
    }
    extend(a, b, &order, &mut Vec::new(), &mut vec![false; b.n()])
}

/// Builds the explicit graph named by `P7`, `S1,4,5`, `3P4`, `2K1,3+P3`, ...
pub fn named_graph(name: &str) -> Graph {
    let mut parts = Vec::new();
    for term in name.split('+') {
        let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
        let mult = if digits.is_empty() { 1 } else { digits.parse().unwrap() };
        let body = &term[digits.len()..];
        let g = if let Some(r) = body.strip_prefix('P') {
            explicit_path(r.parse().unwrap())
        } else if body == "K1,3" {
            explicit_claw([1, 1, 1])
        } else {
            let legs: Vec<usize> = body[1..].split(',').map(|x| x.parse().unwrap()).collect();
            explicit_claw([legs[0], legs[1], legs[2]])
        };
        for _ in 0..mult {
            parts.push(g.clone());
        }
    }
    disjoint_union(&parts)
}

/// The claw families in the order of the proof list, with their answer and
/// the containment their bullet cites.
pub fn claw_bullets() -> Vec<(u8, citrus_core::dichotomy::Complexity, &'static str, Vec<&'static str>)> {
    use citrus_core::dichotomy::Complexity::*;
    vec![
        (1, NpComplete, "3P4 ⊆ H", vec!["S4,4,4", "S4,5,6", "S5,5,9"]),
        (2, NpComplete, "4P3 ⊆ H", vec!["S3,4,4", "S3,4,7", "S3,6,6"]),
        (3, NpComplete, "4P3 ⊆ H", vec!["S3,3,5", "S3,3,6", "S3,3,10"]),
        (4, Poly, "H ⊆ S3,3,4", vec!["S3,3,3", "S3,3,4"]),
        (5, NpComplete, "S1,1,8 ⊆ H", vec!["S2,2,8", "S2,5,9", "S2,8,8"]),
        (6, NpComplete, "4P3 ⊆ H", vec!["S2,3,6", "S2,5,7", "S2,7,7"]),
        (7, Poly, "H ⊆ S2,2,7", vec!["S2,2,6", "S2,2,7"]),
        (8, NpComplete, "S1,4,5 ⊆ H", vec!["S2,4,5", "S2,5,5"]),
        (9, Poly, "H ⊆ S2,3,5", vec!["S2,2,5", "S2,3,5"]),
        (10, Poly, "H ⊆ S2,4,4", vec!["S2,2,2", "S2,3,4", "S2,4,4"]),
        (11, NpComplete, "S1,1,8 ⊆ H", vec!["S1,1,8", "S1,5,9", "S1,8,8"]),
        (12, NpComplete, "4P3 ⊆ H", vec!["S1,3,7", "S1,5,7", "S1,7,7"]),
        (13, Poly, "H ⊆ S2,2,7", vec!["S1,1,7", "S1,2,7"]),
        (14, NpComplete, "S1,4,5 ⊆ H", vec!["S1,4,5", "S1,5,6", "S1,6,6"]),
        (15, Poly, "H ⊆ S1,3,6", vec!["S1,1,5", "S1,2,5", "S1,3,6"]),
        (16, Poly, "H ⊆ S2,4,4", vec!["S1,2,2", "S1,3,4", "S1,4,4", "S1,1,1"]),
    ]
}

/// Checks the containment a verdict cites on the explicit graphs.
pub fn witness_holds(witness: &str, h: &Graph) -> bool {
    let claim = witness.split(';').next().unwrap().trim();
    let (left, right) = claim.split_once(" ⊆ ").unwrap();
    match (left, right) {
        ("H", other) => is_subgraph(h, &named_graph(other)),
        (other, "H") => is_subgraph(&named_graph(other), h),
        _ => false,
    }
}
