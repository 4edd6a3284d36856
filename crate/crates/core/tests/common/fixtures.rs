//! Hand-built and random citrus structures.

use citrus_core::citrus::{classify_wedge, WedgeClass};
use citrus_core::graph::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

/// The lemon drawn on the left of the lemon figure: ends 0 and 1 with a
/// direct edge, a 2-path wedge, a 3-path wedge with a chord, a K4-type
/// seeded wedge and a single-vertex wedge.
pub fn figure_lemon() -> Graph {
    // 0 = v1, 1 = v2, 2,3 = u1,u2, 4,5,6 = y1,ym,y2, 7,8 = z1,z2, 9 = w
    Graph::build(
        10,
        &[
            (0, 1),
            (0, 2),
            (2, 3),
            (3, 1),
            (0, 4),
            (4, 5),
            (5, 6),
            (6, 1),
            (4, 6),
            (0, 7),
            (7, 8),
            (8, 1),
            (7, 1),
            (8, 0),
            (0, 9),
            (9, 1),
        ],
    )
}

/// The bush drawn on the right of the lemon figure, as drawn: five stems
/// along a path. Returns the graph and the stems in path order.
pub fn figure_bush() -> (Graph, Vec<usize>) {
    // stems 0..=4
    let mut g = Graph::new(5);
    let mut next = 5;
    let mut path = |g: &mut Graph, a: usize, b: usize, len: usize| {
        let mut prev = a;
        for _ in 0..len {
            let v = next;
            next += 1;
            while g.n() <= v {
                g.add_vertex();
            }
            g.add_edge(prev, v);
            prev = v;
        }
        g.add_edge(prev, b);
    };
    g.add_edge(0, 1);
    path(&mut g, 0, 1, 2);
    path(&mut g, 0, 1, 2);
    path(&mut g, 0, 1, 1);
    path(&mut g, 0, 1, 1);
    path(&mut g, 1, 2, 1);
    path(&mut g, 1, 2, 1);
    g.add_edge(2, 3);
    path(&mut g, 3, 4, 3);
    (g, vec![0, 1, 2, 3, 4])
}

/// A random wedge shape on local ids: 0 and 1 are the ends, 2.. the interior.
pub fn wedge_shape(rng: &mut impl Rng, interior: usize, dense: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let ids: Vec<usize> = (2..2 + interior).collect();
    for i in 1..interior {
        let j = rng.gen_range(0..i);
        edges.push((ids[j], ids[i]));
    }
    for i in 0..interior {
        for j in i + 1..interior {
            if !edges.contains(&(ids[i], ids[j])) && rng.gen_bool(dense) {
                edges.push((ids[i], ids[j]));
            }
        }
    }
    let to_x = ids[rng.gen_range(0..interior)];
    let to_y = ids[rng.gen_range(0..interior)];
    edges.push((0, to_x));
    edges.push((1, to_y));
    for &v in &ids {
        if v != to_x && rng.gen_bool(dense) {
            edges.push((0, v));
        }
        if v != to_y && rng.gen_bool(dense) {
            edges.push((1, v));
        }
    }
    edges
}

pub fn shape_class(shape: &[(usize, usize)], interior: usize, ell: usize) -> WedgeClass {
    let g = Graph::build(interior + 2, shape);
    let l: Vec<usize> = (0..interior + 2).collect();
    classify_wedge(&g, &l, 0, 1, ell).expect("generated wedge")
}

/// Copies a wedge shape between x and y using fresh vertices.
pub fn insert_wedge(g: &mut Graph, x: usize, y: usize, shape: &[(usize, usize)], interior: usize) -> Vec<usize> {
    let fresh: Vec<usize> = (0..interior).map(|_| g.add_vertex()).collect();
    let map = |v: usize| match v {
        0 => x,
        1 => y,
        _ => fresh[v - 2],
    };
    for &(u, v) in shape {
        g.add_edge(map(u), map(v));
    }
    fresh
}

/// The seeded shape: interior {a, b} adjacent and complete to both ends.
pub fn seeded_shape() -> Vec<(usize, usize)> {
    vec![(2, 3), (0, 2), (0, 3), (1, 2), (1, 3)]
}

/// Adds a random ℓ-lemon between x and y, keeping the graph within
/// `max_n` vertices and with at most `max_pulped` pulped wedges. Returns
/// the number of pulped wedges added.
pub fn grow_lemon(
    g: &mut Graph,
    rng: &mut impl Rng,
    x: usize,
    y: usize,
    ell: usize,
    max_pulped: usize,
    max_n: usize,
    max_wedges: usize,
) -> usize {
    let mut pulped = 0;
    let mut added = 0;
    let wedges = rng.gen_range(0..=max_wedges);
    for _ in 0..wedges {
        let room = max_n.saturating_sub(g.n());
        if room == 0 {
            break;
        }
        let kind = rng.gen_range(0..4);
        let (shape, interior) = match kind {
            0 => {
                let k = rng.gen_range(1..=room.min(3));
                (wedge_shape(rng, k, 0.2), k)
            }
            1 if room >= 2 => (seeded_shape(), 2),
            _ if room >= 3 && ell >= 5 => {
                let k = rng.gen_range(3..=room.min(ell - 2));
                (wedge_shape(rng, k, 0.7), k)
            }
            _ => (wedge_shape(rng, 1, 0.0), 1),
        };
        let class = shape_class(&shape, interior, ell);
        match class {
            WedgeClass::Pulped if pulped < max_pulped => pulped += 1,
            WedgeClass::Pulped | WedgeClass::Oversized => continue,
            _ => {}
        }
        insert_wedge(g, x, y, &shape, interior);
        added += 1;
    }
    if added == 0 || rng.gen_bool(0.5) {
        g.add_edge(x, y);
    }
    pulped
}

/// A random ℓ-lemon with ends 0 and 1.
pub fn random_lemon(rng: &mut impl Rng, ell: usize, max_pulped: usize, max_n: usize) -> Graph {
    let mut g = Graph::new(2);
    grow_lemon(&mut g, rng, 0, 1, ell, max_pulped, max_n, 4);
    g
}

/// A random ℓ-lemon bush flowering from a path on `stems` vertices
/// (0..stems in order).
pub fn random_path_bush(rng: &mut impl Rng, stems: usize, ell: usize, max_pulped: usize, max_n: usize) -> Graph {
    let mut g = Graph::new(stems);
    for i in 0..stems.saturating_sub(1) {
        let per = (max_n.saturating_sub(g.n())) / (stems - 1 - i).max(1);
        let cap = g.n() + per;
        grow_lemon(&mut g, rng, i, i + 1, ell, max_pulped, cap, 3);
    }
    g
}

/// A random ℓ-lemon bush flowering from a cycle on `stems` vertices.
pub fn random_cycle_bush(rng: &mut impl Rng, stems: usize, ell: usize, max_pulped: usize, max_n: usize) -> Graph {
    let mut g = Graph::new(stems);
    for i in 0..stems {
        let per = (max_n.saturating_sub(g.n())) / (stems - i).max(1);
        let cap = g.n() + per;
        grow_lemon(&mut g, rng, i, (i + 1) % stems, ell, max_pulped, cap, 2);
    }
    g
}

/// A random entangled ℓ-lemon bush with stem set 0..k. Returns the graph
/// and its tangle vertices.
pub fn random_entangled_bush(rng: &mut impl Rng, k: usize, ell: usize, max_n: usize) -> (Graph, Vec<usize>) {
    let mut g = Graph::new(k);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if rng.gen_bool(0.5) {
                pairs.push((a, b));
            }
        }
    }
    pairs.shuffle(rng);
    let tangle_count = rng.gen_range(0..=3usize).min(max_n.saturating_sub(k));
    for &(a, b) in &pairs {
        let budget = max_n.saturating_sub(tangle_count);
        if g.n() >= budget {
            if rng.gen_bool(0.5) {
                g.add_edge(a, b);
            }
            continue;
        }
        let cap = (g.n() + 4).min(budget);
        grow_lemon(&mut g, rng, a, b, ell, 1, cap, 2);
    }
    let mut tangle = Vec::new();
    for _ in 0..tangle_count {
        let mut size = rng.gen_range(1..=k.max(1));
        if size == 2 {
            size = if k >= 3 { 3 } else { 1 };
        }
        let mut xs: Vec<usize> = (0..k).collect();
        xs.shuffle(rng);
        let y = g.add_vertex();
        for &x in xs.iter().take(size) {
            g.add_edge(y, x);
        }
        tangle.push(y);
    }
    (g, tangle)
}
