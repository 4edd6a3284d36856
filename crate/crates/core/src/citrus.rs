//! Wedges, citruses and bushes: classification and detection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::tw2::is_tw_at_most_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WedgeClass {
    /// G_L plus the end edge has treewidth at most two.
    Juicy,
    /// Four vertices and not juicy.
    Seeded,
    /// Between five and ℓ vertices and not juicy.
    Pulped,
    /// More than ℓ vertices and not juicy.
    Oversized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wedge {
    /// Sorted, ends included.
    pub vertices: Vec<usize>,
    pub ends: (usize, usize),
    pub class: WedgeClass,
}

impl Wedge {
    pub fn interior(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| v != self.ends.0 && v != self.ends.1)
            .collect()
    }

    fn map(&self, f: &impl Fn(usize) -> usize) -> Wedge {
        let mut vertices: Vec<usize> = self.vertices.iter().map(|&v| f(v)).collect();
        vertices.sort_unstable();
        Wedge {
            vertices,
            ends: (f(self.ends.0), f(self.ends.1)),
            class: self.class,
        }
    }
}

/// Checks the wedge predicate: at least three vertices, connected interior,
/// interior neighbourhood exactly {x, y}.
pub fn is_wedge(g: &Graph, l: &[usize], x: usize, y: usize) -> bool {
    if x == y || l.len() < 3 || !l.contains(&x) || !l.contains(&y) {
        return false;
    }
    let interior: Vec<usize> = l.iter().copied().filter(|&v| v != x && v != y).collect();
    if !g.is_connected_set(&interior) {
        return false;
    }
    let nb = g.set_neighborhood(&interior);
    nb.len() == 2 && nb.contains(&x) && nb.contains(&y)
}

pub fn classify_wedge(g: &Graph, l: &[usize], x: usize, y: usize, ell: usize) -> Result<WedgeClass> {
    if !is_wedge(g, l, x, y) {
        return Err(Error::InvalidInput(format!("{l:?} is not a wedge with ends {x},{y}")));
    }
    let (mut h, map) = g.induced(l);
    let lx = map.binary_search(&x).expect("end in wedge");
    let ly = map.binary_search(&y).expect("end in wedge");
    h.add_edge(lx, ly);
    Ok(if is_tw_at_most_2(&h) {
        WedgeClass::Juicy
    } else if l.len() == 4 {
        WedgeClass::Seeded
    } else if l.len() <= ell {
        WedgeClass::Pulped
    } else {
        WedgeClass::Oversized
    })
}

/// Components of G − {x,y} whose neighbourhood is exactly {x,y}.
pub fn wedges_between(g: &Graph, x: usize, y: usize, ell: usize) -> Vec<Wedge> {
    let mut alive = vec![true; g.n()];
    alive[x] = false;
    alive[y] = false;
    let mut out = Vec::new();
    for comp in g.components_where(&alive) {
        let nb = g.set_neighborhood(&comp);
        if nb.len() == 2 && nb.contains(&x) && nb.contains(&y) {
            let mut l = comp.clone();
            l.push(x);
            l.push(y);
            l.sort_unstable();
            let class = classify_wedge(g, &l, x, y, ell).expect("component wedge");
            out.push(Wedge {
                vertices: l,
                ends: edge(x, y),
                class,
            });
        }
    }
    out
}

/// Every maximal wedge interior for every end pair.
pub fn enumerate_wedges(g: &Graph, ell: usize) -> Vec<Wedge> {
    let mut out = Vec::new();
    for x in 0..g.n() {
        for y in x + 1..g.n() {
            out.extend(wedges_between(g, x, y, ell));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citrus {
    pub ends: (usize, usize),
    pub wedges: Vec<Wedge>,
    pub has_direct_edge: bool,
}

impl Citrus {
    /// V(x, y, 𝓛), sorted.
    pub fn vesicle(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.wedges.iter().flat_map(|w| w.vertices.iter().copied()).collect();
        v.push(self.ends.0);
        v.push(self.ends.1);
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn interior(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.wedges.iter().flat_map(|w| w.interior()).collect();
        v.sort_unstable();
        v
    }

    pub fn pulped_count(&self) -> usize {
        self.wedges
            .iter()
            .filter(|w| matches!(w.class, WedgeClass::Pulped | WedgeClass::Oversized))
            .count()
    }

    pub fn is_lemon(&self) -> bool {
        self.wedges
            .iter()
            .all(|w| matches!(w.class, WedgeClass::Juicy | WedgeClass::Seeded))
    }

    /// Every wedge juicy, seeded or pulped, with at most `pulped_bound`
    /// pulped wedges.
    pub fn check_lemon(&self, pulped_bound: usize) -> Result<()> {
        if self.wedges.iter().any(|w| w.class == WedgeClass::Oversized) {
            return Err(Error::NotALemon(format!(
                "citrus {:?} has a non-juicy wedge above the size bound",
                self.ends
            )));
        }
        if self.pulped_count() > pulped_bound {
            return Err(Error::NotALemon(format!(
                "citrus {:?} has {} pulped wedges, bound {pulped_bound}",
                self.ends,
                self.pulped_count()
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Citrus {
        Citrus {
            ends: (f(self.ends.0), f(self.ends.1)),
            wedges: self.wedges.iter().map(|w| w.map(&f)).collect(),
            has_direct_edge: self.has_direct_edge,
        }
    }
}

/// The citrus with ends x, y spanning all of `g`: every component of
/// G − {x,y} must be a wedge interior.
pub fn citrus_of(g: &Graph, x: usize, y: usize, ell: usize) -> Result<Citrus> {
    if x == y || x >= g.n() || y >= g.n() {
        return Err(Error::InvalidInput(format!("bad citrus ends {x},{y}")));
    }
    let wedges = wedges_between(g, x, y, ell);
    let covered: usize = wedges.iter().map(|w| w.vertices.len() - 2).sum::<usize>() + 2;
    if covered != g.n() {
        return Err(Error::NotALemon(format!("graph is not a citrus with ends {x},{y}")));
    }
    let has_direct_edge = g.has_edge(x, y);
    if wedges.is_empty() && !has_direct_edge {
        return Err(Error::NotALemon(format!("ends {x},{y} carry neither a wedge nor an edge")));
    }
    Ok(Citrus {
        ends: edge(x, y),
        wedges,
        has_direct_edge,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BushDecomposition {
    pub stem: Vec<usize>,
    /// Flower edges, sorted; `citruses[i]` belongs to `flower[i]`.
    pub flower: Vec<Edge>,
    pub citruses: Vec<Citrus>,
    pub tangle: Vec<usize>,
}

impl BushDecomposition {
    pub fn citrus_for(&self, e: Edge) -> Option<&Citrus> {
        self.flower.binary_search(&edge(e.0, e.1)).ok().map(|i| &self.citruses[i])
    }

    /// Checks the bush invariants against `g`: interiors partition the
    /// non-stem, non-tangle vertices; the tangle is independent and only sees
    /// the stem.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut owner = vec![0usize; g.n()];
        for &x in &self.stem {
            owner[x] += 1;
        }
        for &y in &self.tangle {
            owner[y] += 1;
            if !g.neighbors(y).iter().all(|u| self.stem.contains(u)) {
                return false;
            }
        }
        for c in &self.citruses {
            for v in c.interior() {
                owner[v] += 1;
            }
        }
        owner.iter().all(|&k| k == 1)
    }
}

/// Builds the bush on stem X: the tangle (when allowed) is every other vertex
/// whose neighbourhood lies in X and does not have exactly two vertices; each
/// remaining component must see exactly two stem vertices.
pub fn bush_from_stem(g: &Graph, stem: &[usize], ell: usize, with_tangle: bool) -> Option<BushDecomposition> {
    stem_obstruction(g, stem, ell, with_tangle).ok()
}

/// The bush on stem X, or a vertex set of which every valid larger stem
/// must contain at least one vertex.
fn stem_obstruction(
    g: &Graph,
    stem: &[usize],
    ell: usize,
    with_tangle: bool,
) -> std::result::Result<BushDecomposition, Vec<usize>> {
    let mut in_stem = vec![false; g.n()];
    for &x in stem {
        in_stem[x] = true;
    }
    let tangle: Vec<usize> = if with_tangle {
        (0..g.n())
            .filter(|&v| {
                !in_stem[v] && g.degree(v) != 2 && g.neighbors(v).iter().all(|&u| in_stem[u])
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut alive: Vec<bool> = in_stem.iter().map(|&s| !s).collect();
    for &y in &tangle {
        alive[y] = false;
    }
    let mut groups: BTreeMap<Edge, Vec<Vec<usize>>> = BTreeMap::new();
    for comp in g.components_where(&alive) {
        let nb: Vec<usize> = g.set_neighborhood(&comp).into_iter().collect();
        if nb.len() != 2 {
            return Err(comp);
        }
        groups.entry(edge(nb[0], nb[1])).or_default().push(comp);
    }
    for (u, v) in g.edges() {
        if in_stem[u] && in_stem[v] {
            groups.entry((u, v)).or_default();
        }
    }
    let mut flower = Vec::new();
    let mut citruses = Vec::new();
    for ((x, y), comps) in groups {
        let inner: Vec<usize> = comps.iter().flatten().copied().collect();
        let mut wedges = Vec::new();
        for comp in comps {
            let mut l = comp.clone();
            l.push(x);
            l.push(y);
            l.sort_unstable();
            let class = classify_wedge(g, &l, x, y, ell).map_err(|_| comp)?;
            wedges.push(Wedge {
                vertices: l,
                ends: (x, y),
                class,
            });
        }
        let citrus = Citrus {
            ends: (x, y),
            wedges,
            has_direct_edge: g.has_edge(x, y),
        };
        if citrus.check_lemon(ell).is_err() {
            return Err(inner);
        }
        flower.push((x, y));
        citruses.push(citrus);
    }
    let mut stem = stem.to_vec();
    stem.sort_unstable();
    Ok(BushDecomposition {
        stem,
        flower,
        citruses,
        tangle,
    })
}

/// Entangled ℓ-lemon bush detection: tries the candidate stems in order, or
/// every vertex set of size at most k (smaller first, then lexicographic).
pub fn detect_entangled_bush(
    g: &Graph,
    k: usize,
    ell: usize,
    candidate_stems: Option<&[Vec<usize>]>,
) -> Option<BushDecomposition> {
    match candidate_stems {
        Some(cands) => cands
            .iter()
            .filter(|x| x.len() <= k)
            .find_map(|x| bush_from_stem(g, x, ell, true)),
        None => {
            let n = g.n();
            for size in 0..=k.min(n) {
                let mut idx: Vec<usize> = (0..size).collect();
                loop {
                    if let Some(b) = bush_from_stem(g, &idx, ell, true) {
                        return Some(b);
                    }
                    if !crate::oracle::next_combination(&mut idx, n) {
                        break;
                    }
                }
            }
            None
        }
    }
}

/// Entangled ℓ-lemon bush with at most k stems by branching: a stem that
/// fails leaves a component (or an overfull citrus) of which any larger
/// valid stem holds a vertex. Stem sizes grow one at a time and vertices of
/// high degree are tried first. Gives up after `budget` stem candidates.
pub fn search_entangled_bush(g: &Graph, k: usize, ell: usize, budget: usize) -> Option<BushDecomposition> {
    let mut spent = 0;
    for limit in 0..=k.min(g.n()) {
        let mut seen = std::collections::BTreeSet::new();
        let mut stem = Vec::new();
        match branch_stem(g, ell, limit, &mut stem, &mut seen, &mut spent, budget) {
            Ok(Some(b)) => return Some(b),
            Ok(None) => {}
            Err(()) => return None,
        }
    }
    None
}

fn branch_stem(
    g: &Graph,
    ell: usize,
    limit: usize,
    stem: &mut Vec<usize>,
    seen: &mut std::collections::BTreeSet<Vec<usize>>,
    spent: &mut usize,
    budget: usize,
) -> std::result::Result<Option<BushDecomposition>, ()> {
    let mut key = stem.clone();
    key.sort_unstable();
    if !seen.insert(key) {
        return Ok(None);
    }
    *spent += 1;
    if *spent > budget {
        return Err(());
    }
    let mut need = match stem_obstruction(g, stem, ell, true) {
        Ok(b) => return Ok(Some(b)),
        Err(need) => need,
    };
    if stem.len() >= limit {
        return Ok(None);
    }
    need.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for v in need {
        stem.push(v);
        let found = branch_stem(g, ell, limit, stem, seen, spent, budget)?;
        stem.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// A bush flowering from a cycle, with the stem in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBush {
    pub bush: BushDecomposition,
    /// Stem vertices in the order they appear around the cycle.
    pub order: Vec<usize>,
}

/// Detects a bush flowering from a cycle, with as many stems as possible. A
/// candidate pair s < t of consecutive stems must leave G − {s,t} with every
/// component seeing both; one component carries the rest of the cycle, the
/// others are the wedges of the citrus on {s,t}. Dropping that citrus leaves
/// a bush flowering from a path between s and t, split as finely as possible.
pub fn detect_cycle_bush(g: &Graph, ell: usize) -> Option<CycleBush> {
    if g.n() < 3 || !g.is_connected() {
        return None;
    }
    let mut best: Option<CycleBush> = None;
    for s in 0..g.n() {
        for t in s + 1..g.n() {
            let Some(order) = cycle_order_through(g, s, t, ell) else { continue };
            if best.as_ref().map_or(false, |b| b.order.len() >= order.len()) {
                continue;
            }
            if let Some(cb) = finish_cycle_bush(g, order, ell) {
                best = Some(cb);
            }
        }
    }
    best
}

/// Stems in cyclic order starting s, t, ... when s and t can be consecutive
/// stems.
fn cycle_order_through(g: &Graph, s: usize, t: usize, ell: usize) -> Option<Vec<usize>> {
    let mut alive = vec![true; g.n()];
    alive[s] = false;
    alive[t] = false;
    let comps = g.components_where(&alive);
    for comp in &comps {
        let nb = g.set_neighborhood(comp);
        if !(nb.contains(&s) && nb.contains(&t)) {
            return None;
        }
    }
    if comps.len() < 2 && !g.has_edge(s, t) {
        return None;
    }
    let mut best: Option<Vec<usize>> = None;
    for rest in &comps {
        let mut set = rest.clone();
        set.push(s);
        set.push(t);
        set.sort_unstable();
        let (mut sub, origin) = g.induced(&set);
        let local = |v: usize| origin.iter().position(|&o| o == v).expect("in set");
        sub.remove_edge(local(s), local(t));
        let Some(pb) = path_bush_between(&sub, local(s), local(t), ell) else { continue };
        if pb.order.len() < 3 {
            continue;
        }
        // path runs s .. t; read backwards and rotated, the cycle starts s, t
        let mut order: Vec<usize> = pb.order.iter().rev().map(|&v| origin[v]).collect();
        order.rotate_right(1);
        if best.as_ref().map_or(true, |b| order.len() > b.len()) {
            best = Some(order);
        }
    }
    best
}

fn finish_cycle_bush(g: &Graph, mut order: Vec<usize>, ell: usize) -> Option<CycleBush> {
    // start at the smallest stem, heading towards its smaller neighbour
    let first = (0..order.len()).min_by_key(|&i| order[i]).expect("three stems");
    order.rotate_left(first);
    if order[1] > order[order.len() - 1] {
        order[1..].reverse();
    }
    let bush = bush_from_stem(g, &order, ell, false)?;
    let mut expected: Vec<Edge> = (0..order.len())
        .map(|i| edge(order[i], order[(i + 1) % order.len()]))
        .collect();
    expected.sort_unstable();
    if bush.flower != expected || !bush.is_valid_for(g) {
        return None;
    }
    Some(CycleBush { bush, order })
}

/// A bush flowering from a path, with the stem in path order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathBush {
    pub bush: BushDecomposition,
    pub order: Vec<usize>,
}

/// Detects a bush flowering from a path. For each end pair s < t the
/// vertices separating s from t are listed in path order; a segment between
/// two of them is usable when everything strictly between forms an ℓ-lemon
/// on those two ends. The finest chain of usable segments wins; the first
/// end pair with a chain is returned.
pub fn detect_path_bush(g: &Graph, ell: usize) -> Option<PathBush> {
    if g.n() < 2 || !g.is_connected() {
        return None;
    }
    for s in 0..g.n() {
        for t in s + 1..g.n() {
            if let Some(pb) = path_bush_between(g, s, t, ell) {
                return Some(pb);
            }
        }
    }
    None
}

fn path_bush_between(g: &Graph, s: usize, t: usize, ell: usize) -> Option<PathBush> {
    let n = g.n();
    // quick reject: every component of G − {s,t} must see both ends
    let mut alive = vec![true; n];
    alive[s] = false;
    alive[t] = false;
    for comp in g.components_where(&alive) {
        let nb = g.set_neighborhood(&comp);
        if !(nb.contains(&s) && nb.contains(&t)) {
            return None;
        }
    }
    let seps = separators_in_order(g, s, t)?;
    let r = seps.len();
    // best[j]: (stem count, predecessor) of the finest chain from seps[0] to seps[j]
    let mut best: Vec<Option<(usize, usize)>> = vec![None; r];
    best[0] = Some((1, 0));
    for j in 1..r {
        for i in 0..j {
            let Some((count, _)) = best[i] else { continue };
            if best[j].map_or(false, |(c, _)| c >= count + 1) {
                continue;
            }
            if segment_citrus(g, &seps, i, j, ell).is_some() {
                best[j] = Some((count + 1, i));
            }
        }
    }
    best[r - 1]?;
    let mut chosen = vec![r - 1];
    while *chosen.last().expect("non-empty") != 0 {
        let j = *chosen.last().expect("non-empty");
        chosen.push(best[j].expect("reachable").1);
    }
    chosen.reverse();
    let order: Vec<usize> = chosen.iter().map(|&i| seps[i]).collect();
    let bush = bush_from_stem(g, &order, ell, false)?;
    let mut expected: Vec<Edge> = order.windows(2).map(|w| edge(w[0], w[1])).collect();
    expected.sort_unstable();
    if bush.flower != expected || !bush.is_valid_for(g) {
        return None;
    }
    Some(PathBush { bush, order })
}

/// s, the vertices whose removal separates s from t, and t, ordered along
/// a shortest s–t path.
fn separators_in_order(g: &Graph, s: usize, t: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut prev = vec![usize::MAX; n];
    prev[s] = s;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if prev[u] == usize::MAX {
                prev[u] = v;
                queue.push_back(u);
            }
        }
    }
    if prev[t] == usize::MAX {
        return None;
    }
    let mut path = vec![t];
    while *path.last().expect("non-empty") != s {
        let v = *path.last().expect("non-empty");
        path.push(prev[v]);
    }
    path.reverse();
    let mut out = vec![s];
    for &v in &path[1..path.len() - 1] {
        let mut alive = vec![true; n];
        alive[v] = false;
        let comps = g.components_where(&alive);
        if !comps.iter().any(|c| c.contains(&s) && c.contains(&t)) {
            out.push(v);
        }
    }
    out.push(t);
    Some(out)
}

/// The citrus between seps[i] and seps[j] when everything strictly between
/// them consists of wedges on exactly those two ends.
fn segment_citrus(g: &Graph, seps: &[usize], i: usize, j: usize, ell: usize) -> Option<Citrus> {
    let (a, b) = (seps[i], seps[j]);
    let first = seps[0];
    let last = *seps.last().expect("non-empty");
    let mut alive = vec![true; g.n()];
    alive[a] = false;
    alive[b] = false;
    let mut wedges = Vec::new();
    for comp in g.components_where(&alive) {
        if (i > 0 && comp.contains(&first)) || (j + 1 < seps.len() && comp.contains(&last)) {
            continue;
        }
        let nb = g.set_neighborhood(&comp);
        if nb.len() != 2 || !nb.contains(&a) || !nb.contains(&b) {
            return None;
        }
        let mut l = comp;
        l.push(a);
        l.push(b);
        l.sort_unstable();
        let class = classify_wedge(g, &l, a, b, ell).ok()?;
        wedges.push(Wedge {
            vertices: l,
            ends: edge(a, b),
            class,
        });
    }
    let citrus = Citrus {
        ends: edge(a, b),
        wedges,
        has_direct_edge: g.has_edge(a, b),
    };
    if citrus.wedges.is_empty() && !citrus.has_direct_edge {
        return None;
    }
    citrus.check_lemon(ell).ok()?;
    Some(citrus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::build(n, &edges)
    }

    #[test]
    fn c4_wedges() {
        let ws = wedges_between(&cycle(4), 0, 2, 5);
        let sets: Vec<Vec<usize>> = ws.iter().map(|w| w.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1, 2], vec![0, 2, 3]]);
        assert!(ws.iter().all(|w| w.class == WedgeClass::Juicy));
    }

    #[test]
    fn k4_wedges_are_seeded() {
        let k4 = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let ws = enumerate_wedges(&k4, 6);
        assert_eq!(ws.len(), 6);
        assert!(ws.iter().all(|w| w.class == WedgeClass::Seeded));
    }

    #[test]
    fn wedge_classes() {
        let path = Graph::build(3, &[(0, 1), (1, 2)]);
        assert_eq!(classify_wedge(&path, &[0, 1, 2], 0, 2, 5).unwrap(), WedgeClass::Juicy);
        // x=0, y=1, a=2, b=3
        let seeded = Graph::build(4, &[(2, 3), (0, 2), (1, 2), (0, 3), (1, 3)]);
        assert_eq!(classify_wedge(&seeded, &[0, 1, 2, 3], 0, 1, 5).unwrap(), WedgeClass::Seeded);
        // interior K4 on 2..6, ends 0 and 1
        let mut g = Graph::new(6);
        for a in 2..6 {
            for b in a + 1..6 {
                g.add_edge(a, b);
            }
        }
        g.add_edge(0, 2);
        g.add_edge(1, 5);
        let l: Vec<usize> = (0..6).collect();
        assert_eq!(classify_wedge(&g, &l, 0, 1, 6).unwrap(), WedgeClass::Pulped);
        assert_eq!(classify_wedge(&g, &l, 0, 1, 5).unwrap(), WedgeClass::Oversized);
        assert!(classify_wedge(&g, &[0, 2, 3], 0, 3, 6).is_err());
    }

    #[test]
    fn entangled_small_example() {
        let g = Graph::build(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]);
        let b = detect_entangled_bush(&g, 2, 5, None).unwrap();
        assert_eq!(b.stem, vec![0, 1]);
        assert_eq!(b.tangle, vec![3]);
        assert_eq!(b.flower, vec![(0, 1)]);
        assert_eq!(b.citruses[0].wedges.len(), 1);
        assert_eq!(b.citruses[0].wedges[0].vertices, vec![0, 1, 2]);
        assert_eq!(b.citruses[0].wedges[0].class, WedgeClass::Juicy);
        assert!(b.citruses[0].has_direct_edge);
    }

    #[test]
    fn c6_needs_two_stems() {
        assert!(detect_entangled_bush(&cycle(6), 1, 5, None).is_none());
        assert!(detect_entangled_bush(&cycle(6), 2, 5, None).is_some());
    }

    #[test]
    fn cycle_bush_examples() {
        let cb = detect_cycle_bush(&cycle(6), 5).unwrap();
        assert_eq!(cb.order, vec![0, 1, 2, 3, 4, 5]);
        assert!(cb.bush.citruses.iter().all(|c| c.wedges.is_empty() && c.has_direct_edge));

        let mut g = cycle(9);
        let w = g.add_vertex();
        g.add_edge(w, 0);
        g.add_edge(w, 3);
        let cb = detect_cycle_bush(&g, 5).unwrap();
        assert_eq!(cb.bush.stem, vec![0, 3, 4, 5, 6, 7, 8]);
        let c = cb.bush.citrus_for((0, 3)).unwrap();
        let sets: Vec<Vec<usize>> = c.wedges.iter().map(|w| w.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1, 2, 3], vec![0, 3, 9]]);

        let k4 = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(detect_cycle_bush(&k4, 5).is_none());
    }

    #[test]
    fn path_bush_examples() {
        let p = Graph::build(3, &[(0, 1), (1, 2)]);
        let pb = detect_path_bush(&p, 5).unwrap();
        assert_eq!(pb.order, vec![0, 1, 2]);
        let c4 = cycle(4);
        let pb = detect_path_bush(&c4, 5).unwrap();
        assert_eq!(pb.bush.flower, vec![(0, 1)]);
        assert_eq!(pb.bush.citruses[0].wedges.len(), 1);
        assert!(pb.bush.citruses[0].has_direct_edge);
    }
}
