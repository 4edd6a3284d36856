//! Solvers for single citruses and for bushes flowering from treewidth-2
//! graphs, paths and cycles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::citrus::{citrus_of, Citrus, CycleBush, PathBush, WedgeClass};
use crate::error::{Error, Result};
use crate::graph::{edge, identify_set, spanning_forest, Edge, Graph};
use crate::oracle::{connects, schools, solve_exact, SteinerForest, TerminalSet};
use crate::reductions::wedge_transform;
use crate::tw2::{is_tw_at_most_2, solve_tw2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CitrusSolveMode {
    /// Ends identified into one vertex; no x–y path inside the citrus.
    Identified,
    /// Only forests with an x–y path inside the citrus.
    Intertwined,
    /// Unrestricted.
    Free,
}

/// Wedge size bound ℓ and the allowed number of pulped wedges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemonBounds {
    pub ell: usize,
    pub pulped: usize,
}

impl LemonBounds {
    pub fn new(ell: usize) -> Self {
        LemonBounds { ell, pulped: ell }
    }

    pub fn with_pulped(self, pulped: usize) -> Self {
        LemonBounds { pulped, ..self }
    }
}

/// Edges of g belonging to the citrus: every edge induced by a wedge, plus
/// the direct edge.
pub fn citrus_edges(g: &Graph, citrus: &Citrus) -> Vec<Edge> {
    let mut out = Vec::new();
    for w in &citrus.wedges {
        for (i, &u) in w.vertices.iter().enumerate() {
            for &v in &w.vertices[i + 1..] {
                if g.has_edge(u, v) {
                    out.push(edge(u, v));
                }
            }
        }
    }
    if citrus.has_direct_edge {
        out.push(edge(citrus.ends.0, citrus.ends.1));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Minimum Steiner forest of the citrus under the given mode. Only the
/// citrus's own edges are used; every pair must lie inside its vertex set.
/// In `Identified` mode g and t are given before identification; pairs
/// between the two ends vanish and the output has no x–y path.
pub fn solve_citrus(
    g: &Graph,
    citrus: &Citrus,
    t: &TerminalSet,
    mode: CitrusSolveMode,
    bounds: LemonBounds,
) -> Result<SteinerForest> {
    let (x, y) = citrus.ends;
    if x >= g.n() || y >= g.n() {
        return Err(Error::InvalidInput("citrus ends outside the graph".into()));
    }
    let vesicle = citrus.vesicle();
    let own = Graph::with_edges(g.n(), &citrus_edges(g, citrus));
    let (local, map) = own.induced(&vesicle);
    let mut to_local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        to_local[v] = i;
    }
    let mut pairs = Vec::with_capacity(t.len());
    for &(s, u) in t.pairs() {
        if s >= g.n() || u >= g.n() || to_local[s] == usize::MAX || to_local[u] == usize::MAX {
            return Err(Error::InvalidInput(format!("pair ({s},{u}) leaves the citrus")));
        }
        pairs.push((to_local[s], to_local[u]));
    }
    let (lx, ly) = (to_local[x], to_local[y]);
    let lc = citrus_of(&local, lx, ly, bounds.ell)?;
    lc.check_lemon(bounds.pulped)?;
    let edges = match mode {
        CitrusSolveMode::Identified => identified_parts(&local, &lc, None, &pairs)?,
        CitrusSolveMode::Intertwined => intertwined(&local, &lc, &pairs)?,
        CitrusSolveMode::Free => free(&local, &lc, &pairs, bounds)?,
    };
    Ok(SteinerForest::new(edges.into_iter().map(|(u, v)| edge(map[u], map[v]))))
}

fn owners(n: usize, citrus: &Citrus) -> Vec<Option<usize>> {
    let mut owner = vec![None; n];
    for (i, w) in citrus.wedges.iter().enumerate() {
        for v in w.interior() {
            owner[v] = Some(i);
        }
    }
    owner
}

/// Solves `pairs` on the subgraph induced by `set`, optionally with two
/// vertices identified, using the treewidth-2 routine or the exact oracle.
fn solve_on(
    g: &Graph,
    set: &[usize],
    pairs: &[(usize, usize)],
    identify: Option<(usize, usize)>,
    tw2: bool,
) -> Result<Vec<Edge>> {
    let (sub, map) = g.induced(set);
    let local = |v: usize| map.binary_search(&v).expect("vertex in set");
    let id = match identify {
        Some((a, b)) => Some(identify_set(&sub, &[local(a), local(b)])?),
        None => None,
    };
    let vmap = |v: usize| id.as_ref().map_or(v, |id| id.map_vertex(v));
    let tp = TerminalSet::from_pairs_lossy(pairs.iter().map(|&(s, u)| (vmap(local(s)), vmap(local(u)))));
    if tp.is_empty() {
        return Ok(Vec::new());
    }
    let graph = id.as_ref().map_or(&sub, |id| &id.graph);
    let forest = if tw2 { solve_tw2(graph, &tp)? } else { solve_exact(graph, &tp)? };
    let lifted = match &id {
        Some(id) => id.lift(forest.edges()),
        None => forest.edges().to_vec(),
    };
    Ok(lifted.into_iter().map(|(u, v)| edge(map[u], map[v])).collect())
}

/// Identified solve with the separation rule: a pair split across two
/// wedges is routed through the merged end vertex in each. `skip` leaves
/// one wedge out (its pairs must already be gone).
fn identified_parts(
    g: &Graph,
    citrus: &Citrus,
    skip: Option<usize>,
    pairs: &[(usize, usize)],
) -> Result<Vec<Edge>> {
    let (x, y) = citrus.ends;
    let owner = owners(g.n(), citrus);
    let mut per: Vec<Vec<(usize, usize)>> = vec![Vec::new(); citrus.wedges.len()];
    for &(s, u) in pairs {
        match (owner[s], owner[u]) {
            (None, None) => {}
            (Some(a), None) => per[a].push((s, x)),
            (None, Some(b)) => per[b].push((u, x)),
            (Some(a), Some(b)) if a == b => per[a].push((s, u)),
            (Some(a), Some(b)) => {
                per[a].push((s, x));
                per[b].push((u, x));
            }
        }
    }
    let mut out = Vec::new();
    for (i, w) in citrus.wedges.iter().enumerate() {
        if Some(i) == skip {
            if !per[i].is_empty() {
                return Err(Error::InvalidInput("pairs left in the skipped wedge".into()));
            }
            continue;
        }
        if per[i].is_empty() {
            continue;
        }
        out.extend(solve_on(g, &w.vertices, &per[i], Some((x, y)), w.class == WedgeClass::Juicy)?);
    }
    Ok(out)
}

/// Intertwined solve: separate via x, then guess the wedge carrying the
/// x–y path.
fn intertwined(g: &Graph, citrus: &Citrus, pairs: &[(usize, usize)]) -> Result<Vec<Edge>> {
    let (x, y) = citrus.ends;
    if citrus.wedges.is_empty() {
        return Ok(vec![edge(x, y)]);
    }
    let owner = owners(g.n(), citrus);
    let mut sep = Vec::new();
    for &(s, u) in pairs {
        match (owner[s], owner[u]) {
            (Some(a), Some(b)) if a != b => {
                sep.push((s, x));
                sep.push((u, x));
            }
            _ => sep.push((s, u)),
        }
    }
    let mut best: Option<SteinerForest> = None;
    for (i, w) in citrus.wedges.iter().enumerate() {
        let inside = |v: usize| owner[v].map_or(true, |a| a == i);
        let mut mine = vec![(x, y)];
        let mut rest = Vec::new();
        for &(s, u) in &sep {
            if inside(s) && inside(u) {
                mine.push((s, u));
            } else {
                rest.push((s, u));
            }
        }
        let bar = solve_on(g, &w.vertices, &mine, None, w.class == WedgeClass::Juicy)?;
        let hat = identified_parts(g, citrus, Some(i), &rest)?;
        let cand = SteinerForest::new(bar.into_iter().chain(hat));
        if best.as_ref().map_or(true, |b| cand.better_than(b)) {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one wedge").edges().to_vec())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    X,
    Y,
    Z,
}

/// Best of the intertwined solve and the search over forests where the
/// pulped part splits into an x-side, a y-side and a detached rest.
fn free(g: &Graph, citrus: &Citrus, pairs: &[(usize, usize)], bounds: LemonBounds) -> Result<Vec<Edge>> {
    let t = TerminalSet::from_pairs_lossy(pairs.iter().copied());
    if t.is_empty() {
        return Ok(Vec::new());
    }
    let mut best = SteinerForest::new(intertwined(g, citrus, pairs)?);
    let (x, y) = citrus.ends;
    let h = transform_own_seeded(g, citrus, &t);
    let hc = citrus_of(&h, x, y, bounds.ell)?;
    let pulped: Vec<Vec<usize>> = hc
        .wedges
        .iter()
        .filter(|w| w.class != WedgeClass::Juicy)
        .map(|w| w.interior())
        .collect();
    let options: Vec<Vec<Vec<Side>>> = pulped.iter().map(|int| side_options(&h, int, x, y)).collect();
    if options.iter().any(|o| o.is_empty()) {
        return Ok(best.edges().to_vec());
    }
    let c_all: Vec<usize> = pulped.iter().flatten().copied().collect();
    let mut in_c = vec![false; h.n()];
    for &v in &c_all {
        in_c[v] = true;
    }
    let base: Vec<Edge> = h.edges().into_iter().filter(|&(u, v)| !in_c[u] && !in_c[v]).collect();
    let mut pick = vec![0usize; options.len()];
    loop {
        let mut side: Vec<Option<Side>> = vec![None; h.n()];
        for (w, int) in pulped.iter().enumerate() {
            for (k, &v) in int.iter().enumerate() {
                side[v] = Some(options[w][pick[w]][k]);
            }
        }
        if let Some(cand) = bistemmed_branch(&h, &t, &side, &base, x, y) {
            if cand.better_than(&best) {
                best = cand;
            }
        }
        // odometer over the per-wedge option lists
        let mut i = options.len();
        loop {
            if i == 0 {
                return Ok(best.edges().to_vec());
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// The seeded-wedge transformation applied only to the citrus's own seeded
/// wedges; pairs elsewhere in the citrus that look seeded in isolation keep
/// their edges so the citrus shape survives.
fn transform_own_seeded(g: &Graph, citrus: &Citrus, t: &TerminalSet) -> Graph {
    let school_of = schools(t).index(g.n());
    let mut out = g.clone();
    let (x, _) = citrus.ends;
    for w in citrus.wedges.iter().filter(|w| w.class == WedgeClass::Seeded) {
        let int = w.interior();
        let (a, b) = (int[0], int[1]);
        if school_of[a].is_some() && school_of[a] == school_of[b] {
            out.remove_edge(a, x);
        } else {
            out.remove_edge(a, b);
        }
    }
    out
}

/// Assignments of one pulped wedge interior to sides whose x-part and y-part
/// stay connected to their end.
fn side_options(g: &Graph, interior: &[usize], x: usize, y: usize) -> Vec<Vec<Side>> {
    let k = interior.len();
    let mut out = Vec::new();
    let total = 3usize.pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let mut sides = vec![Side::X; k];
        for s in sides.iter_mut().rev() {
            *s = [Side::X, Side::Y, Side::Z][c % 3];
            c /= 3;
        }
        let part = |want: Side, end: usize| -> Vec<usize> {
            let mut p: Vec<usize> = (0..k).filter(|&i| sides[i] == want).map(|i| interior[i]).collect();
            p.push(end);
            p
        };
        if g.is_connected_set(&part(Side::X, x)) && g.is_connected_set(&part(Side::Y, y)) {
            out.push(sides);
        }
    }
    out
}

fn bistemmed_branch(
    g: &Graph,
    t: &TerminalSet,
    side: &[Option<Side>],
    base: &[Edge],
    x: usize,
    y: usize,
) -> Option<SteinerForest> {
    for &(s, u) in t.pairs() {
        for (a, b) in [(s, u), (u, s)] {
            match (side[a], side[b]) {
                (Some(Side::X), Some(o)) if o != Side::X => return None,
                (Some(Side::Y), Some(o)) if o != Side::Y => return None,
                (Some(Side::Z), o) if o != Some(Side::Z) => return None,
                _ => {}
            }
        }
    }
    let of = |want: Side| -> Vec<usize> { (0..g.n()).filter(|&v| side[v] == Some(want)).collect() };
    let (xs, ys, zs) = (of(Side::X), of(Side::Y), of(Side::Z));
    let mut edges = base.to_vec();
    let mut with_x = xs.clone();
    with_x.push(x);
    let mut with_y = ys.clone();
    with_y.push(y);
    edges.extend(g.spanning_tree(&with_x));
    edges.extend(g.spanning_tree(&with_y));
    let gb = Graph::with_edges(g.n(), &edges);
    let tb = TerminalSet::from_pairs_lossy(
        t.pairs().iter().copied().filter(|&(s, u)| side[s] != Some(Side::Z) && side[u] != Some(Side::Z)),
    );
    let mut out = solve_tw2(&gb, &tb).ok()?.edges().to_vec();
    // detached parts, one per component of the Z vertices
    let mut alive = vec![false; g.n()];
    for &v in &zs {
        alive[v] = true;
    }
    let mut comp = vec![usize::MAX; g.n()];
    let comps = g.components_where(&alive);
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp[v] = i;
        }
    }
    let mut per: Vec<Vec<(usize, usize)>> = vec![Vec::new(); comps.len()];
    for &(s, u) in t.pairs() {
        if side[s] == Some(Side::Z) {
            if comp[s] != comp[u] {
                return None;
            }
            per[comp[s]].push((s, u));
        }
    }
    for (i, c) in comps.iter().enumerate() {
        if !per[i].is_empty() {
            out.extend(solve_on(g, c, &per[i], None, false).ok()?);
        }
    }
    let forest = SteinerForest::new(out);
    crate::oracle::is_feasible(g, t, forest.edges()).then_some(forest)
}

/// Bush flowering from a graph of treewidth at most two: after the seeded
/// wedge transformation the whole graph has treewidth at most two.
pub fn solve_bush_tw2(g: &Graph, t: &TerminalSet) -> Result<SteinerForest> {
    let h = wedge_transform(g, t);
    if !is_tw_at_most_2(&h) {
        return Err(Error::NotTw2AfterTransform);
    }
    solve_tw2(&h, t)
}

/// A citrus as its own small graph. Vertices carry keys (global ids after
/// an optional renaming); every local edge remembers the real edge of g.
pub(crate) struct Piece {
    graph: Graph,
    ends: (usize, usize),
    keys: Vec<usize>,
    real: BTreeMap<Edge, Edge>,
}

impl Piece {
    pub(crate) fn new(edges: &[Edge], ends: (usize, usize), key: &dyn Fn(usize) -> usize) -> Piece {
        let mut keys: Vec<usize> = edges.iter().flat_map(|&(u, v)| [key(u), key(v)]).collect();
        keys.push(key(ends.0));
        keys.push(key(ends.1));
        keys.sort_unstable();
        keys.dedup();
        let loc = |k: usize| keys.binary_search(&k).expect("key");
        let mut graph = Graph::new(keys.len());
        let mut real = BTreeMap::new();
        for &(u, v) in edges {
            let (a, b) = (loc(key(u)), loc(key(v)));
            if a != b && graph.add_edge(a, b) {
                real.insert(edge(a, b), edge(u, v));
            }
        }
        let ends = (loc(key(ends.0)), loc(key(ends.1)));
        Piece { graph, ends, keys, real }
    }

    fn contains(&self, k: usize) -> bool {
        self.keys.binary_search(&k).is_ok()
    }

    pub(crate) fn solve(&self, key_pairs: &[(usize, usize)], mode: CitrusSolveMode, bounds: LemonBounds) -> Result<Vec<Edge>> {
        let loc = |k: usize| self.keys.binary_search(&k).expect("key in piece");
        let citrus = citrus_of(&self.graph, self.ends.0, self.ends.1, bounds.ell)?;
        let t = TerminalSet::from_pairs_lossy(key_pairs.iter().map(|&(s, u)| (loc(s), loc(u))));
        if t.is_empty() && mode != CitrusSolveMode::Intertwined {
            return Ok(Vec::new());
        }
        let f = solve_citrus(&self.graph, &citrus, &t, mode, bounds)?;
        Ok(f.edges().iter().map(|e| self.real[e]).collect())
    }
}

/// Path of pieces: piece c joins stems[c] and stems[c+1]. Pairs are given
/// in keys; a pair spanning several pieces is projected onto the stems in
/// between, then every piece is solved freely.
fn solve_chain(pieces: &[Piece], stems: &[usize], pairs: &[(usize, usize)], bounds: LemonBounds) -> Result<Vec<Edge>> {
    let span = |k: usize| -> Option<(usize, usize)> {
        if let Some(c) = stems.iter().position(|&s| s == k) {
            let lo = c.saturating_sub(1);
            let hi = c.min(pieces.len().saturating_sub(1));
            return Some((lo, hi));
        }
        pieces.iter().position(|p| p.contains(k)).map(|c| (c, c))
    };
    let mut per: Vec<Vec<(usize, usize)>> = vec![Vec::new(); pieces.len()];
    for &(s, u) in pairs {
        if s == u {
            continue;
        }
        if pieces.is_empty() {
            return Err(Error::InvalidInput(format!("pair ({s},{u}) on an empty chain")));
        }
        let (Some((ls, hs)), Some((lu, hu))) = (span(s), span(u)) else {
            return Err(Error::InvalidInput(format!("pair ({s},{u}) leaves the chain")));
        };
        let ((a, ha, _), (b, lb)) = if hs < lu {
            ((s, hs, ls), (u, lu))
        } else if hu < ls {
            ((u, hu, lu), (s, ls))
        } else {
            per[ls.max(lu)].push((s, u));
            continue;
        };
        per[ha].push((a, stems[ha + 1]));
        for c in ha + 1..lb {
            per[c].push((stems[c], stems[c + 1]));
        }
        per[lb].push((stems[lb], b));
    }
    let mut out = Vec::new();
    for (c, p) in pieces.iter().enumerate() {
        out.extend(p.solve(&per[c], CitrusSolveMode::Free, bounds)?);
    }
    Ok(out)
}

/// Keeps a spanning forest of the candidate and checks it serves `t`.
fn finish(g: &Graph, t: &TerminalSet, edges: &[Edge]) -> Option<SteinerForest> {
    let f = spanning_forest(g.n(), edges);
    (f.iter().all(|&(u, v)| g.has_edge(u, v)) && connects(g.n(), t, &f)).then(|| SteinerForest::new(f))
}

fn check_pairs(g: &Graph, t: &TerminalSet) -> Result<()> {
    t.validate_for(g)
}

/// Path bush: pairs are projected along the stem chain (every inner stem is
/// a cut vertex) and each citrus is solved freely.
pub fn solve_path_bush(g: &Graph, pb: &PathBush, t: &TerminalSet, bounds: LemonBounds) -> Result<SteinerForest> {
    check_pairs(g, t)?;
    let id = |v: usize| v;
    let mut pieces = Vec::new();
    for w in pb.order.windows(2) {
        let c = pb
            .bush
            .citrus_for((w[0], w[1]))
            .ok_or_else(|| Error::InvalidInput("path bush without a citrus on a stem edge".into()))?;
        pieces.push(Piece::new(&citrus_edges(g, c), (w[0], w[1]), &id));
    }
    let edges = solve_chain(&pieces, &pb.order, t.pairs(), bounds)?;
    finish(g, t, &edges).ok_or_else(|| Error::Infeasible("no Steiner forest in the path bush".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBushSolution {
    pub forest: SteinerForest,
    /// Which case produced the forest (1, 2 or 3); ties go to the lower case.
    pub case: u8,
    /// Best size found by each case, if any branch survived.
    pub case_sizes: [Option<usize>; 3],
}

struct CycleCtx<'a> {
    g: &'a Graph,
    order: &'a [usize],
    edges: Vec<Vec<Edge>>,
    vesicles: Vec<Vec<usize>>,
    bounds: LemonBounds,
}

impl CycleCtx<'_> {
    fn m(&self) -> usize {
        self.order.len()
    }

    fn stem(&self, i: usize) -> usize {
        self.order[i % self.m()]
    }

    /// Pieces first..first+count (indices mod m) with their stems.
    fn arc(&self, first: usize, count: usize, key: &dyn Fn(usize) -> usize) -> (Vec<Piece>, Vec<usize>) {
        let pieces = (0..count)
            .map(|k| {
                let c = (first + k) % self.m();
                Piece::new(&self.edges[c], (self.stem(c), self.stem(c + 1)), key)
            })
            .collect();
        let stems = (0..=count).map(|k| key(self.stem(first + k))).collect();
        (pieces, stems)
    }

    /// Membership of v in the closed vertex set of an arc of pieces.
    fn in_arc(&self, v: usize, first: usize, count: usize) -> bool {
        if count == 0 {
            return v == self.stem(first);
        }
        (0..count).any(|k| self.vesicles[(first + k) % self.m()].binary_search(&v).is_ok())
    }

    fn in_piece(&self, v: usize, c: usize) -> bool {
        self.vesicles[c].binary_search(&v).is_ok()
    }
}

/// Cycle bush: at least one citrus is bi-stemmed in an optimum. Case 1
/// guesses the only bi-stemmed citrus, case 2 the only two, case 3 the two
/// closest of three or more; the best candidate over all cases is returned.
pub fn solve_cycle_bush(g: &Graph, cb: &CycleBush, t: &TerminalSet, bounds: LemonBounds) -> Result<CycleBushSolution> {
    check_pairs(g, t)?;
    let order = &cb.order;
    let m = order.len();
    if m < 3 {
        return Err(Error::InvalidInput("cycle bush needs at least three stems".into()));
    }
    let mut edges = Vec::with_capacity(m);
    let mut vesicles = Vec::with_capacity(m);
    for i in 0..m {
        let c = cb
            .bush
            .citrus_for((order[i], order[(i + 1) % m]))
            .ok_or_else(|| Error::InvalidInput("cycle bush without a citrus on a stem edge".into()))?;
        edges.push(citrus_edges(g, c));
        vesicles.push(c.vesicle());
    }
    let ctx = CycleCtx {
        g,
        order,
        edges,
        vesicles,
        bounds,
    };
    let cases = [case_one(&ctx, t), case_two(&ctx, t), case_three(&ctx, t)];
    let case_sizes = [0, 1, 2].map(|i| cases[i].as_ref().map(|f| f.size()));
    let mut winner: Option<(u8, SteinerForest)> = None;
    for (i, c) in cases.into_iter().enumerate() {
        if let Some(f) = c {
            if winner.as_ref().map_or(true, |(_, w)| f.size() < w.size()) {
                winner = Some((i as u8 + 1, f));
            }
        }
    }
    let (case, forest) = winner.ok_or_else(|| Error::Infeasible("no Steiner forest in the cycle bush".into()))?;
    Ok(CycleBushSolution {
        forest,
        case,
        case_sizes,
    })
}

fn keep_best(best: &mut Option<SteinerForest>, cand: Option<SteinerForest>) {
    if let Some(c) = cand {
        if best.as_ref().map_or(true, |b| c.better_than(b)) {
            *best = Some(c);
        }
    }
}

fn case_one(ctx: &CycleCtx, t: &TerminalSet) -> Option<SteinerForest> {
    let m = ctx.m();
    let id = |v: usize| v;
    let mut best = None;
    for c in 0..m {
        let (x, y) = (ctx.stem(c), ctx.stem(c + 1));
        let mut inner = Vec::new();
        let mut outer = vec![(x, y)];
        for &(s, u) in t.pairs() {
            match (ctx.in_piece(s, c), ctx.in_piece(u, c)) {
                (true, true) => inner.push((s, u)),
                (false, false) => outer.push((s, u)),
                (true, false) => {
                    inner.push((s, x));
                    outer.push((u, x));
                }
                (false, true) => {
                    inner.push((u, x));
                    outer.push((s, x));
                }
            }
        }
        let piece = Piece::new(&ctx.edges[c], (x, y), &id);
        let Ok(a) = piece.solve(&inner, CitrusSolveMode::Identified, ctx.bounds) else { continue };
        let (pieces, stems) = ctx.arc(c + 1, m - 1, &id);
        let Ok(b) = solve_chain(&pieces, &stems, &outer, ctx.bounds) else { continue };
        let all: Vec<Edge> = a.into_iter().chain(b).collect();
        keep_best(&mut best, finish(ctx.g, t, &all));
    }
    best
}

fn case_two(ctx: &CycleCtx, t: &TerminalSet) -> Option<SteinerForest> {
    let m = ctx.m();
    let id = |v: usize| v;
    let mut best = None;
    for i in 0..m {
        for j in i + 1..m {
            let (x1, y1, x2, y2) = (ctx.stem(i), ctx.stem(i + 1), ctx.stem(j), ctx.stem(j + 1));
            let (a_first, a_len) = (i + 1, j - i - 1);
            let (b_first, b_len) = (j + 1, m - (j - i) - 1);
            let key = |v: usize| {
                if v == x2 {
                    y1
                } else if v == y2 {
                    x1
                } else {
                    v
                }
            };
            let in_a = |v: usize| ctx.in_arc(v, a_first, a_len);
            let in_b = |v: usize| ctx.in_arc(v, b_first, b_len);
            let in_s = |v: usize| ctx.in_piece(v, i) || ctx.in_piece(v, j);
            let mut pa = vec![(y1, x2)];
            let mut pb = vec![(y2, x1)];
            let mut ps = Vec::new();
            let mut ok = true;
            for &(s, u) in t.pairs() {
                if in_a(s) && in_a(u) {
                    pa.push((s, u));
                } else if in_b(s) && in_b(u) {
                    pb.push((s, u));
                } else if in_s(s) && in_s(u) {
                    ps.push((key(s), key(u)));
                } else {
                    // one end strictly inside the super-lemon, the other
                    // strictly inside an arc
                    let (inner, other) = if in_s(s) && !in_a(s) && !in_b(s) { (s, u) } else { (u, s) };
                    if !(in_s(inner) && !in_a(inner) && !in_b(inner)) || in_s(other) {
                        ok = false;
                        break;
                    }
                    if in_a(other) {
                        ps.push((key(inner), y1));
                        pa.push((other, y1));
                    } else {
                        ps.push((key(inner), x1));
                        pb.push((other, y2));
                    }
                }
            }
            if !ok {
                continue;
            }
            let mut super_edges = ctx.edges[i].clone();
            super_edges.extend(ctx.edges[j].iter().copied());
            let piece = Piece::new(&super_edges, (x1, y1), &key);
            let bounds = ctx.bounds.with_pulped(2 * ctx.bounds.pulped);
            let Ok(sf) = piece.solve(&ps, CitrusSolveMode::Free, bounds) else { continue };
            let (apieces, astems) = ctx.arc(a_first, a_len, &id);
            let Ok(af) = solve_chain(&apieces, &astems, &pa, ctx.bounds) else { continue };
            let (bpieces, bstems) = ctx.arc(b_first, b_len, &id);
            let Ok(bf) = solve_chain(&bpieces, &bstems, &pb, ctx.bounds) else { continue };
            let all: Vec<Edge> = sf.into_iter().chain(af).chain(bf).collect();
            keep_best(&mut best, finish(ctx.g, t, &all));
        }
    }
    best
}

fn case_three(ctx: &CycleCtx, t: &TerminalSet) -> Option<SteinerForest> {
    let m = ctx.m();
    let id = |v: usize| v;
    let mut best = None;
    for i in 0..m {
        for j in 0..m {
            if i == j || (j + 1) % m == i {
                continue;
            }
            let (x1, y1, x2, y2) = (ctx.stem(i), ctx.stem(i + 1), ctx.stem(j), ctx.stem(j + 1));
            let a_first = i + 1;
            let a_len = (j + m - i - 1) % m;
            let b_first = j + 1;
            let b_len = (i + m - j - 1) % m;
            let key = |v: usize| if v == x2 { y1 } else { v };
            let in_a = |v: usize| ctx.in_arc(v, a_first, a_len);
            let in_b = |v: usize| ctx.in_arc(v, b_first, b_len);
            let in_i = |v: usize| ctx.in_piece(v, i);
            let in_j = |v: usize| ctx.in_piece(v, j);
            let in_m = |v: usize| in_i(v) || in_j(v);
            let mut pa = vec![(y1, x2)];
            let mut pb = Vec::new();
            let mut pm = Vec::new();
            let mut ok = true;
            for &(s, u) in t.pairs() {
                if in_a(s) && in_a(u) {
                    pa.push((s, u));
                } else if in_b(s) && in_b(u) {
                    pb.push((s, u));
                } else if in_m(s) && in_m(u) {
                    pm.push((key(s), key(u)));
                } else {
                    let inner_of = |v: usize| in_m(v) && !in_a(v) && !in_b(v);
                    let (inner, other) = if inner_of(s) { (s, u) } else { (u, s) };
                    if !inner_of(inner) || in_m(other) {
                        ok = false;
                        break;
                    }
                    if in_a(other) {
                        pm.push((key(inner), y1));
                        pa.push((other, y1));
                    } else if in_i(inner) {
                        pm.push((inner, x1));
                        pb.push((other, x1));
                    } else {
                        pm.push((inner, y2));
                        pb.push((other, y2));
                    }
                }
            }
            if !ok {
                continue;
            }
            let mid = vec![
                Piece::new(&ctx.edges[i], (x1, y1), &key),
                Piece::new(&ctx.edges[j], (x2, y2), &key),
            ];
            let Ok(mf) = solve_chain(&mid, &[x1, y1, y2], &pm, ctx.bounds) else { continue };
            let (apieces, astems) = ctx.arc(a_first, a_len, &id);
            let Ok(af) = solve_chain(&apieces, &astems, &pa, ctx.bounds) else { continue };
            let (bpieces, bstems) = ctx.arc(b_first, b_len, &id);
            let Ok(bf) = solve_chain(&bpieces, &bstems, &pb, ctx.bounds) else { continue };
            let all: Vec<Edge> = mf.into_iter().chain(af).chain(bf).collect();
            keep_best(&mut best, finish(ctx.g, t, &all));
        }
    }
    best
}
