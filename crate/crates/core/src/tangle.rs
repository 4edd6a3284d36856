//! Entangled lemon bushes: branching over patterns of the stem and tangle.
//!
//! A pattern fixes which lemons carry a path between their ends and which
//! tangle vertices join several stem vertices. For each pattern, schools are
//! filtered by a handful of rejection rules, terminal tangle vertices are
//! reduced to their necessary edges and degree-two tangle vertices are folded
//! into lemons. What remains splits into lemon-sized pieces that the citrus
//! solver handles one at a time.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::citrus::BushDecomposition;
use crate::error::{Error, Result};
use crate::graph::{edge, spanning_forest, Edge, Graph, UnionFind};
use crate::lemon::{citrus_edges, CitrusSolveMode, LemonBounds, Piece};
use crate::oracle::{check_feasible_instance, is_feasible, schools, SteinerForest, TerminalSet};

/// Flower edges chosen to carry an end-to-end path, and tangle vertices
/// with the stem neighbours they join. Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    pub flower: Vec<Edge>,
    pub tangle: Vec<(usize, Vec<usize>)>,
}

impl Pattern {
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = self.flower.clone();
        for (y, nbrs) in &self.tangle {
            out.extend(nbrs.iter().map(|&x| edge(*y, x)));
        }
        out.sort_unstable();
        out
    }

    pub fn joins(&self, y: usize) -> Option<&[usize]> {
        self.tangle
            .binary_search_by_key(&y, |(v, _)| *v)
            .ok()
            .map(|i| self.tangle[i].1.as_slice())
    }
}

/// Every pattern over the given stem, tangle and flower: forests in the
/// graph of flower edges and stem–tangle edges in which each used tangle
/// vertex has degree at least two.
pub fn enumerate_patterns(stem: &[usize], tangle: &[usize], flower: &[Edge], g: &Graph) -> Vec<Pattern> {
    enumerate_capped(stem, tangle, flower, g, usize::MAX).expect("uncapped")
}

/// As [`enumerate_patterns`], giving up with `None` past `cap` patterns.
pub fn enumerate_capped(
    stem: &[usize],
    tangle: &[usize],
    flower: &[Edge],
    g: &Graph,
    cap: usize,
) -> Option<Vec<Pattern>> {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &x) in stem.iter().enumerate() {
        pos[x] = i;
    }
    let mut ys: Vec<(usize, Vec<usize>)> = tangle
        .iter()
        .map(|&y| (y, g.neighbors(y).iter().copied().filter(|&x| pos[x] != usize::MAX).collect()))
        .filter(|(_, n): &(usize, Vec<usize>)| n.len() >= 2)
        .collect();
    ys.sort();
    let mut flower: Vec<Edge> = flower.to_vec();
    flower.sort_unstable();
    let mut en = Enumerator {
        pos,
        flower,
        ys,
        cap,
        out: Vec::new(),
        chosen: Vec::new(),
        picked: Vec::new(),
    };
    en.flower_step(0, UnionFind::new(stem.len()));
    if en.out.len() > cap {
        None
    } else {
        Some(en.out)
    }
}

struct Enumerator {
    pos: Vec<usize>,
    flower: Vec<Edge>,
    ys: Vec<(usize, Vec<usize>)>,
    cap: usize,
    out: Vec<Pattern>,
    chosen: Vec<Edge>,
    picked: Vec<(usize, Vec<usize>)>,
}

impl Enumerator {
    fn full(&self) -> bool {
        self.out.len() > self.cap
    }

    fn flower_step(&mut self, i: usize, uf: UnionFind) {
        if self.full() {
            return;
        }
        if i == self.flower.len() {
            self.tangle_step(0, uf);
            return;
        }
        self.flower_step(i + 1, uf.clone());
        let (u, v) = self.flower[i];
        let mut with = uf;
        if with.union(self.pos[u], self.pos[v]) {
            self.chosen.push((u, v));
            self.flower_step(i + 1, with);
            self.chosen.pop();
        }
    }

    fn tangle_step(&mut self, j: usize, uf: UnionFind) {
        if self.full() {
            return;
        }
        if j == self.ys.len() {
            self.out.push(Pattern {
                flower: self.chosen.clone(),
                tangle: self.picked.clone(),
            });
            return;
        }
        self.tangle_step(j + 1, uf.clone());
        let (y, nbrs) = self.ys[j].clone();
        let d = nbrs.len();
        for mask in 1usize..(1 << d) {
            if mask.count_ones() < 2 {
                continue;
            }
            let subset: Vec<usize> = (0..d).filter(|b| mask >> b & 1 == 1).map(|b| nbrs[b]).collect();
            let mut next = uf.clone();
            let mut roots: Vec<usize> = subset.iter().map(|&x| next.find(self.pos[x])).collect();
            roots.sort_unstable();
            roots.dedup();
            if roots.len() < subset.len() {
                continue;
            }
            for w in subset.windows(2) {
                next.union(self.pos[w[0]], self.pos[w[1]]);
            }
            self.picked.push((y, subset));
            self.tangle_step(j + 1, next);
            self.picked.pop();
            if self.full() {
                return;
            }
        }
    }
}

/// Which check threw a pattern out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rejection {
    /// One of the five school rules, numbered 1 to 5.
    Rule(u8),
    /// A reduction rule (1 to 3) found no edge to keep.
    Reduction(u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternOutcome {
    Rejected(Rejection),
    Solved {
        /// `None` when the assembled edge set misses a demand.
        forest: Option<SteinerForest>,
        folds: usize,
        reductions: [usize; 3],
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleStats {
    pub patterns: usize,
    pub rejected_by_rule: [usize; 5],
    pub rejected_by_reduction: [usize; 3],
    pub reductions: [usize; 3],
    pub folds: usize,
    pub infeasible: usize,
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntangledSolution {
    pub forest: SteinerForest,
    pub pattern: Pattern,
    pub stats: TangleStats,
}

#[derive(Clone, Debug)]
struct Lemon {
    ends: Edge,
    edges: Vec<Edge>,
    interior: Vec<usize>,
}

type CacheKey = (Vec<Edge>, Edge, Vec<(usize, usize)>, u8);

/// The instance with every terminal stem vertex moved onto a fresh pendant
/// copy, so no stem vertex is a terminal. Copies join the tangle.
pub struct Prepared {
    pub graph: Graph,
    pub terminals: TerminalSet,
    pub stem: Vec<usize>,
    pub tangle: Vec<usize>,
    pub flower: Vec<Edge>,
    pub original_n: usize,
    lemons: Vec<Lemon>,
    bounds: LemonBounds,
    cache: Mutex<HashMap<CacheKey, Result<Vec<Edge>>>>,
}

pub fn prepare(g: &Graph, bush: &BushDecomposition, t: &TerminalSet, bounds: LemonBounds) -> Result<Prepared> {
    t.validate_for(g)?;
    if !bush.is_valid_for(g) {
        return Err(Error::InvalidInput("bush does not decompose the graph".into()));
    }
    let mut graph = g.clone();
    let mut in_stem = vec![false; g.n()];
    for &x in &bush.stem {
        in_stem[x] = true;
    }
    let mut copy = BTreeMap::new();
    for v in t.terminals() {
        if in_stem[v] {
            let c = graph.add_vertex();
            graph.add_edge(v, c);
            copy.insert(v, c);
        }
    }
    let terminals = t.map(|v| copy.get(&v).copied().unwrap_or(v));
    let mut tangle = bush.tangle.clone();
    tangle.extend(copy.values().copied());
    tangle.sort_unstable();
    let lemons = bush
        .citruses
        .iter()
        .map(|c| Lemon {
            ends: edge(c.ends.0, c.ends.1),
            edges: citrus_edges(g, c),
            interior: c.interior(),
        })
        .collect();
    let mut stem = bush.stem.clone();
    stem.sort_unstable();
    Ok(Prepared {
        graph,
        terminals,
        stem,
        tangle,
        flower: bush.flower.clone(),
        original_n: g.n(),
        lemons,
        bounds,
        cache: Mutex::new(HashMap::new()),
    })
}

impl Prepared {
    pub fn patterns(&self) -> Vec<Pattern> {
        enumerate_patterns(&self.stem, &self.tangle, &self.flower, &self.graph)
    }

    /// The pattern traced by a forest of the prepared graph: lemons whose
    /// ends it joins inside the lemon, and tangle vertices of degree two or
    /// more.
    pub fn pattern_of(&self, forest: &[Edge]) -> Pattern {
        let used: BTreeSet<Edge> = forest.iter().map(|&(u, v)| edge(u, v)).collect();
        let mut flower = Vec::new();
        for l in &self.lemons {
            let mut uf = UnionFind::new(self.graph.n());
            for e in l.edges.iter().filter(|e| used.contains(e)) {
                uf.union(e.0, e.1);
            }
            if uf.same(l.ends.0, l.ends.1) {
                flower.push(l.ends);
            }
        }
        flower.sort_unstable();
        let mut tangle = Vec::new();
        for &y in &self.tangle {
            let nbrs: Vec<usize> = self
                .graph
                .neighbors(y)
                .iter()
                .copied()
                .filter(|&x| used.contains(&edge(x, y)))
                .collect();
            if nbrs.len() >= 2 {
                tangle.push((y, nbrs));
            }
        }
        Pattern { flower, tangle }
    }

    /// Runs the rules for one pattern and assembles its candidate forest.
    pub fn solve_pattern(&self, pattern: &Pattern) -> Result<PatternOutcome> {
        let mut br = Branch::new(self, pattern);
        let mut folds = 0;
        let mut reductions = [0usize; 3];
        loop {
            let plans = match br.plans() {
                Ok(p) => p,
                Err(r) => return Ok(PatternOutcome::Rejected(Rejection::Rule(r))),
            };
            if let Err(r) = br.reduce(&plans, &mut reductions) {
                return Ok(PatternOutcome::Rejected(Rejection::Reduction(r)));
            }
            let f = br.fold();
            folds += f;
            if f == 0 || folds > self.graph.n() {
                break;
            }
        }
        let forest = br.assemble()?;
        Ok(PatternOutcome::Solved { forest, folds, reductions })
    }

    fn solve_piece(&self, edges: &[Edge], ends: Edge, key: &dyn Fn(usize) -> usize, pairs: Vec<(usize, usize)>, mode: CitrusSolveMode, bounds: LemonBounds) -> Result<Vec<Edge>> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().filter(|(s, t)| s != t).map(|(s, t)| edge(s, t)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        let tag = match mode {
            CitrusSolveMode::Identified => 0,
            CitrusSolveMode::Intertwined => 1,
            CitrusSolveMode::Free => 2,
        };
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        let ck = (sorted, ends, pairs.clone(), tag);
        if let Some(r) = self.cache.lock().expect("cache").get(&ck) {
            return r.clone();
        }
        let piece = Piece::new(edges, ends, key);
        let r = piece.solve(&pairs, mode, bounds);
        self.cache.lock().expect("cache").insert(ck, r.clone());
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Loc {
    Tangle,
    Lemon(usize),
    Other,
}

/// How a school with terminals inside lemons is anchored to the strong
/// subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Plan {
    /// A strong lemon for the subset.
    Strong(usize),
    /// Delicate lemons forming a star centred at the subset.
    Star(usize),
    /// Delicate lemons all between the same two subsets.
    Pair(usize, usize),
}

/// The mutable per-pattern state.
struct Branch<'a> {
    prep: &'a Prepared,
    pattern: &'a Pattern,
    adj: BTreeMap<usize, Vec<usize>>,
    lemons: Vec<Lemon>,
    owner: Vec<Option<usize>>,
    comp: Vec<usize>,
    subsets: Vec<Vec<usize>>,
    in_pattern: Vec<bool>,
}

impl<'a> Branch<'a> {
    fn new(prep: &'a Prepared, pattern: &'a Pattern) -> Branch<'a> {
        let n = prep.graph.n();
        let mut in_pattern = vec![false; n];
        let mut adj = BTreeMap::new();
        for &y in &prep.tangle {
            let nbrs = match pattern.joins(y) {
                Some(j) => {
                    in_pattern[y] = true;
                    j.to_vec()
                }
                None => prep.graph.neighbors(y).iter().copied().collect(),
            };
            adj.insert(y, nbrs);
        }
        let mut uf = UnionFind::new(n);
        for &(u, v) in &pattern.flower {
            uf.union(u, v);
        }
        for (_, nbrs) in &pattern.tangle {
            for w in nbrs.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &x in &prep.stem {
            groups.entry(uf.find(x)).or_default().push(x);
        }
        let mut subsets: Vec<Vec<usize>> = groups.into_values().collect();
        subsets.sort();
        let mut comp = vec![usize::MAX; n];
        for (i, s) in subsets.iter().enumerate() {
            for &x in s {
                comp[x] = i;
            }
        }
        let mut owner = vec![None; n];
        for (i, l) in prep.lemons.iter().enumerate() {
            for &v in &l.interior {
                owner[v] = Some(i);
            }
        }
        Branch {
            prep,
            pattern,
            adj,
            lemons: prep.lemons.clone(),
            owner,
            comp,
            subsets,
            in_pattern,
        }
    }

    fn loc(&self, v: usize) -> Loc {
        if let Some(l) = self.owner[v] {
            Loc::Lemon(l)
        } else if self.adj.contains_key(&v) {
            Loc::Tangle
        } else {
            Loc::Other
        }
    }

    fn end_comps(&self, l: usize) -> (usize, usize) {
        let (u, v) = self.lemons[l].ends;
        let (a, b) = (self.comp[u], self.comp[v]);
        (a.min(b), a.max(b))
    }

    /// Subsets with a neighbour of every vertex of `s`.
    fn covering(&self, s: &[usize]) -> Vec<usize> {
        (0..self.subsets.len())
            .filter(|&a| s.iter().all(|y| self.adj[y].iter().any(|&x| self.comp[x] == a)))
            .collect()
    }

    /// Applies the rejection rules to every school and returns the anchor
    /// plan of each school with a terminal inside a lemon.
    fn plans(&self) -> std::result::Result<Vec<(Vec<usize>, Plan)>, u8> {
        let mut out = Vec::new();
        let mut first: Option<u8> = None;
        for s in schools(&self.prep.terminals).parts() {
            let rule = match self.school_plan(s) {
                Ok(Some(p)) => {
                    out.push((s.clone(), p));
                    continue;
                }
                Ok(None) => continue,
                Err(r) => r,
            };
            first = Some(first.map_or(rule, |f| f.min(rule)));
        }
        match first {
            Some(r) => Err(r),
            None => Ok(out),
        }
    }

    fn school_plan(&self, s: &[usize]) -> std::result::Result<Option<Plan>, u8> {
        let mut strong = BTreeSet::new();
        let mut delicate = BTreeSet::new();
        let mut all_tangle = true;
        for &v in s {
            match self.loc(v) {
                Loc::Tangle => {}
                Loc::Lemon(l) => {
                    all_tangle = false;
                    let (a, b) = self.end_comps(l);
                    if a == b {
                        strong.insert(a);
                    } else {
                        delicate.insert((a, b));
                    }
                }
                Loc::Other => all_tangle = false,
            }
        }
        if all_tangle {
            if self.covering(s).is_empty() {
                return Err(1);
            }
            return Ok(None);
        }
        if strong.len() >= 2 {
            return Err(2);
        }
        let d: Vec<(usize, usize)> = delicate.into_iter().collect();
        for (i, &(a, b)) in d.iter().enumerate() {
            for &(c, e) in &d[i + 1..] {
                if a != c && a != e && b != c && b != e {
                    return Err(3);
                }
            }
        }
        for &(a, b) in &d {
            for &(c, e) in &d {
                if c == b && e != a && d.contains(&(a.min(e), a.max(e))) {
                    return Err(4);
                }
            }
        }
        if let Some(&a) = strong.iter().next() {
            if d.iter().any(|&(b, c)| b != a && c != a) {
                return Err(5);
            }
            return Ok(Some(Plan::Strong(a)));
        }
        match d.len() {
            0 => Ok(None),
            1 => Ok(Some(Plan::Pair(d[0].0, d[0].1))),
            _ => {
                let (a, b) = d[0];
                let c = if d.iter().all(|&(p, q)| p == a || q == a) { a } else { b };
                Ok(Some(Plan::Star(c)))
            }
        }
    }

    fn reduce(&mut self, plans: &[(Vec<usize>, Plan)], count: &mut [usize; 3]) -> std::result::Result<(), u8> {
        for (s, plan) in plans {
            for &y in s {
                if self.in_pattern[y] || !self.adj.contains_key(&y) {
                    continue;
                }
                let nbrs = &self.adj[&y];
                let best = |a: usize| nbrs.iter().copied().filter(|&x| self.comp[x] == a).min();
                let (kept, rule): (Vec<usize>, u8) = match *plan {
                    Plan::Strong(a) => (best(a).into_iter().collect(), 1),
                    Plan::Star(a) => (best(a).into_iter().collect(), 2),
                    Plan::Pair(a, b) => (best(a).into_iter().chain(best(b)).collect(), 3),
                };
                if kept.is_empty() {
                    return Err(rule);
                }
                count[rule as usize - 1] += 1;
                self.adj.insert(y, kept);
            }
        }
        Ok(())
    }

    /// Folds every degree-two tangle vertex outside the pattern into the
    /// lemon between its neighbours.
    fn fold(&mut self) -> usize {
        let ys: Vec<usize> = self
            .adj
            .iter()
            .filter(|(y, n)| !self.in_pattern[**y] && n.len() == 2)
            .map(|(y, _)| *y)
            .collect();
        for &y in &ys {
            let nbrs = self.adj.remove(&y).expect("tangle vertex");
            let (u, v) = (nbrs[0], nbrs[1]);
            let ends = edge(u, v);
            let l = match self.lemons.iter().position(|l| l.ends == ends) {
                Some(l) => l,
                None => {
                    self.lemons.push(Lemon {
                        ends,
                        edges: Vec::new(),
                        interior: Vec::new(),
                    });
                    self.lemons.len() - 1
                }
            };
            self.lemons[l].edges.push(edge(y, u));
            self.lemons[l].edges.push(edge(y, v));
            self.lemons[l].interior.push(y);
            self.owner[y] = Some(l);
        }
        ys.len()
    }

    /// Which side of the delicate pair (a, b) the vertex t attaches to.
    fn side(&self, t: usize, a: usize, b: usize) -> Option<usize> {
        match self.loc(t) {
            Loc::Tangle => {
                let nbrs = &self.adj[&t];
                if nbrs.is_empty() {
                    return None;
                }
                for c in [a, b] {
                    if nbrs.iter().all(|&x| self.comp[x] == c) {
                        return Some(c);
                    }
                }
                None
            }
            Loc::Lemon(l) => {
                let (p, q) = self.end_comps(l);
                for (c, other) in [(a, b), (b, a)] {
                    let far = if p == c { Some(q) } else if q == c { Some(p) } else { None };
                    if far.is_some_and(|f| f != other) {
                        return Some(c);
                    }
                }
                None
            }
            Loc::Other => None,
        }
    }

    fn assemble(&self) -> Result<Option<SteinerForest>> {
        let prep = self.prep;
        let t = &prep.terminals;
        let mut out: Vec<Edge> = self.pattern.tangle.iter().flat_map(|(y, n)| n.iter().map(move |&x| edge(*y, x))).collect();
        let sch = schools(t);
        let index = sch.index(prep.graph.n());
        for (&y, nbrs) in &self.adj {
            if self.in_pattern[y] || !t.is_terminal(y) {
                continue;
            }
            let s = &sch.parts()[index[y].expect("terminal")];
            if s.iter().all(|&v| self.loc(v) == Loc::Tangle) {
                if let Some(&a) = self.covering(s).first() {
                    if let Some(x) = nbrs.iter().copied().filter(|&x| self.comp[x] == a).min() {
                        out.push(edge(y, x));
                    }
                }
            } else if nbrs.len() == 1 {
                out.push(edge(y, nbrs[0]));
            }
        }
        let flower: BTreeSet<Edge> = self.pattern.flower.iter().copied().collect();
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (l, lemon) in self.lemons.iter().enumerate() {
            let (a, b) = self.end_comps(l);
            if a != b {
                groups.entry((a, b)).or_default().push(l);
                continue;
            }
            let (u, _) = lemon.ends;
            let pairs: Vec<(usize, usize)> = t
                .pairs()
                .iter()
                .filter_map(|&(s, r)| match (self.owner[s] == Some(l), self.owner[r] == Some(l)) {
                    (true, true) => Some((s, r)),
                    (true, false) => Some((s, u)),
                    (false, true) => Some((r, u)),
                    (false, false) => None,
                })
                .collect();
            let mode = if flower.contains(&lemon.ends) {
                CitrusSolveMode::Intertwined
            } else {
                CitrusSolveMode::Identified
            };
            if mode == CitrusSolveMode::Identified && pairs.is_empty() {
                continue;
            }
            out.extend(prep.solve_piece(&lemon.edges, lemon.ends, &|v| v, pairs, mode, prep.bounds)?);
        }
        let k = prep.stem.len().max(1);
        let group_bounds = prep.bounds.with_pulped(k * k * prep.bounds.ell);
        for ((a, b), ls) in groups {
            let interior: BTreeSet<usize> = ls.iter().flat_map(|&l| self.lemons[l].interior.iter().copied()).collect();
            if interior.is_empty() {
                continue;
            }
            let side_end = |l: usize, c: usize| {
                let (u, v) = self.lemons[l].ends;
                if self.comp[u] == c {
                    u
                } else {
                    v
                }
            };
            let a_rep = ls.iter().map(|&l| side_end(l, a)).min().expect("group");
            let b_rep = ls.iter().map(|&l| side_end(l, b)).min().expect("group");
            let edges: Vec<Edge> = ls
                .iter()
                .flat_map(|&l| self.lemons[l].edges.iter().copied())
                .filter(|&(u, v)| self.comp[u] == usize::MAX || self.comp[v] == usize::MAX)
                .collect();
            let comp = &self.comp;
            let key = move |v: usize| {
                if comp[v] == a {
                    a_rep
                } else if comp[v] == b {
                    b_rep
                } else {
                    v
                }
            };
            let mut pairs = Vec::new();
            for &(s, r) in t.pairs() {
                match (interior.contains(&s), interior.contains(&r)) {
                    (true, true) => pairs.push((s, r)),
                    (true, false) | (false, true) => {
                        let (inside, outside) = if interior.contains(&s) { (s, r) } else { (r, s) };
                        match self.side(outside, a, b) {
                            Some(c) if c == a => pairs.push((inside, a_rep)),
                            Some(_) => pairs.push((inside, b_rep)),
                            None => {}
                        }
                    }
                    (false, false) => {}
                }
            }
            if pairs.is_empty() {
                continue;
            }
            out.extend(prep.solve_piece(&edges, (a_rep, b_rep), &key, pairs, CitrusSolveMode::Free, group_bounds)?);
        }
        let forest = spanning_forest(prep.graph.n(), &out);
        if is_feasible(&prep.graph, t, &forest) {
            Ok(Some(SteinerForest::new(forest)))
        } else {
            Ok(None)
        }
    }
}

/// Minimum Steiner forest of an entangled lemon bush.
pub fn solve_entangled(g: &Graph, bush: &BushDecomposition, t: &TerminalSet, bounds: LemonBounds) -> Result<EntangledSolution> {
    solve_entangled_within(g, bush, t, bounds, usize::MAX)
}

/// As [`solve_entangled`], refusing with `NotApplicable` when the bush has
/// more than `max_patterns` patterns.
pub fn solve_entangled_within(
    g: &Graph,
    bush: &BushDecomposition,
    t: &TerminalSet,
    bounds: LemonBounds,
    max_patterns: usize,
) -> Result<EntangledSolution> {
    check_feasible_instance(g, t)?;
    let prep = prepare(g, bush, t, bounds)?;
    let patterns = enumerate_capped(&prep.stem, &prep.tangle, &prep.flower, &prep.graph, max_patterns)
        .ok_or_else(|| Error::NotApplicable(format!("more than {max_patterns} patterns")))?;
    let outcomes: Vec<Result<PatternOutcome>> = patterns.par_iter().map(|p| prep.solve_pattern(p)).collect();
    let mut stats = TangleStats {
        patterns: patterns.len(),
        ..Default::default()
    };
    let mut best: Option<(SteinerForest, usize)> = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        match o? {
            PatternOutcome::Rejected(Rejection::Rule(r)) => stats.rejected_by_rule[r as usize - 1] += 1,
            PatternOutcome::Rejected(Rejection::Reduction(r)) => stats.rejected_by_reduction[r as usize - 1] += 1,
            PatternOutcome::Solved { forest, folds, reductions } => {
                stats.folds += folds;
                for (c, r) in stats.reductions.iter_mut().zip(reductions) {
                    *c += r;
                }
                match forest {
                    None => stats.infeasible += 1,
                    Some(f) => {
                        stats.candidates += 1;
                        if best.as_ref().map_or(true, |(b, _)| f.better_than(b)) {
                            best = Some((f, i));
                        }
                    }
                }
            }
        }
    }
    let (f, i) = best.ok_or_else(|| Error::Infeasible("no pattern yields a feasible forest".into()))?;
    let forest = SteinerForest::new(f.edges().iter().copied().filter(|&(u, v)| u < prep.original_n && v < prep.original_n));
    debug_assert!(is_feasible(g, t, forest.edges()));
    Ok(EntangledSolution {
        forest,
        pattern: patterns[i].clone(),
        stats,
    })
}
