//! Terminal pairs, schools, forests, and the exact reference solvers.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{data_lines, edge, is_forest, parse_pair, Edge, Graph, Identification, UnionFind};

/// Demand pairs, normalised (smaller vertex first), sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TerminalSet {
    pairs: Vec<(usize, usize)>,
}

impl TerminalSet {
    pub fn new(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(pairs.len());
        for &(s, t) in pairs {
            if s == t {
                return Err(Error::InvalidInput(format!("terminal pair ({s},{t}) is trivial")));
            }
            out.push(edge(s, t));
        }
        out.sort_unstable();
        out.dedup();
        Ok(TerminalSet { pairs: out })
    }

    /// Like `new` but silently drops trivial pairs; used after identifications.
    pub fn from_pairs_lossy(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut out: Vec<(usize, usize)> = pairs
            .into_iter()
            .filter(|&(s, t)| s != t)
            .map(|(s, t)| edge(s, t))
            .collect();
        out.sort_unstable();
        out.dedup();
        TerminalSet { pairs: out }
    }

    pub fn empty() -> Self {
        TerminalSet::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn terminals(&self) -> BTreeSet<usize> {
        self.pairs.iter().flat_map(|&(s, t)| [s, t]).collect()
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.pairs.iter().any(|&(s, t)| s == v || t == v)
    }

    pub fn max_vertex(&self) -> Option<usize> {
        self.pairs.iter().map(|&(_, t)| t).max()
    }

    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        match self.max_vertex() {
            Some(v) if v >= g.n() => Err(Error::InvalidInput(format!(
                "terminal {v} out of range for n={}",
                g.n()
            ))),
            _ => Ok(()),
        }
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> TerminalSet {
        TerminalSet::from_pairs_lossy(self.pairs.iter().map(|&(s, t)| (f(s), f(t))))
    }

    /// T † D under an identification.
    pub fn identified(&self, id: &Identification) -> TerminalSet {
        self.map(|v| id.map_vertex(v))
    }

    /// Only the pairs with both ends in `keep`, relabelled by `local`.
    pub fn restrict(&self, local: &[usize]) -> TerminalSet {
        TerminalSet::from_pairs_lossy(self.pairs.iter().filter_map(|&(s, t)| {
            (local[s] != usize::MAX && local[t] != usize::MAX).then(|| (local[s], local[t]))
        }))
    }

    pub fn with_pair(&self, s: usize, t: usize) -> TerminalSet {
        let mut pairs = self.pairs.clone();
        pairs.push((s, t));
        TerminalSet::from_pairs_lossy(pairs)
    }

    pub fn parse(text: &str) -> Result<TerminalSet> {
        let mut lines = data_lines(text);
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing pair count".into(),
        })?;
        let p: usize = header.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("expected a pair count, got `{header}`"),
        })?;
        let mut pairs = Vec::with_capacity(p);
        for _ in 0..p {
            let (line_no, body) = lines.next().ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected {p} pairs"),
            })?;
            let [s, t] = parse_pair(line_no, body)?;
            if s == t {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("trivial pair {s} {t}"),
                });
            }
            pairs.push((s, t));
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing data".into(),
            });
        }
        TerminalSet::new(&pairs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.pairs.len());
        for &(s, t) in &self.pairs {
            let _ = writeln!(out, "{s} {t}");
        }
        out
    }
}

/// Transitive-closure classes of the terminal pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schools {
    parts: Vec<Vec<usize>>,
}

impl Schools {
    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// School index for every vertex below `n` (None for non-terminals).
    pub fn index(&self, n: usize) -> Vec<Option<usize>> {
        let mut idx = vec![None; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                idx[v] = Some(i);
            }
        }
        idx
    }
}

pub fn schools(t: &TerminalSet) -> Schools {
    let terms: Vec<usize> = t.terminals().into_iter().collect();
    let pos = |v: usize| terms.binary_search(&v).expect("terminal");
    let mut uf = UnionFind::new(terms.len());
    for &(s, u) in t.pairs() {
        uf.union(pos(s), pos(u));
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &v) in terms.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(v);
    }
    let mut parts: Vec<Vec<usize>> = groups.into_values().collect();
    parts.sort();
    Schools { parts }
}

/// An acyclic edge set meeting every demand; edges kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SteinerForest {
    edges: Vec<Edge>,
}

impl SteinerForest {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut e: Vec<Edge> = edges.into_iter().map(|(u, v)| edge(u, v)).collect();
        e.sort_unstable();
        e.dedup();
        SteinerForest { edges: e }
    }

    pub fn empty() -> Self {
        SteinerForest { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Smaller size first, then lexicographically smaller edge list.
    pub fn better_than(&self, other: &SteinerForest) -> bool {
        (self.size(), &self.edges) < (other.size(), &other.edges)
    }
}

/// Checks that `edges` are edges of `g`, acyclic, and connect every pair.
pub fn is_feasible(g: &Graph, t: &TerminalSet, edges: &[Edge]) -> bool {
    if !edges.iter().all(|&(u, v)| g.has_edge(u, v)) || !is_forest(g.n(), edges) {
        return false;
    }
    connects(g.n(), t, edges)
}

/// Whether the edges (acyclic or not) connect every pair.
pub fn connects(n: usize, t: &TerminalSet, edges: &[Edge]) -> bool {
    let mut uf = UnionFind::new(n);
    for &(u, v) in edges {
        uf.union(u, v);
    }
    t.pairs().iter().all(|&(s, u)| uf.same(s, u))
}

/// Errors with `Infeasible` when some school meets two components of g.
pub fn check_feasible_instance(g: &Graph, t: &TerminalSet) -> Result<()> {
    t.validate_for(g)?;
    let comp = g.component_ids();
    for &(s, u) in t.pairs() {
        if comp[s] != comp[u] {
            return Err(Error::Infeasible(format!("terminals {s} and {u} lie in different components")));
        }
    }
    Ok(())
}

/// Largest graph accepted by the full-set dynamic programme.
pub const EXACT_LIMIT: usize = 24;

/// Minimum Steiner forest by dynamic programming over full vertex sets: a set
/// S is full when every school lies inside S or outside S, and
/// f(S) = min f(S \ C) + |C| - 1 over connected full C ⊆ S holding at least one
/// school. C is chosen to contain the smallest terminal of S, which loses
/// nothing since that terminal lies in some tree of an optimal forest.
pub fn solve_exact(g: &Graph, t: &TerminalSet) -> Result<SteinerForest> {
    check_feasible_instance(g, t)?;
    if t.is_empty() {
        return Ok(SteinerForest::empty());
    }
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge(format!("exact solver limited to {EXACT_LIMIT} vertices, got {n}")));
    }
    let sch = schools(t);
    let school_masks: Vec<u32> = sch
        .parts()
        .iter()
        .map(|p| p.iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let terminal_mask = school_masks.iter().fold(0u32, |a, &b| a | b);
    let full = |mask: u32| school_masks.iter().all(|&sm| mask & sm == 0 || mask & sm == sm);

    let size = 1usize << n;
    let connected = connectivity_table(g);
    const INF: u8 = u8::MAX;
    let mut best = vec![INF; size];
    let mut choice = vec![0u32; size];
    best[0] = 0;
    for s in 1..size as u32 {
        let terms = s & terminal_mask;
        if terms == 0 {
            best[s as usize] = 0;
            continue;
        }
        if !full(s) {
            continue;
        }
        let low = terms & terms.wrapping_neg();
        let rest = s & !low;
        // enumerate C = low ∪ sub for every sub ⊆ rest
        let mut sub = rest;
        let mut value = INF;
        let mut pick = 0;
        loop {
            let c = sub | low;
            if connected[c as usize] && full(c) {
                let prev = best[(s & !c) as usize];
                if prev != INF {
                    let cand = prev + (c.count_ones() as u8 - 1);
                    if cand < value || (cand == value && c < pick) {
                        value = cand;
                        pick = c;
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[s as usize] = value;
        choice[s as usize] = pick;
    }
    let all = (size - 1) as u32;
    if best[all as usize] == INF {
        return Err(Error::Infeasible("no Steiner forest exists".into()));
    }
    let mut edges = Vec::new();
    let mut s = all;
    while s & terminal_mask != 0 {
        let c = choice[s as usize];
        let verts: Vec<usize> = (0..n).filter(|&v| c >> v & 1 == 1).collect();
        edges.extend(g.spanning_tree(&verts));
        s &= !c;
    }
    Ok(SteinerForest::new(edges))
}

/// connected[mask] for every vertex subset (the empty set counts as
/// disconnected so it is never chosen).
fn connectivity_table(g: &Graph) -> Vec<bool> {
    let n = g.n();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let size = 1usize << n;
    let mut connected = vec![false; size];
    for mask in 1..size as u32 {
        let start = mask & mask.wrapping_neg();
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = adj[v] & mask & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        connected[mask as usize] = seen == mask;
    }
    connected
}

/// Default edge cap for the brute-force solver.
pub const EXHAUSTIVE_CAP: usize = 22;

/// Brute force over edge subsets in order of size then lexicographic order;
/// the first feasible acyclic subset is returned.
pub fn solve_exhaustive(g: &Graph, t: &TerminalSet) -> Result<SteinerForest> {
    solve_exhaustive_capped(g, t, EXHAUSTIVE_CAP)
}

pub fn solve_exhaustive_capped(g: &Graph, t: &TerminalSet, cap: usize) -> Result<SteinerForest> {
    check_feasible_instance(g, t)?;
    let edges = g.edges();
    if edges.len() > cap {
        return Err(Error::TooLarge(format!("{} edges exceed the cap of {cap}", edges.len())));
    }
    solve_exhaustive_filtered(g, t, &edges, |_| true)
        .ok_or_else(|| Error::Infeasible("no Steiner forest exists".into()))
}

/// Smallest (then lexicographically first) acyclic feasible subset of
/// `candidates` accepted by `filter`.
pub fn solve_exhaustive_filtered(
    g: &Graph,
    t: &TerminalSet,
    candidates: &[Edge],
    filter: impl Fn(&[Edge]) -> bool,
) -> Option<SteinerForest> {
    let m = candidates.len();
    let mut chosen: Vec<Edge> = Vec::with_capacity(m);
    for k in 0..=m.min(g.n().saturating_sub(1)) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            chosen.clear();
            chosen.extend(idx.iter().map(|&i| candidates[i]));
            if is_forest(g.n(), &chosen) && connects(g.n(), t, &chosen) && filter(&chosen) {
                return Some(SteinerForest::new(chosen.iter().copied()));
            }
            if !next_combination(&mut idx, m) {
                break;
            }
        }
    }
    None
}

/// Advances `idx` to the next k-combination of 0..m in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
