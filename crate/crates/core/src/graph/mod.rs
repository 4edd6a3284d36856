//! Simple undirected graphs with dense vertex ids and the structural queries
//! shared by every solver.

mod blocks;
mod paths;
mod pattern;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use blocks::{biconnected_components, Block, BlockStructure};
pub use paths::{longest_cycle, longest_path};
pub use pattern::{find_pattern, ClawEmbedding, ComponentEmbedding, PathEmbedding};

/// An undirected edge, always stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge {u}-{v} out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from edges that are known to be valid; panics otherwise.
    pub fn build(n: usize, edges: &[(usize, usize)]) -> Self {
        Graph::from_edges(n, edges).expect("valid edge list")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    /// Returns true when the edge was not present before.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n() && v < self.n(), "bad edge {u}-{v}");
        self.adj[v].insert(u);
        self.adj[u].insert(v)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        self.adj[v].remove(&u);
        self.adj[u].remove(&v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.m());
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn isolate(&mut self, v: usize) {
        let nb: Vec<usize> = self.adj[v].iter().copied().collect();
        for u in nb {
            self.remove_edge(u, v);
        }
    }

    /// N(S): vertices outside `set` adjacent to some vertex of `set`.
    pub fn set_neighborhood(&self, set: &[usize]) -> BTreeSet<usize> {
        let inside: BTreeSet<usize> = set.iter().copied().collect();
        let mut out = BTreeSet::new();
        for &v in set {
            for &u in &self.adj[v] {
                if !inside.contains(&u) {
                    out.insert(u);
                }
            }
        }
        out
    }

    /// G[S] with vertices relabelled by their rank in sorted `set`; the
    /// returned vector maps local ids back to ids of `self`.
    pub fn induced(&self, set: &[usize]) -> (Graph, Vec<usize>) {
        let mut verts: Vec<usize> = set.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let mut h = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &u in &self.adj[v] {
                if local[u] != usize::MAX && local[u] > i {
                    h.add_edge(i, local[u]);
                }
            }
        }
        (h, verts)
    }

    /// G − S, relabelled; the map sends new ids to old ids.
    pub fn without(&self, removed: &[usize]) -> (Graph, Vec<usize>) {
        let gone: BTreeSet<usize> = removed.iter().copied().collect();
        let keep: Vec<usize> = (0..self.n()).filter(|v| !gone.contains(v)).collect();
        self.induced(&keep)
    }

    /// Connected components of the subgraph induced by `alive`, each sorted,
    /// listed by smallest vertex.
    pub fn components_where(&self, alive: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if !alive[s] || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &self.adj[v] {
                    if alive[u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_where(&vec![true; self.n()])
    }

    /// Component id for each vertex, numbered in `components()` order.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut id = vec![0; self.n()];
        for (c, comp) in self.components().iter().enumerate() {
            for &v in comp {
                id[v] = c;
            }
        }
        id
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_connected_set(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return true;
        }
        let mut alive = vec![false; self.n()];
        for &v in set {
            alive[v] = true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![set[0]];
        seen[set[0]] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if alive[u] && !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        let distinct: BTreeSet<usize> = set.iter().copied().collect();
        count == distinct.len()
    }

    /// BFS spanning tree of G[set] rooted at its smallest vertex, scanning
    /// neighbours in increasing order. Assumes G[set] connected.
    pub fn spanning_tree(&self, set: &[usize]) -> Vec<Edge> {
        let mut alive = vec![false; self.n()];
        for &v in set {
            alive[v] = true;
        }
        let Some(&root) = set.iter().min() else {
            return Vec::new();
        };
        let mut seen = vec![false; self.n()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut tree = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if alive[u] && !seen[u] {
                    seen[u] = true;
                    tree.push(edge(v, u));
                    queue.push_back(u);
                }
            }
        }
        tree.sort_unstable();
        tree
    }

    /// Graph on the same vertex set containing only `edges`.
    pub fn with_edges(n: usize, edges: &[Edge]) -> Graph {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut h = Graph::new(self.n());
        for (u, v) in self.edges() {
            h.add_edge(perm[u], perm[v]);
        }
        h
    }

    /// Parses the text format: `n m` then `m` lines `u v`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = data_lines(text);
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let [n, m] = parse_pair(line_no, header)?;
        let mut g = Graph::new(n);
        for _ in 0..m {
            let (line_no, body) = lines.next().ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected {m} edges"),
            })?;
            let [u, v] = parse_pair(line_no, body)?;
            if u >= n || v >= n || u == v {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("invalid edge {u} {v}"),
                });
            }
            g.add_edge(u, v);
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing data".into(),
            });
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

pub(crate) fn parse_pair(line: usize, body: &str) -> Result<[usize; 2]> {
    let parts: Vec<&str> = body.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("expected two integers, got `{body}`"),
        });
    }
    let mut out = [0; 2];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a non-negative integer: `{p}`"),
        })?;
    }
    Ok(out)
}

/// The result of merging vertex groups into single vertices.
#[derive(Clone, Debug)]
pub struct Identification {
    pub graph: Graph,
    /// Old vertex id to new vertex id.
    pub vertex_map: Vec<usize>,
    /// New id of each merged group, in input order.
    pub merged: Vec<usize>,
    edge_back: BTreeMap<Edge, Edge>,
}

impl Identification {
    pub fn original_edge(&self, e: Edge) -> Edge {
        self.edge_back[&edge(e.0, e.1)]
    }

    pub fn lift(&self, edges: &[Edge]) -> Vec<Edge> {
        let mut out: Vec<Edge> = edges.iter().map(|&e| self.original_edge(e)).collect();
        out.sort_unstable();
        out
    }

    pub fn map_vertex(&self, v: usize) -> usize {
        self.vertex_map[v]
    }
}

/// G † D: merges `d` into one vertex.
pub fn identify_set(g: &Graph, d: &[usize]) -> Result<Identification> {
    identify_groups(g, &[d.to_vec()])
}

/// Merges each group into a single vertex (overlapping groups are merged
/// together). Surviving vertices keep their relative order; a merged vertex
/// sits at the position of its smallest member. Each new edge remembers the
/// smallest original edge that produced it.
pub fn identify_groups(g: &Graph, groups: &[Vec<usize>]) -> Result<Identification> {
    let n = g.n();
    let mut rep: Vec<usize> = (0..n).collect();
    fn find(rep: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while rep[r] != r {
            r = rep[r];
        }
        let mut c = v;
        while rep[c] != r {
            let next = rep[c];
            rep[c] = r;
            c = next;
        }
        r
    }
    for group in groups {
        if group.is_empty() {
            return Err(Error::InvalidInput("cannot identify an empty set".into()));
        }
        if let Some(&bad) = group.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidInput(format!("vertex {bad} out of range")));
        }
        for &v in &group[1..] {
            let a = find(&mut rep, group[0]);
            let b = find(&mut rep, v);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                rep[hi] = lo;
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut rep, v)).collect();
    let mut new_id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if roots[v] == v {
            new_id[v] = next;
            next += 1;
        }
    }
    let vertex_map: Vec<usize> = (0..n).map(|v| new_id[roots[v]]).collect();
    let mut h = Graph::new(next);
    let mut edge_back = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (vertex_map[u], vertex_map[v]);
        if a != b {
            h.add_edge(a, b);
            edge_back.entry(edge(a, b)).or_insert((u, v));
        }
    }
    let merged = groups.iter().map(|grp| vertex_map[grp[0]]).collect();
    Ok(Identification {
        graph: h,
        vertex_map,
        merged,
        edge_back,
    })
}

/// Reports whether an edge set is acyclic, via union-find over `n` vertices.
pub fn is_forest(n: usize, edges: &[Edge]) -> bool {
    let mut uf = UnionFind::new(n);
    edges.iter().all(|&(u, v)| uf.union(u, v))
}

/// Keeps a spanning forest of the given edges (first-come order after sorting).
pub fn spanning_forest(n: usize, edges: &[Edge]) -> Vec<Edge> {
    let mut sorted: Vec<Edge> = edges.iter().map(|&(u, v)| edge(u, v)).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut uf = UnionFind::new(n);
    sorted.into_iter().filter(|&(u, v)| uf.union(u, v)).collect()
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = v;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Returns false when u and v were already joined.
    pub fn union(&mut self, u: usize, v: usize) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }

    pub fn same(&mut self, u: usize, v: usize) -> bool {
        self.find(u) == self.find(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identify_antipodal_c4() {
        let c4 = Graph::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let id = identify_set(&c4, &[0, 2]).unwrap();
        assert_eq!(id.graph.n(), 3);
        let w = id.merged[0];
        assert_eq!(id.graph.m(), 2);
        assert!(id.graph.has_edge(w, id.map_vertex(1)));
        assert!(id.graph.has_edge(w, id.map_vertex(3)));
        assert_eq!(id.original_edge(edge(w, id.map_vertex(1))), (0, 1));
    }

    #[test]
    fn identify_k4_pair_gives_triangle() {
        let k4 = Graph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let id = identify_set(&k4, &[0, 1]).unwrap();
        assert_eq!(id.graph.n(), 3);
        assert_eq!(id.graph.m(), 3);
    }

    #[test]
    fn identify_singleton_is_identity() {
        let g = Graph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]);
        let id = identify_set(&g, &[3]).unwrap();
        assert_eq!(id.graph, g);
    }

    #[test]
    fn identify_rejects_empty() {
        let g = Graph::new(3);
        assert!(identify_set(&g, &[]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::build(4, &[(0, 1), (2, 3), (1, 2)]);
        let text = format!("# header comment\n{}", g.to_text());
        assert_eq!(Graph::parse(&text).unwrap(), g);
        assert!(matches!(Graph::parse("2 1\n0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse("2 2\n0 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn induced_and_components() {
        let g = Graph::build(6, &[(0, 1), (1, 2), (3, 4)]);
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
        let (h, map) = g.induced(&[2, 1, 4]);
        assert_eq!(map, vec![1, 2, 4]);
        assert_eq!(h.edges(), vec![(0, 1)]);
        assert!(g.is_connected_set(&[0, 1, 2]));
        assert!(!g.is_connected_set(&[0, 2]));
    }
}
