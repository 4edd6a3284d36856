//! Optimum-preserving preprocessing rules.

use crate::error::{Error, Result};
use crate::graph::{biconnected_components, edge, identify_set, Graph};
use crate::oracle::{schools, TerminalSet};

/// A graph together with the map from its vertex ids to those of the graph it
/// was derived from.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub graph: Graph,
    pub terminals: TerminalSet,
    /// New vertex id to original vertex id.
    pub origin: Vec<usize>,
}

/// Repeatedly deletes a non-terminal x with N(x) ⊊ N(y) for some vertex y
/// (smallest such x first).
pub fn remove_dominated(g: &Graph, t: &TerminalSet) -> Reduced {
    let mut work = g.clone();
    let mut removed = vec![false; g.n()];
    loop {
        let victim = (0..work.n()).find(|&x| {
            !removed[x]
                && !t.is_terminal(x)
                && (0..work.n()).any(|y| {
                    y != x
                        && !removed[y]
                        && work.degree(x) < work.degree(y)
                        && work.neighbors(x).is_subset(work.neighbors(y))
                })
        });
        match victim {
            Some(x) => {
                work.isolate(x);
                removed[x] = true;
            }
            None => break,
        }
    }
    let gone: Vec<usize> = (0..g.n()).filter(|&v| removed[v]).collect();
    let (graph, origin) = work.without(&gone);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in origin.iter().enumerate() {
        local[v] = i;
    }
    Reduced {
        terminals: t.restrict(&local),
        graph,
        origin,
    }
}

/// Result of contracting an edge between two paired terminals.
#[derive(Clone, Debug)]
pub struct Contracted {
    pub graph: Graph,
    pub terminals: TerminalSet,
    pub budget: usize,
    /// Old vertex id to new vertex id.
    pub vertex_map: Vec<usize>,
    pub contracted: (usize, usize),
}

/// Contracts the first edge xy with (x,y) a terminal pair, lowering the
/// budget by one. `None` when no such edge exists or the budget is zero.
pub fn contract_terminal_edge(g: &Graph, t: &TerminalSet, budget: usize) -> Option<Contracted> {
    if budget == 0 {
        return None;
    }
    let &(x, y) = t.pairs().iter().find(|&&(x, y)| g.has_edge(x, y))?;
    let id = identify_set(g, &[x, y]).expect("non-empty");
    Some(Contracted {
        terminals: t.identified(&id),
        graph: id.graph,
        budget: budget - 1,
        vertex_map: id.vertex_map,
        contracted: (x, y),
    })
}

/// A non-juicy seeded wedge: adjacent a,b whose joint neighbourhood is exactly
/// {x,y}, with {a,b} complete to {x,y}.
pub fn find_nonjuicy_seeded(g: &Graph) -> Option<(usize, usize, usize, usize)> {
    for (a, b) in g.edges() {
        let nb = g.set_neighborhood(&[a, b]);
        if nb.len() != 2 {
            continue;
        }
        let mut it = nb.iter();
        let (x, y) = (*it.next().expect("two"), *it.next().expect("two"));
        if g.has_edge(a, x) && g.has_edge(a, y) && g.has_edge(b, x) && g.has_edge(b, y) {
            return Some((a, b, x, y));
        }
    }
    None
}

/// Turns every seeded wedge into juicy ones: when a and b share a school the
/// edge a–x goes, otherwise the edge a–b goes.
pub fn wedge_transform(g: &Graph, t: &TerminalSet) -> Graph {
    let school_of = schools(t).index(g.n());
    let mut out = g.clone();
    while let Some((a, b, x, _y)) = find_nonjuicy_seeded(&out) {
        let same_school = school_of[a].is_some() && school_of[a] == school_of[b];
        if same_school {
            out.remove_edge(a, x);
        } else {
            out.remove_edge(a, b);
        }
    }
    out
}

/// One block with its share of the demands.
#[derive(Clone, Debug)]
pub struct BlockInstance {
    pub graph: Graph,
    pub terminals: TerminalSet,
    /// Local id to id in the split graph.
    pub origin: Vec<usize>,
}

/// Splits a connected graph into blocks; a pair whose block-tree route passes
/// cut vertices c1..cr becomes (s,c1), (c1,c2), ..., (cr,t) in the blocks
/// along the route.
pub fn split_blocks(g: &Graph, t: &TerminalSet) -> Result<Vec<BlockInstance>> {
    t.validate_for(g)?;
    let comp = g.component_ids();
    if let Some(&(s, u)) = t.pairs().iter().find(|&&(s, u)| comp[s] != comp[u]) {
        return Err(Error::Infeasible(format!("terminals {s} and {u} lie in different components")));
    }
    let bs = biconnected_components(g);
    let nb = bs.blocks.len();
    // block-cut tree: nodes 0..nb are blocks, nb + v is cut vertex v
    let mut is_cut = vec![false; g.n()];
    for &c in &bs.cut_vertices {
        is_cut[c] = true;
    }
    let mut home = vec![usize::MAX; g.n()];
    let mut tree: Vec<Vec<usize>> = vec![Vec::new(); nb + g.n()];
    for (i, b) in bs.blocks.iter().enumerate() {
        for &v in &b.vertices {
            if is_cut[v] {
                tree[i].push(nb + v);
                tree[nb + v].push(i);
            } else {
                home[v] = i;
            }
        }
    }
    let node_of = |v: usize| if is_cut[v] { nb + v } else { home[v] };
    let mut per_block: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nb];
    for &(s, u) in t.pairs() {
        let (a, b) = (node_of(s), node_of(u));
        if a == usize::MAX || b == usize::MAX {
            return Err(Error::Infeasible(format!("terminal pair ({s},{u}) touches an isolated vertex")));
        }
        let route = tree_path(&tree, a, b);
        // walk blocks on the route; each block gets (entry, exit)
        let mut current = s;
        for (k, &node) in route.iter().enumerate() {
            if node >= nb {
                continue;
            }
            let exit = match route.get(k + 1) {
                Some(&next) => next - nb,
                None => u,
            };
            if current != exit {
                per_block[node].push(edge(current, exit));
            }
            current = exit;
        }
    }
    let mut out = Vec::with_capacity(nb);
    for (i, b) in bs.blocks.iter().enumerate() {
        let (graph, origin) = g.induced(&b.vertices);
        // a block's induced graph equals its edge set for 2-connected blocks
        // and bridges alike
        let mut local = vec![usize::MAX; g.n()];
        for (j, &v) in origin.iter().enumerate() {
            local[v] = j;
        }
        let terminals =
            TerminalSet::from_pairs_lossy(per_block[i].iter().map(|&(x, y)| (local[x], local[y])));
        out.push(BlockInstance {
            graph,
            terminals,
            origin,
        });
    }
    Ok(out)
}

fn tree_path(tree: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; tree.len()];
    prev[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &u in &tree[v] {
            if prev[u] == usize::MAX {
                prev[u] = v;
                queue.push_back(u);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominated_vertex_removed() {
        // x=0, y=1, z=2, w=3
        let g = Graph::build(4, &[(0, 2), (1, 2), (1, 3)]);
        let t = TerminalSet::new(&[(2, 3)]).unwrap();
        let r = remove_dominated(&g, &t);
        assert_eq!(r.origin, vec![1, 2, 3]);
        let t = TerminalSet::new(&[(0, 3)]).unwrap();
        let r = remove_dominated(&g, &t);
        assert_eq!(r.graph.n(), 4);
    }

    #[test]
    fn contraction_examples() {
        let g = Graph::build(2, &[(0, 1)]);
        let t = TerminalSet::new(&[(0, 1)]).unwrap();
        let c = contract_terminal_edge(&g, &t, 1).unwrap();
        assert_eq!(c.graph.n(), 1);
        assert!(c.terminals.is_empty());
        assert_eq!(c.budget, 0);
        let tri = Graph::build(3, &[(0, 1), (1, 2), (0, 2)]);
        let c = contract_terminal_edge(&tri, &t, 1).unwrap();
        assert_eq!(c.graph.n(), 2);
        assert_eq!(c.graph.m(), 1);
        assert!(contract_terminal_edge(&tri, &TerminalSet::empty(), 3).is_none());
    }

    #[test]
    fn seeded_wedge_rules() {
        // x=0, y=1, a=2, b=3
        let g = Graph::build(4, &[(2, 3), (2, 0), (2, 1), (3, 0), (3, 1)]);
        let out = wedge_transform(&g, &TerminalSet::empty());
        assert!(!out.has_edge(2, 3));
        assert_eq!(out.m(), 4);
        let t = TerminalSet::new(&[(2, 3)]).unwrap();
        let out = wedge_transform(&g, &t);
        assert!(out.has_edge(2, 3));
        assert!(!out.has_edge(0, 2));
    }

    #[test]
    fn bowtie_projection() {
        let g = Graph::build(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        let t = TerminalSet::new(&[(0, 3)]).unwrap();
        let blocks = split_blocks(&g, &t).unwrap();
        assert_eq!(blocks.len(), 2);
        let lifted: Vec<Vec<(usize, usize)>> = blocks
            .iter()
            .map(|b| b.terminals.pairs().iter().map(|&(s, u)| (b.origin[s], b.origin[u])).collect())
            .collect();
        assert_eq!(lifted, vec![vec![(0, 2)], vec![(2, 3)]]);
    }
}
