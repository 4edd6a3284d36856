use super::{edge, Edge, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    /// A single edge whose removal disconnects its component.
    pub is_bridge: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<usize>,
}

/// Blocks (maximal 2-connected subgraphs and bridges) and cut vertices.
/// Isolated vertices belong to no block. Blocks are listed by their sorted
/// vertex lists.
pub fn biconnected_components(g: &Graph) -> BlockStructure {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_cut = vec![false; n];
    let mut timer = 0;
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut blocks = Vec::new();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&(v, parent, idx)) = stack.last() {
            if idx < nbrs[v].len() {
                let u = nbrs[v][idx];
                stack.last_mut().expect("non-empty").2 += 1;
                if u == parent {
                    continue;
                }
                if disc[u] == usize::MAX {
                    edge_stack.push(edge(v, u));
                    disc[u] = timer;
                    low[u] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((u, v, 0));
                } else if disc[u] < disc[v] {
                    edge_stack.push(edge(v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if parent == usize::MAX {
                    continue;
                }
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    if parent != root {
                        is_cut[parent] = true;
                    }
                    let target = edge(parent, v);
                    let mut edges = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        edges.push(e);
                        if e == target {
                            break;
                        }
                    }
                    blocks.push(make_block(edges));
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    blocks.sort_by(|a: &Block, b: &Block| a.vertices.cmp(&b.vertices));
    BlockStructure {
        blocks,
        cut_vertices: (0..n).filter(|&v| is_cut[v]).collect(),
    }
}

fn make_block(mut edges: Vec<Edge>) -> Block {
    edges.sort_unstable();
    let mut vertices: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    Block {
        is_bridge: edges.len() == 1,
        vertices,
        edges,
    }
}
