use super::pattern::PathEmbedding;
use super::Graph;

const DP_LIMIT: usize = 20;

/// A longest path; among longest paths the lexicographically smallest vertex
/// sequence. Empty for the empty graph.
pub fn longest_path(g: &Graph) -> PathEmbedding {
    let vertices = if g.n() <= DP_LIMIT {
        longest_path_dp(g)
    } else {
        longest_path_dfs(g)
    };
    PathEmbedding { vertices }
}

/// A longest cycle listed from its smallest vertex in the direction giving
/// the lexicographically smallest sequence; `None` on forests.
pub fn longest_cycle(g: &Graph) -> Option<PathEmbedding> {
    let cycle = if g.n() <= DP_LIMIT {
        longest_cycle_dp(g)
    } else {
        longest_cycle_dfs(g)
    };
    cycle.map(|vertices| PathEmbedding { vertices })
}

fn adjacency_bits(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | (1 << u)))
        .collect()
}

fn longest_path_dp(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let adj = adjacency_bits(g);
    let full = 1usize << n;
    // ends[mask]: vertices at which some Hamiltonian path of G[mask] ends
    let mut ends = vec![0u32; full];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    let mut best = 1;
    for mask in 1..full {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        best = best.max(mask.count_ones() as usize);
        let mut reach = 0u32;
        let mut bits = e;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            reach |= adj[v];
        }
        reach &= !(mask as u32);
        let mut bits = reach;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            ends[mask | (1 << w)] |= 1 << w;
        }
    }
    let mut path = Vec::with_capacity(best);
    let mut used = 0usize;
    for step in 0..best {
        let need = (best - step) as u32;
        let mut ok = 0u32;
        for (mask, &e) in ends.iter().enumerate() {
            if e != 0 && mask & used == 0 && mask.count_ones() == need {
                ok |= e;
            }
        }
        let candidates = match path.last() {
            None => ok,
            Some(&last) => ok & adj[last],
        };
        let w = candidates.trailing_zeros() as usize;
        path.push(w);
        used |= 1 << w;
    }
    path
}

fn longest_cycle_dp(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let adj = adjacency_bits(g);
    let mut best: Option<(usize, usize)> = None;
    let mut tables: Vec<Vec<u32>> = Vec::with_capacity(n);
    for s in 0..n {
        let table = cycle_table(&adj, n, s);
        for (m, &e) in table.iter().enumerate() {
            if e == 0 || m.count_ones() < 2 {
                continue;
            }
            if e & (adj[s] >> (s + 1)) != 0 {
                let len = m.count_ones() as usize + 1;
                if best.map_or(true, |(l, _)| len > l) {
                    best = Some((len, s));
                }
            }
        }
        tables.push(table);
    }
    let (len, s) = best?;
    let table = &tables[s];
    let shift = s + 1;
    let mut cycle = vec![s];
    let mut used = 0usize;
    for step in 1..len {
        let need = (len - step) as u32;
        let mut ok = 0u32;
        for (m, &e) in table.iter().enumerate() {
            if e != 0 && m & used == 0 && m.count_ones() == need {
                ok |= e;
            }
        }
        let last = *cycle.last().expect("non-empty");
        let local_adj = adj[last] >> shift;
        let w = (ok & local_adj).trailing_zeros() as usize;
        cycle.push(w + shift);
        used |= 1 << w;
    }
    Some(cycle)
}

/// For cycles whose smallest vertex is `s`: over subsets m of the vertices
/// above s (bit i is vertex s+1+i), the starts v of Hamiltonian paths of G[m]
/// that end at a neighbour of s.
fn cycle_table(adj: &[u32], n: usize, s: usize) -> Vec<u32> {
    let k = n - s - 1;
    let shift = s + 1;
    let local: Vec<u32> = (0..k).map(|i| adj[i + shift] >> shift).collect();
    let anchor = adj[s] >> shift;
    let mut table = vec![0u32; 1 << k];
    for i in 0..k {
        if anchor >> i & 1 == 1 {
            table[1 << i] = 1 << i;
        }
    }
    for m in 1..table.len() {
        let e = table[m];
        if e == 0 {
            continue;
        }
        let mut reach = 0u32;
        let mut bits = e;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            reach |= local[v];
        }
        reach &= !(m as u32);
        let mut bits = reach;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            table[m | (1 << w)] |= 1 << w;
        }
    }
    table
}

fn longest_path_dfs(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut best: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    for s in 0..n {
        if best.len() == n {
            break;
        }
        on_path[s] = true;
        path.push(s);
        extend_path(g, &mut path, &mut on_path, &mut best, None);
        path.pop();
        on_path[s] = false;
    }
    best
}

fn longest_cycle_dfs(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut best: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        if n - s <= best.len() {
            break;
        }
        let mut path = vec![s];
        on_path[s] = true;
        extend_path(g, &mut path, &mut on_path, &mut best, Some(s));
        on_path[s] = false;
    }
    (best.len() >= 3).then_some(best)
}

/// Depth-first extension in lexicographic order. With `anchor = Some(s)` only
/// vertices above s are used and a candidate is recorded when the path can
/// close back to s.
fn extend_path(
    g: &Graph,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut Vec<usize>,
    anchor: Option<usize>,
) {
    let last = *path.last().expect("non-empty");
    match anchor {
        None => {
            if path.len() > best.len() {
                *best = path.clone();
            }
        }
        Some(s) => {
            if path.len() >= 3 && path.len() > best.len() && g.has_edge(last, s) {
                *best = path.clone();
            }
        }
    }
    let floor = anchor.map_or(0, |s| s + 1);
    let reachable = reachable_count(g, last, on_path, floor);
    if path.len() + reachable <= best.len() {
        return;
    }
    let next: Vec<usize> = g
        .neighbors(last)
        .iter()
        .copied()
        .filter(|&u| u >= floor && !on_path[u])
        .collect();
    for u in next {
        on_path[u] = true;
        path.push(u);
        extend_path(g, path, on_path, best, anchor);
        path.pop();
        on_path[u] = false;
    }
}

fn reachable_count(g: &Graph, from: usize, on_path: &[bool], floor: usize) -> usize {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![from];
    seen[from] = true;
    let mut count = 0;
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if u >= floor && !on_path[u] && !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count
}
