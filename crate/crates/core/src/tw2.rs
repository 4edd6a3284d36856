//! Treewidth-2 recognition and an exact Steiner forest dynamic programme over
//! the resulting tree decomposition.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::oracle::{check_feasible_instance, schools, SteinerForest, TerminalSet};

/// A tree decomposition of width at most two. Bag `i` belongs to the i-th
/// eliminated vertex; `parent[i]` is always a later bag, and exactly one bag
/// (the last) is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tw2Decomposition {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
}

impl Tw2Decomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the tree-decomposition axioms against `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let k = self.bags.len();
        if g.n() == 0 {
            return k == 0;
        }
        if self.parent.len() != k || self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return false;
        }
        if self.parent.iter().enumerate().any(|(i, p)| p.is_some_and(|p| p <= i || p >= k)) {
            return false;
        }
        for v in 0..g.n() {
            let holders: Vec<usize> = (0..k).filter(|&i| self.bags[i].contains(&v)).collect();
            if holders.is_empty() {
                return false;
            }
            // connected iff exactly one holder has its parent outside the holders
            let tops = holders
                .iter()
                .filter(|&&i| self.parent[i].map_or(true, |p| !self.bags[p].contains(&v)))
                .count();
            if tops != 1 {
                return false;
            }
        }
        g.edges()
            .iter()
            .all(|&(u, v)| self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)))
    }
}

/// Eliminates a smallest-index vertex of degree at most two (joining its two
/// neighbours when it has two) until nothing is left; this succeeds exactly
/// when the treewidth is at most two.
pub fn recognize_tw2(g: &Graph) -> Option<Tw2Decomposition> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut position = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut nbr_at_elim: Vec<Vec<usize>> = Vec::with_capacity(n);
    // vertices whose degree may have dropped to <= 2
    let mut low: BTreeSet<usize> = (0..n).filter(|&v| adj[v].len() <= 2).collect();
    while let Some(&v) = low.iter().next() {
        low.remove(&v);
        if !alive.contains(&v) || adj[v].len() > 2 {
            continue;
        }
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        position[v] = bags.len();
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        nbr_at_elim.push(nb.clone());
        alive.remove(&v);
        for &u in &nb {
            adj[u].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        for &u in &nb {
            if adj[u].len() <= 2 {
                low.insert(u);
            }
        }
    }
    if !alive.is_empty() {
        return None;
    }
    let k = bags.len();
    let mut parent: Vec<Option<usize>> = nbr_at_elim
        .iter()
        .map(|nb| nb.iter().map(|&u| position[u]).min())
        .collect();
    if k > 0 {
        let root = k - 1;
        for p in parent.iter_mut().take(root) {
            if p.is_none() {
                *p = Some(root);
            }
        }
        parent[root] = None;
    }
    Some(Tw2Decomposition { bags, parent })
}

pub fn is_tw_at_most_2(g: &Graph) -> bool {
    recognize_tw2(g).is_some()
}

enum Trace {
    Nil,
    Edge(Edge, Rc<Trace>),
    Join(Rc<Trace>, Rc<Trace>),
}

fn collect_edges(trace: &Rc<Trace>) -> Vec<Edge> {
    let mut out = Vec::new();
    let mut stack = vec![trace.clone()];
    while let Some(t) = stack.pop() {
        match t.as_ref() {
            Trace::Nil => {}
            Trace::Edge(e, rest) => {
                out.push(*e);
                stack.push(rest.clone());
            }
            Trace::Join(a, b) => {
                stack.push(a.clone());
                stack.push(b.clone());
            }
        }
    }
    out
}

const ABSENT: u8 = u8::MAX;

/// Per bag position: the component label (or ABSENT); per label: the schools
/// carried by that partial tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    comp: Vec<u8>,
    sigma: Vec<Vec<u64>>,
}

impl State {
    /// Relabels components by first occurrence and drops unused labels.
    fn canonical(comp: Vec<u8>, sigma: Vec<Vec<u64>>) -> State {
        let mut relabel: BTreeMap<u8, u8> = BTreeMap::new();
        let mut new_sigma = Vec::new();
        let mut new_comp = Vec::with_capacity(comp.len());
        for &c in &comp {
            if c == ABSENT {
                new_comp.push(ABSENT);
                continue;
            }
            let next = relabel.len() as u8;
            let label = *relabel.entry(c).or_insert_with(|| {
                new_sigma.push(sigma[c as usize].clone());
                next
            });
            new_comp.push(label);
        }
        State {
            comp: new_comp,
            sigma: new_sigma,
        }
    }
}

#[derive(Clone)]
struct Entry {
    cost: u32,
    trace: Rc<Trace>,
}

struct Table {
    bag: Vec<usize>,
    seen: Vec<bool>,
    states: BTreeMap<State, Entry>,
}

fn offer(states: &mut BTreeMap<State, Entry>, state: State, entry: Entry) {
    match states.get(&state) {
        Some(old) if old.cost <= entry.cost => {}
        _ => {
            states.insert(state, entry);
        }
    }
}

struct Context<'a> {
    g: &'a Graph,
    school_of: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
    words: usize,
}

impl Context<'_> {
    fn single(&self, school: usize) -> Vec<u64> {
        let mut s = vec![0u64; self.words];
        s[school / 64] |= 1 << (school % 64);
        s
    }

    fn introduce(&self, table: Table, v: usize) -> Table {
        let pos = table.bag.partition_point(|&u| u < v);
        let mut bag = table.bag.clone();
        bag.insert(pos, v);
        let mut seen = table.seen;
        seen[v] = true;
        let mut states = BTreeMap::new();
        for (state, entry) in table.states {
            let fresh = state.sigma.len() as u8;
            let mut sigma = state.sigma.clone();
            sigma.push(match self.school_of[v] {
                Some(s) => self.single(s),
                None => vec![0; self.words],
            });
            let mut comp = state.comp.clone();
            comp.insert(pos, fresh);
            offer(&mut states, State::canonical(comp, sigma), entry.clone());
            if self.school_of[v].is_none() {
                let mut comp = state.comp;
                comp.insert(pos, ABSENT);
                offer(&mut states, State::canonical(comp, state.sigma), entry);
            }
        }
        Table { bag, seen, states }
    }

    fn forget(&self, table: Table, v: usize) -> Table {
        let pos = table.bag.iter().position(|&u| u == v).expect("vertex in bag");
        let others: Vec<usize> = (0..table.bag.len())
            .filter(|&i| i != pos && self.g.has_edge(v, table.bag[i]))
            .collect();
        let mut bag = table.bag.clone();
        bag.remove(pos);
        let mut states = BTreeMap::new();
        for (state, entry) in &table.states {
            if state.comp[pos] == ABSENT {
                let mut comp = state.comp.clone();
                comp.remove(pos);
                offer(&mut states, State::canonical(comp, state.sigma.clone()), entry.clone());
                continue;
            }
            for subset in 0u32..(1 << others.len()) {
                let mut comp = state.comp.clone();
                let mut sigma = state.sigma.clone();
                let mut trace = entry.trace.clone();
                let mut cost = entry.cost;
                let mut ok = true;
                for (k, &i) in others.iter().enumerate() {
                    if subset >> k & 1 == 0 {
                        continue;
                    }
                    let (a, b) = (comp[pos], comp[i]);
                    if b == ABSENT || a == b {
                        ok = false;
                        break;
                    }
                    for c in comp.iter_mut() {
                        if *c == b {
                            *c = a;
                        }
                    }
                    let merged: Vec<u64> =
                        sigma[a as usize].iter().zip(&sigma[b as usize]).map(|(x, y)| x | y).collect();
                    sigma[a as usize] = merged;
                    cost += 1;
                    trace = Rc::new(Trace::Edge(edge(v, table.bag[i]), trace));
                }
                if !ok {
                    continue;
                }
                let label = comp[pos];
                comp.remove(pos);
                if !comp.contains(&label) && !self.may_close(&comp, &sigma, label, &table.seen) {
                    continue;
                }
                offer(&mut states, State::canonical(comp, sigma), Entry { cost, trace });
            }
        }
        Table {
            bag,
            seen: table.seen,
            states,
        }
    }

    /// A tree leaving the bag for good must complete each school it carries.
    fn may_close(&self, comp: &[u8], sigma: &[Vec<u64>], label: u8, seen: &[bool]) -> bool {
        let carried = &sigma[label as usize];
        for (w, &word) in carried.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let s = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if !self.members[s].iter().all(|&u| seen[u]) {
                    return false;
                }
                let shared = comp
                    .iter()
                    .any(|&c| c != ABSENT && c != label && sigma[c as usize][w] >> (s % 64) & 1 == 1);
                if shared {
                    return false;
                }
            }
        }
        true
    }

    fn join(&self, a: Table, b: Table) -> Table {
        debug_assert_eq!(a.bag, b.bag);
        let seen: Vec<bool> = a.seen.iter().zip(&b.seen).map(|(x, y)| *x || *y).collect();
        let mut states = BTreeMap::new();
        for (sa, ea) in &a.states {
            for (sb, eb) in &b.states {
                if sa.comp.iter().zip(&sb.comp).any(|(x, y)| (*x == ABSENT) != (*y == ABSENT)) {
                    continue;
                }
                if let Some((comp, sigma)) = merge_partitions(sa, sb) {
                    offer(
                        &mut states,
                        State::canonical(comp, sigma),
                        Entry {
                            cost: ea.cost + eb.cost,
                            trace: Rc::new(Trace::Join(ea.trace.clone(), eb.trace.clone())),
                        },
                    );
                }
            }
        }
        Table {
            bag: a.bag,
            seen,
            states,
        }
    }
}

/// Union of two partitions of the same present vertices, or None when the
/// union of the two forests would close a cycle through the bag.
fn merge_partitions(a: &State, b: &State) -> Option<(Vec<u8>, Vec<Vec<u64>>)> {
    let k = a.comp.len();
    let present: Vec<usize> = (0..k).filter(|&i| a.comp[i] != ABSENT).collect();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        r
    }
    let mut merges = 0;
    for side in [a, b] {
        for (x, &i) in present.iter().enumerate() {
            for &j in &present[x + 1..] {
                if side.comp[i] == side.comp[j] {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[rj] = ri;
                        merges += 1;
                    }
                }
            }
        }
    }
    let blocks = |s: &State| {
        let mut labels: Vec<u8> = present.iter().map(|&i| s.comp[i]).collect();
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    };
    let p = present.len();
    let joined = p - merges;
    if (p - blocks(a)) + (p - blocks(b)) != p - joined {
        return None;
    }
    let mut comp = vec![ABSENT; k];
    let mut sigma: Vec<Vec<u64>> = Vec::new();
    let mut label_of: BTreeMap<usize, u8> = BTreeMap::new();
    for &i in &present {
        let r = find(&mut parent, i);
        let next = label_of.len() as u8;
        let label = *label_of.entry(r).or_insert_with(|| {
            sigma.push(vec![0; a.sigma[0].len()]);
            next
        });
        comp[i] = label;
    }
    for &i in &present {
        let l = comp[i] as usize;
        for (w, (x, y)) in a.sigma[a.comp[i] as usize]
            .iter()
            .zip(&b.sigma[b.comp[i] as usize])
            .enumerate()
        {
            sigma[l][w] |= x | y;
        }
    }
    Some((comp, sigma))
}

/// Minimum Steiner forest on a graph of treewidth at most two.
pub fn solve_tw2(g: &Graph, t: &TerminalSet) -> Result<SteinerForest> {
    check_feasible_instance(g, t)?;
    let dec = recognize_tw2(g).ok_or(Error::NotTw2)?;
    if t.is_empty() {
        return Ok(SteinerForest::empty());
    }
    let sch = schools(t);
    let ctx = Context {
        g,
        school_of: sch.index(g.n()),
        members: sch.parts().to_vec(),
        words: sch.len().div_ceil(64).max(1),
    };
    let k = dec.bags.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, p) in dec.parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(i);
        }
    }
    let empty_table = || {
        let mut states = BTreeMap::new();
        states.insert(
            State {
                comp: Vec::new(),
                sigma: Vec::new(),
            },
            Entry {
                cost: 0,
                trace: Rc::new(Trace::Nil),
            },
        );
        Table {
            bag: Vec::new(),
            seen: vec![false; g.n()],
            states,
        }
    };
    let mut done: Vec<Option<Table>> = (0..k).map(|_| None).collect();
    for node in 0..k {
        let bag = &dec.bags[node];
        let mut acc: Option<Table> = None;
        let kids = std::mem::take(&mut children[node]);
        let mut sources: Vec<Table> = kids.iter().map(|&c| done[c].take().expect("child done")).collect();
        if sources.is_empty() {
            sources.push(empty_table());
        }
        for mut table in sources {
            let leaving: Vec<usize> = table.bag.iter().copied().filter(|v| !bag.contains(v)).collect();
            for v in leaving {
                table = ctx.forget(table, v);
            }
            let entering: Vec<usize> = bag.iter().copied().filter(|v| !table.bag.contains(v)).collect();
            for v in entering {
                table = ctx.introduce(table, v);
            }
            acc = Some(match acc {
                None => table,
                Some(prev) => ctx.join(prev, table),
            });
        }
        done[node] = acc;
    }
    let mut table = done[k - 1].take().expect("root table");
    for v in table.bag.clone() {
        table = ctx.forget(table, v);
    }
    let best = table
        .states
        .values()
        .min_by_key(|e| e.cost)
        .ok_or_else(|| Error::Infeasible("no Steiner forest exists".into()))?;
    Ok(SteinerForest::new(collect_edges(&best.trace)))
}
