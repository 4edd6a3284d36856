//! Hard instances: 3-colouring to a three-valued CSP of "not d" and
//! "x = d implies y = d" constraints, and that CSP to Steiner forest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, UnionFind};
use crate::oracle::{is_feasible, TerminalSet};

/// A CSP over the values {0, 1, 2}. `unary` holds (x, d) for x ≠ d;
/// `binary` holds (x, y, d) for (x = d) → (y = d).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspInstance {
    pub n: usize,
    pub unary: Vec<(usize, u8)>,
    pub binary: Vec<(usize, usize, u8)>,
}

impl CspInstance {
    pub fn validate(&self) -> Result<()> {
        let bad_var = |x: usize| x >= self.n;
        if self.unary.iter().any(|&(x, d)| bad_var(x) || d > 2)
            || self.binary.iter().any(|&(x, y, d)| bad_var(x) || bad_var(y) || d > 2)
        {
            return Err(Error::InvalidInput("constraint out of range".into()));
        }
        Ok(())
    }

    pub fn satisfied_by(&self, a: &[u8]) -> bool {
        a.len() == self.n
            && self.unary.iter().all(|&(x, d)| a[x] != d)
            && self.binary.iter().all(|&(x, y, d)| a[x] != d || a[y] == d)
    }

    /// Gives every variable without a binary constraint the implication
    /// (x = 0) → (z = 0) on a fresh variable z, which never changes
    /// satisfiability.
    pub fn padded(&self) -> CspInstance {
        let mut out = self.clone();
        let mut seen = vec![false; self.n];
        for &(x, y, _) in &self.binary {
            seen[x] = true;
            seen[y] = true;
        }
        for x in 0..self.n {
            if !seen[x] {
                let z = out.n;
                out.n += 1;
                out.binary.push((x, z, 0));
            }
        }
        out
    }

    /// Text form: a header `csp N`, then lines `ne X D` and `imp X Y D`.
    pub fn to_text(&self) -> String {
        let mut s = format!("csp {}\n", self.n);
        for &(x, d) in &self.unary {
            s.push_str(&format!("ne {x} {d}\n"));
        }
        for &(x, y, d) in &self.binary {
            s.push_str(&format!("imp {x} {y} {d}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<CspInstance> {
        let mut out: Option<CspInstance> = None;
        for (line, body) in crate::graph::data_lines(text) {
            let err = |msg: &str| Error::Parse {
                line,
                msg: msg.to_string(),
            };
            let words: Vec<&str> = body.split_whitespace().collect();
            let nums: Vec<usize> = words[1..]
                .iter()
                .map(|w| w.parse::<usize>().map_err(|_| err("expected a number")))
                .collect::<Result<_>>()?;
            match (words[0], nums.as_slice(), out.as_mut()) {
                ("csp", [n], None) => out = Some(CspInstance { n: *n, ..Default::default() }),
                ("ne", [x, d], Some(c)) => c.unary.push((*x, *d as u8)),
                ("imp", [x, y, d], Some(c)) => c.binary.push((*x, *y, *d as u8)),
                _ => return Err(err("expected `csp N`, then `ne X D` or `imp X Y D`")),
            }
        }
        let c = out.ok_or(Error::Parse {
            line: 1,
            msg: "missing `csp N` header".into(),
        })?;
        c.validate()?;
        Ok(c)
    }
}

/// One "x ≠ y" gadget per edge: nine fresh variables and fifteen
/// constraints each.
pub fn three_col_to_csp(g: &Graph) -> CspInstance {
    let mut csp = CspInstance {
        n: g.n(),
        ..Default::default()
    };
    for (x, y) in g.edges() {
        for l in 0..3u8 {
            let (a, b, c) = (csp.n, csp.n + 1, csp.n + 2);
            csp.n += 3;
            csp.binary.push((x, a, l));
            csp.binary.push((y, b, l));
            csp.unary.push((c, l));
            csp.binary.push((c, a, (l + 1) % 3));
            csp.binary.push((c, b, (l + 2) % 3));
        }
    }
    csp
}

/// Depth-first search over variables in index order and values in
/// increasing order, so the first hit is the lexicographically smallest
/// satisfying assignment.
pub fn solve_csp_bruteforce(csp: &CspInstance, cap: usize) -> Result<Option<Vec<u8>>> {
    csp.validate()?;
    if csp.n > cap {
        return Err(Error::TooLarge(format!("{} variables, cap {cap}", csp.n)));
    }
    let mut forbidden = vec![[false; 3]; csp.n];
    for &(x, d) in &csp.unary {
        forbidden[x][d as usize] = true;
    }
    // constraints checked once their later variable is set
    let mut due: Vec<Vec<(usize, usize, u8)>> = vec![Vec::new(); csp.n];
    for &(x, y, d) in &csp.binary {
        due[x.max(y)].push((x, y, d));
    }
    let mut a = vec![0u8; csp.n];
    fn go(i: usize, a: &mut Vec<u8>, forbidden: &[[bool; 3]], due: &[Vec<(usize, usize, u8)>]) -> bool {
        if i == a.len() {
            return true;
        }
        for v in 0..3u8 {
            if forbidden[i][v as usize] {
                continue;
            }
            a[i] = v;
            if due[i].iter().all(|&(x, y, d)| a[x] != d || a[y] == d) && go(i + 1, a, forbidden, due) {
                return true;
            }
        }
        false
    }
    Ok(go(0, &mut a, &forbidden, &due).then_some(a))
}

pub const DEFAULT_CSP_CAP: usize = 16;

/// The Steiner forest instance built from a CSP, with the role of every
/// vertex. Vertices: d0, d1, d2, then one per variable, then α and β per
/// binary constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardInstance {
    pub graph: Graph,
    pub terminals: TerminalSet,
    pub budget: usize,
    pub hubs: [usize; 3],
    pub vars: Vec<usize>,
    /// (α, β) per binary constraint.
    pub links: Vec<(usize, usize)>,
}

/// Builds the instance. Every variable must occur in a binary constraint;
/// use [`CspInstance::padded`] first otherwise.
pub fn csp_to_sf(csp: &CspInstance) -> Result<HardInstance> {
    csp.validate()?;
    let mut used = vec![false; csp.n];
    for &(x, y, _) in &csp.binary {
        used[x] = true;
        used[y] = true;
    }
    if let Some(x) = used.iter().position(|u| !u) {
        return Err(Error::InvalidInput(format!("variable {x} occurs in no binary constraint")));
    }
    let m2 = csp.binary.len();
    let hubs = [0, 1, 2];
    let vars: Vec<usize> = (0..csp.n).map(|i| 3 + i).collect();
    let links: Vec<(usize, usize)> = (0..m2).map(|j| (3 + csp.n + 2 * j, 4 + csp.n + 2 * j)).collect();
    let mut g = Graph::new(3 + csp.n + 2 * m2);
    let mut forbidden = vec![[false; 3]; csp.n];
    for &(x, d) in &csp.unary {
        forbidden[x][d as usize] = true;
    }
    for (i, &v) in vars.iter().enumerate() {
        for l in 0..3 {
            if !forbidden[i][l] {
                g.add_edge(v, hubs[l]);
            }
        }
    }
    let mut pairs = Vec::new();
    for (j, &(x, y, d)) in csp.binary.iter().enumerate() {
        let (a, b) = links[j];
        g.add_edge(a, b);
        for l in 0..3 {
            if l != d as usize {
                g.add_edge(a, hubs[l]);
            }
            g.add_edge(b, hubs[l]);
        }
        pairs.push((vars[x], a));
        pairs.push((vars[y], b));
    }
    Ok(HardInstance {
        graph: g,
        terminals: TerminalSet::from_pairs_lossy(pairs),
        budget: csp.n + 2 * m2,
        hubs,
        vars,
        links,
    })
}

/// Reads the value of each variable off the hub its component contains.
/// `None` when the forest is infeasible, over budget, or leaves a variable
/// away from every hub.
pub fn decode_assignment(h: &HardInstance, forest: &[Edge]) -> Option<Vec<u8>> {
    if forest.len() > h.budget || !is_feasible(&h.graph, &h.terminals, forest) {
        return None;
    }
    let mut uf = UnionFind::new(h.graph.n());
    for &(u, v) in forest {
        uf.union(u, v);
    }
    h.vars
        .iter()
        .map(|&x| (0..3u8).find(|&l| uf.same(x, h.hubs[l as usize])))
        .collect()
}

/// Every component of G − S has at most c vertices.
pub fn check_deletion_set(g: &Graph, s: &[usize], c: usize) -> bool {
    let mut alive = vec![true; g.n()];
    for &v in s {
        if v >= g.n() {
            return false;
        }
        alive[v] = false;
    }
    g.components_where(&alive).iter().all(|comp| comp.len() <= c)
}

/// Width-three certificate: with the hubs made a triangle, eliminating all
/// α, then all β, then the variables, then the hubs, removes a simplicial
/// vertex of degree at most three each time.
pub fn check_tw3_certificate(h: &HardInstance) -> bool {
    let mut g = h.graph.clone();
    let [d0, d1, d2] = h.hubs;
    g.add_edge(d0, d1);
    g.add_edge(d1, d2);
    g.add_edge(d0, d2);
    let order = h
        .links
        .iter()
        .map(|l| l.0)
        .chain(h.links.iter().map(|l| l.1))
        .chain(h.vars.iter().copied())
        .chain(h.hubs);
    let mut gone = vec![false; g.n()];
    let mut count = 0;
    for v in order {
        let nbrs: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| !gone[u]).collect();
        if nbrs.len() > 3 {
            return false;
        }
        for (i, &a) in nbrs.iter().enumerate() {
            if nbrs[i + 1..].iter().any(|&b| !g.has_edge(a, b)) {
                return false;
            }
        }
        gone[v] = true;
        count += 1;
    }
    count == g.n()
}

/// Roles as comment lines for a graph file, read back by [`parse_roles`].
pub fn roles_text(h: &HardInstance) -> String {
    let join = |vs: &mut dyn Iterator<Item = usize>| vs.map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    format!(
        "# budget {}\n# hubs {}\n# vars {}\n# links {}\n",
        h.budget,
        join(&mut h.hubs.iter().copied()),
        join(&mut h.vars.iter().copied()),
        join(&mut h.links.iter().flat_map(|&(a, b)| [a, b])),
    )
}

/// Rebuilds a hard instance from a graph file carrying role comments.
pub fn parse_roles(graph_text: &str, graph: Graph, terminals: TerminalSet) -> Result<HardInstance> {
    let mut budget = None;
    let mut hubs = None;
    let mut vars = None;
    let mut links = None;
    for (i, line) in graph_text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix('#') else {
            continue;
        };
        let mut words = rest.split_whitespace();
        let key = words.next().unwrap_or("");
        let nums: Vec<usize> = words
            .map(|w| {
                w.parse::<usize>().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("bad role entry `{w}`"),
                })
            })
            .collect::<Result<_>>()?;
        match key {
            "budget" => budget = nums.first().copied(),
            "hubs" if nums.len() == 3 => hubs = Some([nums[0], nums[1], nums[2]]),
            "vars" => vars = Some(nums),
            "links" if nums.len() % 2 == 0 => links = Some(nums.chunks(2).map(|c| (c[0], c[1])).collect()),
            _ => {}
        }
    }
    let missing = |what: &str| Error::Parse {
        line: 1,
        msg: format!("missing `# {what}` role line"),
    };
    let h = HardInstance {
        budget: budget.ok_or_else(|| missing("budget"))?,
        hubs: hubs.ok_or_else(|| missing("hubs"))?,
        vars: vars.ok_or_else(|| missing("vars"))?,
        links: links.ok_or_else(|| missing("links"))?,
        graph,
        terminals,
    };
    let n = h.graph.n();
    let mut roles = h.hubs.iter().chain(&h.vars).copied().chain(h.links.iter().flat_map(|&(a, b)| [a, b]));
    if roles.any(|v| v >= n) {
        return Err(Error::InvalidInput("role vertex outside the graph".into()));
    }
    Ok(h)
}
