//! Automatic solver selection: split the instance into blocks, shrink each
//! block with the safe reductions, then hand it to the first structural
//! solver whose detector fires.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::citrus::{bush_from_stem, detect_cycle_bush, detect_path_bush, search_entangled_bush, BushDecomposition};
use crate::error::{Error, Result};
use crate::graph::{edge, longest_path, Edge, Graph};
use crate::lemon::{solve_cycle_bush, solve_path_bush, LemonBounds};
use crate::oracle::{check_feasible_instance, solve_exact, SteinerForest, TerminalSet};
use crate::reductions::{remove_dominated, split_blocks, wedge_transform};
use crate::tangle::solve_entangled_within;
use crate::tw2::{is_tw_at_most_2, solve_tw2};

/// Largest block on which the longest path is computed.
const LONGEST_PATH_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Tw2,
    /// Entangled bush on the vertices of a longest path.
    Tangle,
    Cycle,
    Path,
    /// Entangled bush found by the branching stem search.
    TangleSearch,
    Exact,
}

impl Method {
    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "tw2" => Some(Method::Tw2),
            "tangle" => Some(Method::Tangle),
            "cycle" => Some(Method::Cycle),
            "path" => Some(Method::Path),
            "tangle-search" => Some(Method::TangleSearch),
            "exact" => Some(Method::Exact),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Tw2 => "tw2",
            Method::Tangle => "tangle",
            Method::Cycle => "cycle",
            Method::Path => "path",
            Method::TangleSearch => "tangle-search",
            Method::Exact => "exact",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispatchOptions {
    pub ell: usize,
    /// Largest stem tried by the entangled-bush detectors.
    pub max_stem: usize,
    /// Pattern count above which an entangled bush is passed over.
    pub max_patterns: usize,
    /// Stem candidates the branching stem search may examine.
    pub stem_budget: usize,
    /// Detectors in the order they are tried.
    pub order: Vec<Method>,
    /// Fall back to the exponential oracle when no detector fires.
    pub allow_fallback: bool,
}

impl Default for DispatchOptions {
    fn default() -> Self {
        DispatchOptions {
            ell: 5,
            max_stem: 13,
            max_patterns: 200_000,
            stem_budget: 20_000,
            order: vec![
                Method::Tw2,
                Method::Tangle,
                Method::Cycle,
                Method::Path,
                Method::TangleSearch,
            ],
            allow_fallback: true,
        }
    }
}

impl DispatchOptions {
    /// Only `method`, with no fallback.
    pub fn forced(method: Method) -> Self {
        DispatchOptions {
            order: vec![method],
            allow_fallback: false,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Solver(Method),
    ExponentialFallback,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Solver(m) => write!(f, "{m}"),
            Step::ExponentialFallback => write!(f, "exponential-fallback"),
        }
    }
}

/// One solved block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: Step,
    /// Block size after the reductions.
    pub vertices: usize,
    pub edges: usize,
    pub pairs: usize,
    pub size: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub forest: SteinerForest,
    pub trace: Vec<TraceEntry>,
    pub millis: u128,
}

impl SolveReport {
    pub fn used_fallback(&self) -> bool {
        self.trace.iter().any(|e| e.step == Step::ExponentialFallback)
    }
}

/// Solves by components, then blocks, then structure.
pub fn dispatch_solve(g: &Graph, t: &TerminalSet, opts: &DispatchOptions) -> Result<SolveReport> {
    let start = Instant::now();
    check_feasible_instance(g, t)?;
    let mut edges = Vec::new();
    let mut trace = Vec::new();
    for part in g.components() {
        let (cg, map) = g.induced(&part);
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let ct = t.restrict(&local);
        if ct.is_empty() {
            continue;
        }
        for block in split_blocks(&cg, &ct)? {
            if block.terminals.is_empty() {
                continue;
            }
            let (found, entry) = solve_block(&block.graph, &block.terminals, opts)?;
            edges.extend(found.into_iter().map(|(u, v)| edge(map[block.origin[u]], map[block.origin[v]])));
            trace.push(entry);
        }
    }
    Ok(SolveReport {
        forest: SteinerForest::new(edges),
        trace,
        millis: start.elapsed().as_millis(),
    })
}

fn solve_block(g: &Graph, t: &TerminalSet, opts: &DispatchOptions) -> Result<(Vec<Edge>, TraceEntry)> {
    let reduced = remove_dominated(g, t);
    let h = wedge_transform(&reduced.graph, &reduced.terminals);
    let rt = &reduced.terminals;
    let entry = |step: Step, size: usize, detail: String| TraceEntry {
        step,
        vertices: h.n(),
        edges: h.m(),
        pairs: rt.len(),
        size,
        detail,
    };
    let lift = |f: &SteinerForest| -> Vec<Edge> {
        f.edges()
            .iter()
            .map(|&(u, v)| (reduced.origin[u], reduced.origin[v]))
            .collect()
    };
    for &m in &opts.order {
        if let Some((f, detail)) = try_method(m, &h, rt, opts)? {
            return Ok((lift(&f), entry(Step::Solver(m), f.size(), detail)));
        }
    }
    if !opts.allow_fallback {
        return Err(Error::NotApplicable(format!(
            "no detector among {:?} fits a block with {} vertices",
            opts.order,
            h.n()
        )));
    }
    let f = solve_exact(&h, rt)?;
    Ok((lift(&f), entry(Step::ExponentialFallback, f.size(), "no structure detected".into())))
}

/// Infeasibility is final; any other solver error means the method declines.
fn declined<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::Infeasible(e)) => Err(Error::Infeasible(e)),
        Err(_) => Ok(None),
    }
}

/// `Ok(None)` when the detector does not fire or the solver declines.
fn try_method(m: Method, h: &Graph, t: &TerminalSet, opts: &DispatchOptions) -> Result<Option<(SteinerForest, String)>> {
    let bounds = LemonBounds::new(opts.ell);
    Ok(match m {
        Method::Tw2 => {
            if !is_tw_at_most_2(h) {
                return Ok(None);
            }
            declined(solve_tw2(h, t))?.map(|f| (f, String::new()))
        }
        Method::Tangle => {
            if h.n() > LONGEST_PATH_LIMIT {
                return Ok(None);
            }
            let path = longest_path(h).vertices;
            if path.len() > opts.max_stem {
                return Ok(None);
            }
            match bush_from_stem(h, &path, opts.ell, true) {
                Some(b) => solve_bush(h, &b, t, bounds, opts)?,
                None => None,
            }
        }
        Method::TangleSearch => match search_entangled_bush(h, opts.max_stem, opts.ell, opts.stem_budget) {
            Some(b) => solve_bush(h, &b, t, bounds, opts)?,
            None => None,
        },
        Method::Cycle => match detect_cycle_bush(h, opts.ell) {
            Some(cb) => declined(solve_cycle_bush(h, &cb, t, bounds))?
                .map(|s| (s.forest, format!("case {} sizes {:?}", s.case, s.case_sizes))),
            None => None,
        },
        Method::Path => match detect_path_bush(h, opts.ell) {
            Some(pb) => declined(solve_path_bush(h, &pb, t, bounds))?.map(|f| (f, format!("stems {}", pb.order.len()))),
            None => None,
        },
        Method::Exact => Some((solve_exact(h, t)?, String::new())),
    })
}

fn solve_bush(
    h: &Graph,
    b: &BushDecomposition,
    t: &TerminalSet,
    bounds: LemonBounds,
    opts: &DispatchOptions,
) -> Result<Option<(SteinerForest, String)>> {
    Ok(declined(solve_entangled_within(h, b, t, bounds, opts.max_patterns))?
        .map(|s| (s.forest, format!("stem {} patterns {}", b.stem.len(), s.stats.patterns))))
}
