//! Symbolic disjoint unions of paths and subdivided claws.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// One connected component: a path on `r` vertices or a subdivided claw with
/// legs of `h <= i <= j` edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpecComponent {
    Path(usize),
    Claw(usize, usize, usize),
}

impl SpecComponent {
    pub fn claw(a: usize, b: usize, c: usize) -> Self {
        let mut legs = [a, b, c];
        legs.sort_unstable();
        SpecComponent::Claw(legs[0], legs[1], legs[2])
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            SpecComponent::Path(r) => r,
            SpecComponent::Claw(h, i, j) => 1 + h + i + j,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SpecComponent::Path(0) => Err(Error::InvalidInput("path needs at least one vertex".into())),
            SpecComponent::Claw(h, _, _) if h == 0 => {
                Err(Error::InvalidInput("claw legs need at least one edge".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SpecComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpecComponent::Path(r) => write!(f, "P{r}"),
            SpecComponent::Claw(h, i, j) => write!(f, "S{h},{i},{j}"),
        }
    }
}

/// A disjoint union of components, kept sorted (claws first, larger first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HSpec {
    components: Vec<SpecComponent>,
}

fn canonical_order(a: &SpecComponent, b: &SpecComponent) -> std::cmp::Ordering {
    use SpecComponent::*;
    match (a, b) {
        (Claw(..), Path(_)) => std::cmp::Ordering::Less,
        (Path(_), Claw(..)) => std::cmp::Ordering::Greater,
        _ => b.cmp(a),
    }
}

impl HSpec {
    pub fn new(mut components: Vec<SpecComponent>) -> Result<Self> {
        for c in &components {
            c.validate()?;
        }
        if components.is_empty() {
            return Err(Error::InvalidInput("empty H spec".into()));
        }
        components.sort_by(canonical_order);
        Ok(HSpec { components })
    }

    pub fn path(r: usize) -> Self {
        HSpec::new(vec![SpecComponent::Path(r)]).expect("valid path")
    }

    pub fn claw(h: usize, i: usize, j: usize) -> Self {
        HSpec::new(vec![SpecComponent::claw(h, i, j)]).expect("valid claw")
    }

    pub fn components(&self) -> &[SpecComponent] {
        &self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.vertex_count()).sum()
    }

    /// Disjoint union with `other`.
    pub fn plus(&self, other: &HSpec) -> HSpec {
        let mut comps = self.components.clone();
        comps.extend_from_slice(&other.components);
        HSpec::new(comps).expect("components already valid")
    }

    /// `times` disjoint copies.
    pub fn times(&self, times: usize) -> HSpec {
        let mut comps = Vec::new();
        for _ in 0..times.max(1) {
            comps.extend_from_slice(&self.components);
        }
        HSpec::new(comps).expect("components already valid")
    }

    /// Explicit graph: components laid out consecutively; a path in order,
    /// a claw as centre followed by its three legs walking outwards.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.vertex_count());
        let mut base = 0;
        for c in &self.components {
            match *c {
                SpecComponent::Path(r) => {
                    for k in 1..r {
                        g.add_edge(base + k - 1, base + k);
                    }
                }
                SpecComponent::Claw(h, i, j) => {
                    let mut next = base + 1;
                    for len in [h, i, j] {
                        let mut prev = base;
                        for _ in 0..len {
                            g.add_edge(prev, next);
                            prev = next;
                            next += 1;
                        }
                    }
                }
            }
            base += c.vertex_count();
        }
        g
    }

    /// Parses `P11`, `S2,3,5`, `S1,1,1+P4`, `4P3`, `2K1,3+P3`.
    pub fn parse(text: &str) -> Result<HSpec> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_err("empty H spec"));
        }
        let mut comps = Vec::new();
        for term in compact.split('+') {
            let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
            let mult = if digits.is_empty() {
                1
            } else {
                digits.parse::<usize>().map_err(|_| parse_err(term))?
            };
            let rest = &term[digits.len()..];
            let comp = if let Some(r) = rest.strip_prefix('P') {
                SpecComponent::Path(r.parse().map_err(|_| parse_err(term))?)
            } else if let Some(legs) = rest.strip_prefix('S') {
                let nums = parse_list(legs, term)?;
                if nums.len() != 3 {
                    return Err(parse_err(term));
                }
                SpecComponent::claw(nums[0], nums[1], nums[2])
            } else if rest == "K1,3" || rest == "K13" {
                SpecComponent::Claw(1, 1, 1)
            } else {
                return Err(parse_err(term));
            };
            if mult == 0 {
                return Err(parse_err(term));
            }
            for _ in 0..mult {
                comps.push(comp);
            }
        }
        HSpec::new(comps)
    }
}

fn parse_list(body: &str, term: &str) -> Result<Vec<usize>> {
    body.split(',')
        .map(|p| p.parse::<usize>().map_err(|_| parse_err(term)))
        .collect()
}

fn parse_err(what: &str) -> Error {
    Error::Parse {
        line: 1,
        msg: format!("bad H spec `{what}`"),
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut idx = 0;
        while idx < self.components.len() {
            let c = self.components[idx];
            let mut run = 1;
            while idx + run < self.components.len() && self.components[idx + run] == c {
                run += 1;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{run}")?;
            }
            write!(f, "{c}")?;
            idx += run;
        }
        Ok(())
    }
}
