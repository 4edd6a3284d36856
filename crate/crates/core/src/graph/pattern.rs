use serde::{Deserialize, Serialize};

use super::Graph;
use crate::hspec::{HSpec, SpecComponent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathEmbedding {
    pub vertices: Vec<usize>,
}

impl PathEmbedding {
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        distinct(&self.vertices) && self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClawEmbedding {
    pub center: usize,
    /// Each leg starts at a neighbour of the centre and walks outwards.
    pub legs: [Vec<usize>; 3],
}

impl ClawEmbedding {
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut all = vec![self.center];
        for leg in &self.legs {
            all.extend_from_slice(leg);
            let mut prev = self.center;
            for &v in leg {
                if !g.has_edge(prev, v) {
                    return false;
                }
                prev = v;
            }
        }
        distinct(&all)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentEmbedding {
    Path(PathEmbedding),
    Claw(ClawEmbedding),
}

fn distinct(vs: &[usize]) -> bool {
    let mut s = vs.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// One pattern vertex to place: its parent slot (already placed) and the
/// degree it needs in the host.
struct Slot {
    parent: Option<usize>,
    degree: usize,
}

/// Finds vertex-disjoint copies of every component of `spec` in `g`, in the
/// order the components are listed by `spec`.
pub fn find_pattern(g: &Graph, spec: &HSpec) -> Option<Vec<ComponentEmbedding>> {
    let comps = spec.components();
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(comps[i].vertex_count()));

    // Slots in BFS order per component; `starts[c]` is the first slot of
    // the c-th component in search order.
    let mut slots = Vec::new();
    let mut starts = Vec::new();
    for &ci in &order {
        starts.push(slots.len());
        let pattern = HSpec::new(vec![comps[ci]]).expect("valid").to_graph();
        let base = slots.len();
        let slot_of = bfs_numbering(&pattern);
        let mut by_slot = vec![0; pattern.n()];
        for (v, &s) in slot_of.iter().enumerate() {
            by_slot[s] = v;
        }
        for &v in &by_slot {
            let parent = pattern
                .neighbors(v)
                .iter()
                .find(|&&u| slot_of[u] < slot_of[v])
                .map(|&u| base + slot_of[u]);
            slots.push(Slot {
                parent,
                degree: pattern.degree(v),
            });
        }
    }

    let mut image = vec![usize::MAX; slots.len()];
    let mut used = vec![false; g.n()];
    if !place(g, &slots, 0, &mut image, &mut used) {
        return None;
    }

    let mut result: Vec<Option<ComponentEmbedding>> = vec![None; comps.len()];
    for (pos, &ci) in order.iter().enumerate() {
        let start = starts[pos];
        let comp = comps[ci];
        let pattern = HSpec::new(vec![comp]).expect("valid").to_graph();
        let slot_of = bfs_numbering(&pattern);
        let host = |p: usize| image[start + slot_of[p]];
        let emb = match comp {
            SpecComponent::Path(r) => ComponentEmbedding::Path(PathEmbedding {
                vertices: (0..r).map(host).collect(),
            }),
            SpecComponent::Claw(h, i, j) => {
                let mut legs: [Vec<usize>; 3] = Default::default();
                let mut next = 1;
                for (k, len) in [h, i, j].into_iter().enumerate() {
                    legs[k] = (next..next + len).map(host).collect();
                    next += len;
                }
                ComponentEmbedding::Claw(ClawEmbedding {
                    center: host(0),
                    legs,
                })
            }
        };
        result[ci] = Some(emb);
    }
    Some(result.into_iter().map(|e| e.expect("every component placed")).collect())
}

/// BFS position of each pattern vertex from vertex 0.
fn bfs_numbering(pattern: &Graph) -> Vec<usize> {
    let mut slot_of = vec![usize::MAX; pattern.n()];
    slot_of[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut next = 0;
    while let Some(v) = queue.pop_front() {
        for &u in pattern.neighbors(v) {
            if slot_of[u] == usize::MAX {
                next += 1;
                slot_of[u] = next;
                queue.push_back(u);
            }
        }
    }
    slot_of
}

fn place(g: &Graph, slots: &[Slot], idx: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    if idx == slots.len() {
        return true;
    }
    let slot = &slots[idx];
    let candidates: Vec<usize> = match slot.parent {
        Some(p) => g.neighbors(image[p]).iter().copied().collect(),
        None => (0..g.n()).collect(),
    };
    for v in candidates {
        if used[v] || g.degree(v) < slot.degree {
            continue;
        }
        used[v] = true;
        image[idx] = v;
        if place(g, slots, idx + 1, image, used) {
            return true;
        }
        used[v] = false;
    }
    image[idx] = usize::MAX;
    false
}
