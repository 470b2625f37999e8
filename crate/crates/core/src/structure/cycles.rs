//! Short-cycle enumeration and the repeat relation.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::{BipartiteGraph, Side, Vertex};

/// All cycles of length `2D - 2`, each recorded once.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShortCycleSet {
    #[serde(rename = "D")]
    pub diameter: usize,
    /// Vertex sequences in cyclic order.
    pub cycles: Vec<Vec<Vertex>>,
    /// Number of cycles through each vertex, indexed by global id.
    pub per_vertex_count: Vec<usize>,
}

impl ShortCycleSet {
    pub fn cycle_len(&self) -> usize {
        2 * self.diameter - 2
    }

    pub fn count_at(&self, g: &BipartiteGraph, v: Vertex) -> usize {
        self.per_vertex_count[g.id(v)]
    }

    /// Cycle indices through each vertex, indexed by global id.
    pub fn incidence(&self, g: &BipartiteGraph) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); g.order()];
        for (c, cyc) in self.cycles.iter().enumerate() {
            for &v in cyc {
                inc[g.id(v)].push(c);
            }
        }
        inc
    }
}

/// Enumerates the short cycles (length `2D - 2`) of `g`.
///
/// At `D = 3` each pair of same-side vertices with `c >= 2` common neighbours
/// contributes `C(c, 2)` four-cycles. Longer lengths fall back to a rooted
/// depth-first search.
pub fn short_cycles(g: &BipartiteGraph, diameter: usize) -> Result<ShortCycleSet> {
    if diameter < 3 {
        return Err(invalid(format!("short cycles need D >= 3, got {diameter}")));
    }
    let cycles = if diameter == 3 {
        four_cycles(g)
    } else {
        cycles_of_length(g, 2 * diameter - 2)
    };
    let mut per_vertex_count = vec![0; g.order()];
    for c in &cycles {
        for &v in c {
            per_vertex_count[g.id(v)] += 1;
        }
    }
    Ok(ShortCycleSet {
        diameter,
        cycles,
        per_vertex_count,
    })
}

fn four_cycles(g: &BipartiteGraph) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let n = g.n_left();
    for u in 0..n {
        let ru = g.row(Vertex::left(u));
        for v in u + 1..n {
            let rv = g.row(Vertex::left(v));
            if ru.intersection_count(rv) < 2 {
                continue;
            }
            let mut common = ru.clone();
            common.intersect_with(rv);
            let common: Vec<usize> = common.iter().collect();
            for (a, &w) in common.iter().enumerate() {
                for &z in &common[a + 1..] {
                    out.push(vec![
                        Vertex::left(u),
                        Vertex::right(w),
                        Vertex::left(v),
                        Vertex::right(z),
                    ]);
                }
            }
        }
    }
    out
}

fn cycles_of_length(g: &BipartiteGraph, len: usize) -> Vec<Vec<Vertex>> {
    let adj = g.adjacency_lists();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(len);
    let mut on_path = vec![false; adj.len()];

    fn extend(
        adj: &[Vec<usize>],
        len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let root = path[0];
        let last = *path.last().expect("path starts at root");
        if path.len() == len {
            // one orientation only
            if adj[last].contains(&root) && path[1] < last {
                out.push(path.clone());
            }
            return;
        }
        for &w in &adj[last] {
            if w > root && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                extend(adj, len, path, on_path, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }

    let mut raw = Vec::new();
    for s in 0..adj.len() {
        path.clear();
        path.push(s);
        on_path[s] = true;
        extend(&adj, len, &mut path, &mut on_path, &mut raw);
        on_path[s] = false;
    }
    for c in raw {
        out.push(c.into_iter().map(|id| g.vertex(id)).collect());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepeatPair {
    pub cycle: usize,
    pub vertex: Vertex,
    pub repeat: Vertex,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RepeatStructure {
    /// `rep^C(x)` for every cycle `C` and vertex `x` on it.
    pub pairs: Vec<RepeatPair>,
    /// Connected components of the repeat relation, each sorted, ordered by
    /// smallest member.
    pub minimal_closed_sets: Vec<Vec<Vertex>>,
}

impl RepeatStructure {
    /// The repeat of `v` on cycle `c`, if `v` lies on it.
    pub fn repeat_of(&self, cycles: &ShortCycleSet, c: usize, v: Vertex) -> Option<Vertex> {
        let cyc = &cycles.cycles[c];
        let pos = cyc.iter().position(|&w| w == v)?;
        Some(cyc[(pos + cycles.diameter - 1) % cyc.len()])
    }

    /// Whether every minimal closed set lies in one partite set.
    pub fn sets_single_sided(&self) -> bool {
        self.minimal_closed_sets
            .iter()
            .all(|s| s.iter().all(|v| v.side == s[0].side))
    }

    pub fn set_sides(&self) -> Vec<Option<Side>> {
        self.minimal_closed_sets
            .iter()
            .map(|s| {
                let side = s.first()?.side;
                s.iter().all(|v| v.side == side).then_some(side)
            })
            .collect()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so groups are keyed deterministically
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    /// Groups of the given members, each sorted, ordered by smallest member.
    pub(crate) fn groups(&mut self, members: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in members {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        let mut groups: Vec<Vec<usize>> = by_root
            .into_values()
            .map(|mut v| {
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        groups.sort_by_key(|v| v[0]);
        groups
    }
}

pub fn repeat_structure(g: &BipartiteGraph, cycles: &ShortCycleSet) -> RepeatStructure {
    let half = cycles.diameter - 1;
    let mut pairs = Vec::new();
    let mut uf = UnionFind::new(g.order());
    let mut members = Vec::new();
    for (c, cyc) in cycles.cycles.iter().enumerate() {
        for (p, &v) in cyc.iter().enumerate() {
            let rep = cyc[(p + half) % cyc.len()];
            pairs.push(RepeatPair {
                cycle: c,
                vertex: v,
                repeat: rep,
            });
            uf.union(g.id(v), g.id(rep));
            members.push(g.id(v));
        }
    }
    let minimal_closed_sets = uf
        .groups(members)
        .into_iter()
        .map(|grp| grp.into_iter().map(|id| g.vertex(id)).collect())
        .collect();
    RepeatStructure {
        pairs,
        minimal_closed_sets,
    }
}
