//! Graph isomorphism by colour refinement with individualisation.
//!
//! Both graphs are refined jointly so colour ids are comparable. Sides are not
//! part of the initial colouring: an isomorphism may exchange them.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Vertex};

/// Largest order accepted by [`is_isomorphic`].
pub const ISO_VERTEX_CAP: usize = 1024;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IsoResult {
    pub isomorphic: bool,
    /// Edge-preserving bijection from the first graph onto the second.
    pub mapping: Option<Vec<(Vertex, Vertex)>>,
    pub search_nodes: u64,
}

struct Side<'a> {
    g: &'a BipartiteGraph,
    adj: Vec<Vec<usize>>,
}

/// Per-vertex invariant: degree plus the multiset of common-neighbour counts
/// with every other vertex on its side.
fn initial_invariant(g: &BipartiteGraph) -> Vec<(usize, Vec<usize>)> {
    g.vertices()
        .map(|v| {
            let row = g.row(v);
            let mut hist = vec![0usize; row.count() + 1];
            for u in 0..g.side_len(v.side) {
                if u == v.index {
                    continue;
                }
                let other = Vertex {
                    side: v.side,
                    index: u,
                };
                let c = row.intersection_count(g.row(other));
                hist[c] += 1;
            }
            (row.count(), hist)
        })
        .collect()
}

fn intern<K: Ord + Clone + std::hash::Hash>(a: &[K], b: &[K]) -> (Vec<u32>, Vec<u32>) {
    let mut keys: Vec<K> = a.iter().chain(b).cloned().collect();
    keys.sort();
    keys.dedup();
    let ids: HashMap<K, u32> = keys
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i as u32))
        .collect();
    (
        a.iter().map(|k| ids[k]).collect(),
        b.iter().map(|k| ids[k]).collect(),
    )
}

fn histogram(colors: &[u32]) -> Vec<usize> {
    let n = colors.iter().max().map_or(0, |&c| c as usize + 1);
    let mut h = vec![0; n];
    for &c in colors {
        h[c as usize] += 1;
    }
    h
}

fn distinct(colors: &[u32]) -> usize {
    histogram(colors).iter().filter(|&&c| c > 0).count()
}

/// Refines both colourings to a joint equitable partition. `None` when the
/// colour class sizes diverge.
fn refine(a: &Side, b: &Side, mut ca: Vec<u32>, mut cb: Vec<u32>) -> Option<(Vec<u32>, Vec<u32>)> {
    if histogram(&ca) != histogram(&cb) {
        return None;
    }
    let mut classes = distinct(&ca);
    loop {
        let sig = |s: &Side, c: &[u32]| -> Vec<(u32, Vec<u32>)> {
            s.adj
                .iter()
                .enumerate()
                .map(|(v, nb)| {
                    let mut cs: Vec<u32> = nb.iter().map(|&w| c[w]).collect();
                    cs.sort_unstable();
                    (c[v], cs)
                })
                .collect()
        };
        let (na, nb) = intern(&sig(a, &ca), &sig(b, &cb));
        if histogram(&na) != histogram(&nb) {
            return None;
        }
        let now = distinct(&na);
        ca = na;
        cb = nb;
        if now == classes {
            return Some((ca, cb));
        }
        classes = now;
    }
}

struct Search<'a> {
    a: Side<'a>,
    b: Side<'a>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, ca: Vec<u32>, cb: Vec<u32>) -> Option<Vec<usize>> {
        self.nodes += 1;
        let (ca, cb) = refine(&self.a, &self.b, ca, cb)?;
        let hist = histogram(&ca);
        let target = hist
            .iter()
            .enumerate()
            .filter(|&(_, &n)| n > 1)
            .min_by_key(|&(c, &n)| (n, c))
            .map(|(c, _)| c as u32);
        let Some(color) = target else {
            // discrete: the colouring is a bijection
            let mut pos = vec![usize::MAX; hist.len()];
            for (u, &c) in cb.iter().enumerate() {
                pos[c as usize] = u;
            }
            let map: Vec<usize> = ca.iter().map(|&c| pos[c as usize]).collect();
            return self.verify(&map).then_some(map);
        };
        let fresh = hist.len() as u32;
        let v = ca
            .iter()
            .position(|&c| c == color)
            .expect("class is nonempty");
        let candidates: Vec<usize> = (0..cb.len()).filter(|&u| cb[u] == color).collect();
        let mut ca2 = ca.clone();
        ca2[v] = fresh;
        for u in candidates {
            let mut cb2 = cb.clone();
            cb2[u] = fresh;
            if let Some(map) = self.run(ca2.clone(), cb2) {
                return Some(map);
            }
        }
        None
    }

    fn verify(&self, map: &[usize]) -> bool {
        self.a.adj.iter().enumerate().all(|(v, nb)| {
            nb.len() == self.b.adj[map[v]].len()
                && nb.iter().all(|&w| self.b.adj[map[v]].contains(&map[w]))
        })
    }
}

/// Decides whether `g1` and `g2` are isomorphic, returning a checked
/// bijection when they are.
pub fn is_isomorphic(g1: &BipartiteGraph, g2: &BipartiteGraph) -> Result<IsoResult> {
    for g in [g1, g2] {
        if g.order() > ISO_VERTEX_CAP {
            return Err(Error::Budget(format!(
                "isomorphism test limited to {ISO_VERTEX_CAP} vertices, got {}",
                g.order()
            )));
        }
    }
    let no = |nodes| IsoResult {
        isomorphic: false,
        mapping: None,
        search_nodes: nodes,
    };
    if g1.order() != g2.order() || g1.edge_count() != g2.edge_count() {
        return Ok(no(0));
    }
    let (ca, cb) = intern(&initial_invariant(g1), &initial_invariant(g2));
    let mut search = Search {
        a: Side {
            g: g1,
            adj: g1.adjacency_lists(),
        },
        b: Side {
            g: g2,
            adj: g2.adjacency_lists(),
        },
        nodes: 0,
    };
    match search.run(ca, cb) {
        Some(map) => {
            let mapping = map
                .iter()
                .enumerate()
                .map(|(v, &u)| (search.a.g.vertex(v), search.b.g.vertex(u)))
                .collect();
            Ok(IsoResult {
                isomorphic: true,
                mapping: Some(mapping),
                search_nodes: search.nodes,
            })
        }
        None => Ok(no(search.nodes)),
    }
}

/// Checks that `mapping` is a bijection carrying edges onto edges.
pub fn verify_mapping(
    g1: &BipartiteGraph,
    g2: &BipartiteGraph,
    mapping: &[(Vertex, Vertex)],
) -> bool {
    if g1.order() != g2.order() || mapping.len() != g1.order() || g1.edge_count() != g2.edge_count()
    {
        return false;
    }
    let mut image = vec![usize::MAX; g1.order()];
    let mut hit = vec![false; g2.order()];
    for &(v, u) in mapping {
        if !g1.contains(v) || !g2.contains(u) {
            return false;
        }
        let (iv, iu) = (g1.id(v), g2.id(u));
        if image[iv] != usize::MAX || hit[iu] {
            return false;
        }
        image[iv] = iu;
        hit[iu] = true;
    }
    g1.edges().all(|(i, j)| {
        let a = g2.vertex(image[g1.id(Vertex::left(i))]);
        let b = g2.vertex(image[g1.id(Vertex::right(j))]);
        g2.adjacent(a, b)
    })
}
