//! Classification of 4-cycles by how they meet their neighbours, and the
//! resulting Γ_2 / Γ_1 / Γ_0 decomposition.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::cycles::{short_cycles, ShortCycleSet, UnionFind};
use crate::graph::{BipartiteGraph, Side, Vertex};

/// How two distinct 4-cycles meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Intersection {
    /// A path with this many edges (0 = a single shared vertex).
    Path(usize),
    /// Shared vertices that do not form a path.
    Scattered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CycleClass {
    /// Every neighbour meets it in a 2-path.
    S2,
    /// Every neighbour meets it in a 1-path.
    S1,
    /// Neighbours meet it in at most a single vertex, or it has none.
    S0,
    /// Mixed or non-path intersections.
    Unclassified,
}

/// A Γ_2 component recognised as Θ_2.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaComponent {
    pub vertices: Vec<Vertex>,
    pub branch: Vec<Vertex>,
    pub non_branch: Vec<Vertex>,
    pub cycles: Vec<usize>,
}

/// A Γ_1 component recognised as Φ_m, with the labelling that certifies it:
/// `x[i] ~ y[i], y[i+1], y[i-1]` are exactly its cycle edges.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PhiComponent {
    pub m: usize,
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    pub cycles: Vec<usize>,
}

impl PhiComponent {
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.x.iter().chain(self.y.iter()).copied()
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UnclassifiedComponent {
    pub class: CycleClass,
    pub vertices: Vec<Vertex>,
    pub cycles: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Decomposition {
    pub cycles: Vec<Vec<Vertex>>,
    #[serde(skip)]
    pub cycle_set: ShortCycleSet,
    pub classes: Vec<CycleClass>,
    pub s2: Vec<usize>,
    pub s1: Vec<usize>,
    pub s0: Vec<usize>,
    pub unclassified_cycles: Vec<usize>,
    pub v2: Vec<Vertex>,
    pub v1: Vec<Vertex>,
    pub v0: Vec<Vertex>,
    /// Vertices lying on cycles of more than one class.
    pub conflicts: Vec<Vertex>,
    pub gamma2: Vec<ThetaComponent>,
    pub gamma1: Vec<PhiComponent>,
    pub gamma0: Vec<Vertex>,
    /// Vertices on no short cycle.
    pub residue: Vec<Vertex>,
    pub unclassified_components: Vec<UnclassifiedComponent>,
}

impl Decomposition {
    pub fn is_clean(&self) -> bool {
        self.unclassified_cycles.is_empty()
            && self.unclassified_components.is_empty()
            && self.conflicts.is_empty()
    }
}

fn cycle_edges(cyc: &[Vertex]) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
    (0..cyc.len()).map(move |p| {
        let (a, b) = (cyc[p], cyc[(p + 1) % cyc.len()]);
        if a.side == Side::L {
            (a, b)
        } else {
            (b, a)
        }
    })
}

/// Intersection of two cycles as subgraphs.
pub fn intersect(c1: &[Vertex], c2: &[Vertex]) -> Option<Intersection> {
    let shared: BTreeSet<Vertex> = c1.iter().filter(|v| c2.contains(v)).copied().collect();
    if shared.is_empty() {
        return None;
    }
    let e2: BTreeSet<(Vertex, Vertex)> = cycle_edges(c2).collect();
    let edges: Vec<(Vertex, Vertex)> = cycle_edges(c1).filter(|e| e2.contains(e)).collect();
    // A path has one more vertex than edges and is connected and acyclic.
    if edges.len() + 1 != shared.len() {
        return Some(Intersection::Scattered);
    }
    let mut deg: HashMap<Vertex, usize> = HashMap::new();
    for (a, b) in &edges {
        *deg.entry(*a).or_default() += 1;
        *deg.entry(*b).or_default() += 1;
    }
    if deg.values().any(|&d| d > 2) {
        return Some(Intersection::Scattered);
    }
    Some(Intersection::Path(edges.len()))
}

fn classify(kinds: &BTreeSet<Intersection>) -> CycleClass {
    if kinds.contains(&Intersection::Scattered) {
        return CycleClass::Unclassified;
    }
    let lens: BTreeSet<usize> = kinds
        .iter()
        .map(|k| match k {
            Intersection::Path(l) => *l,
            Intersection::Scattered => unreachable!(),
        })
        .collect();
    match (lens.len(), lens.iter().next()) {
        (0, _) | (1, Some(0)) => CycleClass::S0,
        (1, Some(1)) => CycleClass::S1,
        (1, Some(2)) => CycleClass::S2,
        _ => CycleClass::Unclassified,
    }
}

/// Partitions the 4-cycles of `g` and recognises the components of Γ_2 and Γ_1.
pub fn classify_and_decompose(g: &BipartiteGraph) -> Decomposition {
    let cycle_set = short_cycles(g, 3).expect("D = 3 is supported");
    let cycles = &cycle_set.cycles;
    let incidence = cycle_set.incidence(g);

    let mut kinds: Vec<BTreeSet<Intersection>> = vec![BTreeSet::new(); cycles.len()];
    let mut edge_neighbors: Vec<Vec<usize>> = vec![Vec::new(); cycles.len()];
    for (c, cyc) in cycles.iter().enumerate() {
        let near: BTreeSet<usize> = cyc
            .iter()
            .flat_map(|&v| incidence[g.id(v)].iter().copied())
            .filter(|&o| o != c)
            .collect();
        for o in near {
            let k = intersect(cyc, &cycles[o]).expect("neighbours share a vertex");
            if k == Intersection::Path(1) {
                edge_neighbors[c].push(o);
            }
            kinds[c].insert(k);
        }
    }
    let classes: Vec<CycleClass> = kinds.iter().map(classify).collect();
    let pick = |cls: CycleClass| -> Vec<usize> {
        (0..cycles.len()).filter(|&c| classes[c] == cls).collect()
    };
    let (s2, s1, s0, unclassified_cycles) = (
        pick(CycleClass::S2),
        pick(CycleClass::S1),
        pick(CycleClass::S0),
        pick(CycleClass::Unclassified),
    );

    let vertices_of = |idx: &[usize]| -> Vec<Vertex> {
        let set: BTreeSet<Vertex> = idx
            .iter()
            .flat_map(|&c| cycles[c].iter().copied())
            .collect();
        set.into_iter().collect()
    };
    let (v2, v1, v0) = (vertices_of(&s2), vertices_of(&s1), vertices_of(&s0));
    let vu = vertices_of(&unclassified_cycles);
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    for set in [&v2, &v1, &v0, &vu] {
        for &v in set.iter() {
            *seen.entry(v).or_default() += 1;
        }
    }
    let mut conflicts: Vec<Vertex> = seen
        .iter()
        .filter(|&(_, &n)| n > 1)
        .map(|(&v, _)| v)
        .collect();
    conflicts.sort_unstable();
    let residue: Vec<Vertex> = g
        .vertices()
        .filter(|v| cycle_set.per_vertex_count[g.id(*v)] == 0)
        .collect();

    let mut gamma2 = Vec::new();
    let mut gamma1 = Vec::new();
    let mut unclassified_components = Vec::new();

    for comp in components(g, cycles, &s2) {
        match recognize_theta(cycles, &comp) {
            Ok(t) => gamma2.push(t),
            Err(reason) => unclassified_components.push(UnclassifiedComponent {
                class: CycleClass::S2,
                vertices: comp_vertices(cycles, &comp),
                cycles: comp,
                reason,
            }),
        }
    }
    for comp in components(g, cycles, &s1) {
        match recognize_phi(cycles, &comp, &edge_neighbors) {
            Ok(p) => gamma1.push(p),
            Err(reason) => unclassified_components.push(UnclassifiedComponent {
                class: CycleClass::S1,
                vertices: comp_vertices(cycles, &comp),
                cycles: comp,
                reason,
            }),
        }
    }

    Decomposition {
        cycles: cycles.clone(),
        classes,
        s2,
        s1,
        gamma0: v0.clone(),
        s0,
        unclassified_cycles,
        v2,
        v1,
        v0,
        conflicts,
        gamma2,
        gamma1,
        residue,
        unclassified_components,
        cycle_set,
    }
}

fn comp_vertices(cycles: &[Vec<Vertex>], comp: &[usize]) -> Vec<Vertex> {
    let set: BTreeSet<Vertex> = comp
        .iter()
        .flat_map(|&c| cycles[c].iter().copied())
        .collect();
    set.into_iter().collect()
}

/// Groups cycles of one class into connected components (cycles sharing a
/// vertex end up together).
fn components(g: &BipartiteGraph, cycles: &[Vec<Vertex>], members: &[usize]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.order());
    for &c in members {
        let first = g.id(cycles[c][0]);
        for &v in &cycles[c][1..] {
            uf.union(first, g.id(v));
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &c in members {
        let r = uf.find(g.id(cycles[c][0]));
        by_root.entry(r).or_default().push(c);
    }
    by_root.into_values().collect()
}

fn recognize_theta(cycles: &[Vec<Vertex>], comp: &[usize]) -> Result<ThetaComponent, String> {
    let vertices = comp_vertices(cycles, comp);
    if vertices.len() != 5 || comp.len() != 3 {
        return Err(format!(
            "expected 5 vertices and 3 cycles, found {} and {}",
            vertices.len(),
            comp.len()
        ));
    }
    let edges: BTreeSet<(Vertex, Vertex)> =
        comp.iter().flat_map(|&c| cycle_edges(&cycles[c])).collect();
    let degree = |v: Vertex| edges.iter().filter(|(a, b)| *a == v || *b == v).count();
    let mut degs: Vec<usize> = vertices.iter().map(|&v| degree(v)).collect();
    degs.sort_unstable();
    if degs != [2, 2, 2, 3, 3] {
        return Err(format!("degree sequence {degs:?} is not (3,3,2,2,2)"));
    }
    let (branch, non_branch): (Vec<Vertex>, Vec<Vertex>) =
        vertices.iter().partition(|&&v| degree(v) == 3);
    Ok(ThetaComponent {
        vertices,
        branch,
        non_branch,
        cycles: comp.to_vec(),
    })
}

/// Follows the chain of edge-sharing cycles around the component and checks
/// that the induced labelling reproduces the Φ_m edge pattern exactly.
fn recognize_phi(
    cycles: &[Vec<Vertex>],
    comp: &[usize],
    edge_neighbors: &[Vec<usize>],
) -> Result<PhiComponent, String> {
    let in_comp: BTreeSet<usize> = comp.iter().copied().collect();
    let nbrs = |c: usize| -> Vec<usize> {
        edge_neighbors[c]
            .iter()
            .copied()
            .filter(|o| in_comp.contains(o))
            .collect()
    };
    for &c in comp {
        let n = nbrs(c).len();
        if n != 2 {
            return Err(format!(
                "cycle {c} shares an edge with {n} cycles, expected 2"
            ));
        }
    }
    let start = comp[0];
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = nbrs(start)[0];
    while cur != start {
        if order.len() > comp.len() {
            return Err("cycle chain does not close".into());
        }
        order.push(cur);
        let nb = nbrs(cur);
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    if order.len() != comp.len() {
        return Err(format!(
            "cycle chain closes after {} of {} cycles",
            order.len(),
            comp.len()
        ));
    }
    let m = order.len();
    if m < 5 {
        return Err(format!("chain of {m} cycles is shorter than Φ_5"));
    }
    // e_i = C_{i-1} ∩ C_i = {x_i, y_i}
    let mut x = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    for i in 0..m {
        let a = &cycles[order[(i + m - 1) % m]];
        let b = &cycles[order[i]];
        let shared: Vec<Vertex> = a.iter().filter(|v| b.contains(v)).copied().collect();
        let (l, r): (Vec<Vertex>, Vec<Vertex>) = shared.iter().partition(|v| v.side == Side::L);
        if l.len() != 1 || r.len() != 1 {
            return Err(format!("consecutive cycles share {shared:?}, not one edge"));
        }
        x.push(l[0]);
        y.push(r[0]);
    }
    let distinct = |v: &[Vertex]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if !distinct(&x) || !distinct(&y) {
        return Err("chain labelling repeats a vertex".into());
    }
    let vertices = comp_vertices(cycles, comp);
    if vertices.len() != 2 * m {
        return Err(format!(
            "component has {} vertices, expected {}",
            vertices.len(),
            2 * m
        ));
    }
    let actual: BTreeSet<(Vertex, Vertex)> =
        comp.iter().flat_map(|&c| cycle_edges(&cycles[c])).collect();
    let expected: BTreeSet<(Vertex, Vertex)> = (0..m)
        .flat_map(|i| {
            [
                (x[i], y[i]),
                (x[i], y[(i + 1) % m]),
                (x[i], y[(i + m - 1) % m]),
            ]
        })
        .collect();
    if actual != expected {
        return Err("component edges do not follow the Φ pattern".into());
    }
    Ok(PhiComponent {
        m,
        x,
        y,
        cycles: order,
    })
}
