//! Necessary conditions satisfied by every bipartite `(d, 3, -4)`-graph,
//! evaluated on a concrete decomposition.
//!
//! A pass is consistency only. A fail refutes the defect-4 claim and carries a
//! witness that can be checked by hand.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::cycles::repeat_structure;
use super::decompose::Decomposition;
use crate::bounds::{defect, DefectRecord};
use crate::graph::{BipartiteGraph, Extent, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Observation {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    /// Vertices (often an edge's two endpoints) exhibiting a failure.
    pub witness: Vec<Vertex>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObservationReport {
    pub d: u32,
    pub defect: Option<DefectRecord>,
    pub applicable: bool,
    pub reason: String,
    pub observations: Vec<Observation>,
}

impl ObservationReport {
    pub fn get(&self, name: &str) -> Option<&Observation> {
        self.observations.iter().find(|o| o.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Observation> {
        self.observations
            .iter()
            .filter(|o| o.status == Status::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.observations.iter().all(|o| o.status != Status::Fail)
    }
}

pub const OBSERVATION_NAMES: [&str; 14] = [
    "girth",
    "shortCycleCounts",
    "partition",
    "closedSetsSameSide",
    "gamma0ClosedSets",
    "noedgeG2G2",
    "noedgeG2G1",
    "noedgeG2G0",
    "G1",
    "G1G1",
    "cardinalG0",
    "edgeG2G1",
    "edgeG0G1",
    "closedSetDivisibility",
];

/// Where a vertex sits in the decomposition.
#[derive(Clone, Copy, Debug, Default)]
struct Place {
    theta: Option<(usize, bool)>,
    phi: Option<usize>,
    gamma0: bool,
}

struct Ctx<'a> {
    g: &'a BipartiteGraph,
    dec: &'a Decomposition,
    d: usize,
    place: Vec<Place>,
}

impl Ctx<'_> {
    fn place(&self, v: Vertex) -> Place {
        self.place[self.g.id(v)]
    }

    /// Every edge `(u, w)` with `u` a left vertex, as vertex pairs.
    fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.g
            .edges()
            .map(|(i, j)| (Vertex::left(i), Vertex::right(j)))
    }
}

fn pass(name: &'static str, detail: impl Into<String>) -> Observation {
    Observation {
        name,
        status: Status::Pass,
        detail: detail.into(),
        witness: Vec::new(),
    }
}

fn fail(name: &'static str, detail: impl Into<String>, witness: Vec<Vertex>) -> Observation {
    Observation {
        name,
        status: Status::Fail,
        detail: detail.into(),
        witness,
    }
}

fn not_applicable(name: &'static str, detail: impl Into<String>) -> Observation {
    Observation {
        name,
        status: Status::NotApplicable,
        detail: detail.into(),
        witness: Vec::new(),
    }
}

/// Evaluates the observations when the order of `g` equals `M^b(d,3) - 4`;
/// otherwise every entry is reported as not applicable.
pub fn check_observations(g: &BipartiteGraph, dec: &Decomposition, d: u32) -> ObservationReport {
    run(g, dec, d, false)
}

/// Evaluates the observations regardless of the order of `g`.
pub fn check_observations_forced(
    g: &BipartiteGraph,
    dec: &Decomposition,
    d: u32,
) -> ObservationReport {
    run(g, dec, d, true)
}

fn run(g: &BipartiteGraph, dec: &Decomposition, d: u32, force: bool) -> ObservationReport {
    let record = defect(d, 3, g.order() as u128).ok();
    let (defect_ok, reason) = match &record {
        Some(r) if r.defect == 4 => (true, format!("order {} is M^b({d},3) - 4", r.order)),
        Some(r) => (false, format!("defect {} is not 4", r.defect)),
        None => (
            false,
            format!(
                "order {} exceeds M^b({d},3) or d is out of range",
                g.order()
            ),
        ),
    };
    let applicable = d >= 4 && (defect_ok || force);
    let reason = if d < 4 {
        format!("observations need d >= 4, got {d}")
    } else if !defect_ok && force {
        format!("{reason}; evaluated on request")
    } else {
        reason
    };
    if !applicable {
        return ObservationReport {
            d,
            defect: record,
            applicable,
            observations: OBSERVATION_NAMES
                .iter()
                .map(|&n| not_applicable(n, reason.clone()))
                .collect(),
            reason,
        };
    }

    let mut place = vec![Place::default(); g.order()];
    for (t, th) in dec.gamma2.iter().enumerate() {
        for &v in &th.vertices {
            place[g.id(v)].theta = Some((t, th.branch.contains(&v)));
        }
    }
    for (p, ph) in dec.gamma1.iter().enumerate() {
        for v in ph.vertices() {
            place[g.id(v)].phi = Some(p);
        }
    }
    for &v in &dec.gamma0 {
        place[g.id(v)].gamma0 = true;
    }
    let ctx = Ctx {
        g,
        dec,
        d: d as usize,
        place,
    };

    let observations = vec![
        girth(&ctx),
        cycle_counts(&ctx),
        partition(&ctx),
        closed_sets_same_side(&ctx),
        gamma0_closed_sets(&ctx),
        noedge_g2_g2(&ctx),
        noedge_g2_g1(&ctx),
        noedge_g2_g0(&ctx),
        g1_translation(&ctx),
        g1_g1(&ctx),
        cardinal_g0(&ctx),
        edge_g2_g1(&ctx),
        edge_g0_g1(&ctx),
        closed_set_divisibility(&ctx),
    ];
    debug_assert!(observations
        .iter()
        .zip(OBSERVATION_NAMES)
        .all(|(o, n)| o.name == n));
    ObservationReport {
        d,
        defect: record,
        applicable,
        reason,
        observations,
    }
}

fn girth(c: &Ctx) -> Observation {
    const NAME: &str = "girth";
    match c.g.girth() {
        Extent::Finite(4) => pass(NAME, "girth 4"),
        other => fail(NAME, format!("girth {other}, expected 4"), Vec::new()),
    }
}

fn cycle_counts(c: &Ctx) -> Observation {
    const NAME: &str = "shortCycleCounts";
    for v in c.g.vertices() {
        let n = c.dec.cycle_set.count_at(c.g, v);
        let ok = match n {
            2 => true,
            3 => matches!(c.place(v).theta, Some((_, true))),
            _ => false,
        };
        if !ok {
            return fail(
                NAME,
                format!("{v} lies on {n} four-cycles; expected 2, or 3 at a Θ_2 branch vertex"),
                vec![v],
            );
        }
    }
    pass(
        NAME,
        "every vertex on 2 four-cycles, or 3 at a Θ_2 branch vertex",
    )
}

fn partition(c: &Ctx) -> Observation {
    const NAME: &str = "partition";
    let dec = c.dec;
    if let Some(&cy) = dec.unclassified_cycles.first() {
        return fail(
            NAME,
            format!("cycle {cy} has mixed or non-path intersections"),
            dec.cycles[cy].clone(),
        );
    }
    if let Some(u) = dec.unclassified_components.first() {
        return fail(
            NAME,
            format!("unrecognised component: {}", u.reason),
            u.vertices.clone(),
        );
    }
    if let Some(&v) = dec.conflicts.first() {
        return fail(NAME, format!("{v} lies on cycles of two classes"), vec![v]);
    }
    if let Some(&v) = dec.residue.first() {
        return fail(NAME, format!("{v} lies on no four-cycle"), vec![v]);
    }
    pass(
        NAME,
        format!(
            "|V2|={} |V1|={} |V0|={}",
            dec.v2.len(),
            dec.v1.len(),
            dec.v0.len()
        ),
    )
}

fn closed_sets_same_side(c: &Ctx) -> Observation {
    const NAME: &str = "closedSetsSameSide";
    let rs = repeat_structure(c.g, &c.dec.cycle_set);
    for s in &rs.minimal_closed_sets {
        if s.iter().any(|v| v.side != s[0].side) {
            return fail(NAME, "minimal closed set spans both sides", s.clone());
        }
    }
    pass(
        NAME,
        format!("{} minimal closed sets", rs.minimal_closed_sets.len()),
    )
}

fn gamma0_closed_sets(c: &Ctx) -> Observation {
    const NAME: &str = "gamma0ClosedSets";
    let rs = repeat_structure(c.g, &c.dec.cycle_set);
    let g0: BTreeSet<Vertex> = c.dec.gamma0.iter().copied().collect();
    for s in &rs.minimal_closed_sets {
        if s.iter().all(|v| g0.contains(v)) && s.len() != 4 {
            return fail(
                NAME,
                format!(
                    "minimal closed set in Γ_0 has {} vertices, expected 4",
                    s.len()
                ),
                s.clone(),
            );
        }
    }
    pass(NAME, "every minimal closed set in Γ_0 has 4 vertices")
}

fn noedge_g2_g2(c: &Ctx) -> Observation {
    const NAME: &str = "noedgeG2G2";
    for (u, w) in c.edges() {
        for (a, b) in [(u, w), (w, u)] {
            if let (Some((ta, true)), Some((tb, false))) = (c.place(a).theta, c.place(b).theta) {
                if ta != tb {
                    return fail(
                        NAME,
                        format!("branch vertex {a} of one Θ_2 is adjacent to non-branch vertex {b} of another"),
                        vec![a, b],
                    );
                }
            }
        }
    }
    pass(NAME, "no branch/non-branch edge between distinct Θ_2")
}

fn noedge_g2_g1(c: &Ctx) -> Observation {
    const NAME: &str = "noedgeG2G1";
    for (u, w) in c.edges() {
        for (a, b) in [(u, w), (w, u)] {
            if matches!(c.place(a).theta, Some((_, true))) && c.place(b).phi.is_some() {
                return fail(
                    NAME,
                    format!("Θ_2 branch vertex {a} is adjacent to {b} in Γ_1"),
                    vec![a, b],
                );
            }
        }
    }
    pass(NAME, "no Θ_2 branch vertex has a neighbour in Γ_1")
}

fn noedge_g2_g0(c: &Ctx) -> Observation {
    const NAME: &str = "noedgeG2G0";
    for (u, w) in c.edges() {
        for (a, b) in [(u, w), (w, u)] {
            if matches!(c.place(a).theta, Some((_, false))) && c.place(b).gamma0 {
                return fail(
                    NAME,
                    format!("Θ_2 non-branch vertex {a} is adjacent to {b} in Γ_0"),
                    vec![a, b],
                );
            }
        }
    }
    pass(NAME, "no Θ_2 non-branch vertex has a neighbour in Γ_0")
}

fn g1_translation(c: &Ctx) -> Observation {
    const NAME: &str = "G1";
    for ph in &c.dec.gamma1 {
        let m = ph.m;
        let y_index: BTreeMap<Vertex, usize> =
            ph.y.iter().enumerate().map(|(j, &v)| (v, j)).collect();
        for (i, &xi) in ph.x.iter().enumerate() {
            for w in c.g.neighbors(xi) {
                let Some(&j) = y_index.get(&w) else { continue };
                for k in 0..m {
                    let (a, b) = (ph.x[(i + k) % m], ph.y[(j + k) % m]);
                    if !c.g.adjacent(a, b) {
                        return fail(
                            NAME,
                            format!("{xi}~{w} is present but its shift {a}~{b} by {k} is not"),
                            vec![xi, w, a, b],
                        );
                    }
                }
            }
        }
    }
    pass(
        NAME,
        format!(
            "edges inside {} Φ components are shift-invariant",
            c.dec.gamma1.len()
        ),
    )
}

/// Pairs of component indices joined by at least one edge, with a witness.
fn linked<F, G>(c: &Ctx, from: F, to: G) -> BTreeMap<(usize, usize), (Vertex, Vertex)>
where
    F: Fn(Place) -> Option<usize>,
    G: Fn(Place) -> Option<usize>,
{
    let mut out = BTreeMap::new();
    for (u, w) in c.edges() {
        for (a, b) in [(u, w), (w, u)] {
            if let (Some(p), Some(q)) = (from(c.place(a)), to(c.place(b))) {
                out.entry((p, q)).or_insert((a, b));
            }
        }
    }
    out
}

fn g1_g1(c: &Ctx) -> Observation {
    const NAME: &str = "G1G1";
    let pairs = linked(c, |p| p.phi, |p| p.phi);
    for ((p, q), (a, b)) in pairs {
        if p >= q {
            continue;
        }
        let (m1, m2) = (c.dec.gamma1[p].m, c.dec.gamma1[q].m);
        let (small, large) = (m1.min(m2), m1.max(m2));
        let ok = large % small == 0 && large / small <= c.d - 3;
        if !ok {
            return fail(
                NAME,
                format!("Φ_{m1} and Φ_{m2} are joined by {a}~{b} but {large} is not k*{small} with 1<=k<={}", c.d - 3),
                vec![a, b],
            );
        }
    }
    pass(
        NAME,
        "linked Φ components have orders m' = k m, 1 <= k <= d-3",
    )
}

fn cardinal_g0(c: &Ctx) -> Observation {
    const NAME: &str = "cardinalG0";
    if c.d != 7 {
        return not_applicable(NAME, "stated for d = 7 only");
    }
    let n = c.dec.gamma0.len();
    if n == 0 || (n.is_multiple_of(8) && n / 8 >= 3) {
        pass(NAME, format!("|Γ_0| = {n}"))
    } else {
        fail(
            NAME,
            format!("|Γ_0| = {n} is not 8k with k >= 3"),
            c.dec.gamma0.clone(),
        )
    }
}

fn edge_g2_g1(c: &Ctx) -> Observation {
    const NAME: &str = "edgeG2G1";
    let pairs = linked(c, |p| p.theta.map(|t| t.0), |p| p.phi);
    for ((_, q), (a, b)) in pairs {
        let m = c.dec.gamma1[q].m;
        let k = m / 3;
        if !m.is_multiple_of(3) || k < 2 || k > c.d - 2 {
            return fail(
                NAME,
                format!(
                    "Θ_2 joined to Φ_{m} by {a}~{b}, but {m} is not 3k with 2<=k<={}",
                    c.d - 2
                ),
                vec![a, b],
            );
        }
    }
    pass(
        NAME,
        "Φ components linked to Θ_2 have m' = 3k, 2 <= k <= d-2",
    )
}

fn edge_g0_g1(c: &Ctx) -> Observation {
    const NAME: &str = "edgeG0G1";
    let pairs = linked(c, |p| p.gamma0.then_some(0), |p| p.phi);
    for ((_, q), (a, b)) in pairs {
        let m = c.dec.gamma1[q].m;
        let k = m / 4;
        if !m.is_multiple_of(4) || k < 2 || k + 4 > c.d {
            return fail(
                NAME,
                format!(
                    "Γ_0 joined to Φ_{m} by {a}~{b}, but {m} is not 4k with 2<=k<={}",
                    c.d as i64 - 4
                ),
                vec![a, b],
            );
        }
    }
    pass(
        NAME,
        "Φ components linked to Γ_0 have m' = 4k, 2 <= k <= d-4",
    )
}

fn closed_set_divisibility(c: &Ctx) -> Observation {
    const NAME: &str = "closedSetDivisibility";
    let rs = repeat_structure(c.g, &c.dec.cycle_set);
    let sets = &rs.minimal_closed_sets;
    let mut owner = vec![usize::MAX; c.g.order()];
    for (s, set) in sets.iter().enumerate() {
        for &v in set {
            owner[c.g.id(v)] = s;
        }
    }
    let thetas: BTreeSet<BTreeSet<Vertex>> = c
        .dec
        .gamma2
        .iter()
        .map(|t| t.vertices.iter().copied().collect())
        .collect();
    for (u, w) in c.edges() {
        let (p, q) = (owner[c.g.id(u)], owner[c.g.id(w)]);
        if p == usize::MAX || q == usize::MAX || p == q {
            continue;
        }
        let (a, b) = (sets[p].len(), sets[q].len());
        if a % b == 0 || b % a == 0 {
            continue;
        }
        let union: BTreeSet<Vertex> = sets[p].iter().chain(&sets[q]).copied().collect();
        if thetas.contains(&union) {
            continue;
        }
        return fail(
            NAME,
            format!("closed sets of sizes {a} and {b} are joined by {u}~{w}"),
            vec![u, w],
        );
    }
    pass(NAME, "linked minimal closed sets have dividing sizes")
}
