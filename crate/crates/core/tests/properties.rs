use std::collections::BTreeSet;

use bipartite_moore::caseanalysis::{contraction_feasibility, MultisetConstraints};
use bipartite_moore::structure::{is_isomorphic, verify_mapping};
use bipartite_moore::{
    build_phi_spec, canonicalize, diameter3_test, search_offsets, two_step_residues,
    BipartiteGraph, Extent, PhiSpec, SearchMode, SearchTask, Vertex,
};
use proptest::prelude::*;

/// A valid spec with `m <= max_m` and at most `max_k` offsets.
fn spec(max_m: usize, max_k: usize) -> impl Strategy<Value = PhiSpec> {
    (5..=max_m).prop_flat_map(move |m| {
        let k = max_k.min(m - 3);
        proptest::sample::subsequence((2..=m - 2).collect::<Vec<_>>(), 0..=k)
            .prop_map(move |a| PhiSpec::new(m, a).unwrap())
    })
}

fn small_graph() -> impl Strategy<Value = BipartiteGraph> {
    (1usize..7, 1usize..7).prop_flat_map(|(l, r)| {
        proptest::collection::btree_set((0..l, 0..r), 0..=l * r)
            .prop_map(move |e| BipartiteGraph::from_edges(l, r, e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn residue_test_matches_bfs(s in spec(60, 6)) {
        let g = build_phi_spec(&s);
        let bfs3 = matches!(g.diameter().unwrap(), Extent::Finite(d) if d <= 3);
        prop_assert_eq!(diameter3_test(&s), bfs3, "{}", s);
    }

    #[test]
    fn multiset_size_identity(s in spec(60, 6)) {
        let d = s.degree();
        prop_assert_eq!(two_step_residues(&s).multiset.len(), d * d - d - 1);
    }

    #[test]
    fn coverage_is_consistent(s in spec(60, 6)) {
        let c = two_step_residues(&s);
        prop_assert!(c.covered.iter().all(|r| r < s.m()));
        prop_assert_eq!(c.full, c.covered.count() == s.m());
        let from_multiset: BTreeSet<usize> = c.multiset.iter().copied().collect();
        prop_assert_eq!(from_multiset, c.covered.iter().collect::<BTreeSet<_>>());
    }

    #[test]
    fn canonical_form(s in spec(60, 6)) {
        let c = canonicalize(&s);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert_eq!(canonicalize(&s.negated()), c.clone());
        prop_assert!(c == s || c == s.negated());
        prop_assert_eq!(diameter3_test(&c), diameter3_test(&s));
    }

    #[test]
    fn spec_text_round_trip(s in spec(200, 8)) {
        let t = s.to_string();
        prop_assert_eq!(t.parse::<PhiSpec>().unwrap(), s);
    }

    /// Every vertex has the same eccentricity and the same sorted
    /// degree-of-neighbours profile.
    #[test]
    fn vertex_transitivity_surrogate(s in spec(30, 4)) {
        let g = build_phi_spec(&s);
        let ecc: BTreeSet<u32> = g.vertices().map(|v| g.bfs(v).unwrap().eccentricity).collect();
        prop_assert_eq!(ecc.len(), 1);
        let profile = |v: Vertex| {
            let mut p: Vec<usize> = g.neighbors(v).map(|w| g.degree(w)).collect();
            p.sort();
            p
        };
        let first = profile(Vertex::left(0));
        prop_assert!(g.vertices().all(|v| profile(v) == first));
    }

    /// The neighbourhood of `x_k` is that of `x_0` shifted by `k`.
    #[test]
    fn neighbourhoods_shift(s in spec(60, 6)) {
        let g = build_phi_spec(&s);
        let m = s.m();
        let base: BTreeSet<usize> = g.neighbors(Vertex::left(0)).map(|w| w.index).collect();
        for k in 0..m {
            let nk: BTreeSet<usize> = g.neighbors(Vertex::left(k)).map(|w| w.index).collect();
            let shifted: BTreeSet<usize> = base.iter().map(|&j| (j + k) % m).collect();
            prop_assert_eq!(nk, shifted);
        }
    }

    #[test]
    fn negation_is_an_isomorphism(s in spec(25, 4)) {
        let (a, b) = (build_phi_spec(&s), build_phi_spec(&s.negated()));
        let m = s.m();
        let neg = |v: Vertex| Vertex { side: v.side, index: (m - v.index) % m };
        let map: Vec<(Vertex, Vertex)> = a.vertices().map(|v| (v, neg(v))).collect();
        prop_assert!(verify_mapping(&a, &b, &map));
        let r = is_isomorphic(&a, &b).unwrap();
        prop_assert!(r.isomorphic);
        prop_assert!(verify_mapping(&a, &b, r.mapping.as_ref().unwrap()));
    }

    #[test]
    fn distances_symmetric_and_parity(g in small_graph()) {
        let profiles: Vec<_> = g.vertices().map(|v| g.bfs(v).unwrap()).collect();
        for u in g.vertices() {
            for v in g.vertices() {
                let duv = profiles[g.id(u)].distance_to(&g, v);
                prop_assert_eq!(duv, profiles[g.id(v)].distance_to(&g, u));
                if let Extent::Finite(x) = duv {
                    prop_assert_eq!(x % 2 == 0, u.side == v.side);
                }
            }
        }
        if g.order() > 0 {
            let connected = profiles.iter().all(|p| p.spans);
            let diam = g.diameter().unwrap();
            if connected {
                let ecc = profiles.iter().map(|p| p.eccentricity).max().unwrap();
                prop_assert_eq!(diam, Extent::Finite(ecc));
            } else {
                prop_assert_eq!(diam, Extent::Infinite);
            }
        }
    }

    #[test]
    fn adjacency_round_trip(g in small_graph()) {
        let text = g.to_adjacency_string();
        let back = BipartiteGraph::from_adjacency_str(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_adjacency_string(), text);
        // the transpose agrees edge for edge
        for (i, j) in g.edges() {
            prop_assert!(g.adjacent(Vertex::right(j), Vertex::left(i)));
        }
    }

    #[test]
    fn isomorphism_reflexive_symmetric(g in small_graph(), h in small_graph()) {
        let r = is_isomorphic(&g, &g).unwrap();
        prop_assert!(r.isomorphic);
        prop_assert!(verify_mapping(&g, &g, r.mapping.as_ref().unwrap()));
        let gh = is_isomorphic(&g, &h).unwrap();
        let hg = is_isomorphic(&h, &g).unwrap();
        prop_assert_eq!(gh.isomorphic, hg.isomorphic);
        if let Some(map) = &gh.mapping {
            prop_assert!(verify_mapping(&g, &h, map));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_sound_symmetric_and_worker_independent(d in 4usize..=6, m in 5usize..=29) {
        prop_assume!(m < d * d - d && d - 3 <= m - 3);
        let task = SearchTask::new(d, m, SearchMode::FindAll);
        let one = search_offsets(&task, 1).unwrap();
        prop_assert!(one.exhausted);
        for w in [2, 8] {
            let other = search_offsets(&task, w).unwrap();
            prop_assert_eq!(
                serde_json::to_string(&other).unwrap(),
                serde_json::to_string(&one).unwrap()
            );
        }
        let mut sorted = one.solutions.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(&sorted, &one.solutions);
        for s in &one.solutions {
            prop_assert_eq!(canonicalize(s), s.clone());
            prop_assert!(diameter3_test(s));
            prop_assert!(diameter3_test(&s.negated()));
            let bfs = build_phi_spec(s).diameter().unwrap();
            prop_assert!(matches!(bfs, Extent::Finite(x) if x <= 3));
        }
        let count = search_offsets(&SearchTask::new(d, m, SearchMode::CountOnly), 2).unwrap();
        prop_assert_eq!(count.solution_count, one.solutions.len() as u64);
    }

    #[test]
    fn capped_contraction_is_a_subset(total in 10usize..=50, cap in 1usize..=8) {
        let c = MultisetConstraints::spanning(total);
        let loose: BTreeSet<_> = contraction_feasibility(&c, None).feasible.into_iter().collect();
        let tight = contraction_feasibility(&c, Some(cap));
        prop_assert!(tight.feasible.iter().all(|ms| loose.contains(ms)));
    }
}

#[test]
fn spacing_flag_keeps_d7_solution_set() {
    let plain = search_offsets(&SearchTask::new(7, 41, SearchMode::FindAll), 4).unwrap();
    let spaced = search_offsets(
        &SearchTask::new(7, 41, SearchMode::FindAll).with_saturation_spacing(true),
        4,
    )
    .unwrap();
    assert!(plain.exhausted && spaced.exhausted);
    assert_eq!(plain.solutions, spaced.solutions);
    assert!(plain.solutions.is_empty());
}

#[test]
fn budget_reports_partial() {
    let r = search_offsets(
        &SearchTask::new(9, 71, SearchMode::FindAll).with_budget(1000),
        2,
    )
    .unwrap();
    assert!(!r.exhausted);
    assert!(r.counters.nodes_visited <= 1000);
    assert!(r.shards_completed < r.shards_total);
}
