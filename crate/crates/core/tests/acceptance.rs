//! Acceptance criteria, one line each.
//!
//! Two criteria are red against the published claims, with the reason
//! printed alongside: the three degree-11 witnesses are related by explicit
//! affine relabellings of Z_95, and the divisibility-only contraction test
//! admits the split 41 = 5 + 6 + 30. The test fails if any other criterion is
//! red, or if one of these two turns green.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use bipartite_moore::caseanalysis::{
    contraction_feasibility, nonexistence_case_audit, ComponentMultiset, MultisetConstraints,
    Verdict,
};
use bipartite_moore::fixtures::degree_11_witnesses;
use bipartite_moore::structure::{
    check_observations, check_observations_forced, classify_and_decompose, is_isomorphic,
    repeat_structure, short_cycles, verify_mapping, Status,
};
use bipartite_moore::{
    affine_equivalence, build_phi, build_phi_spec, build_theta, defect, diameter3_test, max_m,
    moore_bound, search_offsets, two_step_residues, Extent, PhiSpec, Regularity, SearchMode,
    SearchTask, Vertex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_RED: [usize; 2] = [2, 5];

struct Outcome {
    pass: bool,
    note: String,
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed())
}

fn ok(note: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        note: note.into(),
    }
}

fn red(note: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        note: note.into(),
    }
}

fn check(cond: bool, note: impl Into<String>) -> Outcome {
    Outcome {
        pass: cond,
        note: note.into(),
    }
}

fn witnesses() -> Outcome {
    let mb = moore_bound(11, 3).unwrap();
    for s in degree_11_witnesses() {
        let g = build_phi_spec(&s);
        let good = g.order() == 190
            && g.n_left() == 95
            && g.regularity() == Regularity::Regular { degree: 11 }
            && g.diameter().unwrap() == Extent::Finite(3)
            && defect(11, 3, g.order() as u128).unwrap().defect == 32
            && mb == 222;
        if !good {
            return red(format!("{s} fails a check"));
        }
    }
    ok("3 graphs: 190 vertices, 11-regular, diameter 3, defect 32 against 222")
}

fn non_isomorphism() -> Outcome {
    let w = degree_11_witnesses();
    let mut notes = Vec::new();
    let mut all_distinct = true;
    for i in 0..3 {
        for k in i + 1..3 {
            let (a, b) = (build_phi_spec(&w[i]), build_phi_spec(&w[k]));
            let r = is_isomorphic(&a, &b).unwrap();
            if r.isomorphic {
                all_distinct = false;
                // the evidence for the red verdict must itself check out
                assert!(verify_mapping(&a, &b, r.mapping.as_ref().unwrap()));
                let (u, c) = affine_equivalence(&w[i], &w[k]).expect("affine certificate");
                let m = 95;
                let map: Vec<(Vertex, Vertex)> = a
                    .vertices()
                    .map(|v| {
                        let shift = if v.side == bipartite_moore::Side::L {
                            0
                        } else {
                            c
                        };
                        (
                            v,
                            Vertex {
                                side: v.side,
                                index: (u * v.index + shift) % m,
                            },
                        )
                    })
                    .collect();
                assert!(verify_mapping(&a, &b, &map));
                notes.push(format!("#{}~#{} via i->{u}i(+{c} on y)", i + 1, k + 1));
            }
        }
    }
    if all_distinct {
        ok("pairwise non-isomorphic")
    } else {
        red(format!(
            "the published tuples are pairwise isomorphic, certified by affine maps: {}",
            notes.join(", ")
        ))
    }
}

fn search_empty(d: usize, m: usize, limit: Duration) -> (bool, String) {
    let t = Instant::now();
    let r = search_offsets(&SearchTask::new(d, m, SearchMode::FindAll), 4).unwrap();
    let el = t.elapsed();
    (
        r.exhausted && r.solutions.is_empty() && el < limit,
        format!(
            "d={d} m={m}: {} solutions, exhausted={}, {} nodes, {:.3}s",
            r.solutions.len(),
            r.exhausted,
            r.counters.nodes_visited,
            el.as_secs_f64()
        ),
    )
}

fn d7_search() -> Outcome {
    let (p, n) = search_empty(7, 41, Duration::from_secs(5));
    check(p, n)
}

fn other_searches() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (d, m, secs) in [(6, 29, 1), (8, 55, 30), (9, 71, 1800)] {
        let (p, n) = search_empty(d, m, Duration::from_secs(secs));
        pass &= p;
        notes.push(n);
    }
    check(pass, notes.join("; "))
}

fn contraction() -> Outcome {
    let c = MultisetConstraints {
        total: 41,
        min_part: 5,
        max_part: 36,
        n_min: 2,
        n_max: 8,
    };
    let r = contraction_feasibility(&c, None);
    if r.feasible.is_empty() {
        return ok(format!("{} multisets, none feasible", r.examined));
    }
    // 5 | 30 and 6 | 30, so H is a path of length 2
    assert_eq!(
        r.feasible,
        vec![ComponentMultiset {
            parts: vec![5, 6, 30]
        }]
    );
    let capped = contraction_feasibility(&c, Some(4));
    assert!(capped.feasible.is_empty());
    red(format!(
        "{} multisets; divisibility alone admits {{5,6,30}} (H = 5-30-6, diameter 2); \
         with quotients capped at d-3 = 4 none is feasible",
        r.examined
    ))
}

fn audit() -> Outcome {
    let r = nonexistence_case_audit(7, Some(4), 4).unwrap();
    let conj = r.entries.iter().all(|e| e.verdict == Verdict::Pass);
    let order = r.entry("order").unwrap();
    let has = |k: &str, v: &str| order.values.iter().any(|(a, b)| a == k && b == v);
    let nums = has("mooreBound", "86") && has("order", "82") && has("Nb(7,3)", "80");
    check(
        r.overall == Verdict::Pass && conj && nums,
        format!(
            "{} entries pass, M^b(7,3)=86, |Γ|=82, N^b(7,3)=80=86-6: {}",
            r.entries.len(),
            r.conclusion
        ),
    )
}

fn small_cases() -> Outcome {
    let t = Instant::now();
    let r4 = max_m(4, 5, 11, None, 4).unwrap();
    let r5 = max_m(5, 5, 19, None, 4).unwrap();
    let mut pass = r4.best_m == Some(11)
        && r4.witnesses.first().map(ToString::to_string).as_deref() == Some("phi 11: 4")
        && r5.best_m == Some(19)
        && !r5.witnesses.is_empty();
    for (w, d) in [(&r4.witnesses[0], 4u32), (&r5.witnesses[0], 5)] {
        let g = build_phi_spec(w);
        let sc = short_cycles(&g, 3).unwrap();
        let dec = classify_and_decompose(&g);
        pass &= g.diameter().unwrap() == Extent::Finite(3)
            && defect(d, 3, g.order() as u128).unwrap().defect == 4
            && g.girth() == Extent::Finite(4)
            && sc.per_vertex_count.iter().all(|&c| c == 2)
            && dec.gamma1.len() == 1
            && dec.gamma1[0].vertices().count() == g.order();
    }
    pass &= t.elapsed() < Duration::from_secs(5);
    check(
        pass,
        format!(
            "m(4)=11 via {}, m(5)=19 via {}",
            r4.witnesses[0], r5.witnesses[0]
        ),
    )
}

fn bfs_diameter(m: usize, a: &[usize]) -> Option<usize> {
    let mut adj = vec![Vec::new(); 2 * m];
    for i in 0..m {
        for s in [0, 1, m - 1].iter().chain(a) {
            let j = m + (i + s) % m;
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    let mut best = 0;
    for s in 0..2 * m {
        let mut dist = vec![usize::MAX; 2 * m];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
            }
        }
        best = best.max(*dist.iter().max().unwrap());
    }
    (best != usize::MAX).then_some(best)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let samples = 400;
    let mut bad = Vec::new();
    let mut full = 0;
    for _ in 0..samples {
        let m = rng.gen_range(5..=60);
        let k = rng.gen_range(0..=6usize.min(m - 3));
        let mut pool: Vec<usize> = (2..=m - 2).collect();
        let mut a = Vec::new();
        for _ in 0..k {
            a.push(pool.swap_remove(rng.gen_range(0..pool.len())));
        }
        let s = PhiSpec::new(m, a.clone()).unwrap();
        let d = s.degree();
        let test = diameter3_test(&s);
        full += usize::from(test);
        let oracle = bfs_diameter(m, &a).is_some_and(|x| x <= 3);
        if test != oracle || two_step_residues(&s).multiset.len() != d * d - d - 1 {
            bad.push(s.to_string());
        }
    }
    check(
        bad.is_empty(),
        format!(
            "{samples} random specs ({full} of diameter <= 3), {} mismatches {bad:?}",
            bad.len()
        ),
    )
}

fn structural() -> Outcome {
    let mut failures = Vec::new();
    let mut fixtures = vec![build_theta(2).unwrap(), build_phi(7).unwrap()];
    for s in ["phi 11: 4", "phi 19: 5,8", "phi 27: 4,12,21"] {
        fixtures.push(build_phi_spec(&s.parse().unwrap()));
    }
    for g in &fixtures {
        let sc = short_cycles(g, 3).unwrap();
        let rs = repeat_structure(g, &sc);
        if !rs
            .pairs
            .iter()
            .all(|p| rs.repeat_of(&sc, p.cycle, p.repeat) == Some(p.vertex))
        {
            failures.push("repeat involution");
        }
        if !rs.sets_single_sided() {
            failures.push("closed sets single-sided");
        }
    }
    let theta = classify_and_decompose(&fixtures[0]);
    if theta.gamma2.len() != 1 || theta.gamma2[0].branch.len() != 2 {
        failures.push("Θ_2 recognition");
    }
    for m in 5..=15 {
        let d = classify_and_decompose(&build_phi(m).unwrap());
        if d.gamma1.len() != 1 || d.gamma1[0].m != m {
            failures.push("Φ_m recognition");
        }
    }
    let phi11 = &fixtures[2];
    let dec = classify_and_decompose(phi11);
    let rep = check_observations(phi11, &dec, 4);
    if !rep.applicable || rep.failures().count() > 0 {
        failures.push("observations on Φ_11(4)");
    }
    // corrupted: a branch vertex joined to another Θ_2's non-branch vertex
    let t = build_theta(2).unwrap();
    let bad = t.disjoint_union(&t).with_edges(&[(0, 3)]).unwrap();
    let o = check_observations_forced(&bad, &classify_and_decompose(&bad), 4);
    let g2 = o.get("noedgeG2G2").unwrap();
    if g2.status != Status::Fail || g2.witness != vec![Vertex::left(0), Vertex::right(3)] {
        failures.push("noedgeG2G2 witness");
    }
    // corrupted: Φ_11(4) with one extra edge
    let bad = phi11.with_edges(&[(0, 5)]).unwrap();
    let o = check_observations_forced(&bad, &classify_and_decompose(&bad), 4);
    if !o.failures().any(|f| !f.witness.is_empty()) {
        failures.push("corrupted Φ_11(4) witness");
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            "repeats, closed sets, recognition and observations hold".to_string()
        } else {
            format!("failed: {}", failures.join(", "))
        },
    )
}

fn determinism() -> Outcome {
    let tasks = [
        SearchTask::new(7, 41, SearchMode::FindAll),
        SearchTask::new(5, 19, SearchMode::FindAll),
        SearchTask::new(6, 27, SearchMode::FindFirst),
        SearchTask::new(6, 27, SearchMode::CountOnly),
        SearchTask::new(9, 71, SearchMode::FindAll).with_budget(5000),
    ];
    let mut pass = true;
    for t in &tasks {
        let outs: Vec<String> = [1, 2, 8]
            .iter()
            .map(|&w| serde_json::to_string_pretty(&search_offsets(t, w).unwrap()).unwrap())
            .collect();
        pass &= outs.windows(2).all(|p| p[0] == p[1]);
    }
    check(
        pass,
        format!("{} tasks byte-identical at 1, 2 and 8 workers", tasks.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

// Runs without the libtest harness so the criterion lines are never captured.
fn main() {
    let criteria: [Criterion; 10] = [
        ("witness verification", witnesses),
        ("non-isomorphism", non_isomorphism),
        ("d=7 search", d7_search),
        ("d=6,8,9 searches", other_searches),
        ("contraction infeasibility", contraction),
        ("case audit", audit),
        ("positive small cases", small_cases),
        ("oracle equivalence", oracle_equivalence),
        ("structural invariants", structural),
        ("determinism", determinism),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        let (o, el) = timed(f);
        println!(
            "criterion {n:>2} {} {name}: {} ({:.2}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.note,
            el.as_secs_f64()
        );
        if o.pass == KNOWN_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    assert!(
        unexpected.is_empty(),
        "criteria with unexpected status: {unexpected:?}"
    );
    // runtime bounds
    let (_, el) = timed(witnesses);
    assert!(el < Duration::from_secs(1));
    let (_, el) = timed(non_isomorphism);
    assert!(el < Duration::from_secs(60));
}
