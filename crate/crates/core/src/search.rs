//! Exhaustive enumeration of offset tuples whose `Φ_m(A)` has diameter ≤ 3.
//!
//! Offsets are chosen in ascending order while a residue bitmask tracks which
//! classes of `Z_m` the two-step collection already covers. A branch is cut
//! when the offsets still to be chosen cannot supply enough new residues, and
//! tuples are kept only in their canonical orientation under `a -> m - a`.
//!
//! Work is split into shards by the value of the first free offset. Shards
//! are independent, so the merged report does not depend on how many workers
//! ran them.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::bounds::max_m_upper_bound;
use crate::circulant::{base_residues, diameter3_test, unit_residues, PhiSpec};
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    FindAll,
    FindFirst,
    CountOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchTask {
    pub d: usize,
    pub m: usize,
    pub mode: SearchMode,
    /// Offsets fixed in advance; the search enumerates their completions.
    pub prefix: Vec<usize>,
    pub node_budget: Option<u64>,
    /// Restrict offsets to `4 <= a <= m - 4`.
    pub saturation_spacing: bool,
}

impl SearchTask {
    pub fn new(d: usize, m: usize, mode: SearchMode) -> Self {
        SearchTask {
            d,
            m,
            mode,
            prefix: Vec::new(),
            node_budget: None,
            saturation_spacing: false,
        }
    }

    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.node_budget = Some(nodes);
        self
    }

    pub fn with_prefix(mut self, prefix: Vec<usize>) -> Self {
        self.prefix = prefix;
        self
    }

    pub fn with_saturation_spacing(mut self, on: bool) -> Self {
        self.saturation_spacing = on;
        self
    }

    fn slots(&self) -> usize {
        self.d - 3
    }

    fn offset_range(&self) -> (usize, usize) {
        if self.saturation_spacing {
            (4, self.m.saturating_sub(4))
        } else {
            (2, self.m - 2)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 4 {
            return Err(invalid(format!("search needs d >= 4, got {}", self.d)));
        }
        let cap = max_m_upper_bound(self.d as u32)?;
        if self.m < 5 || self.m > cap {
            return Err(invalid(format!(
                "m={} outside [5, {cap}] for d={}",
                self.m, self.d
            )));
        }
        if self.slots() > self.m - 3 {
            return Err(invalid(format!(
                "d={} needs {} distinct offsets but only {} exist mod {}",
                self.d,
                self.slots(),
                self.m - 3,
                self.m
            )));
        }
        if self.prefix.len() > self.slots() {
            return Err(invalid("prefix longer than the offset tuple"));
        }
        if self.prefix.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("prefix must be strictly increasing"));
        }
        let (lo, hi) = self.offset_range();
        if self.prefix.iter().any(|&a| a < lo || a > hi) {
            return Err(invalid(format!("prefix offsets must lie in [{lo}, {hi}]")));
        }
        if self.node_budget == Some(0) {
            return Err(invalid("node budget must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchCounters {
    pub nodes_visited: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_symmetry: u64,
}

impl SearchCounters {
    fn absorb(&mut self, other: &SearchCounters) {
        self.nodes_visited += other.nodes_visited;
        self.pruned_by_bound += other.pruned_by_bound;
        self.pruned_by_symmetry += other.pruned_by_symmetry;
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub task: SearchTask,
    /// Canonical, sorted, duplicate-free. Empty in count-only mode.
    pub solutions: Vec<PhiSpec>,
    pub solution_count: u64,
    pub counters: SearchCounters,
    pub shards_total: usize,
    pub shards_completed: usize,
    /// True only if the whole canonical space was visited.
    pub exhausted: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Maximum number of new residues `remaining` more offsets can contribute when
/// `chosen` offsets are already fixed.
#[inline]
pub fn coverage_capacity(chosen: usize, remaining: usize) -> usize {
    6 * remaining + 2 * chosen * remaining + remaining * remaining.saturating_sub(1)
}

struct ShardResult {
    solutions: Vec<Vec<usize>>,
    solution_count: u64,
    counters: SearchCounters,
    complete: bool,
}

/// Depth-first enumerator for one shard.
struct Walker<'a> {
    m: usize,
    slots: usize,
    hi: usize,
    mode: SearchMode,
    limit: u64,
    shard: usize,
    first_hit: &'a AtomicUsize,
    chosen: Vec<usize>,
    masks: Vec<BitSet>,
    counts: Vec<usize>,
    out: ShardResult,
    stopped: bool,
}

impl Walker<'_> {
    fn cancelled(&self) -> bool {
        self.mode == SearchMode::FindFirst && self.first_hit.load(Ordering::Relaxed) < self.shard
    }

    /// Pushes offset `a` on top of the current state; returns the new depth.
    fn push(&mut self, a: usize) -> usize {
        let depth = self.chosen.len();
        let m = self.m;
        let (below, above) = self.masks.split_at_mut(depth + 1);
        let next = &mut above[0];
        next.clone_from(&below[depth]);
        let mut count = self.counts[depth];
        for r in unit_residues(a, m) {
            count += next.insert(r) as usize;
        }
        for &c in &self.chosen {
            count += next.insert((a + m - c) % m) as usize;
            count += next.insert((c + m - a) % m) as usize;
        }
        self.counts[depth + 1] = count;
        self.chosen.push(a);
        depth + 1
    }

    fn is_canonical(&self) -> bool {
        let m = self.m;
        let mut neg: Vec<usize> = self.chosen.iter().map(|&a| m - a).collect();
        neg.sort_unstable();
        self.chosen <= neg
    }

    /// Visits the node just pushed, then its subtree.
    fn visit(&mut self) {
        if self.stopped {
            return;
        }
        self.out.counters.nodes_visited += 1;
        if self.out.counters.nodes_visited > self.limit {
            self.stopped = true;
            self.out.complete = false;
            return;
        }
        if self.out.counters.nodes_visited & 0xfff == 0 && self.cancelled() {
            self.stopped = true;
            self.out.complete = false;
            return;
        }
        let depth = self.chosen.len();
        let missing = self.m - self.counts[depth];
        let remaining = self.slots - depth;
        if coverage_capacity(depth, remaining) < missing {
            self.out.counters.pruned_by_bound += 1;
            return;
        }
        if remaining == 0 {
            if !self.is_canonical() {
                self.out.counters.pruned_by_symmetry += 1;
                return;
            }
            self.out.solution_count += 1;
            if self.mode != SearchMode::CountOnly {
                self.out.solutions.push(self.chosen.clone());
            }
            if self.mode == SearchMode::FindFirst {
                self.first_hit.fetch_min(self.shard, Ordering::Relaxed);
                self.stopped = true;
            }
            return;
        }
        self.descend();
    }

    fn descend(&mut self) {
        let depth = self.chosen.len();
        let remaining = self.slots - depth;
        let start = self.chosen.last().map_or(2, |&a| a + 1);
        let first = self.chosen.first().copied();
        // leave room for the offsets after this one
        let stop = (self.hi + 1).saturating_sub(remaining);
        for a in start..=stop {
            // canonical tuples satisfy a_1 + a_max <= m
            if first.is_some_and(|f| f + a > self.m) {
                self.out.counters.pruned_by_symmetry += 1;
                break;
            }
            self.push(a);
            self.visit();
            self.chosen.pop();
            if self.stopped {
                return;
            }
        }
    }
}

fn run_shard(
    task: &SearchTask,
    shard: usize,
    first_value: Option<usize>,
    first_hit: &AtomicUsize,
) -> ShardResult {
    let m = task.m;
    let (_, hi) = task.offset_range();
    let mut base = BitSet::new(m);
    for r in base_residues(m) {
        base.insert(r);
    }
    let base_count = base.count();
    let slots = task.slots();
    let mut w = Walker {
        m,
        slots,
        hi,
        mode: task.mode,
        limit: task.node_budget.unwrap_or(u64::MAX),
        shard,
        first_hit,
        chosen: Vec::with_capacity(slots),
        masks: vec![base; slots + 1],
        counts: vec![0; slots + 1],
        out: ShardResult {
            solutions: Vec::new(),
            solution_count: 0,
            counters: SearchCounters::default(),
            complete: true,
        },
        stopped: false,
    };
    w.counts[0] = base_count;

    if task.mode == SearchMode::FindFirst && first_hit.load(Ordering::Relaxed) < shard {
        w.out.complete = false;
        return w.out;
    }

    // Fixed prefix is applied without counting nodes; it is the same for all shards.
    for &a in &task.prefix {
        w.push(a);
    }
    match first_value {
        Some(a) => {
            if w.chosen.first().is_some_and(|&f| f + a > m) {
                w.out.counters.pruned_by_symmetry += 1;
                return w.out;
            }
            w.push(a);
            w.visit();
        }
        // the prefix already fills every slot
        None => w.visit(),
    }
    w.out
}

/// Runs the search with up to `workers` threads.
pub fn search_offsets(task: &SearchTask, workers: usize) -> Result<SearchReport> {
    task.validate()?;
    let started = Instant::now();
    let (lo, hi) = task.offset_range();
    let slots = task.slots();
    let free = slots - task.prefix.len();

    // Shard by the first free offset value.
    let shard_values: Vec<Option<usize>> = if free == 0 {
        vec![None]
    } else {
        let start = task.prefix.last().map_or(lo, |&a| (a + 1).max(lo));
        let stop = (hi + 1).saturating_sub(free);
        if start > stop {
            Vec::new()
        } else {
            (start..=stop).map(Some).collect()
        }
    };

    let first_hit = AtomicUsize::new(usize::MAX);
    let run = || -> Vec<ShardResult> {
        shard_values
            .par_iter()
            .enumerate()
            .map(|(i, &v)| run_shard(task, i, v, &first_hit))
            .collect()
    };
    let results = if workers <= 1 {
        shard_values
            .iter()
            .enumerate()
            .map(|(i, &v)| run_shard(task, i, v, &first_hit))
            .collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?
            .install(run)
    };

    // Merge in shard order. A shard counts only if it finished and the running
    // node total stays within budget.
    let budget = task.node_budget.unwrap_or(u64::MAX);
    let mut counters = SearchCounters::default();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut solution_count = 0u64;
    let mut shards_completed = 0usize;
    let mut exhausted = true;
    for r in &results {
        let within = counters
            .nodes_visited
            .saturating_add(r.counters.nodes_visited)
            <= budget;
        if task.mode == SearchMode::FindFirst && r.solution_count > 0 && within {
            counters.absorb(&r.counters);
            tuples.extend(r.solutions.iter().cloned());
            solution_count += r.solution_count;
            shards_completed += 1;
            exhausted = false;
            break;
        }
        if !r.complete || !within {
            exhausted = false;
            break;
        }
        counters.absorb(&r.counters);
        tuples.extend(r.solutions.iter().cloned());
        solution_count += r.solution_count;
        shards_completed += 1;
    }

    let mut solutions: Vec<PhiSpec> = tuples
        .into_iter()
        .map(|t| PhiSpec::new(task.m, t).expect("search only emits valid offsets"))
        .collect();
    solutions.sort();
    solutions.dedup();

    Ok(SearchReport {
        task: task.clone(),
        solutions,
        solution_count,
        counters,
        shards_total: shard_values.len(),
        shards_completed,
        exhausted,
        elapsed: started.elapsed(),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MaxMReport {
    pub d: usize,
    pub m_low: usize,
    pub m_high: usize,
    pub best_m: Option<usize>,
    pub witnesses: Vec<PhiSpec>,
    /// Every `m` above this value (up to `m_high`) was settled: exhausted
    /// without solutions, or it is `best_m`.
    pub settled_down_to: Option<usize>,
    pub per_m: Vec<SearchReport>,
}

/// Scans `m` downward from `m_high` and stops at the first modulus with a
/// solution, or at the first search that runs out of budget.
pub fn max_m(
    d: usize,
    m_low: usize,
    m_high: usize,
    node_budget: Option<u64>,
    workers: usize,
) -> Result<MaxMReport> {
    let cap = max_m_upper_bound(d as u32)?;
    if m_low < 5 || m_low > m_high || m_high > cap {
        return Err(invalid(format!(
            "need 5 <= mLow <= mHigh <= {cap}, got {m_low}..{m_high}"
        )));
    }
    let mut report = MaxMReport {
        d,
        m_low,
        m_high,
        best_m: None,
        witnesses: Vec::new(),
        settled_down_to: None,
        per_m: Vec::new(),
    };
    for m in (m_low..=m_high).rev() {
        if d - 3 > m - 3 {
            // not enough distinct offsets; nothing to search
            report.settled_down_to = Some(m);
            continue;
        }
        let mut task = SearchTask::new(d, m, SearchMode::FindFirst);
        task.node_budget = node_budget;
        let r = search_offsets(&task, workers)?;
        let found = !r.solutions.is_empty();
        let settled = found || r.exhausted;
        if found {
            report.best_m = Some(m);
            report.witnesses = r.solutions.clone();
        }
        report.per_m.push(r);
        if !settled {
            break;
        }
        report.settled_down_to = Some(m);
        if found {
            break;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Membership {
    pub spec: PhiSpec,
    pub full_coverage: bool,
}

/// Checks supplied tuples directly instead of searching for them.
pub fn verify_membership(specs: &[PhiSpec]) -> Vec<Membership> {
    specs
        .iter()
        .map(|s| Membership {
            spec: s.clone(),
            full_coverage: diameter3_test(s),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_formula() {
        assert_eq!(coverage_capacity(0, 1), 6);
        assert_eq!(coverage_capacity(2, 1), 10);
        // 5 + capacity(0, k) is the full multiset size d^2 - d - 1
        for k in 1..10usize {
            let d = k + 3;
            assert_eq!(5 + coverage_capacity(0, k), d * d - d - 1);
        }
    }

    #[test]
    fn d4_m11_single_solution() {
        let r = search_offsets(&SearchTask::new(4, 11, SearchMode::FindAll), 1).unwrap();
        assert!(r.exhausted);
        assert_eq!(r.solutions, vec![PhiSpec::new(11, vec![4]).unwrap()]);
    }

    #[test]
    fn task_validation() {
        assert!(SearchTask::new(3, 5, SearchMode::FindAll)
            .validate()
            .is_err());
        assert!(SearchTask::new(4, 12, SearchMode::FindAll)
            .validate()
            .is_err());
        assert!(SearchTask::new(7, 5, SearchMode::FindAll)
            .validate()
            .is_err());
        assert!(SearchTask::new(5, 19, SearchMode::FindAll)
            .with_prefix(vec![5, 3])
            .validate()
            .is_err());
        assert!(SearchTask::new(5, 19, SearchMode::FindAll)
            .with_budget(0)
            .validate()
            .is_err());
    }

    #[test]
    fn full_prefix_is_a_point_check() {
        let t = SearchTask::new(5, 19, SearchMode::FindAll);
        let all = search_offsets(&t, 1).unwrap();
        let w = all.solutions[0].offsets().to_vec();
        let r = search_offsets(&t.clone().with_prefix(w.clone()), 1).unwrap();
        assert_eq!(r.solutions, vec![all.solutions[0].clone()]);
        assert!(r.exhausted);
    }

    #[test]
    fn budget_cuts_search() {
        let t = SearchTask::new(6, 29, SearchMode::FindAll).with_budget(50);
        let r = search_offsets(&t, 1).unwrap();
        assert!(!r.exhausted);
        assert!(r.counters.nodes_visited <= 50);
    }

    #[test]
    fn find_first_matches_smallest_solution() {
        let all = search_offsets(&SearchTask::new(5, 19, SearchMode::FindAll), 1).unwrap();
        for workers in [1, 4] {
            let first =
                search_offsets(&SearchTask::new(5, 19, SearchMode::FindFirst), workers).unwrap();
            assert_eq!(first.solutions, vec![all.solutions[0].clone()]);
        }
        let count = search_offsets(&SearchTask::new(5, 19, SearchMode::CountOnly), 2).unwrap();
        assert!(count.solutions.is_empty());
        assert_eq!(count.solution_count, all.solutions.len() as u64);
    }
}
