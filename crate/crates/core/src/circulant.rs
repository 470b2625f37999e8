//! Θ_t and Φ-family builders, offset specs and the two-step residue test.
//!
//! `Φ_m(A)` has sides `x_0..x_{m-1}` (left) and `y_0..y_{m-1}` (right) with
//! `x_i ~ y_{i+s}` for every `s` in the connection set `{0, 1, -1} ∪ A`,
//! subscripts mod `m`. Same-side vertices reachable from `x_0` in two steps
//! are exactly the differences of the connection set, which is why diameter
//! can be decided from residues alone.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};
use crate::graph::BipartiteGraph;

/// Smallest modulus for which `Φ_m` is defined.
pub const MIN_MODULUS: usize = 5;

/// A modulus together with sorted, distinct offsets `a_j ∈ [2, m-2]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiSpec {
    m: usize,
    offsets: Vec<usize>,
}

impl PhiSpec {
    pub fn new(m: usize, mut offsets: Vec<usize>) -> Result<Self> {
        if m < MIN_MODULUS {
            return Err(invalid(format!(
                "modulus must be at least {MIN_MODULUS}, got {m}"
            )));
        }
        for &a in &offsets {
            if a < 2 || a > m - 2 {
                return Err(invalid(format!("offset {a} outside [2, {}]", m - 2)));
            }
        }
        offsets.sort_unstable();
        if let Some(w) = offsets.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate offset {}", w[0])));
        }
        Ok(PhiSpec { m, offsets })
    }

    /// Plain `Φ_m`.
    pub fn plain(m: usize) -> Result<Self> {
        Self::new(m, Vec::new())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn degree(&self) -> usize {
        3 + self.offsets.len()
    }

    /// Offsets mapped through `a -> m - a`.
    pub fn negated(&self) -> PhiSpec {
        let mut offsets: Vec<usize> = self.offsets.iter().map(|&a| self.m - a).collect();
        offsets.sort_unstable();
        PhiSpec { m: self.m, offsets }
    }

    /// `{0, 1, m-1} ∪ A`, the right-neighbour shifts of every `x_i`.
    pub fn connection_set(&self) -> Vec<usize> {
        let mut s = vec![0, 1, self.m - 1];
        s.extend_from_slice(&self.offsets);
        s
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi {}:", self.m)?;
        for (k, a) in self.offsets.iter().enumerate() {
            if k == 0 {
                write!(f, " {a}")?;
            } else {
                write!(f, ",{a}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for PhiSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(format!("expected `phi <m>: <a_1>,<a_2>,...`, got {s:?}"));
        let rest = s.trim().strip_prefix("phi").ok_or_else(bad)?;
        let (m, list) = rest.split_once(':').ok_or_else(bad)?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let list = list.trim();
        let offsets = if list.is_empty() {
            Vec::new()
        } else {
            list.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(m, offsets)
    }
}

impl Serialize for PhiSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PhiSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Three internally disjoint paths of length `t` between two branch vertices.
///
/// Vertices are 2-coloured by parity of their distance from the first branch
/// vertex, which is always `(L, 0)`.
pub fn build_theta(t: usize) -> Result<BipartiteGraph> {
    if t < 2 {
        return Err(invalid(format!(
            "theta path length must be at least 2, got {t}"
        )));
    }
    // node ids: 0 = a, 1 = b, then path k interior s at 2 + k*(t-1) + (s-1)
    let n = 3 * t - 1;
    let node = |k: usize, s: usize| -> usize {
        match s {
            0 => 0,
            s if s == t => 1,
            s => 2 + k * (t - 1) + (s - 1),
        }
    };
    let parity = |id: usize| -> usize {
        match id {
            0 => 0,
            1 => t % 2,
            id => ((id - 2) % (t - 1) + 1) % 2,
        }
    };
    let mut index = vec![0usize; n];
    let mut counts = [0usize; 2];
    for id in 0..n {
        let p = parity(id);
        index[id] = counts[p];
        counts[p] += 1;
    }
    let mut edges = Vec::with_capacity(3 * t);
    for k in 0..3 {
        for s in 0..t {
            let (u, v) = (node(k, s), node(k, s + 1));
            let (l, r) = if parity(u) == 0 { (u, v) } else { (v, u) };
            edges.push((index[l], index[r]));
        }
    }
    BipartiteGraph::from_edges(counts[0], counts[1], edges)
}

pub fn build_phi(m: usize) -> Result<BipartiteGraph> {
    Ok(build_phi_spec(&PhiSpec::plain(m)?))
}

pub fn build_phi_spec(spec: &PhiSpec) -> BipartiteGraph {
    let m = spec.m;
    let shifts = spec.connection_set();
    let edges = (0..m).flat_map(|i| shifts.iter().map(move |&s| (i, (i + s) % m)));
    BipartiteGraph::from_edges(m, m, edges).expect("validated spec yields a simple graph")
}

/// The two-step residue collection of a spec and whether it covers `Z_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCoverage {
    pub m: usize,
    /// `0, 1, -1, 2, -2`, then per offset `a, -a, a+1, -a-1, a-1, -a+1`, then
    /// `a_i - a_j` for ordered pairs `i != j`; all reduced mod `m`.
    pub multiset: Vec<usize>,
    pub covered: BitSet,
    pub full: bool,
}

impl ResidueCoverage {
    pub fn missing(&self) -> Vec<usize> {
        (0..self.m).filter(|&r| !self.covered.contains(r)).collect()
    }

    /// Residues occurring more than once in the collection, with counts.
    pub fn repeated(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &r in &self.multiset {
            *counts.entry(r).or_default() += 1;
        }
        let mut out: Vec<_> = counts.into_iter().filter(|&(_, c)| c > 1).collect();
        out.sort_unstable();
        out
    }
}

impl Serialize for ResidueCoverage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ResidueCoverage", 5)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("multisetSize", &self.multiset.len())?;
        st.serialize_field("coveredCount", &self.covered.count())?;
        st.serialize_field("missing", &self.missing())?;
        st.serialize_field("full", &self.full)?;
        st.end()
    }
}

/// Residues contributed by a single offset `a`: `a, -a, a+1, -a-1, a-1, -a+1`.
#[inline]
pub(crate) fn unit_residues(a: usize, m: usize) -> [usize; 6] {
    [a, m - a, (a + 1) % m, (m - a - 1) % m, a - 1, m - a + 1]
}

pub(crate) const BASE_RESIDUE_COUNT: usize = 5;

pub(crate) fn base_residues(m: usize) -> [usize; BASE_RESIDUE_COUNT] {
    [0, 1, m - 1, 2, m - 2]
}

pub fn two_step_residues(spec: &PhiSpec) -> ResidueCoverage {
    let m = spec.m;
    let a = &spec.offsets;
    let mut multiset: Vec<usize> = base_residues(m).to_vec();
    for &x in a {
        multiset.extend_from_slice(&unit_residues(x, m));
    }
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in a.iter().enumerate() {
            if i != j {
                multiset.push((x + m - y) % m);
            }
        }
    }
    let mut covered = BitSet::new(m);
    for &r in &multiset {
        covered.insert(r);
    }
    let full = covered.count() == m;
    ResidueCoverage {
        m,
        multiset,
        covered,
        full,
    }
}

/// True iff `Φ_m(A)` has diameter at most 3.
pub fn diameter3_test(spec: &PhiSpec) -> bool {
    two_step_residues(spec).full
}

/// The lexicographically smaller of the sorted offsets and their negation.
pub fn canonicalize(spec: &PhiSpec) -> PhiSpec {
    let neg = spec.negated();
    if neg.offsets < spec.offsets {
        neg
    } else {
        spec.clone()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A unit `u` and shift `c` with `u*S_a + c = S_b` for the connection sets of
/// two specs of equal modulus. Such a pair certifies the isomorphism
/// `x_i -> x_{u i}`, `y_j -> y_{u j + c}`. Smallest `u`, then `c`.
pub fn affine_equivalence(a: &PhiSpec, b: &PhiSpec) -> Option<(usize, usize)> {
    let m = a.m;
    if b.m != m || a.offsets.len() != b.offsets.len() {
        return None;
    }
    let mut target = vec![false; m];
    for s in b.connection_set() {
        target[s] = true;
    }
    let sa = a.connection_set();
    (1..m).filter(|&u| gcd(u, m) == 1).find_map(|u| {
        (0..m)
            .find(|&c| sa.iter().all(|&s| target[(u * s + c) % m]))
            .map(|c| (u, c))
    })
}
