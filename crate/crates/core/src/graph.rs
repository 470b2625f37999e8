//! Bipartite graphs with bitset adjacency, distance queries and file I/O.
//!
//! Vertices are addressed as `(side, index)`. Every routine that needs a flat
//! index uses the global id `index` for the left side and `n_left + index` for
//! the right side.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{invalid, Error, Result};

/// Hop count used for unreachable vertices.
pub const INFINITE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::L => Side::R,
            Side::R => Side::L,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub side: Side,
    pub index: usize,
}

impl Vertex {
    pub const fn left(index: usize) -> Self {
        Vertex {
            side: Side::L,
            index,
        }
    }

    pub const fn right(index: usize) -> Self {
        Vertex {
            side: Side::R,
            index,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::L => write!(f, "L{}", self.index),
            Side::R => write!(f, "R{}", self.index),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (side, rest) = match s.chars().next() {
            Some('L') | Some('x') => (Side::L, &s[1..]),
            Some('R') | Some('y') => (Side::R, &s[1..]),
            _ => return Err(invalid(format!("bad vertex reference {s:?}"))),
        };
        let index = rest
            .parse()
            .map_err(|_| invalid(format!("bad vertex reference {s:?}")))?;
        Ok(Vertex { side, index })
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A hop count or cycle length that may be unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extent {
    Finite(u32),
    Infinite,
}

impl Extent {
    pub fn finite(self) -> Option<u32> {
        match self {
            Extent::Finite(v) => Some(v),
            Extent::Infinite => None,
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(v) => write!(f, "{v}"),
            Extent::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Extent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extent::Finite(v) => s.serialize_u32(*v),
            Extent::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Regularity {
    Regular {
        degree: usize,
    },
    Irregular {
        min_degree: usize,
        max_degree: usize,
    },
}

/// Shortest-path information from one source vertex.
#[derive(Clone, Debug)]
pub struct DistanceProfile {
    pub source: Vertex,
    /// Indexed by global id; [`INFINITE`] when unreachable.
    pub distances: Vec<u32>,
    /// Largest finite distance.
    pub eccentricity: u32,
    /// Same-side vertices at distance exactly two.
    pub reachable_at_exactly_2: BitSet,
    /// True when every vertex of the graph was reached.
    pub spans: bool,
}

impl DistanceProfile {
    pub fn distance_to(&self, g: &BipartiteGraph, v: Vertex) -> Extent {
        match self.distances[g.id(v)] {
            INFINITE => Extent::Infinite,
            d => Extent::Finite(d),
        }
    }
}

/// Immutable simple bipartite graph.
#[derive(Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    /// `left[i]` holds the right neighbours of `(L, i)`.
    left: Vec<BitSet>,
    /// Transpose of `left`.
    right: Vec<BitSet>,
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BipartiteGraph({}+{}, {} edges)",
            self.n_left,
            self.n_right,
            self.edge_count()
        )
    }
}

impl BipartiteGraph {
    /// Builds a graph from `(left, right)` index pairs. Duplicate edges are
    /// rejected.
    pub fn from_edges(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut left = vec![BitSet::new(n_right); n_left];
        let mut right = vec![BitSet::new(n_left); n_right];
        for (i, j) in edges {
            if i >= n_left || j >= n_right {
                return Err(invalid(format!(
                    "edge ({i}, {j}) out of range for sides {n_left}+{n_right}"
                )));
            }
            if !left[i].insert(j) {
                return Err(invalid(format!("duplicate edge L{i}-R{j}")));
            }
            right[j].insert(i);
        }
        Ok(BipartiteGraph {
            n_left,
            n_right,
            left,
            right,
        })
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn order(&self) -> usize {
        self.n_left + self.n_right
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::L => self.n_left,
            Side::R => self.n_right,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.left.iter().map(BitSet::count).sum()
    }

    #[inline]
    pub fn id(&self, v: Vertex) -> usize {
        match v.side {
            Side::L => v.index,
            Side::R => self.n_left + v.index,
        }
    }

    #[inline]
    pub fn vertex(&self, id: usize) -> Vertex {
        if id < self.n_left {
            Vertex::left(id)
        } else {
            Vertex::right(id - self.n_left)
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.index < self.side_len(v.side)
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(invalid(format!("vertex {v} not in graph")))
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n_left)
            .map(Vertex::left)
            .chain((0..self.n_right).map(Vertex::right))
    }

    /// Neighbour row of `v`, indexed on the opposite side.
    #[inline]
    pub fn row(&self, v: Vertex) -> &BitSet {
        match v.side {
            Side::L => &self.left[v.index],
            Side::R => &self.right[v.index],
        }
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let other = v.side.other();
        self.row(v)
            .iter()
            .map(move |index| Vertex { side: other, index })
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.row(v).count()
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.left[i].contains(j)
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        match (u.side, v.side) {
            (Side::L, Side::R) => self.has_edge(u.index, v.index),
            (Side::R, Side::L) => self.has_edge(v.index, u.index),
            _ => false,
        }
    }

    /// Edges as `(left, right)` pairs in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |j| (i, j)))
    }

    /// Adjacency lists over global ids.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        self.vertices()
            .map(|v| self.neighbors(v).map(|w| self.id(w)).collect())
            .collect()
    }

    /// The graph with the two sides exchanged.
    pub fn swapped(&self) -> BipartiteGraph {
        BipartiteGraph {
            n_left: self.n_right,
            n_right: self.n_left,
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn bfs(&self, source: Vertex) -> Result<DistanceProfile> {
        self.check(source)?;
        let mut distances = vec![INFINITE; self.order()];
        distances[self.id(source)] = 0;

        // Frontier and visited sets live on alternating sides.
        let mut seen_same = BitSet::new(self.side_len(source.side));
        let mut seen_other = BitSet::new(self.side_len(source.side.other()));
        seen_same.insert(source.index);
        let mut frontier = seen_same.clone();
        let mut side = source.side;
        let mut depth = 0u32;
        let mut at_two = BitSet::new(self.side_len(source.side));

        loop {
            let next_side = side.other();
            let mut next = BitSet::new(self.side_len(next_side));
            for u in frontier.iter() {
                next.union_with(self.row(Vertex { side, index: u }));
            }
            let seen = if next_side == source.side {
                &mut seen_same
            } else {
                &mut seen_other
            };
            next.difference_with(seen);
            if next.is_empty() {
                break;
            }
            seen.union_with(&next);
            depth += 1;
            for w in next.iter() {
                distances[self.id(Vertex {
                    side: next_side,
                    index: w,
                })] = depth;
            }
            if depth == 2 {
                at_two = next.clone();
            }
            frontier = next;
            side = next_side;
        }

        let spans = distances.iter().all(|&d| d != INFINITE);
        Ok(DistanceProfile {
            source,
            distances,
            eccentricity: depth,
            reachable_at_exactly_2: at_two,
            spans,
        })
    }

    pub fn diameter(&self) -> Result<Extent> {
        if self.order() == 0 {
            return Err(invalid("diameter of the empty graph"));
        }
        let mut best = 0;
        for v in self.vertices() {
            let p = self.bfs(v)?;
            if !p.spans {
                return Ok(Extent::Infinite);
            }
            best = best.max(p.eccentricity);
        }
        Ok(Extent::Finite(best))
    }

    /// Length of a shortest cycle.
    pub fn girth(&self) -> Extent {
        let adj = self.adjacency_lists();
        let n = adj.len();
        let mut best = u32::MAX;
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            dist[s] = 0;
            parent[s] = usize::MAX;
            queue.clear();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &w in &adj[u] {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        if best == u32::MAX {
            Extent::Infinite
        } else {
            Extent::Finite(best)
        }
    }

    pub fn regularity(&self) -> Regularity {
        let mut degrees = self.vertices().map(|v| self.degree(v));
        let Some(first) = degrees.next() else {
            return Regularity::Regular { degree: 0 };
        };
        let (lo, hi) = degrees.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d)));
        if lo == hi {
            Regularity::Regular { degree: lo }
        } else {
            Regularity::Irregular {
                min_degree: lo,
                max_degree: hi,
            }
        }
    }

    /// Serializes to the adjacency-list text format.
    pub fn to_adjacency_string(&self) -> String {
        let mut out = format!("{} {}\n", self.n_left, self.n_right);
        for (i, row) in self.left.iter().enumerate() {
            out.push_str(&format!("x{i}:"));
            for j in row.iter() {
                out.push_str(&format!(" {j}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the adjacency-list text format. Neighbour lists must be strictly
    /// increasing and rows must appear in order.
    pub fn from_adjacency_str(text: &str) -> Result<Self> {
        let mut lines = text.split('\n').enumerate();
        let (n_left, n_right) = loop {
            let Some((no, line)) = lines.next() else {
                return Err(Error::Parse {
                    line: 1,
                    msg: "missing header".into(),
                });
            };
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse {
                line: no + 1,
                msg: format!("expected `<nLeft> <nRight>`, got {line:?}"),
            };
            if parts.len() != 2 {
                return Err(bad());
            }
            let a = parts[0].parse::<usize>().map_err(|_| bad())?;
            let b = parts[1].parse::<usize>().map_err(|_| bad())?;
            break (a, b);
        };

        let mut edges = Vec::new();
        let mut next_row = 0usize;
        for (no, line) in lines {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: no + 1, msg };
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `x<i>: ...`, got {line:?}")))?;
            let i: usize = head
                .trim()
                .strip_prefix('x')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(format!("bad row label {head:?}")))?;
            if i != next_row {
                return Err(err(format!("row x{i} out of order, expected x{next_row}")));
            }
            next_row += 1;
            let mut prev: Option<usize> = None;
            for tok in rest.split_whitespace() {
                let j: usize = tok
                    .parse()
                    .map_err(|_| err(format!("bad neighbour index {tok:?}")))?;
                if j >= n_right {
                    return Err(err(format!("neighbour {j} out of range")));
                }
                if prev.is_some_and(|p| p >= j) {
                    return Err(err("neighbour list not strictly increasing".into()));
                }
                prev = Some(j);
                edges.push((i, j));
            }
        }
        if next_row != n_left {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {n_left} rows, found {next_row}"),
            });
        }
        Self::from_edges(n_left, n_right, edges)
    }

    /// Parses `<i> <j>` edge lines, `#` starts a comment. Side sizes are one
    /// past the largest index seen on each side.
    pub fn from_edge_list_str(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = (parts.len() == 2)
                .then(|| Some((parts[0].parse().ok()?, parts[1].parse().ok()?)))
                .flatten();
            let Some((i, j)) = parsed else {
                return Err(Error::Parse {
                    line: no + 1,
                    msg: format!("expected `<i> <j>`, got {line:?}"),
                });
            };
            edges.push((i, j));
        }
        let n_left = edges.iter().map(|e| e.0 + 1).max().unwrap_or(0);
        let n_right = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
        Self::from_edges(n_left, n_right, edges)
    }

    /// Adjacency-list format if any line carries a `:`, edge list otherwise.
    pub fn from_str_auto(text: &str) -> Result<Self> {
        let adjacency = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .any(|l| l.contains(':'));
        if adjacency {
            Self::from_adjacency_str(text)
        } else {
            Self::from_edge_list_str(text)
        }
    }

    /// Disjoint union, placing `other` after `self` on both sides.
    pub fn disjoint_union(&self, other: &BipartiteGraph) -> BipartiteGraph {
        let (nl, nr) = (self.n_left, self.n_right);
        let edges = self
            .edges()
            .chain(other.edges().map(|(i, j)| (i + nl, j + nr)));
        Self::from_edges(nl + other.n_left, nr + other.n_right, edges)
            .expect("union of valid graphs is valid")
    }

    /// Copy of the graph with extra edges added.
    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Result<BipartiteGraph> {
        Self::from_edges(
            self.n_left,
            self.n_right,
            self.edges().chain(extra.iter().copied()),
        )
    }

    /// Copy of the graph with the given edges removed.
    pub fn without_edges(&self, remove: &[(usize, usize)]) -> Result<BipartiteGraph> {
        for &(i, j) in remove {
            if i >= self.n_left || j >= self.n_right || !self.has_edge(i, j) {
                return Err(invalid(format!("edge L{i}-R{j} not present")));
            }
        }
        Self::from_edges(
            self.n_left,
            self.n_right,
            self.edges().filter(|e| !remove.contains(e)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(a: usize, b: usize) -> BipartiteGraph {
        let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, j)));
        BipartiteGraph::from_edges(a, b, edges).unwrap()
    }

    fn cycle(len: usize) -> BipartiteGraph {
        // 2k-cycle: L_i ~ R_i, L_{i+1} ~ R_i
        let k = len / 2;
        let edges = (0..k).flat_map(|i| [(i, i), ((i + 1) % k, i)]);
        BipartiteGraph::from_edges(k, k, edges).unwrap()
    }

    #[test]
    fn complete_bipartite_distances() {
        let g = complete(3, 3);
        let p = g.bfs(Vertex::left(0)).unwrap();
        for j in 0..3 {
            assert_eq!(p.distance_to(&g, Vertex::right(j)), Extent::Finite(1));
        }
        for i in 1..3 {
            assert_eq!(p.distance_to(&g, Vertex::left(i)), Extent::Finite(2));
        }
        assert_eq!(p.eccentricity, 2);
        assert_eq!(
            p.reachable_at_exactly_2.iter().collect::<Vec<_>>(),
            vec![1, 2]
        );
        assert_eq!(complete(4, 4).diameter().unwrap(), Extent::Finite(2));
    }

    #[test]
    fn invalid_source_is_rejected() {
        let g = complete(2, 2);
        assert!(g.bfs(Vertex::right(2)).is_err());
    }

    #[test]
    fn disconnected_diameter_is_infinite() {
        let g = cycle(4).disjoint_union(&cycle(4));
        assert_eq!(g.diameter().unwrap(), Extent::Infinite);
        let p = g.bfs(Vertex::left(0)).unwrap();
        assert!(!p.spans);
        assert_eq!(p.distances[g.id(Vertex::left(3))], INFINITE);
    }

    #[test]
    fn empty_graph_diameter_errors() {
        let g = BipartiteGraph::from_edges(0, 0, []).unwrap();
        assert!(g.diameter().is_err());
    }

    #[test]
    fn girth_of_cycles_and_forests() {
        assert_eq!(cycle(6).girth(), Extent::Finite(6));
        assert_eq!(cycle(10).girth(), Extent::Finite(10));
        assert_eq!(complete(2, 3).girth(), Extent::Finite(4));
        let path = BipartiteGraph::from_edges(2, 2, [(0, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(path.girth(), Extent::Infinite);
    }

    #[test]
    fn regularity_verdicts() {
        assert_eq!(cycle(8).regularity(), Regularity::Regular { degree: 2 });
        assert_eq!(
            complete(2, 3).regularity(),
            Regularity::Irregular {
                min_degree: 2,
                max_degree: 3
            }
        );
    }

    #[test]
    fn duplicate_edges_rejected() {
        assert!(BipartiteGraph::from_edges(2, 2, [(0, 1), (0, 1)]).is_err());
        assert!(BipartiteGraph::from_edges(2, 2, [(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_format_is_exact() {
        let g = BipartiteGraph::from_edges(3, 2, [(0, 1), (0, 0), (2, 1)]).unwrap();
        let text = g.to_adjacency_string();
        assert_eq!(text, "3 2\nx0: 0 1\nx1:\nx2: 1\n");
        let back = BipartiteGraph::from_adjacency_str(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_adjacency_string(), text);
    }

    #[test]
    fn adjacency_parse_errors() {
        assert!(BipartiteGraph::from_adjacency_str("2 2\nx0: 1 0\nx1:\n").is_err());
        assert!(BipartiteGraph::from_adjacency_str("2 2\nx1: 0\nx0:\n").is_err());
        assert!(BipartiteGraph::from_adjacency_str("2 2\nx0: 2\nx1:\n").is_err());
        assert!(BipartiteGraph::from_adjacency_str("2 2\nx0: 0\n").is_err());
        assert!(BipartiteGraph::from_adjacency_str("").is_err());
    }

    #[test]
    fn edge_list_with_comments() {
        let g =
            BipartiteGraph::from_edge_list_str("# square\n0 0\n0 1 # tail\n\n1 0\n1 1\n").unwrap();
        assert_eq!(g, complete(2, 2));
        assert!(BipartiteGraph::from_edge_list_str("0 0\n0 0\n").is_err());
        assert!(BipartiteGraph::from_edge_list_str("0 x\n").is_err());
        assert_eq!(
            BipartiteGraph::from_str_auto("1 1\nx0: 0\n")
                .unwrap()
                .edge_count(),
            1
        );
        assert_eq!(BipartiteGraph::from_str_auto("0 0\n").unwrap().order(), 2);
    }

    #[test]
    fn vertex_text_round_trip() {
        for v in [Vertex::left(3), Vertex::right(17)] {
            assert_eq!(v.to_string().parse::<Vertex>().unwrap(), v);
        }
        assert_eq!("y4".parse::<Vertex>().unwrap(), Vertex::right(4));
        assert!("z1".parse::<Vertex>().is_err());
    }
}
