//! Immutable simple graphs with bitset adjacency rows, subset algebra,
//! component extraction, pair classification, and induced-P5 detection.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How two disjoint nonempty vertex sets relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Complete,
    Anticomplete,
    Mixed,
}

/// How a single vertex sees a set it does not belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purity {
    PureComplete,
    PureAnticomplete,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentMode {
    Connected,
    Anticonnected,
}

/// An immutable simple graph on vertices `0..n-1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            adj: (0..n).map(|_| VertexSet::empty(n)).collect(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::edgeless(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { v: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop { v: u });
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::edgeless(n);
        for u in 0..n {
            for v in u + 1..n {
                g.adj[u].insert(v);
                g.adj[v].insert(u);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if v > u {
                    e.push((u, v));
                }
            }
        }
        e
    }

    pub fn full_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::edgeless(self.n);
        for u in 0..self.n {
            let mut row = self.adj[u].complement(self.n);
            row.remove(u);
            g.adj[u] = row;
        }
        g
    }

    /// The graph on vertex set `s`, relabeled by increasing original index.
    /// Returns the graph together with the map new index -> original index.
    pub fn induced_with_map(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        if let Some(v) = s.iter().find(|&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { v, n: self.n });
        }
        let map = s.to_vec();
        let mut g = Graph::edgeless(map.len());
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                }
            }
        }
        Ok((g, map))
    }

    pub fn induced(&self, s: &VertexSet) -> Result<Graph> {
        Ok(self.induced_with_map(s)?.0)
    }

    /// Connected (or anticonnected) components of `G[S]`, ordered by least vertex.
    pub fn components(&self, s: &VertexSet, mode: ComponentMode) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut remaining = s.clone();
        while let Some(start) = remaining.min_elem() {
            let mut comp = VertexSet::empty(self.n);
            let mut stack = vec![start];
            comp.insert(start);
            remaining.remove(start);
            while let Some(v) = stack.pop() {
                let nbrs = match mode {
                    ComponentMode::Connected => self.adj[v].intersection(&remaining),
                    ComponentMode::Anticonnected => {
                        let mut non = self.adj[v].complement(self.n);
                        non.remove(v);
                        non.intersection(&remaining)
                    }
                };
                for u in nbrs.iter() {
                    comp.insert(u);
                    remaining.remove(u);
                    stack.push(u);
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected_within(&self, s: &VertexSet) -> bool {
        s.is_empty() || self.components(s, ComponentMode::Connected).len() == 1
    }

    /// Classify the relation of disjoint nonempty `a`, `b`.
    pub fn classify_pair(&self, a: &VertexSet, b: &VertexSet) -> Result<PairKind> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        if !a.is_disjoint_from(b) {
            return Err(Error::OverlappingSets);
        }
        let mut seen_edge = false;
        let mut seen_nonedge = false;
        for u in a.iter() {
            let hits = self.adj[u].intersection(b).len();
            if hits > 0 {
                seen_edge = true;
            }
            if hits < b.len() {
                seen_nonedge = true;
            }
            if seen_edge && seen_nonedge {
                return Ok(PairKind::Mixed);
            }
        }
        Ok(if seen_edge {
            PairKind::Complete
        } else {
            PairKind::Anticomplete
        })
    }

    /// Whether `v` is mixed on `s` (has both a neighbor and a nonneighbor there).
    /// An empty `s` counts as pure-anticomplete.
    pub fn mixed_on(&self, v: usize, s: &VertexSet) -> Result<Purity> {
        if s.contains(v) {
            return Err(Error::OverlappingSets);
        }
        let hits = self.adj[v].intersection(s).len();
        Ok(if hits == 0 {
            Purity::PureAnticomplete
        } else if hits == s.len() {
            Purity::PureComplete
        } else {
            Purity::Mixed
        })
    }

    /// Lexicographically least ordered tuple `(v1..v5)` inducing a P5, if any.
    ///
    /// Consecutive tuple entries are adjacent, all other pairs nonadjacent.
    /// The search enumerates tuples in lexicographic order with neighborhood
    /// pruning, so the first hit is the least witness; exhaustiveness is not
    /// sacrificed for speed.
    pub fn find_induced_p5(&self) -> Option<[usize; 5]> {
        let n = self.n;
        if n < 5 {
            return None;
        }
        for v1 in 0..n {
            let n1 = &self.adj[v1];
            for v2 in n1.iter() {
                // v3 adjacent to v2, not v1, not equal to v1
                let mut c3 = self.adj[v2].difference(n1);
                c3.remove(v1);
                for v3 in c3.iter() {
                    // v4 adjacent to v3, nonadjacent to v1 and v2
                    let mut c4 = self.adj[v3].difference(n1).difference(&self.adj[v2]);
                    c4.remove(v1);
                    c4.remove(v2);
                    for v4 in c4.iter() {
                        let mut c5 = self
                            .adj[v4]
                            .difference(n1)
                            .difference(&self.adj[v2])
                            .difference(&self.adj[v3]);
                        c5.remove(v1);
                        c5.remove(v2);
                        c5.remove(v3);
                        if let Some(v5) = c5.min_elem() {
                            return Some([v1, v2, v3, v4, v5]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_p5_free(&self) -> bool {
        self.find_induced_p5().is_none()
    }

    /// Debug text format: "n m\nu v\n..." with one edge per line.
    pub fn to_adjacency_text(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            s.push_str(&format!("{} {}\n", u, v));
        }
        s
    }

    pub fn from_adjacency_text(text: &str) -> Result<Graph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad vertex count".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad edge count".into()))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "edge count mismatch: header says {m}, got {}",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Common small fixtures used across tests and generators.
pub mod families {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Complete multipartite graph; `parts[i]` is the size of part `i`.
    /// Vertices are numbered part by part.
    pub fn complete_multipartite(parts: &[usize]) -> Graph {
        let n: usize = parts.iter().sum();
        let mut part_of = Vec::with_capacity(n);
        for (i, &p) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat(i).take(p));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Disjoint union of `k` copies of `g`.
    pub fn disjoint_copies(g: &Graph, k: usize) -> Graph {
        let n = g.n();
        let mut edges = Vec::new();
        for c in 0..k {
            for (u, v) in g.edges() {
                edges.push((c * n + u, c * n + v));
            }
        }
        Graph::from_edges(k * n, &edges).unwrap()
    }

    /// Disjoint union of two graphs; `b`'s vertices are shifted past `a`'s.
    pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
        let na = a.n();
        let mut edges = a.edges();
        for (u, v) in b.edges() {
            edges.push((na + u, na + v));
        }
        Graph::from_edges(na + b.n(), &edges).unwrap()
    }

    /// Join of `a` and `b`: disjoint union plus all edges between them.
    pub fn join(a: &Graph, b: &Graph) -> Graph {
        let na = a.n();
        let mut edges = a.edges();
        for (u, v) in b.edges() {
            edges.push((na + u, na + v));
        }
        for u in 0..na {
            for v in 0..b.n() {
                edges.push((u, na + v));
            }
        }
        Graph::from_edges(na + b.n(), &edges).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }
}
