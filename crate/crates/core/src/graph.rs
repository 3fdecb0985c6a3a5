//! Undirected graphs with explicit self-loops, the ε-threshold construction,
//! neighborhoods and hop distances.

use std::collections::VecDeque;
use std::ops::Deref;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PointSet, Tolerance};

/// Sorted, duplicate-free list of vertex indices (0-based).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn range(start: usize, end: usize) -> Self {
        Self((start..end).collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.0.iter().any(|&v| other.contains(v))
    }

    /// The first `k` members in index order.
    pub fn prefix(&self, k: usize) -> VertexSet {
        Self(self.0[..k.min(self.0.len())].to_vec())
    }

    /// `{0..n} \ self`.
    pub fn complement(&self, n: usize) -> VertexSet {
        Self((0..n).filter(|&v| !self.contains(v)).collect())
    }

    fn to_bits(&self, n: usize) -> Result<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(n);
        for &v in &self.0 {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
            bits.insert(v);
        }
        Ok(bits)
    }

    fn from_bits(bits: &FixedBitSet) -> Self {
        Self(bits.ones().collect())
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(v: Vec<usize>) -> Self {
        Self::new(v)
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Symmetric adjacency relation on `0..n` with every self-loop present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<FixedBitSet>,
}

impl Graph {
    /// Graph with self-loops only.
    pub fn empty(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(i);
                row
            })
            .collect();
        Self { rows }
    }

    pub fn complete(n: usize) -> Self {
        let rows = (0..n)
            .map(|_| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert_range(..);
                row
            })
            .collect();
        Self { rows }
    }

    pub fn from_edges(n: usize, edges: &[[usize; 2]]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &[u, v] in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    /// Number of neighbors of `v`, counting `v` itself.
    pub fn closed_degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].ones()
    }

    /// Non-loop edges as `[i, j]` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            out.extend(row.ones().filter(|&j| j > i).map(|j| [i, j]));
        }
        out
    }

    /// Adjacency rows as bitmasks; `None` if `n > 64`.
    pub fn row_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.rows
                .iter()
                .map(|row| row.ones().fold(0u64, |m, j| m | 1 << j))
                .collect(),
        )
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::IndexOutOfRange { index: v, n: self.n() });
        }
        Ok(())
    }

    /// `Γ(S) = {v : ∃u ∈ S, u ~ v}`; contains `S`.
    pub fn neighborhood(&self, s: &VertexSet) -> Result<VertexSet> {
        let bits = s.to_bits(self.n())?;
        Ok(VertexSet::from_bits(&self.neighborhood_bits(&bits)))
    }

    fn neighborhood_bits(&self, s: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n());
        for u in s.ones() {
            out.union_with(&self.rows[u]);
        }
        out
    }

    /// `Γ^t(S)`, with `Γ^0(S) = S`.
    pub fn iterated_neighborhood(&self, s: &VertexSet, t: usize) -> Result<VertexSet> {
        let mut cur = s.to_bits(self.n())?;
        for _ in 0..t {
            let next = self.neighborhood_bits(&cur);
            if next == cur {
                break;
            }
            cur = next;
        }
        Ok(VertexSet::from_bits(&cur))
    }

    /// BFS hop counts from every vertex of `sources`; `None` marks unreachable.
    pub fn bfs(&self, sources: &VertexSet) -> Result<Vec<Option<usize>>> {
        let n = self.n();
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for v in sources.iter() {
            self.check_vertex(v)?;
            dist[v] = Some(0);
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices are labelled");
            for w in self.rows[u].ones() {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Fewest edges on a `u`–`v` path; `None` if disconnected.
    pub fn hop_distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(v)?;
        Ok(self.bfs(&VertexSet(vec![u]))?[v])
    }

    pub fn hop_distance_between_sets(&self, s: &VertexSet, t: &VertexSet) -> Result<Option<usize>> {
        if s.is_empty() || t.is_empty() {
            return Err(Error::EmptySet);
        }
        for v in t.iter() {
            self.check_vertex(v)?;
        }
        let dist = self.bfs(s)?;
        Ok(t.iter().filter_map(|v| dist[v]).min())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson {
            n: self.n(),
            epsilon: None,
            edges: self.edges(),
        })
        .expect("graph serializes")
    }

    /// Reads the graph JSON format; self-loops are re-added and `epsilon`
    /// is ignored if present.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text)?;
        Self::from_edges(raw.n, &raw.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    epsilon: Option<f64>,
    edges: Vec<[usize; 2]>,
}

/// `G_{V,ε}`: an edge wherever the squared distance is at most `ε + tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGraph {
    epsilon: f64,
    graph: Graph,
}

impl ThresholdGraph {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson {
            n: self.n(),
            epsilon: Some(self.epsilon),
            edges: self.edges(),
        })
        .expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(text)?;
        let epsilon = raw
            .epsilon
            .ok_or_else(|| Error::InvalidArgument("graph JSON lacks \"epsilon\"".into()))?;
        check_epsilon(epsilon)?;
        Ok(Self {
            epsilon,
            graph: Graph::from_edges(raw.n, &raw.edges)?,
        })
    }
}

impl Deref for ThresholdGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    Ok(())
}

pub fn build_threshold_graph(ps: &PointSet, epsilon: f64, tol: Tolerance) -> Result<ThresholdGraph> {
    check_epsilon(epsilon)?;
    let n = ps.len();
    let cutoff = epsilon + tol.abs();
    let mut graph = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if ps.sq_dist(i, j) <= cutoff {
                graph.add_edge(i, j);
            }
        }
    }
    Ok(ThresholdGraph { epsilon, graph })
}
