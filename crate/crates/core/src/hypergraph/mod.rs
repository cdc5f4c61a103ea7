//! k-uniform hypergraphs.
//!
//! Vertices are `0..n` inside the library. The `.hg` text format and every
//! report emitted by the CLI use 1-based labels; the conversion happens at
//! those boundaries only.

mod bipartition;
mod generate;
mod gf2;
mod io;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

pub use bipartition::{
    is_odd_transversal, odd_bipartition, product_odd_transversal, verify_witness, Bipartition,
    BipartitionReport, InfeasibleReason,
};
pub use generate::{generate, GenerateKind, GenerateOptions, Generated, SplitMix64};
pub use io::parse_hypergraph;

/// Errors raised while building or reading a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("vertex count must be positive")]
    NoVertices,
    #[error("uniformity must be at least 2, got {0}")]
    UniformityTooSmall(usize),
    #[error("edge {edge} has {got} vertices, expected {expected}")]
    WrongArity {
        edge: usize,
        got: usize,
        expected: usize,
    },
    #[error("edge {edge}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    #[error("edge {edge}: vertex {vertex} repeated")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("edge {edge} duplicates an earlier edge")]
    DuplicateEdge { edge: usize },
    #[error("uniformity mismatch: {left} vs {right}")]
    UniformityMismatch { left: usize, right: usize },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
    #[error("generator gave up after {0} attempts")]
    AttemptsExhausted(usize),
}

/// A simple k-uniform hypergraph with canonically ordered edges.
///
/// Every edge holds exactly `k` distinct vertices sorted ascending, and the
/// edge list is sorted lexicographically with no duplicates. Two hypergraphs
/// with the same edge sets therefore compare equal and serialize identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph from 0-based edges. Vertices inside an edge may
    /// come in any order; duplicate edges are rejected rather than merged.
    pub fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        if n == 0 {
            return Err(HypergraphError::NoVertices);
        }
        if k < 2 {
            return Err(HypergraphError::UniformityTooSmall(k));
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for (idx, mut edge) in edges.into_iter().enumerate() {
            if edge.len() != k {
                return Err(HypergraphError::WrongArity {
                    edge: idx,
                    got: edge.len(),
                    expected: k,
                });
            }
            edge.sort_unstable();
            if let Some(&v) = edge.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange {
                    edge: idx,
                    vertex: v + 1,
                    n,
                });
            }
            if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex {
                    edge: idx,
                    vertex: w[0] + 1,
                });
            }
            canonical.push((edge, idx));
        }
        canonical.sort();
        for pair in canonical.windows(2) {
            if pair[0].0 == pair[1].0 {
                let later = pair[0].1.max(pair[1].1);
                return Err(HypergraphError::DuplicateEdge { edge: later });
            }
        }
        Ok(Self {
            n,
            k,
            edges: canonical.into_iter().map(|(e, _)| e).collect(),
        })
    }

    /// Hypergraph with `n` vertices and no edges.
    pub fn edgeless(n: usize, k: usize) -> Result<Self, HypergraphError> {
        Self::new(n, k, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> DegreeVector {
        let mut d = vec![0usize; self.n];
        for edge in &self.edges {
            for &v in edge {
                d[v] += 1;
            }
        }
        DegreeVector(d)
    }

    /// Edges incident to each vertex, as indices into [`Hypergraph::edges`].
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in edge {
                inc[v].push(e);
            }
        }
        inc
    }

    /// Breadth-first search over the vertex-edge incidence structure.
    pub fn connectivity(&self) -> Connectivity {
        let incidence = self.incidence();
        let mut component = vec![usize::MAX; self.n];
        let mut used_edge = vec![false; self.edges.len()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if component[start] != usize::MAX {
                continue;
            }
            component[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &e in &incidence[v] {
                    if std::mem::replace(&mut used_edge[e], true) {
                        continue;
                    }
                    for &w in &self.edges[e] {
                        if component[w] == usize::MAX {
                            component[w] = count;
                            queue.push_back(w);
                        }
                    }
                }
            }
            count += 1;
        }
        let degrees = self.degrees();
        Connectivity {
            connected: count == 1,
            components: count,
            component,
            isolated: degrees.isolated(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connectivity().connected
    }

    /// Cartesian product `self □ other`.
    ///
    /// Vertex `(i, j)` maps to `i * other.n() + j`. Edges are the copies of
    /// `other`'s edges inside each fibre `{i} × V(other)` together with the
    /// copies of `self`'s edges inside each fibre `V(self) × {j}`.
    pub fn cartesian_product(&self, other: &Hypergraph) -> Result<Hypergraph, HypergraphError> {
        if self.k != other.k {
            return Err(HypergraphError::UniformityMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let m = other.n;
        let mut edges = Vec::with_capacity(self.n * other.num_edges() + m * self.num_edges());
        for i in 0..self.n {
            for e in &other.edges {
                edges.push(e.iter().map(|&j| i * m + j).collect());
            }
        }
        for j in 0..m {
            for e in &self.edges {
                edges.push(e.iter().map(|&i| i * m + j).collect());
            }
        }
        Hypergraph::new(self.n * m, self.k, edges)
    }

    /// Stable content hash of the canonical `.hg` serialization.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.to_hg().as_bytes());
        hex::encode(&digest[..8])
    }

    /// Vertex subsets of size `k`: `true` if `set` is an edge.
    pub fn contains_edge(&self, set: &[usize]) -> bool {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        self.edges.binary_search(&sorted).is_ok()
    }

    /// Removes the edges at the given indices.
    pub fn without_edges(&self, drop: &BTreeSet<usize>) -> Hypergraph {
        Hypergraph {
            n: self.n,
            k: self.k,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, e)| e.clone())
                .collect(),
        }
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hg())
    }
}

/// Vertex degrees `d_i = |{e : i ∈ e}|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DegreeVector(Vec<usize>);

impl DegreeVector {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Vertices of degree zero.
    pub fn isolated(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| i)
            .collect()
    }
}

impl std::ops::Index<usize> for DegreeVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Result of [`Hypergraph::connectivity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    pub components: usize,
    /// Component index of each vertex, numbered in order of first vertex.
    pub component: Vec<usize>,
    /// Degree-zero vertices; any of them makes a hypergraph with `n > 1`
    /// disconnected.
    pub isolated: Vec<usize>,
}
