//! Labeled graphs with a totally ordered edge list.
//!
//! A [`Graph`] is an element of `dgra(n)` (directed) or of its undirected
//! analogue. Reordering the edge list by a permutation multiplies the element
//! by the sign of that permutation; relabeling vertices carries no sign.
//! Vertices are stored 0-based and printed 1-based.

mod canon;
mod enumerate;
pub(crate) mod format;

pub use canon::{canonicalize, is_zero_graph, SignedCanonicalGraph};
pub use enumerate::{enumerate_graphs, Constraints, SizeBounds};

use crate::error::{Error, Result};

/// Vertex counts above this are rejected by constructors and parsers.
pub const MAX_VERTICES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Directed,
    Undirected,
}

/// Which grading a degree is reported in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeConvention {
    /// `-e`, the degree inside `dGra(n)`.
    DGra,
    /// `2n - 2 - e`, the degree after the `s^{2n-2}` suspension.
    Dfgc,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    kind: EdgeKind,
    n: usize,
    edges: Vec<(u8, u8)>,
}

impl Graph {
    /// Builds a graph from 0-based edges. Undirected edges are stored as `(min, max)`.
    pub fn new(kind: EdgeKind, n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::Precondition(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        for &(a, b) in &edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v + 1, len: n });
                }
            }
        }
        Ok(Self::from_raw(
            kind,
            n,
            edges.into_iter().map(|(a, b)| (a as u8, b as u8)).collect(),
        ))
    }

    pub fn directed(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(EdgeKind::Directed, n, edges)
    }

    pub fn undirected(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(EdgeKind::Undirected, n, edges)
    }

    pub(crate) fn from_raw(kind: EdgeKind, n: usize, mut edges: Vec<(u8, u8)>) -> Self {
        if kind == EdgeKind::Undirected {
            for e in &mut edges {
                if e.0 > e.1 {
                    *e = (e.1, e.0);
                }
            }
        }
        Graph { kind, n, edges }
    }

    /// The graph with `n` vertices and no edges.
    pub fn empty(kind: EdgeKind, n: usize) -> Self {
        Self::from_raw(kind, n, Vec::new())
    }

    pub fn kind(&self) -> EdgeKind {
        self.kind
    }

    pub fn is_directed(&self) -> bool {
        self.kind == EdgeKind::Directed
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 0-based edges in their significant order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    pub(crate) fn raw_edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn degree(&self, convention: DegreeConvention) -> i64 {
        let e = self.edges.len() as i64;
        match convention {
            DegreeConvention::DGra => -e,
            DegreeConvention::Dfgc => 2 * self.n as i64 - 2 - e,
        }
    }

    /// Relabels vertex `v` as `perm[v]` (0-based images). Edge order is kept.
    pub fn vertex_permute(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::PermutationSize {
                perm: perm.len(),
                n: self.n,
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Precondition(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(self.relabel_unchecked(perm))
    }

    pub(crate) fn relabel_unchecked(&self, perm: &[usize]) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a as usize] as u8, perm[b as usize] as u8))
            .collect();
        Graph::from_raw(self.kind, self.n, edges)
    }

    /// The edge list reordered so that position `i` holds old edge `order[i]`.
    pub fn reorder_edges(&self, order: &[usize]) -> Result<Graph> {
        let mut seen = vec![false; self.edges.len()];
        if order.len() != self.edges.len()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::Precondition(format!(
                "{order:?} is not a permutation of the edges"
            )));
        }
        let edges = order.iter().map(|&i| self.edges[i]).collect();
        Ok(Graph::from_raw(self.kind, self.n, edges))
    }

    /// Sorts the edge list, keeping vertex labels. Returns the sorted graph and
    /// the sign of the sorting permutation, or `None` when two edges coincide
    /// (the transposition of equal edges forces the element to vanish).
    pub fn labeled_normal(&self) -> Option<(Graph, i8)> {
        let mut edges = self.edges.clone();
        let sign = sort_with_parity(&mut edges)?;
        Some((Graph::from_raw(self.kind, self.n, edges), sign))
    }

    /// Endpoint count per vertex; a tadpole contributes 2.
    pub fn valencies(&self) -> Vec<usize> {
        let mut val = vec![0; self.n];
        for &(a, b) in &self.edges {
            val[a as usize] += 1;
            val[b as usize] += 1;
        }
        val
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for &(a, _) in &self.edges {
            out[a as usize] += 1;
        }
        out
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut inn = vec![0; self.n];
        for &(_, b) in &self.edges {
            inn[b as usize] += 1;
        }
        inn
    }

    pub fn has_tadpole(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    /// Whether some pair of vertices is joined by more than one edge, in any direction.
    pub fn has_parallel_edges(&self) -> bool {
        let mut pairs: Vec<(u8, u8)> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        pairs.windows(2).any(|w| w[0] == w[1])
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(None)
    }

    /// True when deleting any single vertex leaves a connected graph.
    pub fn complement_of_each_vertex_connected(&self) -> bool {
        self.n <= 1 || (0..self.n).all(|v| self.connected_without(Some(v)))
    }

    fn connected_without(&self, removed: Option<usize>) -> bool {
        let alive = |v: usize| Some(v) != removed;
        let Some(start) = (0..self.n).find(|&v| alive(v)) else {
            return true;
        };
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            let (a, b) = (a as usize, b as usize);
            if alive(a) && alive(b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..self.n).filter(|&v| alive(v)).all(|v| seen[v])
    }

    /// Forgets edge directions.
    pub fn to_undirected(&self) -> Graph {
        Graph::from_raw(EdgeKind::Undirected, self.n, self.edges.clone())
    }
}

/// Stable-sorts `items` and returns the parity of the sorting permutation,
/// or `None` if two items are equal.
pub(crate) fn sort_with_parity<T: Ord + Copy>(items: &mut [T]) -> Option<i8> {
    let mut inversions = 0usize;
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            match items[i].cmp(&items[j]) {
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    items.sort_unstable();
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}
