//! Basis enumeration by canonical augmentation.
//!
//! Isomorphism classes with `e` distinct edges are grown from the classes with
//! `e - 1` edges by adding one edge slot. Vanishing classes are kept while
//! growing (adding an edge can kill an odd automorphism) and removed only in
//! the final filter. Repeated edges are never generated: a repeated edge always
//! yields a vanishing element.

use std::collections::HashMap;
use std::sync::Mutex;

use once_cell::sync::Lazy;
use rayon::prelude::*;

use super::{canonicalize, EdgeKind, Graph, SignedCanonicalGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraints {
    pub directed: bool,
    pub connected: bool,
    pub min_valency: usize,
    pub allow_tadpoles: bool,
    /// For directed graphs a "parallel" pair is two edges on the same vertex
    /// pair in either direction.
    pub allow_parallel: bool,
    /// Every single-vertex deletion leaves a connected graph.
    pub vertex_complements_connected: bool,
}

impl Constraints {
    /// Everything allowed: the full directed (`directed = true`) or undirected complex.
    pub fn full(directed: bool) -> Self {
        Constraints {
            directed,
            connected: false,
            min_valency: 0,
            allow_tadpoles: true,
            allow_parallel: true,
            vertex_complements_connected: false,
        }
    }

    /// The conditions defining Kontsevich's `GC`.
    pub fn kontsevich() -> Self {
        Constraints {
            directed: false,
            connected: true,
            min_valency: 3,
            allow_tadpoles: false,
            allow_parallel: true,
            vertex_complements_connected: true,
        }
    }

    pub fn kind(&self) -> EdgeKind {
        if self.directed {
            EdgeKind::Directed
        } else {
            EdgeKind::Undirected
        }
    }

    pub fn accepts(&self, g: &Graph) -> bool {
        (self.allow_tadpoles || !g.has_tadpole())
            && (self.allow_parallel || !g.has_parallel_edges())
            && (!self.connected || g.is_connected())
            && g.valencies().iter().all(|&v| v >= self.min_valency)
            && (!self.vertex_complements_connected || g.complement_of_each_vertex_connected())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeBounds {
    pub max_vertices_directed: usize,
    pub max_vertices_undirected: usize,
}

impl Default for SizeBounds {
    fn default() -> Self {
        SizeBounds {
            max_vertices_directed: 5,
            max_vertices_undirected: 7,
        }
    }
}

impl SizeBounds {
    pub fn check(&self, kind: EdgeKind, n: usize) -> Result<()> {
        let max = match kind {
            EdgeKind::Directed => self.max_vertices_directed,
            EdgeKind::Undirected => self.max_vertices_undirected,
        };
        if n > max {
            return Err(Error::ResourceLimit(format!(
                "{n} vertices exceeds the {kind:?} bound of {max}"
            )));
        }
        Ok(())
    }
}

/// Canonical classes (vanishing ones included) per edge count.
type Levels = Vec<Vec<(Graph, bool)>>;

static LEVELS: Lazy<Mutex<HashMap<(EdgeKind, usize, bool), Levels>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn slots(kind: EdgeKind, n: usize, tadpoles: bool) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for a in 0..n as u8 {
        for b in 0..n as u8 {
            let keep = match kind {
                EdgeKind::Directed => a != b || tadpoles,
                EdgeKind::Undirected => a < b || (a == b && tadpoles),
            };
            if keep {
                out.push((a, b));
            }
        }
    }
    out
}

fn grow(prev: &[(Graph, bool)], kind: EdgeKind, n: usize, slots: &[(u8, u8)]) -> Vec<(Graph, bool)> {
    let mut next: Vec<(Graph, bool)> = prev
        .par_iter()
        .flat_map_iter(|(g, _)| {
            slots.iter().filter_map(move |slot| {
                if g.edges.contains(slot) {
                    return None;
                }
                let mut edges = g.edges.clone();
                edges.push(*slot);
                let c = canonicalize(&Graph::from_raw(kind, n, edges));
                Some((c.graph, c.sign == 0))
            })
        })
        .collect();
    next.par_sort_unstable();
    next.dedup_by(|a, b| a.0 == b.0);
    next
}

fn classes(kind: EdgeKind, n: usize, tadpoles: bool, e: usize) -> Vec<(Graph, bool)> {
    let slots = slots(kind, n, tadpoles);
    if e > slots.len() {
        return Vec::new();
    }
    let key = (kind, n, tadpoles);
    let mut cache = LEVELS.lock().unwrap_or_else(|p| p.into_inner());
    let levels = cache
        .entry(key)
        .or_insert_with(|| vec![vec![(Graph::empty(kind, n), false)]]);
    while levels.len() <= e {
        let next = grow(levels.last().unwrap(), kind, n, &slots);
        levels.push(next);
    }
    levels[e].clone()
}

/// All nonzero canonical classes on `n` vertices with `e` edges satisfying
/// `constraints`, sorted by canonical graph.
pub fn enumerate_graphs(
    n: usize,
    e: usize,
    constraints: &Constraints,
    bounds: &SizeBounds,
) -> Result<Vec<SignedCanonicalGraph>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let kind = constraints.kind();
    bounds.check(kind, n)?;
    let mut out: Vec<SignedCanonicalGraph> = classes(kind, n, constraints.allow_tadpoles, e)
        .into_iter()
        .filter(|(g, zero)| !zero && constraints.accepts(g))
        .map(|(graph, _)| SignedCanonicalGraph { graph, sign: 1 })
        .collect();
    out.sort_by(|a, b| a.graph.cmp(&b.graph));
    Ok(out)
}
