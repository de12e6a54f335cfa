//! The operad of graphs: insertions, the symmetric-group action and the
//! embedding of undirected graphs as sums of orientations.
//!
//! Vertex indices in this module are 0-based. After `g ∘_i h` the vertices of
//! `h` occupy positions `i..i+k`, vertices of `g` above `i` shift up by `k-1`,
//! and the edge list is the edges of `g` followed by the edges of `h`.

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, Graph};
use crate::rational::Q;
use crate::vector::GraphVector;

/// Order of the two edge blocks in a composite graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeOrder {
    #[default]
    OuterFirst,
    InnerFirst,
}

/// Calls `f` on every summand of `g ∘_i h` (edge lists not normalized).
pub(crate) fn for_each_insertion(
    g: &Graph,
    i: usize,
    h: &Graph,
    order: EdgeOrder,
    mut f: impl FnMut(Graph),
) {
    let n = g.vertex_count();
    let k = h.vertex_count();
    let total = n + k - 1;
    let shift = |v: u8| -> u8 {
        let v = v as usize;
        (if v < i { v } else { v + k - 1 }) as u8
    };
    let mut outer: Vec<(u8, u8)> = g
        .raw_edges()
        .iter()
        .map(|&(a, b)| (shift(a), shift(b)))
        .collect();
    let inner: Vec<(u8, u8)> = h
        .raw_edges()
        .iter()
        .map(|&(a, b)| (a + i as u8, b + i as u8))
        .collect();
    // endpoints of g touching vertex i, as (edge index, which end)
    let slots: Vec<(usize, bool)> = g
        .raw_edges()
        .iter()
        .enumerate()
        .flat_map(|(idx, &(a, b))| {
            [(idx, a as usize == i, false), (idx, b as usize == i, true)]
                .into_iter()
                .filter(|s| s.1)
                .map(|s| (s.0, s.2))
        })
        .collect();
    let mut choice = vec![0usize; slots.len()];
    loop {
        for (&(idx, second), &c) in slots.iter().zip(&choice) {
            let target = (i + c) as u8;
            if second {
                outer[idx].1 = target;
            } else {
                outer[idx].0 = target;
            }
        }
        let edges: Vec<(u8, u8)> = match order {
            EdgeOrder::OuterFirst => outer.iter().chain(&inner).copied().collect(),
            EdgeOrder::InnerFirst => inner.iter().chain(&outer).copied().collect(),
        };
        f(Graph::from_raw(g.kind(), total, edges));
        // odometer over all k^{|slots|} reattachments
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return;
            }
            choice[pos] += 1;
            if choice[pos] < k {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn check_kinds(g: &Graph, h: &Graph) -> Result<()> {
    if g.kind() != h.kind() {
        return Err(Error::Incompatible(
            "cannot compose directed and undirected graphs".into(),
        ));
    }
    Ok(())
}

/// `g ∘_i h` as an element of the labeled space on `n + k - 1` vertices.
pub fn insert(g: &Graph, i: usize, h: &Graph) -> Result<GraphVector> {
    insert_with(g, i, h, EdgeOrder::OuterFirst)
}

pub fn insert_with(g: &Graph, i: usize, h: &Graph, order: EdgeOrder) -> Result<GraphVector> {
    check_kinds(g, h)?;
    if i >= g.vertex_count() {
        return Err(Error::IndexOutOfRange {
            index: i + 1,
            len: g.vertex_count(),
        });
    }
    let mut out = GraphVector::new();
    for_each_insertion(g, i, h, order, |t| {
        if let Some((t, s)) = t.labeled_normal() {
            out.add_term(t, Q::from_integer(s.into()));
        }
    });
    Ok(out)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// `Σ_σ σ(g)` over the full symmetric group, as a labeled vector.
pub fn symmetrize(g: &Graph) -> GraphVector {
    let mut out = GraphVector::new();
    for p in permutations(g.vertex_count()) {
        if let Some((t, s)) = g.relabel_unchecked(&p).labeled_normal() {
            out.add_term(t, Q::from_integer(s.into()));
        }
    }
    out
}

/// Calls `f` on each orientation of an undirected graph; edge order is kept.
pub(crate) fn for_each_orientation(g: &Graph, mut f: impl FnMut(Graph)) {
    let edges = g.raw_edges();
    let free: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].0 != edges[i].1).collect();
    for mask in 0u64..(1u64 << free.len()) {
        let mut out = edges.to_vec();
        for (bit, &idx) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                out[idx] = (out[idx].1, out[idx].0);
            }
        }
        f(Graph::from_raw(EdgeKind::Directed, g.vertex_count(), out));
    }
}

/// The sum of all directed graphs that forget to `g`, as a labeled vector.
pub fn directed_expansion(g: &Graph) -> Result<GraphVector> {
    if g.is_directed() {
        return Err(Error::Incompatible("expected an undirected graph".into()));
    }
    let mut out = GraphVector::new();
    for_each_orientation(g, |t| {
        if let Some((t, s)) = t.labeled_normal() {
            out.add_term(t, Q::from_integer(s.into()));
        }
    });
    Ok(out)
}

/// Applies a vertex permutation to every term of a labeled vector.
pub fn permute_vector(v: &GraphVector, perm: &[usize]) -> Result<GraphVector> {
    let mut out = GraphVector::new();
    for (g, c) in v.iter() {
        if let Some((t, s)) = g.vertex_permute(perm)?.labeled_normal() {
            out.add_term(t, c * Q::from_integer(s.into()));
        }
    }
    Ok(out)
}

/// Bilinear extension of [`insert`] to labeled vectors.
pub fn insert_vectors(g: &GraphVector, i: usize, h: &GraphVector) -> Result<GraphVector> {
    let mut out = GraphVector::new();
    for (a, ca) in g.iter() {
        for (b, cb) in h.iter() {
            out.add_scaled(&insert(a, i, b)?, &(ca * cb));
        }
    }
    Ok(out)
}
