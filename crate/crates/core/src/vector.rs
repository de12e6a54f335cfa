//! Formal rational linear combinations of graphs.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{canonicalize, format::parse_graph, Graph};
use crate::rational::{format_q, parse_q, sign_q, Q};

/// Vertex and edge count of a homogeneous vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bidegree {
    Empty,
    Homogeneous { n: usize, e: usize },
    Mixed,
}

impl Bidegree {
    /// `2n - 2 - e` when homogeneous.
    pub fn degree(&self) -> Option<i64> {
        match *self {
            Bidegree::Homogeneous { n, e } => Some(2 * n as i64 - 2 - e as i64),
            _ => None,
        }
    }
}

/// Terms are kept in graph order with no zero coefficients. Whether the keys
/// are canonical classes or labeled graphs is up to the producer; see
/// [`GraphVector::canonicalized`] and [`GraphVector::labeled_normalized`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphVector {
    terms: BTreeMap<Graph, Q>,
}

impl GraphVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_term(graph: Graph, coeff: Q) -> Self {
        let mut v = Self::new();
        v.add_term(graph, coeff);
        v
    }

    pub fn add_term(&mut self, graph: Graph, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(graph) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Adds `coeff * g` after reducing `g` to its canonical class.
    pub fn add_canonical(&mut self, g: &Graph, coeff: &Q) {
        let c = canonicalize(g);
        if c.sign != 0 {
            self.add_term(c.graph, sign_q(c.sign) * coeff);
        }
    }

    pub fn add_scaled(&mut self, other: &GraphVector, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for (g, c) in &other.terms {
            self.add_term(g.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Q) -> GraphVector {
        let mut out = GraphVector::new();
        out.add_scaled(self, factor);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Graph, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Graph) -> Q {
        self.terms.get(g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn bidegree(&self) -> Bidegree {
        let mut it = self.terms.keys().map(|g| (g.vertex_count(), g.edge_count()));
        let Some(first) = it.next() else {
            return Bidegree::Empty;
        };
        if it.all(|b| b == first) {
            Bidegree::Homogeneous {
                n: first.0,
                e: first.1,
            }
        } else {
            Bidegree::Mixed
        }
    }

    /// Splits into homogeneous parts keyed by `(n, e)`.
    pub fn homogeneous_parts(&self) -> BTreeMap<(usize, usize), GraphVector> {
        let mut parts: BTreeMap<(usize, usize), GraphVector> = BTreeMap::new();
        for (g, c) in &self.terms {
            parts
                .entry((g.vertex_count(), g.edge_count()))
                .or_default()
                .terms
                .insert(g.clone(), c.clone());
        }
        parts
    }

    /// Every term replaced by its signed canonical class.
    pub fn canonicalized(&self) -> GraphVector {
        let mut out = GraphVector::new();
        for (g, c) in &self.terms {
            out.add_canonical(g, c);
        }
        out
    }

    /// Every term's edge list sorted with sign; vertex labels are kept.
    pub fn labeled_normalized(&self) -> GraphVector {
        let mut out = GraphVector::new();
        for (g, c) in &self.terms {
            if let Some((h, s)) = g.labeled_normal() {
                out.add_term(h, sign_q(s) * c);
            }
        }
        out
    }

    /// Parses `<rational> * <graph>` lines. Blank lines are skipped;
    /// `first_line` is the file line number of `text`'s first line.
    pub fn parse_lines(text: &str, first_line: usize) -> Result<GraphVector> {
        let mut out = GraphVector::new();
        for (k, line) in text.lines().enumerate() {
            let lineno = first_line + k;
            if line.trim().is_empty() {
                continue;
            }
            let Some((coeff, graph)) = line.split_once(" * ") else {
                return Err(Error::parse(lineno, 1, "expected `<rational> * <graph>`"));
            };
            let c = parse_q(coeff).map_err(|m| Error::parse(lineno, 1, m))?;
            let g = parse_graph(graph, lineno, coeff.len() + 4)?;
            if let Some((h, _)) = out.terms.first_key_value() {
                if h.kind() != g.kind() {
                    return Err(Error::parse(lineno, coeff.len() + 4, "mixed directed and undirected terms"));
                }
            }
            if out.terms.contains_key(&g) {
                return Err(Error::parse(lineno, coeff.len() + 4, format!("duplicate term `{g}`")));
            }
            if c.is_zero() {
                return Err(Error::parse(lineno, 1, "zero coefficient"));
            }
            out.terms.insert(g, c);
        }
        Ok(out)
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, c) in &self.terms {
            writeln!(f, "{} * {}", format_q(c), g)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for GraphVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GraphVector::parse_lines(s, 1)
    }
}

impl<'a> Add<&'a GraphVector> for &'a GraphVector {
    type Output = GraphVector;

    fn add(self, rhs: &GraphVector) -> GraphVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::from_integer(1.into()));
        out
    }
}

impl<'a> Sub<&'a GraphVector> for &'a GraphVector {
    type Output = GraphVector;

    fn sub(self, rhs: &GraphVector) -> GraphVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::from_integer((-1).into()));
        out
    }
}

impl Neg for &GraphVector {
    type Output = GraphVector;

    fn neg(self) -> GraphVector {
        self.scale(&Q::from_integer((-1).into()))
    }
}

impl FromIterator<(Graph, Q)> for GraphVector {
    fn from_iter<T: IntoIterator<Item = (Graph, Q)>>(iter: T) -> Self {
        let mut v = GraphVector::new();
        for (g, c) in iter {
            v.add_term(g, c);
        }
        v
    }
}
