//! Exact cohomology of bidegree slices.
//!
//! A slice `(n, e)` is spanned by the nonzero canonical classes with `n`
//! vertices and `e` edges, in sorted order; `∂` maps it to `(n+1, e+1)`.

mod cache;
mod matrix;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_graphs, SizeBounds};
use crate::graph::Graph;
use crate::lie::{differential, Element, Flavor};
use crate::rational::Q;
use crate::vector::GraphVector;

pub use cache::{DiskCache, CACHE_VERSION};
pub use matrix::{kernel_basis, rank, SparseMatrix};

/// Size bounds for cohomology: `dfGC` up to 5 vertices, `fGC`/`GC` up to 7.
pub fn default_bounds() -> SizeBounds {
    SizeBounds::default()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSlice {
    pub flavor: Flavor,
    pub n: usize,
    pub e: usize,
    pub basis: Vec<Graph>,
    index: HashMap<Graph, usize>,
}

impl BasisSlice {
    fn new(flavor: Flavor, n: usize, e: usize, basis: Vec<Graph>) -> Self {
        let index = basis.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        BasisSlice {
            flavor,
            n,
            e,
            basis,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `2n - 2 - e`.
    pub fn degree(&self) -> i64 {
        2 * self.n as i64 - 2 - self.e as i64
    }

    pub fn index_of(&self, g: &Graph) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// The element `Σ coords[i] · basis[i]`.
    pub fn element(&self, coords: &[Q]) -> Element {
        let terms: GraphVector = self
            .basis
            .iter()
            .zip(coords)
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect();
        Element::from_vector(self.flavor, &terms)
            .expect("basis graphs have the slice's kind")
            .with_truncation(self.n.max(crate::lie::DEFAULT_TRUNCATION))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiInfo {
    pub dim: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub betti: usize,
}

type Key = (Flavor, usize, usize);

/// Bases and differential matrices, memoized in memory and optionally on disk.
pub struct SliceStore {
    bounds: SizeBounds,
    disk: Option<DiskCache>,
    bases: Mutex<HashMap<Key, Arc<BasisSlice>>>,
    matrices: Mutex<HashMap<Key, Arc<SparseMatrix>>>,
}

impl Default for SliceStore {
    fn default() -> Self {
        SliceStore::new(default_bounds(), None)
    }
}

impl SliceStore {
    pub fn new(bounds: SizeBounds, disk: Option<DiskCache>) -> Self {
        SliceStore {
            bounds,
            disk,
            bases: Mutex::new(HashMap::new()),
            matrices: Mutex::new(HashMap::new()),
        }
    }

    pub fn bounds(&self) -> SizeBounds {
        self.bounds
    }

    pub fn slice_basis(&self, flavor: Flavor, n: usize, e: usize) -> Result<Arc<BasisSlice>> {
        self.bounds.check(flavor.kind(), n)?;
        let key = (flavor, n, e);
        if let Some(s) = self.bases.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let basis = match self.disk.as_ref().and_then(|d| d.load_basis(flavor, n, e)) {
            Some(b) => b,
            None => {
                let b: Vec<Graph> = if n == 0 {
                    Vec::new()
                } else {
                    enumerate_graphs(n, e, &flavor.constraints(), &self.bounds)?
                        .into_iter()
                        .map(|c| c.graph)
                        .collect()
                };
                if let Some(d) = &self.disk {
                    d.store_basis(flavor, n, e, &b);
                }
                b
            }
        };
        let slice = Arc::new(BasisSlice::new(flavor, n, e, basis));
        self.bases.lock().unwrap().insert(key, slice.clone());
        Ok(slice)
    }

    /// The matrix of `∂` from `(n, e)` to `(n+1, e+1)`; column `j` is `∂` of
    /// basis element `j`.
    pub fn differential_matrix(&self, flavor: Flavor, n: usize, e: usize) -> Result<Arc<SparseMatrix>> {
        let key = (flavor, n, e);
        if let Some(m) = self.matrices.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let source = self.slice_basis(flavor, n, e)?;
        let target = self.slice_basis(flavor, n + 1, e + 1)?;
        let cached = self
            .disk
            .as_ref()
            .and_then(|d| d.load_matrix(flavor, n, e))
            .filter(|m| m.rows() == target.dim() && m.cols() == source.dim());
        let m = match cached {
            Some(m) => m,
            None => {
                let m = compute_matrix(&source, &target)?;
                if let Some(d) = &self.disk {
                    d.store_matrix(flavor, n, e, &m);
                }
                m
            }
        };
        let m = Arc::new(m);
        self.matrices.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    /// Dimension of cohomology at `(n, e)`.
    pub fn betti(&self, flavor: Flavor, n: usize, e: usize) -> Result<BettiInfo> {
        let dim = self.slice_basis(flavor, n, e)?.dim();
        let rank_out = self.differential_matrix(flavor, n, e)?.rank();
        let rank_in = match (n, e) {
            (0, _) | (_, 0) | (1, _) => 0,
            _ => self.differential_matrix(flavor, n - 1, e - 1)?.rank(),
        };
        Ok(BettiInfo {
            dim,
            rank_out,
            rank_in,
            betti: dim - rank_out - rank_in,
        })
    }

    /// Cocycles at `(n, e)` as elements, one per kernel basis vector.
    pub fn cocycle_basis(&self, flavor: Flavor, n: usize, e: usize) -> Result<Vec<Element>> {
        let slice = self.slice_basis(flavor, n, e)?;
        let m = self.differential_matrix(flavor, n, e)?;
        Ok(kernel_basis(&m).iter().map(|v| slice.element(v)).collect())
    }

    /// Degree-zero comparison of `dfGC` and `GC` for `2 ≤ n ≤ window`.
    pub fn compare_h0(&self, window: usize) -> Result<H0Report> {
        let mut rows = Vec::new();
        for n in 2..=window {
            let e = 2 * n - 2;
            let gc = self.betti(Flavor::Gc, n, e)?;
            let dfgc = self.betti(Flavor::Dfgc, n, e)?;
            let cocycles = self.cocycle_basis(Flavor::Gc, n, e)?;
            let mut closed = 0;
            for c in &cocycles {
                if crate::lie::is_cocycle(&c.directed_expansion()?) {
                    closed += 1;
                }
            }
            rows.push(H0Row {
                n,
                e,
                gc_betti: gc.betti,
                dfgc_betti: dfgc.betti,
                gc_cocycles: cocycles.len(),
                expansions_closed: closed,
            });
        }
        Ok(H0Report { window, rows })
    }
}

fn compute_matrix(source: &BasisSlice, target: &BasisSlice) -> Result<SparseMatrix> {
    let truncation = (source.n + 1).max(crate::lie::DEFAULT_TRUNCATION);
    let columns: Vec<Result<Vec<(usize, Q)>>> = source
        .basis
        .par_iter()
        .map(|g| {
            let x = Element::from_graph(source.flavor, g)?.with_truncation(truncation);
            let dx = differential(&x);
            dx.terms()
                .iter()
                .map(|(t, c)| match target.index_of(t) {
                    Some(r) => Ok((r, c.clone())),
                    None => Err(Error::Incompatible(format!(
                        "∂ of `{g}` has the term `{t}` outside {} slice ({}, {})",
                        source.flavor, target.n, target.e
                    ))),
                })
                .collect()
        })
        .collect();
    let mut m = SparseMatrix::zeros(target.dim(), source.dim());
    for (j, col) in columns.into_iter().enumerate() {
        for (r, c) in col? {
            m.add(r, j, c);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H0Row {
    pub n: usize,
    pub e: usize,
    pub gc_betti: usize,
    pub dfgc_betti: usize,
    pub gc_cocycles: usize,
    /// How many of the `GC` kernel basis vectors expand to `dfGC` cocycles.
    pub expansions_closed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H0Report {
    pub window: usize,
    pub rows: Vec<H0Row>,
}

impl H0Report {
    pub fn agrees(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.gc_betti == r.dfgc_betti && r.expansions_closed == r.gc_cocycles)
    }
}

impl std::fmt::Display for H0Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{:>3} {:>3} {:>10} {:>8} {:>18}", "n", "e", "H0(dfGC)", "H0(GC)", "closed expansions")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} {:>3} {:>10} {:>8} {:>18}",
                r.n,
                r.e,
                r.dfgc_betti,
                r.gc_betti,
                format!("{}/{}", r.expansions_closed, r.gc_cocycles)
            )?;
        }
        Ok(())
    }
}

static DEFAULT_STORE: Lazy<SliceStore> = Lazy::new(SliceStore::default);

/// [`SliceStore::slice_basis`] on a process-wide store without disk cache.
pub fn slice_basis(flavor: Flavor, n: usize, e: usize) -> Result<Arc<BasisSlice>> {
    DEFAULT_STORE.slice_basis(flavor, n, e)
}

pub fn differential_matrix(flavor: Flavor, n: usize, e: usize) -> Result<Arc<SparseMatrix>> {
    DEFAULT_STORE.differential_matrix(flavor, n, e)
}

pub fn betti(flavor: Flavor, n: usize, e: usize) -> Result<usize> {
    Ok(DEFAULT_STORE.betti(flavor, n, e)?.betti)
}

pub fn compare_h0(window: usize) -> Result<H0Report> {
    DEFAULT_STORE.compare_h0(window)
}
