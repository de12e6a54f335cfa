//! On-disk persistence of slice bases and differential matrices.
//!
//! One file per object, named by flavor and bidegree. The first line carries
//! the format and convention version; files with any other first line are
//! ignored and overwritten. Writes go to a private temporary file that is then
//! renamed over the target, so concurrent writers never expose partial files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use super::SparseMatrix;
use crate::graph::Graph;
use crate::lie::Flavor;

/// Bumped whenever canonical forms, basis order or sign conventions change.
pub const CACHE_VERSION: u32 = 1;

fn header() -> String {
    format!("gc-slice-cache v{CACHE_VERSION}")
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, what: &str, flavor: Flavor, n: usize, e: usize) -> PathBuf {
        self.dir.join(format!("{}-{n}-{e}.{what}", flavor.name()))
    }

    pub fn load_basis(&self, flavor: Flavor, n: usize, e: usize) -> Option<Vec<Graph>> {
        let text = fs::read_to_string(self.path("basis", flavor, n, e)).ok()?;
        let mut lines = text.lines();
        if lines.next()? != header() {
            return None;
        }
        if lines.next()? != format!("basis {flavor} {n} {e}") {
            return None;
        }
        let basis: Option<Vec<Graph>> = lines.map(|l| l.parse().ok()).collect();
        let basis = basis?;
        let consistent = basis
            .iter()
            .all(|g| g.kind() == flavor.kind() && g.vertex_count() == n && g.edge_count() == e);
        consistent.then_some(basis)
    }

    pub fn store_basis(&self, flavor: Flavor, n: usize, e: usize, basis: &[Graph]) {
        let mut text = format!("{}\nbasis {flavor} {n} {e}\n", header());
        for g in basis {
            text.push_str(&g.to_string());
            text.push('\n');
        }
        self.write(&self.path("basis", flavor, n, e), &text);
    }

    pub fn load_matrix(&self, flavor: Flavor, n: usize, e: usize) -> Option<SparseMatrix> {
        let text = fs::read_to_string(self.path("diff", flavor, n, e)).ok()?;
        let (first, rest) = text.split_once('\n')?;
        let (second, body) = rest.split_once('\n')?;
        if first != header() || second != format!("diff {flavor} {n} {e}") {
            return None;
        }
        SparseMatrix::parse_triplets(body, 3).ok()
    }

    pub fn store_matrix(&self, flavor: Flavor, n: usize, e: usize, m: &SparseMatrix) {
        let text = format!("{}\ndiff {flavor} {n} {e}\n{m}", header());
        self.write(&self.path("diff", flavor, n, e), &text);
    }

    /// Best effort: a cache that cannot be written only costs recomputation.
    fn write(&self, target: &Path, text: &str) {
        static COUNTER: AtomicU64 = AtomicU64::new(0);
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let written = fs::File::create(&tmp).and_then(|mut f| {
            f.write_all(text.as_bytes())?;
            f.sync_all()
        });
        if written.is_err() || fs::rename(&tmp, target).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }
}
