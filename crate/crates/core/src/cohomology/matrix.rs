//! Exact sparse matrices and fraction-free rank.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.add(i, i, Q::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `value` at `(row, col)` (0-based), dropping the entry if it cancels.
    pub fn add(&mut self, row: usize, col: usize, value: Q) {
        assert!(row < self.rows && col < self.cols, "entry ({row}, {col}) out of bounds");
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry((row, col)).or_insert_with(Q::zero);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(self.cols, rhs.rows));
        }
        let mut by_row: Vec<Vec<(usize, &Q)>> = vec![Vec::new(); rhs.rows];
        for (r, c, v) in rhs.entries() {
            by_row[r].push((c, v));
        }
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols);
        for (r, k, a) in self.entries() {
            for &(c, b) in &by_row[k] {
                out.add(r, c, a * b);
            }
        }
        Ok(out)
    }

    /// Reorders rows and columns: entry `(r, c)` moves to `(row_perm[r], col_perm[c])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            out.add(row_perm[r], col_perm[c], v.clone());
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut d = vec![vec![Q::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Parses the triplet format; `first_line` numbers the header line.
    pub fn parse_triplets(text: &str, first_line: usize) -> Result<SparseMatrix> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (first_line + k, l));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(first_line, 1, "missing `rows cols nnz` header"))?;
        let fields = split_fields(header);
        if fields.len() != 3 {
            return Err(Error::parse(hl, 1, "expected `rows cols nnz`"));
        }
        let mut dims = [0usize; 3];
        for (slot, (col, tok)) in dims.iter_mut().zip(&fields) {
            *slot = tok
                .parse()
                .map_err(|_| Error::parse(hl, *col, format!("bad count `{tok}`")))?;
        }
        let [rows, cols, nnz] = dims;
        let mut m = SparseMatrix::zeros(rows, cols);
        let mut seen = 0usize;
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let f = split_fields(line);
            if f.len() != 3 {
                return Err(Error::parse(ln, 1, "expected `i j p/q`"));
            }
            let mut idx = [0usize; 2];
            for (k, (col, tok)) in f[..2].iter().enumerate() {
                let bound = if k == 0 { rows } else { cols };
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(ln, *col, format!("bad index `{tok}`")))?;
                if v == 0 || v > bound {
                    return Err(Error::parse(ln, *col, format!("index `{tok}` outside 1..={bound}")));
                }
                idx[k] = v - 1;
            }
            let value = parse_q(f[2].1).map_err(|msg| Error::parse(ln, f[2].0, msg))?;
            if value.is_zero() {
                return Err(Error::parse(ln, f[2].0, "stored zero"));
            }
            if m.entries.contains_key(&(idx[0], idx[1])) {
                return Err(Error::parse(ln, 1, "duplicate entry"));
            }
            m.entries.insert((idx[0], idx[1]), value);
            seen += 1;
        }
        if seen != nnz {
            return Err(Error::parse(hl, 1, format!("header says {nnz} entries, found {seen}")));
        }
        Ok(m)
    }
}

/// Whitespace-separated fields with their 1-based columns.
fn split_fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

impl fmt::Display for SparseMatrix {
    /// `rows cols nnz`, then `i j p/q` per entry in row-major order, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.entries.len())?;
        for (r, c, v) in self.entries() {
            writeln!(f, "{} {} {}", r + 1, c + 1, format_q(v))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SparseMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SparseMatrix::parse_triplets(s, 1)
    }
}

type IntRow = Vec<(usize, BigInt)>;

/// Clears denominators row by row and removes the content.
fn integer_rows(m: &SparseMatrix) -> Vec<IntRow> {
    let mut rows: Vec<Vec<(usize, &Q)>> = vec![Vec::new(); m.rows];
    for (r, c, v) in m.entries() {
        rows[r].push((c, v));
    }
    rows.into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            let mut row: IntRow = r
                .into_iter()
                .map(|(c, v)| (c, v.numer() * (&l / v.denom())))
                .collect();
            primitive(&mut row);
            row
        })
        .collect()
}

fn primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// `a * row - b * pivot`, merged by column.
fn combine(row: &IntRow, a: &BigInt, pivot: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, a * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(b * &pivot[j].1)));
            j += 1;
        } else {
            let v = a * &row[i].1 - b * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Fraction-free elimination with Markowitz pivoting: the pivot minimizes
/// `(row nnz - 1) * (col nnz - 1)`, ties broken by smaller `(row, col)` in
/// the current row list.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut rows = integer_rows(m);
    let mut rank = 0;
    loop {
        rows.retain(|r| !r.is_empty());
        if rows.is_empty() {
            return rank;
        }
        let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
        for r in &rows {
            for (c, _) in r {
                *col_count.entry(*c).or_default() += 1;
            }
        }
        let mut best: Option<(usize, usize, usize)> = None; // (cost, row, col)
        for (ri, r) in rows.iter().enumerate() {
            for (c, _) in r {
                let cost = (r.len() - 1) * (col_count[c] - 1);
                if best.is_none_or(|(bc, br, bcol)| (cost, ri, *c) < (bc, br, bcol)) {
                    best = Some((cost, ri, *c));
                }
            }
        }
        let (_, pr, pc) = best.expect("nonempty rows have entries");
        let pivot = rows.swap_remove(pr);
        let a = pivot.iter().find(|(c, _)| *c == pc).unwrap().1.clone();
        for r in rows.iter_mut() {
            if let Ok(pos) = r.binary_search_by_key(&pc, |(c, _)| *c) {
                let b = r[pos].1.clone();
                let g = a.gcd(&b);
                let (a1, b1) = (&a / &g, &b / &g);
                let mut next = combine(r, &a1, &pivot, &b1);
                primitive(&mut next);
                if next.first().is_some_and(|(_, v)| v.is_negative()) {
                    for (_, v) in next.iter_mut() {
                        *v = -&*v;
                    }
                }
                *r = next;
            }
        }
        rank += 1;
    }
}

/// A basis of the right kernel, as dense rational vectors (reduced row echelon form).
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Q>> {
    let mut a = m.to_dense();
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Q::one() / &a[row][col];
        for v in a[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..cols {
                    let t = &f * &a[row][c];
                    a[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn simple_ranks() {
        assert_eq!(SparseMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(SparseMatrix::identity(5).rank(), 5);
        let mut m = SparseMatrix::zeros(3, 3);
        for (r, c, v) in [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4), (2, 2, 3)] {
            m.add(r, c, q(v));
        }
        assert_eq!(m.rank(), 2);
        m.add(2, 2, qf(-1, 2));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn triplet_round_trip() {
        let mut m = SparseMatrix::zeros(2, 3);
        m.add(0, 2, qf(-3, 2));
        m.add(1, 0, q(4));
        let text = m.to_string();
        assert_eq!(text, "2 3 2\n1 3 -3/2\n2 1 4\n");
        assert_eq!(text.parse::<SparseMatrix>().unwrap(), m);
    }

    #[test]
    fn triplet_errors() {
        assert!("2 2 1\n0 1 1\n".parse::<SparseMatrix>().is_err());
        assert!("2 2 2\n1 1 1\n".parse::<SparseMatrix>().is_err());
        assert!("2 2 1\n1 1 0\n".parse::<SparseMatrix>().is_err());
        let err = "2 2 1\n1 3 1\n".parse::<SparseMatrix>().unwrap_err();
        assert!(err.to_string().contains("line 2, column 3"), "{err}");
    }

    #[test]
    fn kernel_of_rank_one() {
        let mut m = SparseMatrix::zeros(1, 3);
        m.add(0, 0, q(1));
        m.add(0, 2, q(2));
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + q(2) * &v[2]).is_zero());
        }
    }

    #[test]
    fn product() {
        let mut a = SparseMatrix::zeros(1, 2);
        a.add(0, 0, q(1));
        a.add(0, 1, q(1));
        let mut b = SparseMatrix::zeros(2, 1);
        b.add(0, 0, q(1));
        b.add(1, 0, q(-1));
        assert!(a.mul(&b).unwrap().is_zero());
        assert!(b.mul(&b).is_err());
    }
}
