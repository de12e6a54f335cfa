//! Polyvector fields `K[x¹..x^d, θ₁..θ_d]` with odd `θ`s, the Schouten bracket
//! and the action of graphs by polydifferential operators.

mod action;
mod format;
mod random;

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

pub use action::{
    check_gl_equivariance, check_gl_equivariance_with, check_linear_vector_trials,
    check_linear_vector_vanishing, check_vanishing_on_vectors, linear_change,
    structured_vector_fields, theta_action,
};
pub use crate::report::PropertyReport;
pub use random::{random_invertible, random_polyvector, random_vector_field};

/// Largest supported dimension; `θ` sets are stored as bit masks.
pub const MAX_DIMENSION: usize = 64;

/// One monomial `x^exps · θ_S`, the `θ`s in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub theta: u64,
    pub exps: Vec<u32>,
}

impl Term {
    pub fn theta_degree(&self) -> usize {
        self.theta.count_ones() as usize
    }
}

/// Sign of `θ_A · θ_B` rewritten in increasing order, or `None` if they share an index.
fn theta_product_sign(a: u64, b: u64) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let k = rest.trailing_zeros();
        swaps += (a >> k).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyvector {
    d: usize,
    terms: BTreeMap<Term, Q>,
}

impl Polyvector {
    pub fn zero(d: usize) -> Self {
        assert!(d <= MAX_DIMENSION, "dimension {d} exceeds {MAX_DIMENSION}");
        Polyvector {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(d: usize, c: Q) -> Self {
        let mut p = Self::zero(d);
        p.add_term(vec![0; d], 0, c);
        p
    }

    /// The coordinate `x^i`, 0-based.
    pub fn x(d: usize, i: usize) -> Self {
        let mut exps = vec![0; d];
        exps[i] = 1;
        let mut p = Self::zero(d);
        p.add_term(exps, 0, Q::one());
        p
    }

    /// The odd generator `θ_i`, 0-based.
    pub fn theta(d: usize, i: usize) -> Self {
        let mut p = Self::zero(d);
        p.add_term(vec![0; d], 1 << i, Q::one());
        p
    }

    /// `c · x^exps · θ_{thetas[0]} θ_{thetas[1]} ⋯` with the `θ`s in the given order.
    pub fn monomial(d: usize, exps: &[u32], thetas: &[usize], c: Q) -> Self {
        let mut p = Self::constant(d, c);
        p = p.mul(&Polyvector {
            d,
            terms: BTreeMap::from([(
                Term {
                    theta: 0,
                    exps: exps.to_vec(),
                },
                Q::one(),
            )]),
        });
        for &k in thetas {
            p = p.mul(&Self::theta(d, k));
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, exps: Vec<u32>, theta: u64, c: Q) {
        debug_assert_eq!(exps.len(), self.d);
        if c.is_zero() {
            return;
        }
        let key = Term { theta, exps };
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_dim(&self, other: &Polyvector) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Q) -> Polyvector {
        let mut out = Polyvector::zero(self.d);
        for (t, v) in &self.terms {
            out.add_term(t.exps.clone(), t.theta, v * c);
        }
        out
    }

    /// The graded commutative product. Panics on a dimension mismatch.
    pub fn mul(&self, other: &Polyvector) -> Polyvector {
        assert_eq!(self.d, other.d, "dimension mismatch");
        let mut out = Polyvector::zero(self.d);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let Some(s) = theta_product_sign(a.theta, b.theta) else {
                    continue;
                };
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                out.add_term(exps, a.theta | b.theta, if s > 0 { c } else { -c });
            }
        }
        out
    }

    /// `∂/∂x^i`.
    pub fn d_x(&self, i: usize) -> Polyvector {
        let mut out = Polyvector::zero(self.d);
        for (t, c) in &self.terms {
            if t.exps[i] > 0 {
                let mut exps = t.exps.clone();
                exps[i] -= 1;
                out.add_term(exps, t.theta, c * Q::from_integer(t.exps[i].into()));
            }
        }
        out
    }

    /// Left derivative `∂/∂θ_k`: `θ_k` is moved to the front, then removed.
    pub fn d_theta(&self, k: usize) -> Polyvector {
        let mut out = Polyvector::zero(self.d);
        let bit = 1u64 << k;
        for (t, c) in &self.terms {
            if t.theta & bit != 0 {
                let before = (t.theta & (bit - 1)).count_ones();
                let c = if before.is_multiple_of(2) { c.clone() } else { -c };
                out.add_term(t.exps.clone(), t.theta & !bit, c);
            }
        }
        out
    }

    /// The `θ`-degree if all terms share it (`Some(0)` for zero).
    pub fn theta_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Term::theta_degree);
        let first = it.next().unwrap_or(0);
        it.all(|k| k == first).then_some(first)
    }

    /// Homogeneous components by `θ`-degree.
    pub fn by_theta_degree(&self) -> BTreeMap<usize, Polyvector> {
        let mut out: BTreeMap<usize, Polyvector> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry(t.theta_degree())
                .or_insert_with(|| Polyvector::zero(self.d))
                .add_term(t.exps.clone(), t.theta, c.clone());
        }
        out
    }

    /// Largest total `x`-degree of a term.
    pub fn x_order(&self) -> u32 {
        self.terms.keys().map(|t| t.exps.iter().sum()).max().unwrap_or(0)
    }

    /// Substitutes `x^i ↦ xs[i]` and `θ_i ↦ thetas[i]` (a ring map).
    pub fn substitute(&self, xs: &[Polyvector], thetas: &[Polyvector]) -> Polyvector {
        let d_out = xs.first().or(thetas.first()).map_or(self.d, |p| p.d);
        let mut out = Polyvector::zero(d_out);
        for (t, c) in &self.terms {
            let mut m = Polyvector::constant(d_out, c.clone());
            for (i, &a) in t.exps.iter().enumerate() {
                for _ in 0..a {
                    m = m.mul(&xs[i]);
                }
            }
            for (k, th) in thetas.iter().enumerate() {
                if t.theta >> k & 1 == 1 {
                    m = m.mul(th);
                }
            }
            out = &out + &m;
        }
        out
    }
}

impl Add for &Polyvector {
    type Output = Polyvector;

    fn add(self, rhs: &Polyvector) -> Polyvector {
        assert_eq!(self.d, rhs.d, "dimension mismatch");
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.exps.clone(), t.theta, c.clone());
        }
        out
    }
}

impl Sub for &Polyvector {
    type Output = Polyvector;

    fn sub(self, rhs: &Polyvector) -> Polyvector {
        self + &-rhs
    }
}

impl Neg for &Polyvector {
    type Output = Polyvector;

    fn neg(self) -> Polyvector {
        self.scale(&-Q::one())
    }
}

fn minus_one_pow(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// The Schouten bracket
/// `[v,w] = (-1)^a Σ ∂v/∂θ_i ∂w/∂x^i - (-1)^{ab+b} Σ ∂w/∂θ_i ∂v/∂x^i`
/// with `a`, `b` the degrees in the shifted complex (`θ`-degree minus one),
/// extended bilinearly over homogeneous parts.
pub fn schouten(v: &Polyvector, w: &Polyvector) -> Result<Polyvector> {
    v.check_dim(w)?;
    let d = v.d;
    let mut out = Polyvector::zero(d);
    for (&dv, pv) in &v.by_theta_degree() {
        for (&dw, pw) in &w.by_theta_degree() {
            let a = dv as i64 - 1;
            let b = dw as i64 - 1;
            let mut first = Polyvector::zero(d);
            let mut second = Polyvector::zero(d);
            for i in 0..d {
                first = &first + &pv.d_theta(i).mul(&pw.d_x(i));
                second = &second + &pw.d_theta(i).mul(&pv.d_x(i));
            }
            out = &out + &first.scale(&minus_one_pow(a));
            out = &out - &second.scale(&minus_one_pow(a * b + b));
        }
    }
    Ok(out)
}

/// `v = Σ v^i_j x^j ∂/∂x^i`, stored as the matrix `(v^i_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearVectorField {
    pub matrix: Vec<Vec<Q>>,
}

impl LinearVectorField {
    pub fn new(matrix: Vec<Vec<Q>>) -> Result<Self> {
        let d = matrix.len();
        if let Some(row) = matrix.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch(d, row.len()));
        }
        Ok(LinearVectorField { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn to_polyvector(&self) -> Polyvector {
        let d = self.dim();
        let mut out = Polyvector::zero(d);
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let mut exps = vec![0; d];
                exps[j] = 1;
                out.add_term(exps, 1 << i, c.clone());
            }
        }
        out
    }
}
