//! The action `Θ` of graphs on polyvector fields and the checks of
//! equivariance and of vanishing on vector fields.
//!
//! Inputs are placed in separate copies of the variables, multiplied in
//! vertex order, and every edge `(s, t)` applies `Σ_k ∂/∂θ_k^{(s)} ∂/∂x^k_{(t)}`.
//! The operators are applied as `D_1 D_2 ⋯ D_e` (edge one outermost), all
//! copies are then identified, and the result carries the sign
//! `(-1)^{Σ_p (n-p)(|v_p|-1)}` (vertices numbered from one). With these
//! choices `Θ(Γ•-•)` is the Schouten bracket. Undirected edges act by the sum
//! of both orientations; a tadpole acts once.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::random::{random_invertible, random_polyvector, random_vector_field};
use super::{theta_product_sign, LinearVectorField, Polyvector, MAX_DIMENSION};
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, Graph};
use crate::lie::Element;
use crate::rational::Q;
use crate::report::PropertyReport;

/// Copy of `v` in the variables of vertex `p` among `n`.
fn embed(v: &Polyvector, p: usize, n: usize) -> Polyvector {
    let d = v.dim();
    let mut out = Polyvector::zero(n * d);
    for (t, c) in v.terms() {
        let mut exps = vec![0; n * d];
        exps[p * d..(p + 1) * d].copy_from_slice(&t.exps);
        out.add_term(exps, t.theta << (p * d), c.clone());
    }
    out
}

/// Identifies all copies of the variables, keeping the `θ` order.
fn collapse(big: &Polyvector, d: usize) -> Polyvector {
    let mut out = Polyvector::zero(d);
    for (t, c) in big.terms() {
        let mut exps = vec![0u32; d];
        for (i, &a) in t.exps.iter().enumerate() {
            exps[i % d] += a;
        }
        let mut mask = 0u64;
        let mut sign = 1i8;
        let mut rest = t.theta;
        let mut vanished = false;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize % d;
            match theta_product_sign(mask, 1 << k) {
                Some(s) => sign *= s,
                None => {
                    vanished = true;
                    break;
                }
            }
            mask |= 1 << k;
            rest &= rest - 1;
        }
        if !vanished {
            out.add_term(exps, mask, if sign > 0 { c.clone() } else { -c });
        }
    }
    out
}

fn apply_edge(f: &Polyvector, kind: EdgeKind, s: usize, t: usize, d: usize) -> Polyvector {
    let mut out = Polyvector::zero(f.dim());
    let directed = |from: usize, to: usize, out: &mut Polyvector| {
        for k in 0..d {
            *out = &*out + &f.d_x(to * d + k).d_theta(from * d + k);
        }
    };
    directed(s, t, &mut out);
    if kind == EdgeKind::Undirected && s != t {
        directed(t, s, &mut out);
    }
    out
}

fn graph_operator(g: &Graph, product: &Polyvector, d: usize) -> Polyvector {
    let mut f = product.clone();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for &(s, t) in edges.iter().rev() {
        if f.is_zero() {
            break;
        }
        f = apply_edge(&f, g.kind(), s, t, d);
    }
    collapse(&f, d)
}

fn common_dimension(inputs: &[Polyvector]) -> Result<usize> {
    let d = inputs.first().map_or(0, Polyvector::dim);
    if let Some(p) = inputs.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch(d, p.dim()));
    }
    Ok(d)
}

/// The common vertex count of the terms of `γ`.
fn arity(gamma: &Element) -> Result<usize> {
    let mut counts = gamma.terms().iter().map(|(g, _)| g.vertex_count());
    let Some(n) = counts.next() else {
        return Err(Error::Precondition("the element is zero".into()));
    };
    if counts.any(|k| k != n) {
        return Err(Error::Precondition(
            "the element mixes different vertex counts".into(),
        ));
    }
    Ok(n)
}

/// `Θ(γ)(v_1, …, v_n)`.
pub fn theta_action(gamma: &Element, inputs: &[Polyvector]) -> Result<Polyvector> {
    let d = common_dimension(inputs)?;
    let n = inputs.len();
    if gamma.is_zero() {
        return Ok(Polyvector::zero(d));
    }
    let expected = arity(gamma)?;
    if expected != n {
        return Err(Error::Arity { expected, got: n });
    }
    if n * d > MAX_DIMENSION {
        return Err(Error::ResourceLimit(format!(
            "{n} inputs of dimension {d} exceed {MAX_DIMENSION} variables"
        )));
    }
    let labeled = gamma.to_labeled();
    let parts: Vec<Vec<(usize, Polyvector)>> = inputs
        .iter()
        .map(|v| v.by_theta_degree().into_iter().collect())
        .collect();
    let mut out = Polyvector::zero(d);
    let mut choice = vec![0usize; n];
    if parts.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let mut product = Polyvector::constant(n * d, Q::one());
        let mut exponent = 0usize;
        for (p, &c) in choice.iter().enumerate() {
            let (deg, part) = &parts[p][c];
            product = product.mul(&embed(part, p, n));
            exponent += (n - 1 - p) * (deg + 1);
        }
        let sign = if exponent.is_multiple_of(2) { Q::one() } else { -Q::one() };
        for (g, c) in labeled.iter() {
            let term = graph_operator(g, &product, d);
            out = &out + &term.scale(&(c * &sign));
        }
        // odometer over the homogeneous parts
        let mut p = 0;
        loop {
            if p == n {
                return Ok(out);
            }
            choice[p] += 1;
            if choice[p] < parts[p].len() {
                break;
            }
            choice[p] = 0;
            p += 1;
        }
    }
}

/// `x^α θ_i` for every `i` and every monomial of order at most `max_order`.
pub fn structured_vector_fields(d: usize, max_order: u32) -> Vec<Polyvector> {
    let mut monomials: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..d {
        monomials = monomials
            .into_iter()
            .flat_map(|m| {
                let used: u32 = m.iter().sum();
                (0..=max_order - used).map(move |a| {
                    let mut m = m.clone();
                    m.push(a);
                    m
                })
            })
            .collect();
    }
    monomials.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
    let mut out = Vec::new();
    for i in 0..d {
        for m in &monomials {
            out.push(Polyvector::monomial(d, m, &[i], Q::one()));
        }
    }
    out
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Multisets of size `n` from `0..m` when there are at most `limit` of them,
/// otherwise the cyclic windows `(j, j+1, …, j+n-1)`.
fn index_tuples(m: usize, n: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut count = 1u128;
    for k in 0..n as u128 {
        count = count * (m as u128 + k) / (k + 1);
    }
    if count > limit as u128 {
        return (0..m).map(|j| (0..n).map(|k| (j + k) % m).collect()).collect();
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let Some(p) = (0..n).rev().find(|&p| cur[p] + 1 < m) else {
            return out;
        };
        let v = cur[p] + 1;
        for slot in &mut cur[p..] {
            *slot = v;
        }
    }
}

const STRUCTURED_LIMIT: usize = 10_000;

/// Whether `Θ(γ)` vanishes on tuples of vector fields: `trials` random tuples
/// of polynomial fields of order at most three, and tuples from the family of
/// coordinate fields times monomials of order at most three.
pub fn check_vanishing_on_vectors(
    gamma: &Element,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<PropertyReport> {
    let n = arity(gamma)?;
    if n < 2 {
        return Err(Error::Precondition("needs at least two vertices".into()));
    }
    let mut outcomes: Vec<Option<String>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let inputs: Vec<Polyvector> = (0..n).map(|_| random_vector_field(&mut rng, d, 3)).collect();
            let out = theta_action(gamma, &inputs)?;
            Ok((!out.is_zero()).then(|| format!("random trial {trial} gives {} nonzero terms", out.len())))
        })
        .collect::<Result<_>>()?;
    let family = structured_vector_fields(d, 3);
    let tuples = index_tuples(family.len(), n, STRUCTURED_LIMIT);
    let structured: Vec<Option<String>> = tuples
        .par_iter()
        .map(|idx| {
            let inputs: Vec<Polyvector> = idx.iter().map(|&i| family[i].clone()).collect();
            let out = theta_action(gamma, &inputs)?;
            Ok((!out.is_zero()).then(|| format!("structured tuple {idx:?} gives {} nonzero terms", out.len())))
        })
        .collect::<Result<_>>()?;
    outcomes.extend(structured);
    Ok(PropertyReport::new("vanishing on vector fields", seed, trials, outcomes))
}

/// Whether `Θ(γ)(…, v, …) = 0` with the linear field `v` in every slot and
/// the `ws` filling the remaining slots in order.
pub fn check_linear_vector_vanishing(
    gamma: &Element,
    v: &LinearVectorField,
    ws: &[Polyvector],
) -> Result<bool> {
    let n = ws.len() + 1;
    if n < 2 {
        return Err(Error::Precondition("needs at least two inputs".into()));
    }
    let expected = arity(gamma)?;
    if expected < 2 {
        return Err(Error::Precondition("needs at least two vertices".into()));
    }
    if expected != n {
        return Err(Error::Arity { expected, got: n });
    }
    let v = v.to_polyvector();
    for slot in 0..n {
        let mut inputs = ws.to_vec();
        inputs.insert(slot, v.clone());
        if !theta_action(gamma, &inputs)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Randomized form of [`check_linear_vector_vanishing`]: random linear `v`
/// and random `ws` of every `θ`-degree up to `min(d, 3)`.
pub fn check_linear_vector_trials(
    gamma: &Element,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<PropertyReport> {
    let n = arity(gamma)?;
    if n < 2 {
        return Err(Error::Precondition("needs at least two vertices".into()));
    }
    let outcomes: Vec<Option<String>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let v = LinearVectorField::new(random_invertible(&mut rng, d))?;
            let ws: Vec<Polyvector> = (0..n - 1)
                .map(|k| random_polyvector(&mut rng, d, (trial + k) % (d.min(3) + 1), 3, 3))
                .collect();
            let ok = check_linear_vector_vanishing(gamma, &v, &ws)?;
            Ok((!ok).then(|| format!("random trial {trial}")))
        })
        .collect::<Result<_>>()?;
    Ok(PropertyReport::new("vanishing with a linear vector field", seed, trials, outcomes))
}

/// Gauss–Jordan inverse over the rationals.
pub(crate) fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let d = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = Q::one() / &a[c][c];
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        for r in 0..d {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * d {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// The polyvector `v` rewritten in the coordinates `y = A x`: `x ↦ A⁻¹ x`
/// and `θ_i ↦ Σ_j A_{ji} θ_j`.
pub fn linear_change(v: &Polyvector, a: &[Vec<Q>]) -> Result<Polyvector> {
    let d = v.dim();
    if a.len() != d || a.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch(d, a.len()));
    }
    let b = invert(a).ok_or_else(|| Error::Precondition("matrix is not invertible".into()))?;
    let linear = |coeff: &dyn Fn(usize) -> Q, odd: bool| {
        let mut out = Polyvector::zero(d);
        for j in 0..d {
            let mut exps = vec![0; d];
            let theta = if odd { 1 << j } else { 0 };
            if !odd {
                exps[j] = 1;
            }
            out.add_term(exps, theta, coeff(j));
        }
        out
    };
    let xs: Vec<Polyvector> = (0..d).map(|i| linear(&|j| b[i][j].clone(), false)).collect();
    let thetas: Vec<Polyvector> = (0..d).map(|i| linear(&|j| a[j][i].clone(), true)).collect();
    Ok(v.substitute(&xs, &thetas))
}

/// Whether `Θ(γ)(T v_1, …, T v_n) = T Θ(γ)(v_1, …, v_n)` for the change `a`.
pub fn check_gl_equivariance_with(gamma: &Element, a: &[Vec<Q>], inputs: &[Polyvector]) -> Result<bool> {
    let moved: Vec<Polyvector> = inputs.iter().map(|v| linear_change(v, a)).collect::<Result<_>>()?;
    let lhs = theta_action(gamma, &moved)?;
    let rhs = linear_change(&theta_action(gamma, inputs)?, a)?;
    Ok(lhs == rhs)
}

/// `gl_d`-equivariance under `trials` random invertible changes of
/// coordinates, each with random inputs of `θ`-degree at most two.
pub fn check_gl_equivariance(gamma: &Element, d: usize, trials: usize, seed: u64) -> Result<PropertyReport> {
    let n = arity(gamma)?;
    let outcomes: Vec<Option<String>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let a = random_invertible(&mut rng, d);
            let inputs: Vec<Polyvector> = (0..n)
                .map(|k| random_polyvector(&mut rng, d, (trial + k) % (d.min(2) + 1), 2, 2))
                .collect();
            let ok = check_gl_equivariance_with(gamma, &a, &inputs)?;
            Ok((!ok).then(|| format!("random trial {trial}")))
        })
        .collect::<Result<_>>()?;
    Ok(PropertyReport::new("gl_d-equivariance", seed, trials, outcomes))
}
