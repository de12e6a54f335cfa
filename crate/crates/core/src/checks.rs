//! Algebraic self-checks packaged as reports: the pre-Lie identity, Jacobi,
//! `∂² = 0` on slices, the Maurer–Cartan equation and the Schouten bracket.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cohomology::SliceStore;
use crate::error::Result;
use crate::graph::{canonicalize, Graph};
use crate::lie::{bracket, mc_check, pre_lie, Element, Flavor};
use crate::poly::{random_polyvector, schouten, theta_action, Polyvector};
use crate::rational::{q, Q};
use crate::report::PropertyReport;

fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        q(1)
    } else {
        q(-1)
    }
}

fn degree(x: &Element) -> i64 {
    x.degree().expect("homogeneous element")
}

/// `(a•b)•c - a•(b•c)`.
pub fn associator(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    pre_lie(&pre_lie(a, b)?, c)?.sub(&pre_lie(a, &pre_lie(b, c)?)?)
}

/// `A(a,b,c) - (-1)^{|b||c|} A(a,c,b)`; zero for a graded pre-Lie product.
pub fn pre_lie_defect(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let swapped = associator(a, c, b)?.scale(&sign(degree(b) * degree(c)));
    associator(a, b, c)?.sub(&swapped)
}

/// `(-1)^{|a||c|}[a,[b,c]] + (-1)^{|b||a|}[b,[c,a]] + (-1)^{|c||b|}[c,[a,b]]`.
pub fn jacobi_defect(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let (da, db, dc) = (degree(a), degree(b), degree(c));
    let t1 = bracket(a, &bracket(b, c)?)?.scale(&sign(da * dc));
    let t2 = bracket(b, &bracket(c, a)?)?.scale(&sign(db * da));
    let t3 = bracket(c, &bracket(a, b)?)?.scale(&sign(dc * db));
    t1.add(&t2)?.add(&t3)
}

/// Every nonzero `dfGC` basis class with at most `max_vertices` vertices and
/// `max_edges` edges.
pub fn small_family(store: &SliceStore, max_vertices: usize, max_edges: usize) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        for e in 0..=max_edges {
            for g in &store.slice_basis(Flavor::Dfgc, n, e)?.basis {
                out.push(Element::from_graph(Flavor::Dfgc, g)?);
            }
        }
    }
    Ok(out)
}

/// A nonzero class on `n` vertices with between one and `max_edges` distinct
/// random directed edges (tadpoles allowed).
pub fn random_class(rng: &mut impl Rng, n: usize, max_edges: usize) -> Element {
    loop {
        let e = rng.gen_range(1..=max_edges);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        while edges.len() < e {
            let edge = (rng.gen_range(0..n), rng.gen_range(0..n));
            if !edges.contains(&edge) {
                edges.push(edge);
            }
        }
        let g = Graph::directed(n, edges).expect("valid edges");
        if !canonicalize(&g).is_zero() {
            return Element::from_graph(Flavor::Dfgc, &g)
                .expect("directed")
                .with_truncation(3 * n);
        }
    }
}

fn triple_outcomes(
    triples: &[(Element, Element, Element)],
    label: &str,
    defect: fn(&Element, &Element, &Element) -> Result<Element>,
) -> Result<Vec<Option<String>>> {
    triples
        .par_iter()
        .enumerate()
        .map(|(k, (a, b, c))| {
            let d = defect(a, b, c)?;
            Ok((!d.is_zero()).then(|| format!("{label} triple {k} has {} nonzero terms", d.terms().len())))
        })
        .collect()
}

/// Pre-Lie identity and Jacobi on all ordered triples of `family`.
pub fn check_family(family: &[Element]) -> Result<Vec<PropertyReport>> {
    let mut triples = Vec::new();
    for a in family {
        for b in family {
            for c in family {
                triples.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let n = triples.len();
    Ok(vec![
        PropertyReport::new("pre-Lie identity (family)", 0, n, triple_outcomes(&triples, "family", pre_lie_defect)?),
        PropertyReport::new("graded Jacobi (family)", 0, n, triple_outcomes(&triples, "family", jacobi_defect)?),
    ])
}

/// Pre-Lie identity and Jacobi on `samples` seeded random triples of classes
/// with `n` vertices.
pub fn check_random(seed: u64, samples: usize, n: usize, max_edges: usize) -> Result<Vec<PropertyReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let triples: Vec<(Element, Element, Element)> = (0..samples)
        .map(|_| {
            (
                random_class(&mut rng, n, max_edges),
                random_class(&mut rng, n, max_edges),
                random_class(&mut rng, n, max_edges),
            )
        })
        .collect();
    Ok(vec![
        PropertyReport::new(
            "pre-Lie identity (random)",
            seed,
            samples,
            triple_outcomes(&triples, "random", pre_lie_defect)?,
        ),
        PropertyReport::new("graded Jacobi (random)", seed, samples, triple_outcomes(&triples, "random", jacobi_defect)?),
    ])
}

/// `∂∘∂ = 0` as matrices for every slice pair whose middle slice has at most
/// `max_middle` vertices.
pub fn check_d_squared(store: &SliceStore, flavor: Flavor, max_middle: usize) -> Result<PropertyReport> {
    let mut outcomes = Vec::new();
    for n in 1..max_middle {
        let max_edges = match flavor {
            Flavor::Dfgc => n * n,
            Flavor::Fgc => n * (n + 1) / 2,
            Flavor::Gc => n * (n - 1) / 2,
        };
        for e in 0..=max_edges {
            let first = store.differential_matrix(flavor, n, e)?;
            let second = store.differential_matrix(flavor, n + 1, e + 1)?;
            let product = second.mul(&first)?;
            outcomes.push((!product.is_zero()).then(|| format!("{flavor} ∂² at ({n},{e})")));
        }
    }
    let label = format!("∂² = 0 on {flavor} slices, middle n ≤ {max_middle}");
    let count = outcomes.len();
    Ok(PropertyReport::new(&label, 0, count, outcomes))
}

pub fn check_maurer_cartan() -> PropertyReport {
    let ok = mc_check();
    PropertyReport::new("[Γ•-•, Γ•-•] = 0", 0, 1, vec![(!ok).then(|| "bracket is nonzero".to_string())])
}

/// Every `x^α θ_S` in dimension `d` with `|α| ≤ max_order` and `|S| ≤ max_theta`.
pub fn monomial_family(d: usize, max_theta: usize, max_order: u32) -> Vec<Polyvector> {
    let mut exponents: Vec<Vec<u32>> = vec![vec![0; d]];
    let mut frontier = exponents.clone();
    for _ in 0..max_order {
        let mut next = Vec::new();
        for m in &frontier {
            let last = m.iter().rposition(|&a| a > 0).unwrap_or(0);
            for i in last..d {
                let mut grown = m.clone();
                grown[i] += 1;
                next.push(grown);
            }
        }
        exponents.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << d) {
        if mask.count_ones() as usize > max_theta {
            continue;
        }
        let thetas: Vec<usize> = (0..d).filter(|k| mask >> k & 1 == 1).collect();
        for m in &exponents {
            out.push(Polyvector::monomial(d, m, &thetas, q(1)));
        }
    }
    out
}

fn random_homogeneous(rng: &mut impl Rng, d: usize) -> Polyvector {
    let degree = rng.gen_range(0..=d);
    let terms = rng.gen_range(1..=3);
    random_polyvector(rng, d, degree, 2, terms)
}

fn shifted(v: &Polyvector) -> i64 {
    v.theta_degree().map_or(0, |k| k as i64 - 1)
}

/// Graded antisymmetry and Jacobi of the Schouten bracket on `trials` seeded
/// random homogeneous triples with `d ≤ 2`.
pub fn check_schouten(seed: u64, trials: usize) -> Result<Vec<PropertyReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut antisymmetry = Vec::with_capacity(trials);
    let mut jacobi = Vec::with_capacity(trials);
    for k in 0..trials {
        let d = rng.gen_range(1..=2);
        let u = random_homogeneous(&mut rng, d);
        let v = random_homogeneous(&mut rng, d);
        let w = random_homogeneous(&mut rng, d);
        let s = sign(shifted(&u) * shifted(&v));
        let uv = schouten(&u, &v)?;
        let vu = schouten(&v, &u)?;
        antisymmetry.push((uv != -&vu.scale(&s)).then(|| format!("trial {k}: [{u}, {v}]")));
        let lhs = schouten(&u, &schouten(&v, &w)?)?;
        let rhs = &schouten(&uv, &w)? + &schouten(&v, &schouten(&u, &w)?)?.scale(&s);
        jacobi.push((lhs != rhs).then(|| format!("trial {k}: {u}; {v}; {w}")));
    }
    Ok(vec![
        PropertyReport::new("Schouten graded antisymmetry", seed, trials, antisymmetry),
        PropertyReport::new("Schouten graded Jacobi", seed, trials, jacobi),
    ])
}

/// `Θ(Γ•-•)(v, w) = [v, w]` for all pairs from [`monomial_family`] with
/// `θ`-degree at most two and order at most three, `d ≤ max_d`.
pub fn check_theta_anchor(max_d: usize) -> Result<PropertyReport> {
    let edge = Element::gamma_edge(Flavor::Dfgc);
    let mut outcomes = Vec::new();
    for d in 1..=max_d {
        let family = monomial_family(d, 2, 3);
        for v in &family {
            for w in &family {
                let ok = theta_action(&edge, &[v.clone(), w.clone()])? == schouten(v, w)?;
                outcomes.push((!ok).then(|| format!("d={d}: {v} and {w}")));
            }
        }
    }
    let count = outcomes.len();
    Ok(PropertyReport::new("Θ(Γ•-•) = Schouten bracket", 0, count, outcomes))
}
