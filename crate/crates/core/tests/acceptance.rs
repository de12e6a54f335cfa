//! Acceptance criteria 1 to 10, one pass/fail line each. Runs without the
//! libtest harness so the lines are always printed; exits nonzero if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gc_core::checks;
use gc_core::cohomology::{default_bounds, DiskCache, SliceStore, SparseMatrix};
use gc_core::graph::{canonicalize, DegreeConvention};
use gc_core::lie::{bracket, differential, pre_lie_by_shuffles, Element, Flavor};
use gc_core::operad::{directed_expansion, permutations};
use gc_core::poly::{
    check_gl_equivariance, check_linear_vector_trials, check_linear_vector_vanishing, check_vanishing_on_vectors,
    random_polyvector, schouten, theta_action, LinearVectorField, Polyvector, PropertyReport,
};
use gc_core::rational::{q, Q};
use gc_core::{Graph, GraphVector};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn reports_pass(reports: &[PropertyReport]) -> Result<(), String> {
    match reports.iter().find(|r| !r.passed) {
        Some(r) => Err(r.to_string()),
        None => Ok(()),
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {t:.1?}, limit {limit:?}"))
}

fn graph(s: &str) -> Graph {
    s.parse().expect("valid graph")
}

fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Rank by plain Gaussian elimination on a dense copy.
fn dense_rank(m: &SparseMatrix) -> usize {
    let mut a = m.to_dense();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &pivot;
                for k in c..cols {
                    let v = &a[rank][k] * &f;
                    a[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dense-oracle Betti number of a slice.
fn oracle_betti(store: &SliceStore, flavor: Flavor, n: usize, e: usize) -> Result<(usize, usize, usize), String> {
    let dim = store.slice_basis(flavor, n, e).map_err(|e| e.to_string())?.dim();
    let out = dense_rank(&*store.differential_matrix(flavor, n, e).map_err(|e| e.to_string())?);
    let inc = if n > 1 && e > 0 {
        dense_rank(&*store.differential_matrix(flavor, n - 1, e - 1).map_err(|e| e.to_string())?)
    } else {
        0
    };
    Ok((dim - out - inc, out, inc))
}

/// Whether some vertex permutation preserves the edge set of `g` and permutes
/// its edges oddly, by exhaustive search.
fn has_odd_automorphism(g: &Graph) -> bool {
    let edges: Vec<(usize, usize)> = g.edges().map(|(a, b)| (a.min(b), a.max(b))).collect();
    permutations(g.vertex_count()).into_iter().any(|p| {
        let image: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
            .collect();
        let positions: Option<Vec<usize>> = image.iter().map(|x| edges.iter().position(|y| y == x)).collect();
        let Some(pos) = positions else { return false };
        let mut inversions = 0;
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                if pos[i] > pos[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    })
}

fn tetrahedron() -> Element {
    Element::from_graph(Flavor::Gc, &graph("n=4 uedges={1,2}{1,3}{1,4}{2,3}{2,4}{3,4}")).unwrap()
}

fn store() -> SliceStore {
    SliceStore::new(default_bounds(), None)
}

fn maurer_cartan() -> Outcome {
    let start = Instant::now();
    for flavor in [Flavor::Dfgc, Flavor::Fgc] {
        let edge = Element::gamma_edge(flavor);
        let b = bracket(&edge, &edge).map_err(|e| e.to_string())?;
        ensure(b.is_zero(), format!("[Γ•-•, Γ•-•] = {b} in {flavor}"))?;
    }
    // the literal labeled shuffle product of Γ•-• with itself vanishes as well
    let labeled = Element::gamma_edge(Flavor::Dfgc).to_labeled();
    let square = pre_lie_by_shuffles(&labeled, &labeled).map_err(|e| e.to_string())?;
    ensure(square.labeled_normalized().is_zero(), "shuffle product of Γ•-• is nonzero")?;
    within(start, Duration::from_secs(1))?;
    Ok("[Γ•-•, Γ•-•] = 0 in dfGC and fGC".into())
}

fn d_squared() -> Outcome {
    let store = store();
    let reports = vec![
        checks::check_d_squared(&store, Flavor::Gc, 6).map_err(|e| e.to_string())?,
        checks::check_d_squared(&store, Flavor::Dfgc, 4).map_err(|e| e.to_string())?,
    ];
    reports_pass(&reports)?;
    Ok(format!(
        "{} GC and {} dfGC composable slice pairs",
        reports[0].evaluations, reports[1].evaluations
    ))
}

fn degrees() -> Outcome {
    let edge = Element::gamma_edge(Flavor::Dfgc);
    ensure(edge.degree() == Some(1), format!("degree(Γ•-•) = {:?}", edge.degree()))?;
    let fig1 = graph("n=4 edges=(3,1)(3,2)(2,3)(2,2)");
    let d = fig1.degree(DegreeConvention::DGra);
    ensure(d == -4, format!("degree of the four-edge graph in dGra = {d}"))?;
    Ok("degree(Γ•-•) = 1, dGra degree of the four-edge graph = -4".into())
}

/// Associator symmetry with the literal shuffle product on labeled invariant
/// vectors, an implementation independent of the class-level product.
fn shuffle_associator_check(family: &[Element]) -> Result<usize, String> {
    let err = |e: gc_core::Error| e.to_string();
    let mut count = 0;
    for a in family {
        for b in family {
            for c in family {
                let (la, lb, lc) = (a.to_labeled(), b.to_labeled(), c.to_labeled());
                let assoc = |x: &GraphVector, y: &GraphVector, z: &GraphVector| -> Result<GraphVector, String> {
                    let left = pre_lie_by_shuffles(&pre_lie_by_shuffles(x, y).map_err(err)?, z).map_err(err)?;
                    let right = pre_lie_by_shuffles(x, &pre_lie_by_shuffles(y, z).map_err(err)?).map_err(err)?;
                    Ok(&left - &right)
                };
                let s = sign(b.degree().unwrap() * c.degree().unwrap());
                let defect = &assoc(&la, &lb, &lc)? - &assoc(&la, &lc, &lb)?.scale(&s);
                ensure(defect.labeled_normalized().is_zero(), format!("shuffle associator on {a} {b} {c}"))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

fn pre_lie_and_jacobi() -> Outcome {
    let err = |e: gc_core::Error| e.to_string();
    let store = store();
    let family = checks::small_family(&store, 3, 2).map_err(err)?;
    let mut reports = checks::check_family(&family).map_err(err)?;
    reports.extend(checks::check_random(2024, 100, 4, 3).map_err(err)?);
    reports_pass(&reports)?;
    let small = checks::small_family(&store, 2, 1).map_err(err)?;
    let oracle = shuffle_associator_check(&small)?;
    Ok(format!(
        "{} family triples ({} classes), 100 random 4-vertex triples, {oracle} shuffle-oracle triples",
        reports[0].evaluations,
        family.len()
    ))
}

fn tetrahedron_witness() -> Outcome {
    let start = Instant::now();
    let store = store();
    let k4 = tetrahedron();
    ensure(k4.degree() == Some(0), "tetrahedron degree is not 0")?;
    ensure(differential(&k4).is_zero(), "∂(tetrahedron) ≠ 0")?;
    let expansion = k4.directed_expansion().map_err(|e| e.to_string())?;
    ensure(differential(&expansion).is_zero(), "directed expansion of the tetrahedron is not closed")?;
    let info = store.betti(Flavor::Gc, 4, 6).map_err(|e| e.to_string())?;
    let (betti, _, inc) = oracle_betti(&store, Flavor::Gc, 4, 6)?;
    ensure(info.betti == 1 && betti == 1, format!("dim H = {} (oracle {betti})", info.betti))?;
    ensure(info.rank_in == 0 && inc == 0, "nonzero incoming differential")?;
    within(start, Duration::from_secs(60))?;
    Ok("∂K₄ = 0, dim H⁰(GC) at (4,6) = 1, incoming rank 0".into())
}

fn loop_classes() -> Outcome {
    let start = Instant::now();
    let store = store();
    let tadpole = Element::from_graph(Flavor::Fgc, &graph("n=1 uedges={1,1}")).unwrap();
    ensure(!tadpole.is_zero() && tadpole.degree() == Some(-1), "tadpole class is zero or not of degree -1")?;
    ensure(differential(&tadpole).is_zero(), "∂(tadpole) ≠ 0")?;
    let pentagon_graph = graph("n=5 uedges={1,2}{2,3}{3,4}{4,5}{5,1}");
    let pentagon = Element::from_graph(Flavor::Fgc, &pentagon_graph).unwrap();
    ensure(!pentagon.is_zero() && pentagon.degree() == Some(3), "5-gon class is zero or not of degree 3")?;
    ensure(!has_odd_automorphism(&pentagon_graph), "5-gon has an odd automorphism")?;
    ensure(differential(&pentagon).is_zero(), "∂(5-gon) ≠ 0")?;
    let hexagon = graph("n=6 uedges={1,2}{2,3}{3,4}{4,5}{5,6}{6,1}");
    ensure(has_odd_automorphism(&hexagon), "oracle finds no odd automorphism of the 6-gon")?;
    ensure(canonicalize(&hexagon).is_zero(), "6-gon does not vanish")?;
    ensure(Element::from_graph(Flavor::Fgc, &hexagon).unwrap().is_zero(), "6-gon class is nonzero")?;
    let (b11, ..) = oracle_betti(&store, Flavor::Fgc, 1, 1)?;
    let (b55, ..) = oracle_betti(&store, Flavor::Fgc, 5, 5)?;
    ensure(b11 >= 1 && b55 >= 1, format!("fGC Betti numbers (1,1): {b11}, (5,5): {b55}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("tadpole and 5-gon closed, 6-gon vanishes; fGC Betti (1,1) = {b11}, (5,5) = {b55}"))
}

fn h0_comparison() -> Outcome {
    let err = |e: gc_core::Error| e.to_string();
    let store = store();
    let report = store.compare_h0(4).map_err(err)?;
    ensure(report.agrees(), format!("disagreement:\n{report}"))?;
    let mut checked = 0;
    for n in 1..=4 {
        let e = 2 * n - 2;
        let (gc, ..) = oracle_betti(&store, Flavor::Gc, n, e)?;
        let (dfgc, ..) = oracle_betti(&store, Flavor::Dfgc, n, e)?;
        ensure(gc == dfgc, format!("({n},{e}): H⁰(GC) = {gc}, H⁰(dfGC) = {dfgc}"))?;
        for z in store.cocycle_basis(Flavor::Gc, n, e).map_err(err)? {
            ensure(differential(&z).is_zero(), format!("GC cocycle {z} is not closed"))?;
            let ex = z.directed_expansion().map_err(err)?;
            ensure(differential(&ex).is_zero(), format!("expansion of {z} is not closed"))?;
            checked += 1;
        }
    }
    Ok(format!("degree-0 Betti numbers agree for n ≤ 4; {checked} GC cocycle expansions closed"))
}

fn schouten_engine() -> Outcome {
    let err = |e: gc_core::Error| e.to_string();
    let mut reports = checks::check_schouten(2024, 500).map_err(err)?;
    reports.push(checks::check_theta_anchor(3).map_err(err)?);
    reports_pass(&reports)?;
    // hand-evaluated brackets
    let t = |d, i| Polyvector::theta(d, i);
    let x = |d, i| Polyvector::x(d, i);
    ensure(schouten(&t(1, 0), &x(1, 0)).map_err(err)? == Polyvector::constant(1, q(1)), "[θ₁, x¹] ≠ 1")?;
    ensure(schouten(&x(2, 0), &x(2, 1)).map_err(err)?.is_zero(), "[x¹, x²] ≠ 0")?;
    ensure(schouten(&t(2, 0), &t(2, 0)).map_err(err)?.is_zero(), "[θ₁, θ₁] ≠ 0")?;
    let v = x(2, 1).mul(&t(2, 0));
    let w = x(2, 0).mul(&t(2, 1));
    let expected = &x(2, 1).mul(&t(2, 1)) - &x(2, 0).mul(&t(2, 0));
    ensure(schouten(&v, &w).map_err(err)? == expected, "[x²∂₁, x¹∂₂] ≠ x²∂₂ - x¹∂₁")?;
    Ok(format!(
        "500 random triples; anchor on {} pairs; hand-evaluated brackets",
        reports[2].evaluations
    ))
}

fn globalization() -> Outcome {
    let err = |e: gc_core::Error| e.to_string();
    let k4 = tetrahedron();
    let mut reports = Vec::new();
    for d in [2, 3] {
        reports.push(check_vanishing_on_vectors(&k4, d, 8, 31).map_err(err)?);
        reports.push(check_linear_vector_trials(&k4, d, 8, 32).map_err(err)?);
        reports.push(check_gl_equivariance(&k4, d, 50, 33).map_err(err)?);
    }
    reports_pass(&reports)?;
    let edge = Element::gamma_edge(Flavor::Dfgc);
    let negative = check_vanishing_on_vectors(&edge, 2, 4, 31).map_err(err)?;
    ensure(!negative.passed, "Γ•-• vanishes on vector fields")?;
    let v = LinearVectorField::new(vec![vec![q(0), q(1)], vec![q(0), q(0)]]).unwrap();
    let w = LinearVectorField::new(vec![vec![q(0), q(0)], vec![q(1), q(0)]]).unwrap().to_polyvector();
    let lie = theta_action(&edge, &[v.to_polyvector(), w.clone()]).map_err(err)?;
    ensure(
        !lie.is_zero() && lie == schouten(&v.to_polyvector(), &w).map_err(err)?,
        "Γ•-• on two linear fields is not their nonzero bracket",
    )?;
    let quadratic = Polyvector::monomial(2, &[2, 0], &[1], q(1));
    let linear = LinearVectorField::new(vec![vec![q(1), q(0)], vec![q(0), q(0)]]).unwrap();
    ensure(
        !check_linear_vector_vanishing(&edge, &linear, &[quadratic]).map_err(err)?,
        "Γ•-• vanishes with a linear field",
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let ws: Vec<Polyvector> = (0..3).map(|_| random_polyvector(&mut rng, 2, 2, 3, 3)).collect();
    ensure(check_linear_vector_vanishing(&k4, &linear, &ws).map_err(err)?, "K₄ fails with a linear field")?;
    let evaluations: usize = reports.iter().map(|r| r.evaluations).sum();
    Ok(format!(
        "K₄ at d = 2, 3: {evaluations} evaluations, 100 coordinate changes; Γ•-• controls fail"
    ))
}

fn round_trip<T>(x: &T) -> Result<(), String>
where
    T: std::fmt::Display + std::str::FromStr + PartialEq + std::fmt::Debug,
    T::Err: std::fmt::Display,
{
    let text = x.to_string();
    let back: T = text.parse().map_err(|e: T::Err| format!("{e} parsing {text}"))?;
    ensure(back == *x && back.to_string() == text, format!("round trip changed {text}"))
}

fn cli_and_serializers() -> Outcome {
    let err = |e: gc_core::Error| e.to_string();
    let start = Instant::now();
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let status = Command::new(env!("CARGO_BIN_EXE_gc"))
        .args(["--cache-dir", dir.path().join("cache").to_str().unwrap(), "selftest"])
        .output()
        .map_err(|e| e.to_string())?;
    let selftest_time = start.elapsed();
    ensure(
        status.status.success(),
        format!("selftest failed:\n{}", String::from_utf8_lossy(&status.stdout)),
    )?;
    within(start, Duration::from_secs(300))?;

    let edge = Element::gamma_edge(Flavor::Dfgc);
    round_trip(&edge)?;
    round_trip(edge.terms())?;
    let tetra_graph = graph("n=4 uedges={1,2}{1,3}{1,4}{2,3}{2,4}{3,4}");
    let labeled = directed_expansion(&tetra_graph).map_err(err)?;
    ensure(labeled.len() == 64, format!("tetrahedron expansion has {} terms", labeled.len()))?;
    round_trip(&labeled)?;
    round_trip(&tetrahedron().directed_expansion().map_err(err)?)?;
    round_trip(&graph("n=4 edges=(3,1)(3,2)(2,3)(2,2)"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for d in 1..=3 {
        round_trip(&random_polyvector(&mut rng, d, d.min(2), 3, 4))?;
    }
    let store = store();
    let m = store.differential_matrix(Flavor::Fgc, 4, 4).map_err(err)?;
    round_trip(&*m)?;
    let cache = DiskCache::new(dir.path().join("rt"));
    let basis = store.slice_basis(Flavor::Gc, 5, 8).map_err(err)?;
    cache.store_basis(Flavor::Gc, 5, 8, &basis.basis);
    cache.store_matrix(Flavor::Fgc, 4, 4, &m);
    ensure(cache.load_basis(Flavor::Gc, 5, 8).as_deref() == Some(&basis.basis[..]), "cached basis changed")?;
    ensure(cache.load_matrix(Flavor::Fgc, 4, 4).as_ref() == Some(&*m), "cached matrix changed")?;
    let zero_edge = "1 * n=2 edges=(0,1)\n".parse::<GraphVector>();
    ensure(
        matches!(&zero_edge, Err(e) if e.to_string().contains("`0`")),
        "edge index 0 accepted or not named",
    )?;
    Ok(format!("gc selftest exit 0 in {selftest_time:.1?}; serializers round-trip"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Maurer–Cartan equation", maurer_cartan),
        ("∂² = 0 on GC (n ≤ 6) and dfGC (n ≤ 4)", d_squared),
        ("degree bookkeeping", degrees),
        ("pre-Lie identity and Jacobi", pre_lie_and_jacobi),
        ("tetrahedron cocycle", tetrahedron_witness),
        ("loop classes", loop_classes),
        ("H⁰(dfGC) ≅ H⁰(GC) for n ≤ 4", h0_comparison),
        ("Schouten engine", schouten_engine),
        ("globalization properties", globalization),
        ("CLI selftest and serializers", cli_and_serializers),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let number = k + 1;
        if only.is_some_and(|o| o != number) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {number} ({name}): PASS [{t:.1?}] {detail}"),
            Err(reason) => {
                failed += 1;
                println!("criterion {number} ({name}): FAIL [{t:.1?}] {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
