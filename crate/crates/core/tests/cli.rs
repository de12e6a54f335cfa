use std::collections::HashMap;
use std::path::{Path, PathBuf};

use gc_core::cli::{parse_element, run_with_env, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED};
use gc_core::lie::{differential, Element, Flavor};
use gc_core::poly::Polyvector;
use serde_json::Value;
use tempfile::TempDir;

const TETRA: &str = "1 * n=4 uedges={1,2}{1,3}{1,4}{2,3}{2,4}{3,4}\n";
const EDGE: &str = "1 * n=2 edges=(1,2)\n";

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn gc_env(args: &[&str], env: &HashMap<&str, String>) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gc").chain(args.iter().copied());
    let lookup = |k: &str| env.get(k).cloned();
    let code = run_with_env(argv, &lookup, &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn gc(args: &[&str]) -> Output {
    gc_env(args, &HashMap::new())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    serde_json::from_str(&o.out).unwrap()
}

/// Seed recorded in a one-property `check-props --json` report.
fn reported_seed(args: &[&str], env: &HashMap<&str, String>) -> u64 {
    let o = gc_env(args, env);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let v: Value = serde_json::from_str(&o.out).unwrap();
    v["reports"][0]["seed"].as_u64().unwrap()
}

#[test]
fn betti_of_the_tetrahedron_slice() {
    let o = gc(&["--no-cache", "betti", "--flavor", "GC", "--n", "4", "--e", "6"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert_eq!(o.out, "dim H = 1\n");
    let v = json(&gc(&["--no-cache", "--json", "betti", "--flavor", "GC", "--n", "4", "--e", "6"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verb"], "betti");
    assert_eq!((v["betti"].as_u64(), v["rank_in"].as_u64(), v["degree"].as_i64()), (Some(1), Some(0), Some(0)));
}

#[test]
fn cocycle_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let tetra = write(dir.path(), "tetra.gv", TETRA);
    let o = gc(&["cocycle", "--in", &tetra]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert!(o.out.starts_with("closed"));

    // K₄ minus an edge is not closed; the report names the first image term
    let perturbed = format!("{TETRA}1 * n=4 uedges={{1,2}}{{1,3}}{{1,4}}{{2,3}}{{2,4}}\n");
    let bad = write(dir.path(), "bad.gv", &perturbed);
    let o = gc(&["cocycle", "--in", &bad]);
    assert_eq!(o.code, EXIT_VERIFICATION_FAILED);
    let el = parse_element(&perturbed, None, None).unwrap();
    let (g, c) = differential(&el).terms().iter().next().map(|(g, c)| (g.clone(), c.clone())).unwrap();
    let expected = format!("{} * {g}", gc_core::rational::format_q(&c));
    assert!(o.out.contains(&expected), "{} lacks {expected}", o.out);
    let v: Value = serde_json::from_str(&gc(&["--json", "cocycle", "--in", &bad]).out).unwrap();
    assert_eq!(v["closed"], false);
    assert_eq!(v["first_nonzero"]["graph"], g.to_string());
}

#[test]
fn usage_and_input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let zero = write(dir.path(), "zero.gv", "1 * n=2 edges=(0,1)\n");
    let o = gc(&["diff", "--in", &zero]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.err.contains("line 1, column 16") && o.err.contains("`0`"), "{}", o.err);
    assert_eq!(gc(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(gc(&["betti", "--flavor", "GC", "--n", "4", "--e", "6", "--colour"]).code, EXIT_USAGE);
    assert_eq!(gc(&["betti", "--flavor", "XX", "--n", "4", "--e", "6"]).code, EXIT_USAGE);
    assert_eq!(gc(&["diff", "--flavor", "GC"]).code, EXIT_USAGE);
    assert_eq!(gc(&["cocycle", "--in", "/nonexistent/x.gv"]).code, EXIT_USAGE);
    assert_eq!(gc(&["--jobs", "0", "selftest"]).code, EXIT_USAGE);
    assert_eq!(gc(&["--truncation", "25", "diff", "--in", &zero]).code, EXIT_USAGE);
    let cfg = write(dir.path(), "gc.conf", "seed = 3\ncolour = red\n");
    let o = gc(&["--config", &cfg, "betti", "--flavor", "GC", "--n", "1", "--e", "0"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.err.contains("line 2") && o.err.contains("colour"), "{}", o.err);
    let o = gc(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.out.contains("selftest"));
}

#[test]
fn settings_precedence() {
    let dir = TempDir::new().unwrap();
    let edge = write(dir.path(), "edge.gv", EDGE);
    let cfg = write(dir.path(), "gc.conf", "# defaults\nseed = 30\n");
    let seed = |extra: &[&str], env: &HashMap<&str, String>| {
        let mut args: Vec<&str> = extra.to_vec();
        args.extend(["--json", "--no-cache", "check-props", "--graph", &edge, "--property", "gl", "--trials", "2"]);
        reported_seed(&args, env)
    };
    let none = HashMap::new();
    let env_seed = HashMap::from([("GC_SEED", "20".to_string())]);
    let env_all = HashMap::from([("GC_SEED", "20".to_string()), ("GC_CONFIG", cfg.clone())]);
    let env_cfg = HashMap::from([("GC_CONFIG", cfg.clone())]);

    assert_eq!(seed(&[], &none), 1);
    assert_eq!(seed(&[], &env_cfg), 30);
    assert_eq!(seed(&[], &env_all), 20);
    assert_eq!(seed(&["--config", &cfg], &none), 30);
    assert_eq!(seed(&["--config", &cfg], &env_seed), 20);
    assert_eq!(seed(&["--seed", "10", "--config", &cfg], &env_seed), 10);
    let bad_env = HashMap::from([("GC_SEED", "many".to_string())]);
    assert_eq!(gc_env(&["betti", "--flavor", "GC", "--n", "1", "--e", "0"], &bad_env).code, EXIT_USAGE);
}

#[test]
fn identical_seeds_give_identical_reports() {
    let dir = TempDir::new().unwrap();
    let tetra = write(dir.path(), "tetra.gv", TETRA);
    let args = ["--seed", "42", "check-props", "--graph", &tetra, "--d", "2", "--trials", "2"];
    let a = gc(&args);
    let b = gc(&args);
    assert_eq!(a.code, EXIT_OK, "{}{}", a.out, a.err);
    assert_eq!(a.out, b.out);
    assert!(a.out.contains("seed 42"));
    let mut json_args = vec!["--json"];
    json_args.extend_from_slice(&args);
    assert_eq!(gc(&json_args).out, gc(&json_args).out);
}

#[test]
fn edge_fails_the_vector_field_property() {
    let dir = TempDir::new().unwrap();
    let edge = write(dir.path(), "edge.gv", EDGE);
    let o = gc(&["check-props", "--graph", &edge, "--property", "vectors", "--trials", "2"]);
    assert_eq!(o.code, EXIT_VERIFICATION_FAILED);
    assert!(o.out.contains("FAILS"));
}

#[test]
fn element_outputs_parse_back() {
    let dir = TempDir::new().unwrap();
    let edge = write(dir.path(), "edge.gv", EDGE);
    let path3 = write(dir.path(), "path.gv", "1 * n=3 edges=(1,2)(3,2)\n");
    let o = gc(&["bracket", "--left", &edge, "--right", &path3]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    let b: Element = o.out.parse().unwrap();
    assert_eq!(b.to_string(), o.out);
    assert_eq!(b.flavor(), Flavor::Dfgc);
    // ∂x = [Γ•-•, x]
    let d = gc(&["diff", "--in", &path3]);
    assert_eq!(d.out, o.out);
    // the output file is itself a valid input
    let again = write(dir.path(), "again.gv", &o.out);
    assert_eq!(gc(&["cocycle", "--in", &again]).code, EXIT_OK);
}

#[test]
fn polyvector_verbs() {
    let dir = TempDir::new().unwrap();
    let theta = write(dir.path(), "t.pv", "d=1\n1 * 1 * θ_1\n");
    let x = write(dir.path(), "x.pv", "d=1\n1 * x1^1 * 1\n");
    let o = gc(&["schouten", "--left", &theta, "--right", &x]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert_eq!(o.out.parse::<Polyvector>().unwrap(), Polyvector::constant(1, gc_core::rational::q(1)));
    let edge = write(dir.path(), "edge.gv", EDGE);
    let act = gc(&["act", "--graph", &edge, "--input", &theta, "--input", &x]);
    assert_eq!(act.out, o.out);
    assert_eq!(gc(&["act", "--graph", &edge, "--input", &theta]).code, EXIT_USAGE);
    let v = json(&gc(&["--json", "schouten", "--left", &theta, "--right", &x]));
    assert_eq!(v["result"]["terms"][0]["coefficient"], "1");
}

#[test]
fn slice_verbs_and_disk_cache() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let o = gc(&["--cache-dir", cache, "enum", "--flavor", "dfGC", "--n", "2", "--e", "1"]);
    assert_eq!(o.out, "n=2 edges=(1,2)\nn=2 edges=(2,2)\n");
    let first = gc(&["--cache-dir", cache, "diff", "--flavor", "fGC", "--n", "3", "--e", "3"]);
    assert_eq!(first.code, EXIT_OK, "{}", first.err);
    assert!(std::fs::read_dir(cache).unwrap().count() > 0);
    let env = HashMap::from([("GC_CACHE_DIR", cache.to_string())]);
    let second = gc_env(&["diff", "--flavor", "fGC", "--n", "3", "--e", "3"], &env);
    assert_eq!(first.out, second.out);
    let m: gc_core::cohomology::SparseMatrix = first.out.parse().unwrap();
    assert_eq!(m.to_string(), first.out);
    let o = gc(&["--no-cache", "cocycle", "--flavor", "GC", "--n", "4", "--e", "6"]);
    let k: Element = o.out.parse().unwrap();
    assert_eq!(k.terms().len(), 1);
    let o = gc(&["--no-cache", "compare-h0", "--window", "4"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.err);
    assert!(o.out.ends_with("agree\n"));
}
