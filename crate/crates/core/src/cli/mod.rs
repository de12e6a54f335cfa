//! The `gc` command line: argument handling, settings resolution and report
//! output. [`run`] is the whole program; `main` only forwards to it.

pub mod config;
pub mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::checks;
use crate::cohomology::{default_bounds, DiskCache, SliceStore};
use crate::graph::{enumerate_graphs, MAX_VERTICES};
use crate::lie::{bracket, differential, Element, Flavor};
use crate::poly::{
    check_gl_equivariance, check_linear_vector_trials, check_vanishing_on_vectors, schouten, theta_action,
    Polyvector,
};
use crate::rational::format_q;
use crate::report::PropertyReport;
use config::{parse_config, Settings, DEFAULT_SEED};
pub use input::parse_element;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: crate::Error },
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "gc", version, about = "Graph complexes, their cohomology and the action on polyvector fields")]
struct Cli {
    /// Emit one JSON document instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized check.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for cached slice bases and differentials.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the slice cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Config file of `key = value` lines (default: $GC_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Maximal vertex count kept in products of elements read from files.
    #[arg(long, global = true)]
    truncation: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the nonzero canonical classes of a slice.
    Enum(SliceArgs),
    /// The differential of an element, or the matrix of a slice.
    Diff(ElementOrSlice),
    /// Check that an element is closed, or list a slice's cocycle basis.
    Cocycle(ElementOrSlice),
    /// Dimension of the cohomology of a slice.
    Betti(SliceArgs),
    /// Degree-zero cohomology of dfGC against GC slice by slice.
    CompareH0 {
        /// Largest vertex count compared.
        #[arg(long, default_value_t = 4)]
        window: usize,
    },
    /// The Lie bracket of two elements.
    Bracket(PairArgs),
    /// Evaluate the action of a graph element on polyvector fields.
    Act {
        /// Element file.
        #[arg(long)]
        graph: PathBuf,
        /// Polyvector file, once per vertex in order.
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_parser = parse_flavor)]
        flavor: Option<Flavor>,
    },
    /// The Schouten bracket of two polyvector fields.
    Schouten {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Randomized checks of the globalization properties of an element.
    CheckProps {
        /// Element file.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_flavor)]
        flavor: Option<Flavor>,
        /// Dimension of the coordinate space.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Random trials per property.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Properties to check (default: all).
        #[arg(long = "property", value_enum)]
        properties: Vec<Property>,
    },
    /// Maurer–Cartan, ∂² = 0, pre-Lie and Jacobi, and Schouten checks.
    Selftest,
}

#[derive(Debug, Args)]
struct SliceArgs {
    #[arg(long, value_parser = parse_flavor)]
    flavor: Flavor,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    e: usize,
}

#[derive(Debug, Args)]
struct ElementOrSlice {
    /// Element file; without it `--flavor`, `--n` and `--e` select a slice.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long, value_parser = parse_flavor)]
    flavor: Option<Flavor>,
    #[arg(long, conflicts_with = "input")]
    n: Option<usize>,
    #[arg(long, conflicts_with = "input")]
    e: Option<usize>,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long)]
    left: PathBuf,
    #[arg(long)]
    right: PathBuf,
    #[arg(long, value_parser = parse_flavor)]
    flavor: Option<Flavor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    /// Vanishing on vector fields.
    Vectors,
    /// Vanishing with a linear vector field in one slot.
    Linear,
    /// Equivariance under linear changes of coordinates.
    Gl,
}

fn parse_flavor(s: &str) -> std::result::Result<Flavor, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// Runs `gc` with the process environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, &|k| std::env::var(k).ok(), out, err)
}

/// Runs `gc` with `env` standing in for the process environment. Returns
/// the exit status: 0 on success, 1 when a check fails, 2 on usage or input
/// errors.
pub fn run_with_env<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, env, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

struct Context {
    json: bool,
    seed: u64,
    truncation: Option<usize>,
    store: SliceStore,
}

fn resolve(cli: &Cli, env: &dyn Fn(&str) -> Option<String>) -> CliResult<(Settings, usize)> {
    let flags = Settings {
        seed: cli.seed,
        jobs: cli.jobs,
        cache_dir: cli.cache_dir.clone(),
        truncation: cli.truncation,
    };
    if flags.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    if let Some(t) = flags.truncation.filter(|t| !(1..=MAX_VERTICES).contains(t)) {
        return Err(CliError::Usage(format!("--truncation {t} outside 1..={MAX_VERTICES}")));
    }
    let from_env = Settings::from_env(env)?;
    let config_path = cli.config.clone().or_else(|| env("GC_CONFIG").map(PathBuf::from));
    let from_file = match config_path {
        Some(path) => parse_config(&read(&path)?).map_err(|source| CliError::Input { path, source })?,
        None => Settings::default(),
    };
    let settings = flags.or(from_env).or(from_file);
    let jobs = settings
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    Ok((settings, jobs))
}

fn execute(cli: &Cli, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write) -> CliResult<bool> {
    let (settings, jobs) = resolve(cli, env)?;
    let cache = if cli.no_cache {
        None
    } else {
        settings
            .cache_dir
            .clone()
            .or_else(|| dirs::cache_dir().map(|d| d.join("gc")))
            .map(DiskCache::new)
    };
    let ctx = Context {
        json: cli.json,
        seed: settings.seed.unwrap_or(DEFAULT_SEED),
        truncation: settings.truncation,
        store: SliceStore::new(default_bounds(), cache),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    let (ok, doc) = pool.install(|| dispatch(&cli.command, &ctx))?;
    if ctx.json {
        writeln!(out, "{doc}")?;
    } else {
        write!(out, "{}", doc.as_str().unwrap_or_default())?;
    }
    Ok(ok)
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        source: e.into(),
    })
}

fn load_element(path: &Path, flavor: Option<Flavor>, ctx: &Context) -> CliResult<Element> {
    parse_element(&read(path)?, flavor, ctx.truncation).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_polyvector(path: &Path) -> CliResult<Polyvector> {
    read(path)?.parse().map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn element_json(el: &Element) -> Value {
    let terms: Vec<Value> = el
        .terms()
        .iter()
        .map(|(g, c)| json!({"coefficient": format_q(c), "graph": g.to_string()}))
        .collect();
    json!({"complex": el.flavor().name(), "truncation": el.truncation(), "terms": terms})
}

fn polyvector_json(v: &Polyvector) -> Value {
    let terms: Vec<Value> = v
        .terms()
        .map(|(t, c)| json!({"coefficient": format_q(c), "term": t.to_string()}))
        .collect();
    json!({"d": v.dim(), "terms": terms})
}

/// Wraps a verb's payload: a JSON object in `--json` mode, text otherwise.
fn document(ctx: &Context, verb: &str, payload: Value, text: String) -> Value {
    if !ctx.json {
        return Value::String(text);
    }
    let mut doc = json!({"schema_version": SCHEMA_VERSION, "verb": verb});
    if let (Some(d), Value::Object(p)) = (doc.as_object_mut(), payload) {
        d.extend(p);
    }
    doc
}

fn reports_document(ctx: &Context, verb: &str, reports: &[PropertyReport]) -> (bool, Value) {
    let passed = reports.iter().all(|r| r.passed);
    let mut text: String = reports.iter().map(|r| format!("{r}\n")).collect();
    text.push_str(&format!("{verb}: {}\n", if passed { "passed" } else { "FAILED" }));
    let doc = document(ctx, verb, json!({"passed": passed, "reports": reports}), text);
    (passed, doc)
}

fn slice_selector(args: &ElementOrSlice, verb: &str) -> CliResult<(Flavor, usize, usize)> {
    match (args.flavor, args.n, args.e) {
        (Some(f), Some(n), Some(e)) => Ok((f, n, e)),
        _ => Err(CliError::Usage(format!(
            "{verb} needs either --in <file> or all of --flavor, --n and --e"
        ))),
    }
}

fn dispatch(command: &Command, ctx: &Context) -> CliResult<(bool, Value)> {
    match command {
        Command::Enum(a) => {
            let classes = enumerate_graphs(a.n, a.e, &a.flavor.constraints(), &ctx.store.bounds())?;
            let graphs: Vec<String> = classes.iter().map(|c| c.graph.to_string()).collect();
            let text: String = graphs.iter().map(|g| format!("{g}\n")).collect();
            let payload = json!({"complex": a.flavor.name(), "n": a.n, "e": a.e, "graphs": graphs});
            Ok((true, document(ctx, "enum", payload, text)))
        }
        Command::Diff(a) => match &a.input {
            Some(path) => {
                let el = load_element(path, a.flavor, ctx)?;
                let d = differential(&el);
                Ok((true, document(ctx, "diff", json!({"result": element_json(&d)}), d.to_string())))
            }
            None => {
                let (f, n, e) = slice_selector(a, "diff")?;
                let m = ctx.store.differential_matrix(f, n, e)?;
                let entries: Vec<Value> = m
                    .entries()
                    .map(|(r, c, v)| json!([r + 1, c + 1, format_q(v)]))
                    .collect();
                let payload = json!({
                    "complex": f.name(), "n": n, "e": e,
                    "rows": m.rows(), "cols": m.cols(), "entries": entries,
                });
                Ok((true, document(ctx, "diff", payload, m.to_string())))
            }
        },
        Command::Cocycle(a) => match &a.input {
            Some(path) => {
                let el = load_element(path, a.flavor, ctx)?;
                let d = differential(&el);
                let first = d.terms().iter().next().map(|(g, c)| (g.to_string(), format_q(c)));
                let text = match &first {
                    None => format!("closed: ∂ vanishes on {} term(s) in {}\n", el.terms().len(), el.flavor()),
                    Some((g, c)) => format!(
                        "not closed: ∂ has {} nonzero term(s), first {c} * {g}\n",
                        d.terms().len()
                    ),
                };
                let payload = json!({
                    "closed": first.is_none(),
                    "first_nonzero": first.as_ref().map(|(g, c)| json!({"coefficient": c, "graph": g})),
                    "image_terms": d.terms().len(),
                });
                Ok((first.is_none(), document(ctx, "cocycle", payload, text)))
            }
            None => {
                let (f, n, e) = slice_selector(a, "cocycle")?;
                let basis = ctx.store.cocycle_basis(f, n, e)?;
                let text: String = basis.iter().map(|c| format!("{c}\n")).collect();
                let payload = json!({
                    "complex": f.name(), "n": n, "e": e,
                    "cocycles": basis.iter().map(element_json).collect::<Vec<_>>(),
                });
                Ok((true, document(ctx, "cocycle", payload, text)))
            }
        },
        Command::Betti(a) => {
            let info = ctx.store.betti(a.flavor, a.n, a.e)?;
            let text = format!("dim H = {}\n", info.betti);
            let payload = json!({
                "complex": a.flavor.name(), "n": a.n, "e": a.e,
                "degree": 2 * a.n as i64 - 2 - a.e as i64,
                "dim": info.dim, "rank_out": info.rank_out, "rank_in": info.rank_in, "betti": info.betti,
            });
            Ok((true, document(ctx, "betti", payload, text)))
        }
        Command::CompareH0 { window } => {
            let report = ctx.store.compare_h0(*window)?;
            let ok = report.agrees();
            let text = format!("{report}{}\n", if ok { "agree" } else { "DISAGREE" });
            let payload = json!({"agrees": ok, "window": report.window, "rows": report.rows});
            Ok((ok, document(ctx, "compare-h0", payload, text)))
        }
        Command::Bracket(a) => {
            let x = load_element(&a.left, a.flavor, ctx)?;
            let y = load_element(&a.right, a.flavor, ctx)?;
            let b = bracket(&x, &y)?;
            Ok((true, document(ctx, "bracket", json!({"result": element_json(&b)}), b.to_string())))
        }
        Command::Act { graph, inputs, flavor } => {
            let gamma = load_element(graph, *flavor, ctx)?;
            let vs = inputs.iter().map(|p| load_polyvector(p)).collect::<CliResult<Vec<_>>>()?;
            let v = theta_action(&gamma, &vs)?;
            Ok((true, document(ctx, "act", json!({"result": polyvector_json(&v)}), v.to_string())))
        }
        Command::Schouten { left, right } => {
            let v = schouten(&load_polyvector(left)?, &load_polyvector(right)?)?;
            Ok((true, document(ctx, "schouten", json!({"result": polyvector_json(&v)}), v.to_string())))
        }
        Command::CheckProps {
            graph,
            flavor,
            d,
            trials,
            properties,
        } => {
            let gamma = load_element(graph, *flavor, ctx)?;
            let wanted = if properties.is_empty() {
                vec![Property::Vectors, Property::Linear, Property::Gl]
            } else {
                properties.clone()
            };
            let mut reports = Vec::new();
            for p in wanted {
                reports.push(match p {
                    Property::Vectors => check_vanishing_on_vectors(&gamma, *d, *trials, ctx.seed)?,
                    Property::Linear => check_linear_vector_trials(&gamma, *d, *trials, ctx.seed)?,
                    Property::Gl => check_gl_equivariance(&gamma, *d, *trials, ctx.seed)?,
                });
            }
            Ok(reports_document(ctx, "check-props", &reports))
        }
        Command::Selftest => Ok(reports_document(ctx, "selftest", &selftest(ctx)?)),
    }
}

/// Slices in the reduced `∂² = 0` sweep: middle vertex counts below these.
const SELFTEST_GC_MIDDLE: usize = 5;
const SELFTEST_DFGC_MIDDLE: usize = 3;
const SELFTEST_RANDOM_TRIPLES: usize = 100;
const SELFTEST_SCHOUTEN_TRIPLES: usize = 500;

fn selftest(ctx: &Context) -> CliResult<Vec<PropertyReport>> {
    let mut reports = vec![checks::check_maurer_cartan()];
    reports.push(checks::check_d_squared(&ctx.store, Flavor::Gc, SELFTEST_GC_MIDDLE)?);
    reports.push(checks::check_d_squared(&ctx.store, Flavor::Dfgc, SELFTEST_DFGC_MIDDLE)?);
    let family = checks::small_family(&ctx.store, 3, 2)?;
    reports.extend(checks::check_family(&family)?);
    reports.extend(checks::check_random(ctx.seed, SELFTEST_RANDOM_TRIPLES, 4, 3)?);
    reports.extend(checks::check_schouten(ctx.seed, SELFTEST_SCHOUTEN_TRIPLES)?);
    reports.push(checks::check_theta_anchor(3)?);
    Ok(reports)
}
