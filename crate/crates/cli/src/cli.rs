//! Argument parsing and the subcommands.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hmskit_core::exactmat::Field;
use hmskit_core::grading::{m_grading, GradingContext};
use hmskit_core::polyforms::{self, InvertiblePolynomial};
use hmskit_core::quivercat::{
    coxeter_polynomial, dynkin_quiver, euler_matrix, mutate_collection, Direction, DynkinType, EulerMatrix, Quiver,
};
use hmskit_core::symmetry::{gmax, is_sl, j_element, krawitz_transpose, SymmetryGroup};
use hmskit_core::Error;
use serde_json::{json, Value};

use crate::cache::{Cache, CacheRequest};
use crate::error::{CliError, Result};
use crate::pipeline::{self, Labeled, Timings, VerificationReport};

#[derive(Debug, Parser)]
#[command(name = "hmskit", version, about = "Exact checks of Ext-quiver equivalences for invertible polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    /// Cache directory (default ./.hmskit-cache, or $HMSKIT_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads for Hom computations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// No diagnostics on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grading group L of a polynomial.
    Grade {
        /// Atom expression (`D4t+A2`), JSON exponent matrix or monomial sum.
        input: String,
    },
    /// Generator collection as matrix factorizations.
    Generators {
        input: String,
        /// Group for the M-graded case, e.g. `1/3,1/3`.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 64)]
        max_objects: usize,
    },
    /// Compare the Hom table of the generators with the quiver side.
    Verify {
        input: String,
        /// Shift window |k| <= WINDOW.
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 64)]
        max_objects: usize,
        /// Ignore and do not write the cache.
        #[arg(long)]
        no_cache: bool,
        /// Add wall-clock timings to the report.
        #[arg(long)]
        timings: bool,
    },
    /// Transposed pair (A^T, G^T) and the M-grading.
    Transpose {
        input: String,
        /// Generators `a,b;c,d`, or `max`, `trivial`, `J`.
        #[arg(long)]
        group: String,
    },
    /// Maximal diagonal symmetry group and the element J.
    Gmax { input: String },
    /// Mutations of the simple collection of a Dynkin quiver, acting on the
    /// Euler matrix.
    Mutate {
        /// `A<m>`, `D<n>` or a JSON Euler matrix.
        quiver: String,
        /// Comma separated steps such as `L2,R3` (1-based slots).
        #[arg(long, default_value = "")]
        ops: String,
    },
}

/// A finished command: what to print and the exit status.
pub struct Outcome {
    pub value: Value,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, exit_code: 0 }
    }
}

pub fn grading_json(g: &GradingContext) -> Value {
    let free = |e: &hmskit_core::grading::LElement| -> Value {
        if e.free.len() == 1 {
            json!(e.free[0])
        } else {
            json!(e.free)
        }
    };
    let mut v = json!({
        "schema": 1,
        "rank": g.free_rank(),
        "torsion": g.torsion(),
        "deg": g.deg_x().iter().map(free).collect::<Vec<_>>(),
        "degc": free(g.deg_c()),
    });
    if !g.torsion().is_empty() {
        v["deg_torsion"] = json!(g.deg_x().iter().map(|e| e.torsion.clone()).collect::<Vec<_>>());
        v["degc_torsion"] = json!(g.deg_c().torsion);
    }
    v
}

/// `max`, `trivial`, `J` or explicit generators.
pub fn parse_group(a: &hmskit_core::exactmat::IntMatrix, s: &str) -> hmskit_core::Result<SymmetryGroup> {
    match s.trim() {
        "max" => gmax(a),
        "trivial" => Ok(SymmetryGroup::trivial(a.rows())),
        "J" => SymmetryGroup::generated_by(a.rows(), vec![j_element(a)?.j]),
        t => SymmetryGroup::parse(a.rows(), t),
    }
}

fn group_json(g: &SymmetryGroup) -> Value {
    json!(g.generators().iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn parse_ops(s: &str) -> Result<Vec<(Direction, usize)>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let bad = || CliError::Usage(format!("bad mutation {t:?}, expected L<i> or R<i>"));
            let dir = match t.chars().next() {
                Some('L') | Some('l') => Direction::Left,
                Some('R') | Some('r') => Direction::Right,
                _ => return Err(bad()),
            };
            let i = t[1..].parse().map_err(|_| bad())?;
            Ok((dir, i))
        })
        .collect()
}

fn parse_quiver_matrix(s: &str) -> Result<EulerMatrix> {
    let t = s.trim();
    if t.starts_with('[') {
        let rows: Vec<Vec<i64>> = serde_json::from_str(t).map_err(|e| Error::Parse(format!("Euler matrix: {e}")))?;
        return Ok(EulerMatrix::new(rows)?);
    }
    let kind = match polyforms::parse_atoms(t)?.as_slice() {
        [k] => DynkinType::of_atom(*k),
        _ => return Err(CliError::Usage("mutate takes a single Dynkin type".into())),
    };
    Ok(euler_matrix(&dynkin_quiver(kind)?))
}

fn note(global: &GlobalOpts, msg: &str) {
    if !global.quiet {
        eprintln!("hmskit: {msg}");
    }
}

fn check_limit(n: usize, max_objects: usize) -> Result<()> {
    if n > max_objects {
        return Err(CliError::ResourceLimit { what: format!("collection of {n} objects"), limit: max_objects });
    }
    Ok(())
}

fn exponent_rows(p: &InvertiblePolynomial) -> Value {
    json!(p.exponents().matrix().to_i64_rows())
}

enum Collection {
    Plain(Vec<Labeled>),
    Complex(Vec<Labeled<hmskit_core::exactmat::GaussRat>>),
}

/// The collection and the quivers of the A-side.
fn build_collection(
    p: &InvertiblePolynomial,
    group: Option<&str>,
    max_objects: usize,
) -> Result<(Collection, Vec<Quiver>)> {
    match group {
        None => {
            let quivers = pipeline::quivers(p)?;
            check_limit(quivers.iter().map(Quiver::len).product(), max_objects)?;
            Ok((Collection::Plain(pipeline::collection(p)?), quivers))
        }
        Some(gs) => {
            let g = parse_group(p.exponents().matrix(), gs)?;
            let m = pipeline::mgraded_d4_grading(p.exponents(), &g)?;
            check_limit(4, max_objects)?;
            Ok((Collection::Complex(pipeline::mgraded_d4_collection(&m)?), vec![pipeline::mgraded_d4_quiver()?]))
        }
    }
}

fn describe_all<F: Field>(coll: &[Labeled<F>], names: &[String]) -> Vec<Value> {
    coll.iter().map(|(l, k)| json!({ "label": l, "mf": k.describe(names) })).collect()
}

fn cmd_grade(input: &str) -> Result<Outcome> {
    let p = polyforms::parse_polynomial(input)?;
    Ok(Outcome::ok(grading_json(p.grading())))
}

fn cmd_generators(input: &str, group: Option<&str>, max_objects: usize) -> Result<Outcome> {
    let p = polyforms::parse_polynomial(input)?;
    let (coll, _) = build_collection(&p, group, max_objects)?;
    let names = p.var_names();
    let objects = match &coll {
        Collection::Plain(c) => describe_all(c, &names),
        Collection::Complex(c) => describe_all(c, &names),
    };
    Ok(Outcome::ok(json!({
        "schema": 1,
        "polynomial": p.render(),
        "group": group,
        "objects": objects,
    })))
}

/// Runs `verify`, reading and filling the cache unless `cache` is `None`.
pub fn verify(
    input: &str,
    window: i64,
    group: Option<&str>,
    max_objects: usize,
    cache: Option<&Cache>,
    with_timings: bool,
) -> Result<VerificationReport> {
    if window < 0 {
        return Err(CliError::Usage("window must be non-negative".into()));
    }
    let w = (-window, window);
    let p = polyforms::parse_polynomial(input)?;
    let (coll, quivers) = build_collection(&p, group, max_objects)?;
    let labels: Vec<String> = match &coll {
        Collection::Plain(c) => c.iter().map(|x| x.0.clone()).collect(),
        Collection::Complex(c) => c.iter().map(|x| x.0.clone()).collect(),
    };
    let req = CacheRequest {
        command: "verify".into(),
        polynomial: exponent_rows(&p).to_string(),
        group: group.map(str::to_string),
        window: [w.0, w.1],
        tool_version: env!("CARGO_PKG_VERSION").into(),
    };
    let start = Instant::now();
    let cached = cache.and_then(|c| c.get(&req));
    let bside = match cached {
        Some(t) => t,
        None => {
            let t = match &coll {
                Collection::Plain(c) => pipeline::bside_table(c, w)?,
                Collection::Complex(c) => pipeline::bside_table(c, w)?,
            };
            if let Some(c) = cache {
                c.put(&req, &t)?;
            }
            t
        }
    };
    let bside_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let mut report =
        pipeline::assemble_report(input, p.render(), group.map(str::to_string), &quivers, labels, bside, w, None)?;
    if with_timings {
        report.timings = Some(Timings { bside_seconds, aside_seconds: start.elapsed().as_secs_f64() });
    }
    Ok(report)
}

fn cmd_transpose(input: &str, group: &str) -> Result<Outcome> {
    let p = polyforms::parse_polynomial(input)?;
    let a = p.exponents().matrix();
    let g = parse_group(a, group)?;
    let gt = krawitz_transpose(a, &g)?;
    let pt = polyforms::transpose(&p);
    let at = pt.exponents().matrix();
    let side = |q: &InvertiblePolynomial, grp: &SymmetryGroup| -> Result<Value> {
        let j = j_element(q.exponents().matrix())?;
        Ok(json!({
            "polynomial": q.render(),
            "matrix": exponent_rows(q),
            "group": group_json(grp),
            "order": grp.order(),
            "contains_j": grp.contains(&j.j),
            "sl": is_sl(grp),
        }))
    };
    let m = match m_grading(a, &g) {
        Ok(m) => Some(("input", m)),
        Err(Error::MissingJ) => match m_grading(at, &gt) {
            Ok(m) => Some(("transpose", m)),
            Err(Error::MissingJ) => None,
            Err(e) => return Err(e.into()),
        },
        Err(e) => return Err(e.into()),
    };
    let m_json = match m {
        Some((pair, m)) => {
            let mut v = grading_json(&m);
            v["pair"] = json!(pair);
            v
        }
        None => Value::Null,
    };
    Ok(Outcome::ok(json!({
        "schema": 1,
        "input": side(&p, &g)?,
        "transpose": side(&pt, &gt)?,
        "m_grading": m_json,
    })))
}

fn cmd_gmax(input: &str) -> Result<Outcome> {
    let p = polyforms::parse_polynomial(input)?;
    let a = p.exponents().matrix();
    let g = gmax(a)?;
    let j = j_element(a)?;
    Ok(Outcome::ok(json!({
        "schema": 1,
        "polynomial": p.render(),
        "order": g.order(),
        "generators": group_json(&g),
        "j": j,
    })))
}

fn cmd_mutate(quiver: &str, ops: &str) -> Result<Outcome> {
    let e0 = parse_quiver_matrix(quiver)?;
    let steps = parse_ops(ops)?;
    let chi0 = coxeter_polynomial(&e0)?;
    let mut e = e0.clone();
    let mut trace = Vec::new();
    for (dir, i) in steps {
        e = mutate_collection(&e, i, dir)?;
        let tag = match dir {
            Direction::Left => format!("L{i}"),
            Direction::Right => format!("R{i}"),
        };
        trace.push(json!({ "op": tag, "euler": e.entries }));
    }
    let chi = coxeter_polynomial(&e)?;
    Ok(Outcome::ok(json!({
        "schema": 1,
        "euler": e0.entries,
        "steps": trace,
        "result": e.entries,
        "coxeter_polynomial": chi.to_string(),
        "coxeter_invariant": chi == chi0,
    })))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // a second initialization in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        Command::Grade { input } => cmd_grade(input),
        Command::Generators { input, group, max_objects } => cmd_generators(input, group.as_deref(), *max_objects),
        Command::Verify { input, window, group, max_objects, no_cache, timings } => {
            let cache = (!no_cache).then(|| Cache::resolve(cli.global.cache_dir.as_deref()));
            if let Some(c) = &cache {
                note(&cli.global, &format!("cache at {}", c.dir().display()));
            }
            let report = verify(input, *window, group.as_deref(), *max_objects, cache.as_ref(), *timings)?;
            if !report.matches() {
                note(&cli.global, "tables differ");
            }
            let exit_code = if report.matches() { 0 } else { 1 };
            Ok(Outcome { value: serde_json::to_value(&report).expect("report serializes"), exit_code })
        }
        Command::Transpose { input, group } => cmd_transpose(input, group),
        Command::Gmax { input } => cmd_gmax(input),
        Command::Mutate { quiver, ops } => cmd_mutate(quiver, ops),
    }
}

/// Parses arguments, runs, writes output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = run(&cli).and_then(|o| {
        let mut text = serde_json::to_string_pretty(&o.value).expect("JSON value");
        text.push('\n');
        match &cli.global.json {
            Some(path) => {
                std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source })?;
            }
            None => print!("{text}"),
        }
        Ok(o.exit_code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hmskit: error: {e}");
            e.exit_code()
        }
    }
}
