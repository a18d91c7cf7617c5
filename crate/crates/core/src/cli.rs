//! Command-line front end. [`run`] returns the process exit code: 0 on
//! success, 1 on pipeline errors, 2 on unreadable input, 3 when a
//! normalization runs out of fuel and 4 when a certificate fails to verify.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::classic::{dice, pulling_triangulation};
use crate::geometry::linalg::Q;
use crate::geometry::{Polytope, RatPolytope};
use crate::io::{lattice_json, multiset_json, read_hyperplanes, read_polytope, FormatError, TriangulationFile};
use crate::kmw::{index_profile, kmw_pipeline, KmwError, KmwOptions, LatticeMultiset, DEFAULT_DIM_CAP};
use crate::lattice::{IntVector, LatticeClass};
use crate::mixed::{main_pipeline, MixedError, MixedOptions, DEFAULT_MAX_CELLS};
use crate::rewrite::{NormalizeOptions, RewriteError, Strategy, DEFAULT_FUEL};
use crate::verify::{simplex_cells, verify_mixed_support, verify_subdivision, verify_triangulation, verify_unimodular, Report};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "unimod", version, about = "Exact unimodular triangulations of dilated lattice polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Normalize with a seeded random strategy.
    #[arg(long, global = true, conflicts_with = "deterministic")]
    pub seed: Option<u64>,
    /// Normalize deterministically (the default).
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Largest number of rewriting moves per normalized cell.
    #[arg(long, global = true)]
    pub fuel: Option<u64>,
    /// Print one line per round to stderr.
    #[arg(long, global = true)]
    pub verbose_trace: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Triangulate by pulling, or subdivide by a hyperplane arrangement.
    Triangulate {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "pulling")]
        method: Method,
        /// Arrangement for dicing.
        #[arg(long, required_if_eq("method", "dicing"))]
        hyperplanes: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// A unimodular triangulation of `(d!)^N P`.
    Kmw {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Unimodular triangulations of `(r c^N + s (d!)^N) P` for several pairs.
    DilateFamily {
        input: PathBuf,
        /// First dilation factor, coprime to `d!` and at least `d! + d`.
        #[arg(long)]
        c: Option<u64>,
        #[arg(long, default_value = "(1,0);(0,1);(1,1)")]
        pairs: String,
        /// Directory for the per-pair triangulations.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        dim_cap: usize,
        /// Largest number of pairs a round may produce.
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: usize,
        /// Summary file; standard output by default.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a triangulation file and print a report.
    Verify {
        triangulation: PathBuf,
        /// Polytope the cells must cover, scaled by the dilation recorded in the
        /// file; the hull of the cells by default.
        #[arg(long)]
        against: Option<PathBuf>,
        /// Also require every cell to be unimodular.
        #[arg(long)]
        unimodular: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Convert a triangulation file.
    Export {
        triangulation: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Pulling,
    Dicing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Off,
    Json,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::new(EXIT_PARSE, e.to_string())
    }
}

impl From<RewriteError> for CliError {
    fn from(e: RewriteError) -> Self {
        let code = if matches!(e, RewriteError::FuelExhausted { .. }) { EXIT_FUEL } else { EXIT_FAILURE };
        CliError::new(code, e.to_string())
    }
}

impl From<KmwError> for CliError {
    fn from(e: KmwError) -> Self {
        match e {
            KmwError::Rewrite(r) => r.into(),
            other => CliError::new(EXIT_FAILURE, other.to_string()),
        }
    }
}

impl From<MixedError> for CliError {
    fn from(e: MixedError) -> Self {
        match e {
            MixedError::Rewrite(r) => r.into(),
            other => CliError::new(EXIT_FAILURE, other.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let opts = normalize_options(cli);
    match &cli.command {
        Command::Triangulate { input, method, hyperplanes, out } => triangulate(input, *method, hyperplanes.as_deref(), opts, out.as_deref()),
        Command::Kmw { input, dim_cap, out } => kmw(cli, input, *dim_cap, opts, out.as_deref()),
        Command::DilateFamily { input, c, pairs, out_dir, dim_cap, max_cells, out } => {
            let pairs = parse_pairs(pairs)?;
            let mixed = MixedOptions { normalize: opts, c: *c, dim_cap: *dim_cap, min_rounds: 1, max_cells: *max_cells };
            dilate_family(cli, input, &pairs, mixed, out_dir, out.as_deref())
        }
        Command::Verify { triangulation, against, unimodular, out } => verify(triangulation, against.as_deref(), *unimodular, out.as_deref()),
        Command::Export { triangulation, format, out } => {
            let file = TriangulationFile::parse(&read(triangulation)?)?;
            let text = match format {
                ExportFormat::Off => file.to_off()?,
                ExportFormat::Json => file.to_json(),
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn normalize_options(cli: &Cli) -> NormalizeOptions {
    let strategy = cli.seed.map_or(Strategy::Deterministic, Strategy::Random);
    NormalizeOptions { strategy, fuel: cli.fuel.unwrap_or(DEFAULT_FUEL) }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::new(EXIT_FAILURE, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn report_json(r: &Report) -> Value {
    json!({ "passed": r.passed(), "checked_cells": r.checked_cells, "violations": r.violations })
}

/// Fails with the report when a certificate does not verify.
fn require(r: Report, what: &str) -> Result<(), CliError> {
    if r.passed() {
        Ok(())
    } else {
        Err(CliError::new(EXIT_VERIFY, format!("{what} failed verification: {}", to_text(&report_json(&r)).trim_end())))
    }
}

fn meta(entries: &[(&str, Value)]) -> BTreeMap<String, Value> {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn triangulate(input: &Path, method: Method, hyperplanes: Option<&Path>, opts: NormalizeOptions, out: Option<&Path>) -> Result<(), CliError> {
    let p = read_polytope(&read(input)?)?;
    let d = p.ambient_dim();
    let file = match method {
        Method::Pulling => {
            let tri = pulling_triangulation(p.vertices(), opts)?;
            let cells = simplex_cells(&tri);
            require(verify_triangulation(&p, &cells), "pulling triangulation")?;
            TriangulationFile::from_int_cells(d, &cells, meta(&[("method", json!("pulling"))]))
        }
        Method::Dicing => {
            let path = hyperplanes.ok_or_else(|| CliError::new(EXIT_PARSE, "dicing needs --hyperplanes"))?;
            let hs = read_hyperplanes(&read(path)?)?;
            if hs.iter().any(|h| h.normal().dim() != d) {
                return Err(CliError::new(EXIT_PARSE, "hyperplanes and polytope differ in dimension"));
            }
            let whole = p.to_rat();
            let cells = dice(&whole, &hs, opts)?;
            require(verify_subdivision(&whole, &cells), "dicing")?;
            TriangulationFile::from_rat_cells(d, &cells, meta(&[("method", json!("dicing"))]))
        }
    };
    emit(out, &file.to_json())
}

fn class_json(class: &Option<LatticeClass>) -> Value {
    match class {
        None => Value::Null,
        Some(c) => json!({ "representative": c.rep().0.iter().map(BigInt::to_string).collect::<Vec<_>>(), "lattice": lattice_json(c.lattice()) }),
    }
}

fn trace_entry(round: usize, class: &Option<LatticeClass>, cells: usize, lattices: &LatticeMultiset) -> Value {
    json!({ "round": round, "class": class_json(class), "cells": cells, "lattices": multiset_json(lattices) })
}

fn max_index(lattices: &LatticeMultiset) -> String {
    index_profile(lattices).first().map_or_else(|| "1".into(), |(i, _)| i.to_string())
}

fn kmw(cli: &Cli, input: &Path, dim_cap: usize, opts: NormalizeOptions, out: Option<&Path>) -> Result<(), CliError> {
    let p = read_polytope(&read(input)?)?;
    let res = kmw_pipeline(&p, KmwOptions { normalize: opts, dim_cap, min_rounds: 1 })?;
    let mut trace = vec![trace_entry(0, &None, res.initial_lattices.values().sum(), &res.initial_lattices)];
    for (k, r) in res.rounds.iter().enumerate() {
        if cli.verbose_trace {
            eprintln!("round {}: {} cells, largest index {}", k + 1, r.cells, max_index(&r.lattices));
        }
        trace.push(trace_entry(k + 1, &r.class, r.cells, &r.lattices));
    }
    let cells = simplex_cells(&res.triangulation);
    let target = p.dilate(&res.dilation);
    require(verify_triangulation(&target, &cells).merge(verify_unimodular(&cells)), "kmw triangulation")?;
    let meta = meta(&[("method", json!("kmw")), ("N", json!(res.n())), ("dilation", json!(res.dilation.to_string()))]);
    let file = TriangulationFile::from_int_cells(p.ambient_dim(), &cells, meta);
    let doc = json!({
        "N": res.n(),
        "dilation": res.dilation.to_string(),
        "triangulation": file,
        "lattice_trace": trace,
    });
    emit(out, &to_text(&doc))
}

/// Parses `"(r,s);(r,s);..."`.
pub fn parse_pairs(text: &str) -> Result<Vec<(u64, u64)>, CliError> {
    let bad = || CliError::new(EXIT_PARSE, format!("pairs must look like \"(1,0);(2,1)\", got {text:?}"));
    text.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let inner = t.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            let (r, s) = inner.split_once(',').ok_or_else(bad)?;
            Ok((r.trim().parse().map_err(|_| bad())?, s.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn dilate_family(cli: &Cli, input: &Path, pairs: &[(u64, u64)], opts: MixedOptions, out_dir: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let p = read_polytope(&read(input)?)?;
    let res = main_pipeline(&p, opts)?;
    let mut trace = vec![trace_entry(0, &None, res.initial_lattices.values().sum(), &res.initial_lattices)];
    for (k, r) in res.rounds.iter().enumerate() {
        if cli.verbose_trace {
            eprintln!("round {}: {} pairs, largest index {}, {} classes rejected", k + 1, r.cells, max_index(&r.lattices), r.rejected);
        }
        trace.push(trace_entry(k + 1, &r.class, r.cells, &r.lattices));
    }
    let want = [p.dilate(&res.c_power()), p.dilate(&res.factorial_power())];
    require(verify_mixed_support(&res.cells, &want), "mixed subdivision")?;
    let threshold = res.threshold()?;
    let mut written = Vec::new();
    let mut files = Vec::new();
    for &(r, s) in pairs {
        let m = res.dilation(r, s);
        let tri = res.triangulation(r, s, opts.normalize)?;
        let cells = simplex_cells(&tri);
        let target = p.dilate(&m);
        require(verify_triangulation(&target, &cells).merge(verify_unimodular(&cells)), &format!("triangulation for (r, s) = ({r}, {s})"))?;
        if cli.verbose_trace {
            eprintln!("(r, s) = ({r}, {s}): dilation {m}, {} cells", cells.len());
        }
        let name = format!("tri_r{r}_s{s}.json");
        let meta = meta(&[
            ("method", json!("dilate-family")),
            ("N", json!(res.n())),
            ("c", json!(res.c)),
            ("r", json!(r)),
            ("s", json!(s)),
            ("dilation", json!(m.to_string())),
        ]);
        files.push((out_dir.join(&name), TriangulationFile::from_int_cells(p.ambient_dim(), &cells, meta)));
        written.push(json!({ "r": r, "s": s, "dilation": m.to_string(), "cells": cells.len(), "file": name }));
    }
    fs::create_dir_all(out_dir).map_err(|e| CliError::new(EXIT_FAILURE, format!("{}: {e}", out_dir.display())))?;
    for (path, file) in files {
        emit(Some(&path), &file.to_json())?;
    }
    let doc = json!({
        "N": res.n(),
        "c": res.c,
        "c_power": res.c_power().to_string(),
        "factorial_power": res.factorial_power().to_string(),
        "threshold": threshold.to_string(),
        "pairs": written,
        "lattice_trace": trace,
    });
    emit(out, &to_text(&doc))
}

/// The polytope in `path` dilated by `meta.dilation` of `file`, if any.
fn target_polytope(path: &Path, file: &TriangulationFile) -> Result<Polytope, CliError> {
    let p = read_polytope(&read(path)?)?;
    match file.meta.get("dilation").and_then(Value::as_str) {
        Some(k) => {
            let k: BigInt = k.parse().map_err(|_| CliError::new(EXIT_PARSE, format!("bad dilation {k:?}")))?;
            Ok(p.dilate(&k))
        }
        None => Ok(p),
    }
}

fn verify(path: &Path, against: Option<&Path>, unimodular: bool, out: Option<&Path>) -> Result<(), CliError> {
    let file = TriangulationFile::parse(&read(path)?)?;
    let report = if file.is_simplicial() && file.int_cells().is_ok() {
        let cells = file.int_cells()?;
        let p = match against {
            Some(a) => target_polytope(a, &file)?,
            None => {
                let pts: Vec<IntVector> = cells.iter().flatten().cloned().collect();
                Polytope::new(&pts).map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))?
            }
        };
        if p.ambient_dim() != file.dim {
            return Err(CliError::new(EXIT_PARSE, "triangulation and polytope differ in dimension"));
        }
        let r = verify_triangulation(&p, &cells);
        if unimodular {
            r.merge(verify_unimodular(&cells))
        } else {
            r
        }
    } else {
        if unimodular {
            return Err(CliError::new(EXIT_PARSE, "--unimodular needs an integral simplicial triangulation"));
        }
        let cells = file.rat_cells()?;
        let total = match against {
            Some(a) => target_polytope(a, &file)?.to_rat(),
            None => {
                let pts: Vec<Vec<Q>> = cells.iter().flat_map(|c| c.vertices().iter().cloned()).collect();
                RatPolytope::new(&pts).map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))?
            }
        };
        verify_subdivision(&total, &cells)
    };
    emit(out, &to_text(&report_json(&report)))?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::new(EXIT_VERIFY, format!("{} violations", report.violations.len())))
    }
}
