//! Command-line front end: generate benchmark families, validate and
//! reorder complexes, reduce them, and compute homology.
//!
//! Exit codes: 0 on success, 1 on an internal invariant violation, 2 on a
//! user error (bad arguments, unreadable or invalid input).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use steepness::generators::{
    chessboard_complex, chevalley_complex, independence_complex, simplicial_chain_complex, Graph,
    LieAlgebraSpec, SimplicialComplex,
};
use steepness::matching::steepness_matching;
use steepness::ordering::{ColKeys, ReorderMode, ReorderSchedule, RowKeys};
use steepness::reduction::Pipeline;
use steepness::torsion::{
    homology_over_field, integer_homology, p_local_homology, DEFAULT_RESIDUAL_CAP,
};
use steepness::{ChainComplex, Error, Ring, SparseMatrix};

#[derive(Parser)]
#[command(name = "steepness", version, about = "Chain complex reduction via steepness matchings")]
struct Cli {
    /// Worker threads for the data-parallel sections (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a chain complex from one of the built-in families.
    Gen(GenArgs),
    /// Check shapes and that consecutive boundaries compose to zero.
    Validate { input: PathBuf },
    /// Permute basis elements to improve the steepness matching.
    Reorder(ReorderArgs),
    /// Reduce a complex, emitting the residual and a pass-by-pass report.
    Reduce(ReduceArgs),
    /// Betti numbers, torsion and optionally generators.
    Homology(HomologyArgs),
    /// Repeat a reduction and report timing/size statistics per run.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Independence complex of a graph.
    Independence {
        /// hypercube:N | path:N | cycle:N | complete:N | kneser:N:K | file:PATH
        #[arg(long)]
        graph: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Non-attacking rook placements on an m x n board.
    Chessboard {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chevalley complex of the n-th Heisenberg Lie algebra.
    Heisenberg {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chevalley complex of gl_n over Z.
    Gl {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simplicial chain complex from a facet file (one facet per line).
    Simplicial {
        #[arg(long)]
        facets: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReorderArgs {
    input: PathBuf,
    /// none | cols | rows:A,B | both:A,B
    #[arg(long, default_value = "both:0,2")]
    reorder: String,
    /// Comparison key subsets as COLS/ROWS, e.g. c1,c2,c4/r1,r2,r4;
    /// either side may be omitted to keep all four keys.
    #[arg(long, default_value = "c1,c2,c3,c4/r1,r2,r3,r4")]
    keys: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    input: PathBuf,
    /// z | q | gf:P | zloc:P (defaults to the ring of the input file)
    #[arg(long)]
    ring: Option<String>,
    /// auto (until the matching is empty) or a pass count
    #[arg(long, default_value = "auto")]
    passes: String,
    /// none | cols | rows:A,B | both:A,B, applied before every pass
    #[arg(long, default_value = "none")]
    reorder: String,
    /// Comparison key subsets as COLS/ROWS, e.g. c1,c2,c4/r1,r2,r4.
    #[arg(long, default_value = "c1,c2,c3,c4/r1,r2,r3,r4")]
    keys: String,
    /// Write the accumulated map from the residual into the input basis.
    #[arg(long)]
    emit_f: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pass report destination (stderr when omitted).
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct HomologyArgs {
    input: PathBuf,
    /// z | q | gf:P | zloc:P
    #[arg(long, default_value = "z")]
    ring: String,
    /// Also output generator chains.
    #[arg(long)]
    generators: bool,
    /// Dense finisher bound on residual matrix sides (ring z only).
    #[arg(long, default_value_t = DEFAULT_RESIDUAL_CAP)]
    snf_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    input: PathBuf,
    #[arg(long)]
    ring: Option<String>,
    #[arg(long, default_value = "none")]
    reorder: String,
    #[arg(long, default_value_t = 3)]
    repeat: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum CliError {
    User(String),
    Internal(String),
}

/// Errors arising from input data or arguments are the user's to fix;
/// anything else escaping the library is ours.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Cycle { .. } => CliError::Internal(e.to_string()),
            Error::ResidualTooLarge { .. } => CliError::User(format!(
                "{e}; raise --snf-cap to finish larger residuals densely"
            )),
            other => CliError::User(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli.command)));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(CliError::User(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(CliError::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Validate { input } => cmd_validate(&input),
        Command::Reorder(args) => cmd_reorder(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Homology(args) => cmd_homology(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_complex(path: &Path) -> Result<ChainComplex, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::User(format!("cannot read {}: {e}", path.display())))?;
    Ok(ChainComplex::from_chc_str(&text)?)
}

fn write_complex(path: &Path, c: &ChainComplex) -> Result<(), CliError> {
    std::fs::write(path, c.to_chc_string())
        .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))
}

fn parse_ring(s: &str) -> Result<Ring, CliError> {
    let s = s.to_ascii_lowercase();
    match s.as_str() {
        "z" => return Ok(Ring::Integers),
        "q" => return Ok(Ring::Rationals),
        _ => {}
    }
    if let Some(p) = s.strip_prefix("gf:") {
        let p: u64 = p.parse().map_err(|_| CliError::User(format!("bad prime {p:?}")))?;
        return Ok(Ring::prime_field(p)?);
    }
    if let Some(p) = s.strip_prefix("zloc:") {
        let p: u64 = p.parse().map_err(|_| CliError::User(format!("bad prime {p:?}")))?;
        return Ok(Ring::localized(p)?);
    }
    Err(CliError::User(format!(
        "unknown ring {s:?}; expected z, q, gf:P or zloc:P"
    )))
}

fn parse_reorder(mode: &str, keys: &str) -> Result<ReorderSchedule, CliError> {
    let (col_keys, row_keys) = match keys.split_once('/') {
        Some((c, r)) => (c, r),
        None if keys.trim_start().starts_with('r') => ("", keys),
        None => (keys, ""),
    };
    let (col_keys, row_keys) = (
        if col_keys.is_empty() { "c1,c2,c3,c4" } else { col_keys },
        if row_keys.is_empty() { "r1,r2,r3,r4" } else { row_keys },
    );
    let parse_ab = |rest: &str| -> Result<(u8, usize), CliError> {
        let (a, b) = rest
            .split_once(',')
            .ok_or_else(|| CliError::User(format!("expected A,B after `:` in {rest:?}")))?;
        let a: u8 = a.parse().map_err(|_| CliError::User("a must be 0 or 1".into()))?;
        let b: usize = b.parse().map_err(|_| CliError::User("b must be a positive step".into()))?;
        if a > 1 || b == 0 {
            return Err(CliError::User("need a in {0,1} and b >= 1".into()));
        }
        Ok((a, b))
    };
    let mode = match mode {
        "none" => ReorderMode::None,
        "cols" => ReorderMode::Columns,
        other => {
            if let Some(rest) = other.strip_prefix("rows:") {
                let (a, b) = parse_ab(rest)?;
                ReorderMode::Rows { a, b }
            } else if let Some(rest) = other.strip_prefix("both:") {
                let (a, b) = parse_ab(rest)?;
                ReorderMode::Both { a, b }
            } else {
                return Err(CliError::User(format!(
                    "unknown reorder mode {other:?}; expected none, cols, rows:A,B or both:A,B"
                )));
            }
        }
    };
    let mut schedule = ReorderSchedule {
        mode,
        col_keys: ColKeys { c1: false, c2: false, c3: false, c4: false },
        row_keys: RowKeys { r1: false, r2: false, r3: false, r4: false },
    };
    for key in col_keys.split(',').filter(|k| !k.is_empty()) {
        match key.trim() {
            "c1" => schedule.col_keys.c1 = true,
            "c2" => schedule.col_keys.c2 = true,
            "c3" => schedule.col_keys.c3 = true,
            "c4" => schedule.col_keys.c4 = true,
            other => return Err(CliError::User(format!("unknown column key {other:?}"))),
        }
    }
    for key in row_keys.split(',').filter(|k| !k.is_empty()) {
        match key.trim() {
            "r1" => schedule.row_keys.r1 = true,
            "r2" => schedule.row_keys.r2 = true,
            "r3" => schedule.row_keys.r3 = true,
            "r4" => schedule.row_keys.r4 = true,
            other => return Err(CliError::User(format!("unknown row key {other:?}"))),
        }
    }
    Ok(schedule)
}

fn parse_graph(spec: &str) -> Result<(Graph, Vec<String>), CliError> {
    let num = |s: &str| -> Result<usize, CliError> {
        s.parse().map_err(|_| CliError::User(format!("bad number {s:?} in graph spec")))
    };
    if let Some(d) = spec.strip_prefix("hypercube:") {
        return Ok(Graph::hypercube(num(d)? as u32));
    }
    if let Some(n) = spec.strip_prefix("path:") {
        return Ok(Graph::path(num(n)?));
    }
    if let Some(n) = spec.strip_prefix("cycle:") {
        return Ok(Graph::cycle(num(n)?));
    }
    if let Some(n) = spec.strip_prefix("complete:") {
        return Ok(Graph::complete(num(n)?));
    }
    if let Some(rest) = spec.strip_prefix("kneser:") {
        let (n, k) = rest
            .split_once(':')
            .ok_or_else(|| CliError::User("kneser spec is kneser:N:K".into()))?;
        return Ok(Graph::kneser(num(n)? as u32, num(k)? as u32));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::User(format!("cannot read {path}: {e}")))?;
        return Ok(Graph::from_edge_list_text(&text)?);
    }
    Err(CliError::User(format!(
        "unknown graph spec {spec:?}; expected hypercube:N, path:N, cycle:N, complete:N, kneser:N:K or file:PATH"
    )))
}

fn describe_complex(c: &ChainComplex) {
    println!("dim {}", c.dim());
    println!(
        "ranks ({})",
        c.ranks().iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
    );
    let mut largest: Option<(usize, &SparseMatrix)> = None;
    for k in 1..=c.dim() {
        let b = c.boundary(k);
        if largest.is_none_or(|(_, best)| b.nnz() > best.nnz()) {
            largest = Some((k, b));
        }
    }
    if let Some((k, b)) = largest {
        println!("largest boundary d{k}: {}x{}, nnz {}", b.nrows(), b.ncols(), b.nnz());
    }
    println!("total entries {}", c.total_entries());
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let (complex, out) = match args.family {
        GenFamily::Independence { graph, out } => {
            let (g, labels) = parse_graph(&graph)?;
            let k = independence_complex(&g, labels);
            (simplicial_chain_complex(&k), out)
        }
        GenFamily::Chessboard { m, n, out } => {
            if m == 0 || n == 0 {
                return Err(CliError::User("board sides must be positive".into()));
            }
            (simplicial_chain_complex(&chessboard_complex(m, n)), out)
        }
        GenFamily::Heisenberg { n, out } => {
            if n == 0 || 2 * n + 1 > 66 {
                return Err(CliError::User("heisenberg index must be in 1..=32".into()));
            }
            (chevalley_complex(&LieAlgebraSpec::heisenberg(n)), out)
        }
        GenFamily::Gl { n, out } => {
            if n == 0 || n * n > 66 {
                return Err(CliError::User("gl index must be in 1..=8".into()));
            }
            (chevalley_complex(&LieAlgebraSpec::general_linear(n)), out)
        }
        GenFamily::Simplicial { facets, out } => {
            let text = std::fs::read_to_string(&facets)
                .map_err(|e| CliError::User(format!("cannot read {}: {e}", facets.display())))?;
            let k = SimplicialComplex::from_facets_text(&text)?;
            (simplicial_chain_complex(&k), out)
        }
    };
    describe_complex(&complex);
    if let Some(path) = out {
        write_complex(&path, &complex)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_validate(input: &Path) -> Result<(), CliError> {
    let c = read_complex(input)?;
    c.validate()?;
    println!(
        "ok: {} over {}, ranks ({})",
        input.display(),
        c.ring(),
        c.ranks().iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}

fn cmd_reorder(args: ReorderArgs) -> Result<(), CliError> {
    let mut c = read_complex(&args.input)?;
    c.validate()?;
    let schedule = parse_reorder(&args.reorder, &args.keys)?;
    steepness::ordering::apply_schedule(&mut c, &schedule);
    let matching = steepness_matching(&c);
    println!(
        "steepness matching sizes after reorder: {:?}",
        matching.counts()
    );
    write_complex(&args.out, &c)
}

#[derive(Serialize)]
struct PassReport {
    pass: usize,
    matched: Vec<usize>,
    ranks: Vec<usize>,
    densities: Vec<String>,
    nnz: Vec<usize>,
    wall_ms: f64,
    entry_bytes_estimate: usize,
}

#[derive(Serialize)]
struct RunReport {
    input_ranks: Vec<usize>,
    passes: Vec<PassReport>,
    final_ranks: Vec<usize>,
    total_wall_ms: f64,
    peak_entry_bytes_estimate: usize,
}

/// Portable size estimate from entry counts: both access orders store an
/// index and a coefficient per entry, plus the rank bookkeeping.
fn memory_estimate(c: &ChainComplex) -> usize {
    c.total_entries() * 2 * 56 + c.ranks().iter().sum::<usize>() * 16
}

fn density_strings(c: &ChainComplex) -> Vec<String> {
    (1..=c.dim())
        .map(|k| {
            let b = c.boundary(k);
            let cells = b.nrows() * b.ncols();
            if cells == 0 {
                "0".to_string()
            } else {
                format!("{}/{}", b.nnz(), cells)
            }
        })
        .collect()
}

fn run_reduction(
    c: &ChainComplex,
    schedule: &ReorderSchedule,
    max_passes: Option<usize>,
    want_f: bool,
) -> Result<(Pipeline, RunReport), CliError> {
    let start = Instant::now();
    let mut pipe = Pipeline::new(c.clone(), want_f, false);
    let mut passes = Vec::new();
    let mut peak = memory_estimate(c);
    loop {
        if let Some(limit) = max_passes {
            if passes.len() >= limit {
                break;
            }
        }
        let pass_start = Instant::now();
        pipe.reorder(schedule);
        let matching = steepness_matching(pipe.complex());
        if matching.is_empty() {
            break;
        }
        let matched = matching.counts();
        let before: Vec<usize> = pipe.complex().ranks().to_vec();
        pipe.pass_with(&matching)?;
        let after = pipe.complex();
        // matched pairs only ever shrink a degree
        debug_assert!(after.ranks().iter().zip(&before).all(|(a, b)| a <= b));
        peak = peak.max(memory_estimate(after));
        passes.push(PassReport {
            pass: passes.len() + 1,
            matched,
            ranks: after.ranks().to_vec(),
            densities: density_strings(after),
            nnz: after.boundaries().iter().map(SparseMatrix::nnz).collect(),
            wall_ms: pass_start.elapsed().as_secs_f64() * 1e3,
            entry_bytes_estimate: memory_estimate(after),
        });
    }
    let report = RunReport {
        input_ranks: c.ranks().to_vec(),
        final_ranks: pipe.complex().ranks().to_vec(),
        passes,
        total_wall_ms: start.elapsed().as_secs_f64() * 1e3,
        peak_entry_bytes_estimate: peak,
    };
    Ok((pipe, report))
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), CliError> {
    let mut c = read_complex(&args.input)?;
    if let Some(ring) = &args.ring {
        c = c.into_ring(parse_ring(ring)?)?;
    }
    c.validate()?;
    let schedule = parse_reorder(&args.reorder, &args.keys)?;
    let max_passes = match args.passes.as_str() {
        "auto" => None,
        n => Some(
            n.parse::<usize>()
                .map_err(|_| CliError::User(format!("--passes takes `auto` or a count, got {n:?}")))?,
        ),
    };
    let (pipe, report) = run_reduction(&c, &schedule, max_passes, args.emit_f.is_some())?;
    let result = pipe.finish();

    match args.format {
        Format::Text => {
            println!("passes: {}", result.passes);
            println!(
                "final ranks ({})",
                result.reduced.ranks().iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
            );
            for (k, b) in result.reduced.boundaries().iter().enumerate() {
                if !b.is_zero() {
                    println!("residual d{}: {}x{}, nnz {}", k + 1, b.nrows(), b.ncols(), b.nnz());
                }
            }
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "passes": result.passes,
                    "final_ranks": result.reduced.ranks(),
                })
            );
        }
    }

    let report_text = serde_json::to_string(&report).expect("report serializes");
    match &args.report {
        Some(path) => std::fs::write(path, report_text)
            .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))?,
        None => eprintln!("{report_text}"),
    }

    if let Some(path) = &args.out {
        write_complex(path, &result.reduced)?;
    }
    if let Some(path) = &args.emit_f {
        let f = result.f.as_ref().expect("f accumulated");
        let blocks: Vec<serde_json::Value> = f
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let mut entries: Vec<(usize, usize, String)> = m
                    .iter()
                    .map(|(i, j, v)| (i + 1, j + 1, v.to_string()))
                    .collect();
                entries.sort();
                serde_json::json!({
                    "k": k,
                    "nrows": m.nrows(),
                    "ncols": m.ncols(),
                    "entries": entries,
                })
            })
            .collect();
        let doc = serde_json::json!({ "ring": c.ring().to_string(), "maps": blocks });
        std::fs::write(path, doc.to_string())
            .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_homology(args: HomologyArgs) -> Result<(), CliError> {
    let c = read_complex(&args.input)?;
    c.validate()?;
    let ring = parse_ring(&args.ring)?;
    let result = match ring {
        Ring::Integers => integer_homology(&c.into_ring(ring)?, args.generators, args.snf_cap)?,
        Ring::Rationals | Ring::PrimeField(_) => {
            homology_over_field(&c.into_ring(ring)?, args.generators)?
        }
        Ring::LocalizedIntegers(p) => p_local_homology(&c, p, args.generators)?,
    };
    match args.format {
        Format::Text => {
            println!("{}", result.to_text());
            if args.generators {
                let mut out = String::new();
                for (k, group) in result.groups.iter().enumerate() {
                    let Some(gens) = &group.generators else { continue };
                    for (i, chain) in gens.iter().enumerate() {
                        let terms: Vec<String> = chain
                            .iter()
                            .map(|(idx, v)| format!("{}*e{}", v, idx + 1))
                            .collect();
                        let _ = writeln!(out, "gen H_{k}[{i}] = {}", terms.join(" + "));
                    }
                }
                print!("{out}");
            }
        }
        Format::Json => println!("{}", result.to_json()),
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let mut c = read_complex(&args.input)?;
    if let Some(ring) = &args.ring {
        c = c.into_ring(parse_ring(ring)?)?;
    }
    c.validate()?;
    let schedule = parse_reorder(&args.reorder, "c1,c2,c3,c4/r1,r2,r3,r4")?;
    if args.repeat == 0 {
        return Err(CliError::User("--repeat must be positive".into()));
    }
    for run in 1..=args.repeat {
        let (_, report) = run_reduction(&c, &schedule, None, false)?;
        println!(
            "{}",
            serde_json::json!({
                "run": run,
                "passes": report.passes.len(),
                "total_wall_ms": report.total_wall_ms,
                "peak_entry_bytes_estimate": report.peak_entry_bytes_estimate,
                "final_ranks": report.final_ranks,
            })
        );
    }
    Ok(())
}
