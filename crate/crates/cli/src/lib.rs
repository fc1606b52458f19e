//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use geodom::bench::{self, SweepParams};
use geodom::gen::{generate, GenParams};
use geodom::io::{self, InstanceFile, Kind, SolutionFile};
use geodom::oracle::default_cap;
use geodom::render::render_svg;
use geodom::uvpg::{grid_to_unit_b1, UnitBkInstance};
use geodom::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "geodom", version, about = "Stabbing and domination solvers with exact certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Run the approximation algorithm for an instance.
    Solve(SolveArgs),
    /// Compute an optimum by brute force.
    Exact(ExactArgs),
    /// Check a solution against an instance. Exit 1 when it is not feasible.
    Verify(VerifyArgs),
    /// Ratio sweep over random instances, written as CSV.
    Bench(BenchArgs),
    /// Draw an instance, optionally with a solution, as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    h: usize,
    #[arg(long, default_value_t = 3)]
    w: usize,
    #[arg(long = "range", default_value_t = 20)]
    coord_range: i64,
    /// For unit_bk: emit the h by w grid construction instead of random paths.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    alg: String,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Also compute the optimum when the instance is within the oracle cap.
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    solution: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 12)]
    max: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long = "range", default_value_t = 20)]
    coord_range: i64,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    solution: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Solver(Error),
    Io(String),
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    Ok(InstanceFile::from_json(&read(path)?)?)
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match dispatch(cli.cmd) {
        Ok(()) => EXIT_OK,
        Err(Failure::Rejected(msg)) => {
            eprintln!("rejected: {msg}");
            EXIT_FAILED
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_infeasible() => EXIT_INFEASIBLE,
        Error::SizeCapExceeded { .. } => EXIT_CAP,
        Error::GenerationExhausted(_) => EXIT_FAILED,
        _ => EXIT_INVALID,
    }
}

fn dispatch(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Gen(a) => {
            let kind: Kind = a.kind.parse()?;
            let inst = if a.grid {
                if kind != Kind::UnitBk {
                    return Err(Error::invalid("--grid applies to unit_bk only").into());
                }
                InstanceFile::UnitBk(UnitBkInstance { k: 1, paths: grid_to_unit_b1(a.h, a.w) })
            } else {
                let p = GenParams { n: a.n, m: a.m, k: a.k, h: a.h, w: a.w, coord_range: a.coord_range };
                generate(kind, &p, a.seed)?
            };
            emit(a.output.as_deref(), &inst.to_json())
        }
        Cmd::Solve(a) => {
            let kind = Kind::from_alg(&a.alg)?;
            let inst = load(&a.input)?;
            if inst.kind() != kind {
                return Err(Error::invalid(format!("--alg {} does not solve {} instances", a.alg, inst.kind())).into());
            }
            let solved = io::solve(&inst, a.trace.is_some())?;
            let mut cert = solved.certificate;
            if a.certify {
                match inst.exact(a.cap.unwrap_or_else(default_cap)) {
                    Ok(e) => cert.exact_opt = Some(e.len()),
                    Err(Error::SizeCapExceeded { .. }) => eprintln!("note: instance exceeds the oracle cap; not certified"),
                    Err(e) => return Err(e.into()),
                }
                cert.check().map_err(Failure::Rejected)?;
            }
            if let Some(t) = &a.trace {
                let text = serde_json::to_string_pretty(&solved.trace).expect("traces serialize") + "\n";
                emit(Some(t), &text)?;
            }
            let sol = SolutionFile { kind, alg: a.alg, ids: cert.heuristic_ids.clone(), certificate: Some(cert) };
            emit(a.output.as_deref(), &sol.to_json())
        }
        Cmd::Exact(a) => {
            let inst = load(&a.input)?;
            let ids = inst.exact(a.cap.unwrap_or_else(default_cap))?;
            let sol = SolutionFile { kind: inst.kind(), alg: "exact".into(), ids, certificate: None };
            emit(a.output.as_deref(), &sol.to_json())
        }
        Cmd::Verify(a) => {
            let inst = load(&a.input)?;
            let sol = SolutionFile::from_json(&read(&a.solution)?)?;
            if sol.kind != inst.kind() {
                return Err(Error::invalid("solution and instance kinds differ").into());
            }
            if !inst.verify(&sol.ids)? {
                return Err(Failure::Rejected(format!("{} ids do not form a feasible solution", sol.ids.len())));
            }
            println!("ok: {} ids", sol.ids.len());
            Ok(())
        }
        Cmd::Bench(a) => {
            let p = SweepParams {
                kind: a.kind.parse()?,
                max_size: a.max,
                trials: a.trials,
                seed: a.seed,
                k: a.k,
                coord_range: a.coord_range,
                cap: a.cap.unwrap_or_else(default_cap),
            };
            let recs = bench::sweep(&p)?;
            let mut buf = Vec::new();
            bench::write_csv(&recs, &mut buf)?;
            emit(a.output.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"))
        }
        Cmd::Render(a) => {
            let inst = load(&a.input)?;
            let sel = match &a.solution {
                Some(p) => SolutionFile::from_json(&read(p)?)?.ids,
                None => BTreeSet::new(),
            };
            emit(a.output.as_deref(), &render_svg(&inst, &sel))
        }
    }
}
