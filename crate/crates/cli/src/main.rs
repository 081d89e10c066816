//! `plumb`: inspect plumbings, compute their bosonic series, run the
//! verification suites of the DAG calculus and export DOT pictures.

mod check;
mod dagspec;
mod verify;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::json;

use zhat::error::Error;
use zhat::graphio::{emit_dot, parse_plumbing, parse_rational, series_to_json};
use zhat::plumbing::{PlumbedGraph, RootedTree};
use zhat::qseries::QSeries;
use zhat::treenest::{default_parameter_structure, zhat_nested};
use zhat::zhat::zhat_bosonic;

#[derive(Parser)]
#[command(name = "plumb", version, about = "Exact bosonic series of negative definite plumbings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the shape, definiteness and quadratic form of a plumbing.
    Check { file: PathBuf },
    /// Compute the series up to exponent N.
    Zhat {
        file: PathBuf,
        /// Truncation order, an integer or p/q.
        #[arg(long, short = 'N', default_value = "20")]
        order: String,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run identity checks of the colored DAG calculus, one JSON line per case.
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
        /// Largest number of bit coordinates.
        #[arg(long)]
        m: Option<usize>,
        /// Depth of the comparison.
        #[arg(long = "N")]
        depth: Option<i64>,
    },
    /// Write a colored DAG in DOT format.
    Dag {
        /// e.g. `hypercube m=1`, `fragment lambda=+ depth=6`, `family m=2 depth=6`,
        /// `product hypercube m=1 * even depth=4`.
        #[arg(long)]
        spec: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Nested,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
}

/// Why a command did not succeed; decides the exit status.
#[derive(Debug)]
pub enum Failure {
    /// A mathematical failure: exit status 1.
    Math(String),
    /// Bad arguments or unreadable input: exit status 2.
    Usage(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Math(s) | Failure::Usage(s) => f.write_str(s),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Syntax { .. }
            | Error::UnknownVertex(_)
            | Error::DuplicateVertex(_)
            | Error::DuplicateEdge(..)
            | Error::SelfLoop(_)
            | Error::DuplicateRoot
            | Error::Empty
            | Error::Disconnected
            | Error::Cyclic
            | Error::Series(_) => Failure::Usage(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

pub fn load(path: &Path) -> Result<PlumbedGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_plumbing(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse_order(s: &str) -> Result<BigRational, Failure> {
    let n = parse_rational(s).map_err(|e| Failure::Usage(format!("--order: {e}")))?;
    if n.is_negative() {
        return Err(Failure::Usage("--order must not be negative".into()));
    }
    Ok(n)
}

/// The declared root, or the first center when no root is declared.
fn nested(g: &PlumbedGraph, n: &BigRational) -> Result<QSeries, Failure> {
    let rt = match g.rooted() {
        Some(rt) => rt,
        None => RootedTree::new(g.tree().clone(), g.tree().centers()[0])?,
    };
    Ok(zhat_nested(g, &default_parameter_structure(&rt)?, n)?)
}

fn render(s: &QSeries, format: Format) -> String {
    match format {
        Format::Json => series_to_json(s).to_string(),
        Format::Plain => s.to_string(),
    }
}

fn cmd_zhat(file: &Path, order: &str, method: Method, format: Format) -> Result<(), Failure> {
    let g = load(file)?;
    let n = parse_order(order)?;
    match method {
        Method::Direct => println!("{}", render(&zhat_bosonic(&g, &n)?, format)),
        Method::Nested => println!("{}", render(&nested(&g, &n)?, format)),
        Method::Both => {
            let d = zhat_bosonic(&g, &n)?;
            let x = nested(&g, &n)?;
            match format {
                Format::Json => println!(
                    "{}",
                    json!({"direct": series_to_json(&d), "nested": series_to_json(&x), "equal": d == x})
                ),
                Format::Plain => println!("direct: {d}\nnested: {x}\nequal: {}", d == x),
            }
            if d != x {
                return Err(Failure::Math("direct and nested evaluations differ".into()));
            }
        }
    }
    Ok(())
}

fn cmd_dag(spec: &str, out: Option<&Path>) -> Result<(), Failure> {
    let dag = dagspec::build(spec)?;
    let text = emit_dot(&dag);
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("PLUMB_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("PLUMB_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Check { file } => check::run(&file),
        Command::Zhat {
            file,
            order,
            method,
            format,
        } => cmd_zhat(&file, &order, method, format),
        Command::Verify { suite, m, depth } => verify::run(suite, m, depth),
        Command::Dag { spec, out } => cmd_dag(&spec, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("plumb: {f}");
            ExitCode::from(match f {
                Failure::Math(_) => 1,
                Failure::Usage(_) => 2,
            })
        }
    }
}
