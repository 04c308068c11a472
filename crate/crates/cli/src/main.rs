//! `credpool`: repair incoherent credences and pool expert opinion from the
//! command line.
//!
//! Exit codes: 0 success, 1 input error, 2 solver error, 3 certification
//! failure.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use credpool::fixing::{fix_d1, fix_d2, project_coherent_general_with};
use credpool::pooling::{agg_d1, agg_d2, geometric_pool, geometric_pool_unnormalized, linear_pool};
use credpool::simplex::MirrorDescentOptions;
use credpool::theoremlab::{certify, CertifyConfig};
use credpool::wcap::{pool_on_worlds, wcap_d1, wcap_d2, wcap_general_with, WorldPool};
use credpool::{Credence, Direction, Generator, Profile};

use input::{AgentSpec, Loaded, ProfileFile};
use output::Format;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Solver(String),
    Output(String),
    Certification(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Solver(_) | CliError::Output(_) => 2,
            CliError::Certification(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Solver(m) => write!(f, "solver error: {m}"),
            CliError::Output(m) => write!(f, "output error: {m}"),
            CliError::Certification(n) => write!(f, "{n} claim(s) failed certification"),
        }
    }
}

fn solver(e: credpool::Error) -> CliError {
    CliError::Solver(e.to_string())
}

#[derive(Parser)]
#[command(name = "credpool", version, about = "Repair incoherent credences and pool expert opinion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replace each agent's credences by the nearest coherent ones.
    Fix(FixArgs),
    /// Pool the agents into a single credence function.
    Pool(PoolArgs),
    /// Coherent credence closest on weighted average to all agents.
    Wcap(WcapArgs),
    /// Run the numeric certification suite.
    Certify(CertifyArgs),
}

#[derive(Args)]
struct Io {
    /// Profile file (JSON).
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Solver {
    /// sed, gkl or power:<p>.
    #[arg(long, default_value = "sed", value_parser = parse_generator)]
    divergence: Generator,
    /// from minimizes D(x, c); to minimizes D(c, x).
    #[arg(long, default_value = "from", value_parser = parse_direction)]
    direction: Direction,
    /// Stopping tolerance for the iterative solver on non-partition agendas.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
}

impl Solver {
    fn options(&self) -> MirrorDescentOptions {
        let mut opts = MirrorDescentOptions::default();
        if let Some(t) = self.tol {
            opts.tol = t;
        }
        opts
    }
}

#[derive(Args)]
struct FixArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    solver: Solver,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Lp,
    Gp,
    GpMinus,
    Agg,
    Wcap,
}

#[derive(Args)]
struct PoolArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    solver: Solver,
    #[arg(long, value_enum, default_value = "lp")]
    method: Method,
    /// Agent weights, overriding the file.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<f64>>,
    /// With gp on a non-partition agenda, normalize on the agenda itself
    /// instead of pooling distributions over worlds.
    #[arg(long)]
    general_normalize: bool,
}

#[derive(Args)]
struct WcapArgs {
    #[command(flatten)]
    io: Io,
    #[command(flatten)]
    solver: Solver,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<f64>>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Comma-separated claim ids; all claims by default.
    #[arg(long, value_delimiter = ',')]
    claims: Option<Vec<String>>,
    /// First seed of the sampled profiles.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Profiles per combination of cell count and agent count.
    #[arg(long, default_value_t = 100)]
    seeds: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_generator(s: &str) -> Result<Generator, String> {
    s.parse().map_err(|e: credpool::Error| e.to_string())
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse().map_err(|e: credpool::Error| e.to_string())
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("{s:?} is not a positive number")),
    }
}

fn emit(io: &Io, file: &ProfileFile) -> Result<(), CliError> {
    output::write(&output::render_profile(file, io.format)?, io.out.as_deref())
}

/// The input file with one agent holding `c`.
fn single(loaded: &Loaded, method: String, name: &str, c: Credence) -> ProfileFile {
    ProfileFile {
        method: Some(method),
        agenda: loaded.file.agenda.clone(),
        agents: vec![AgentSpec { name: name.to_string(), credences: c.into_vec(), weight: 1.0 }],
    }
}

fn approximate(s: &Solver, p: &Profile) -> Result<Credence, CliError> {
    let report = if p.agenda().is_partition() {
        match s.direction {
            Direction::From => wcap_d1(&s.divergence, p),
            Direction::To => wcap_d2(&s.divergence, p),
        }
    } else {
        wcap_general_with(&s.divergence, p, s.direction, s.options())
    };
    Ok(report.map_err(solver)?.argmin)
}

fn run_fix(args: FixArgs) -> Result<(), CliError> {
    let loaded = input::load(&args.io.input, None)?;
    let s = &args.solver;
    let p = &loaded.profile;
    let mut agents = Vec::with_capacity(p.len());
    for (spec, agent) in loaded.file.agents.iter().zip(p.agents()) {
        let report = if p.agenda().is_partition() {
            match s.direction {
                Direction::From => fix_d1(&s.divergence, p.agenda(), &agent.credence),
                Direction::To => fix_d2(&s.divergence, p.agenda(), &agent.credence),
            }
        } else {
            project_coherent_general_with(
                &s.divergence,
                p.agenda(),
                &agent.credence,
                s.direction,
                s.options(),
            )
        };
        let fixed = report.map_err(|e| CliError::Solver(format!("{}: {e}", spec.name)))?;
        agents.push(AgentSpec { credences: fixed.argmin.into_vec(), ..spec.clone() });
    }
    let file = ProfileFile {
        method: Some(format!("fix {} {}", s.divergence, s.direction)),
        agenda: loaded.file.agenda.clone(),
        agents,
    };
    emit(&args.io, &file)
}

fn run_pool(args: PoolArgs) -> Result<(), CliError> {
    let loaded = input::load(&args.io.input, args.weights.as_deref())?;
    let s = &args.solver;
    let p = &loaded.profile;
    let partition = p.agenda().is_partition();
    let (label, c) = match args.method {
        Method::Lp => ("lp".to_string(), linear_pool(p)),
        Method::Gp if partition || args.general_normalize => {
            ("gp".to_string(), geometric_pool(p).map_err(solver)?)
        }
        Method::Gp => {
            eprintln!("note: non-partition agenda; pooling the agents' distributions over worlds");
            ("gp worlds".to_string(), pool_on_worlds(p, WorldPool::Geometric).map_err(solver)?)
        }
        Method::GpMinus => ("gp-minus".to_string(), geometric_pool_unnormalized(p)),
        Method::Agg => {
            let c = match s.direction {
                Direction::From => agg_d1(&s.divergence, p).map_err(solver)?,
                Direction::To => agg_d2(&s.divergence, p),
            };
            (format!("agg {} {}", s.divergence, s.direction), c)
        }
        Method::Wcap => (format!("wcap {} {}", s.divergence, s.direction), approximate(s, p)?),
    };
    let name = label.split(' ').next().unwrap_or("pool").to_string();
    emit(&args.io, &single(&loaded, format!("pool {label}"), &name, c))
}

fn run_wcap(args: WcapArgs) -> Result<(), CliError> {
    let loaded = input::load(&args.io.input, args.weights.as_deref())?;
    let c = approximate(&args.solver, &loaded.profile)?;
    let method = format!("wcap {} {}", args.solver.divergence, args.solver.direction);
    emit(&args.io, &single(&loaded, method, "wcap", c))
}

fn run_certify(args: CertifyArgs) -> Result<(), CliError> {
    let config =
        CertifyConfig { seed: args.seed, seeds: args.seeds, claims: args.claims, ..CertifyConfig::default() };
    let report = certify(&config).map_err(|e| CliError::Input(e.to_string()))?;
    output::write(&output::render_report(&report, args.format)?, args.out.as_deref())?;
    let failed: Vec<&str> = report.claims.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
    eprintln!(
        "{} of {} claims certified{}",
        report.claims.len() - failed.len(),
        report.claims.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Certification(failed.len()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Fix(a) => run_fix(a),
        Command::Pool(a) => run_pool(a),
        Command::Wcap(a) => run_wcap(a),
        Command::Certify(a) => run_certify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("credpool: {e}");
            ExitCode::from(e.code())
        }
    }
}
