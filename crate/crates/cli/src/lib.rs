//! Command-line front end: JSON problem files in, deterministic reports out.

pub mod error;
pub mod fixtures;
pub mod problem;
pub mod report;
pub mod text;
pub mod verify;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polyball::ratlin::parse_rational;
use polyball::RatVec;

use crate::error::{CliError, CliResult};
use crate::problem::{Problem, Subject};
use crate::report::Report;
use crate::verify::VerifySection;

pub const THREADS_ENV: &str = "POLYBALL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "polyball", version, about = "Exact analysis of polyhedral subspaces of l_inf^n")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Problem file (JSON, schema version 1).
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strict and weak verdicts per component class, with certificates.
    Components(InputArg),
    /// Facet count and facet classes of the unit ball.
    Facets(InputArg),
    /// Extreme points of the unit ball in coefficient coordinates.
    Vertices(InputArg),
    /// Isometric embedding into l_inf^r and the space verdicts.
    Embed {
        #[command(flatten)]
        input: InputArg,
        /// Target dimension to decide embeddability into.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Facets and extreme contractions of L(X, l_inf^n).
    Opspace(InputArg),
    /// Minimal face and extremality of a coefficient vector.
    Query {
        #[command(flatten)]
        input: InputArg,
        /// Comma-separated rationals, e.g. "1/2,1".
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// Oracle cross-checks on the input, or on every bundled fixture plus random bases.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of seeded random bases (default 100 without --input, 0 with it).
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
    /// Runs a bundled dataset.
    Demo {
        name: Option<String>,
        /// Lists the bundled datasets.
        #[arg(long)]
        list: bool,
    },
}

/// Exit code and rendered streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let result = thread_pool().and_then(|pool| pool.install(|| execute(&cli.command)));
    match result {
        Ok((report, code)) => Outcome { code, stdout: render(&report, cli.format), stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text::render(report),
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Input(format!("cannot start thread pool: {e}")))
}

fn read_problem(path: &PathBuf) -> CliResult<Problem> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Problem::parse(&text)
}

/// Parses `"1/2, 1"` or `"(1/2, 1)"` into a vector.
pub fn parse_beta(text: &str) -> CliResult<RatVec> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|s| parse_rational(s.trim()).map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()
        .map(RatVec::new)
}

fn execute(command: &Command) -> CliResult<(Report, i32)> {
    let report = match command {
        Command::Components(a) => {
            let p = read_problem(&a.input)?;
            let mut r = Report::new("components", Some(&p));
            let section = report::components_section(&p.basis()?)?;
            r.notes.extend(report::divergence_note(&section));
            r.components = Some(section);
            r
        }
        Command::Facets(a) => {
            let p = read_problem(&a.input)?;
            let mut r = Report::new("facets", Some(&p));
            r.facets = Some(report::facets_section(&p.basis()?)?);
            r
        }
        Command::Vertices(a) => {
            let p = read_problem(&a.input)?;
            let mut r = Report::new("vertices", Some(&p));
            r.vertices = Some(report::vertices_section(&p.basis()?));
            r
        }
        Command::Embed { input, s } => {
            let mut p = read_problem(&input.input)?;
            if s.is_some() {
                p.s = *s;
            }
            let basis = p.basis()?;
            let mut r = Report::new("embed", Some(&p));
            r.space = Some(report::space_section(&basis, p.s)?);
            r.embedding = Some(report::embedding_section(&basis)?);
            r
        }
        Command::Opspace(a) => {
            let p = read_problem(&a.input)?;
            let Subject::Operator { ext, n } = &p.subject else {
                return Err(CliError::Input("opspace needs extreme_points and n".into()));
            };
            let mut r = Report::new("opspace", Some(&p));
            r.operator_space = Some(report::operator_section(ext, *n)?);
            r.notes.push(report::LINEAR_INVARIANCE_NOTE.to_string());
            r
        }
        Command::Query { input, beta } => {
            let mut p = read_problem(&input.input)?;
            if let Some(text) = beta {
                let b = parse_beta(text)?;
                p.check_beta_dim(&b)?;
                p.query_beta = Some(b);
            }
            let Some(b) = p.query_beta.clone() else {
                return Err(CliError::Input("query needs --beta or query_beta in the input".into()));
            };
            let mut r = Report::new("query", Some(&p));
            r.query = Some(report::query_section(&p.basis()?, &b)?);
            r
        }
        Command::Verify { input, random, seed } => {
            let (mut r, mut rows) = match input {
                Some(path) => {
                    let p = read_problem(path)?;
                    (Report::new("verify", Some(&p)), verify::check_problem("input", &p)?)
                }
                None => {
                    let mut rows = Vec::new();
                    for name in fixtures::names() {
                        let p = fixtures::load(name)?.expect("bundled fixture");
                        rows.extend(verify::check_problem(name, &p)?);
                    }
                    (Report::new("verify", None), rows)
                }
            };
            let count = random.unwrap_or(if input.is_some() { 0 } else { 100 });
            rows.extend(verify::check_random(count, *seed));
            let section = VerifySection::new(rows);
            let code = if section.all_passed() { 0 } else { 2 };
            r.verify = Some(section);
            return Ok((r, code));
        }
        Command::Demo { name, list } => match (name, list) {
            (_, true) | (None, false) => {
                let mut r = Report::new("demo", None);
                r.demos = Some(
                    fixtures::names()
                        .into_iter()
                        .map(|n| report::DemoEntry {
                            name: n.to_string(),
                            source: fixtures::source(n).unwrap_or_default(),
                        })
                        .collect(),
                );
                r
            }
            (Some(name), false) => {
                let p = fixtures::load(name)?.ok_or_else(|| {
                    CliError::Input(format!("unknown demo {name:?}; available: {}", fixtures::names().join(", ")))
                })?;
                report::full_report(&format!("demo {name}"), &p)?
            }
        },
    };
    Ok((report, 0))
}
