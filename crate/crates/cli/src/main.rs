//! `shagraph`: reduction graphs, split covers and obstruction sets from the
//! command line.

mod report;
mod verify;

use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shagraph::model::{parse_model, validate};
use shagraph::{ClosedFiberModel, Limits};

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(
    name = "shagraph",
    version,
    about = "Combinatorial invariants of reduction graphs of arithmetic curves"
)]
struct Cli {
    /// Output format; `dot` is only meaningful for graph-shaped results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cap on the number of states any enumeration may visit.
    #[arg(long, global = true, env = "SHAGRAPH_MAX_STATES", value_parser = clap::value_parser!(u64).range(1..))]
    max_states: Option<u64>,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct ModelSource {
    /// Model file in the `.sg` format; `-` reads standard input.
    #[arg(long)]
    model: Option<PathBuf>,

    /// Model source given directly, lines separated by `;` or newlines.
    #[arg(long)]
    inline: Option<String>,
}

#[derive(Args, Debug, Clone)]
#[group(required = false, multiple = false)]
struct OptionalModelSource {
    /// Model file in the `.sg` format; `-` reads standard input.
    #[arg(long)]
    model: Option<PathBuf>,

    /// Model source given directly, lines separated by `;` or newlines.
    #[arg(long)]
    inline: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduction graph of a model.
    Graph {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Free generators of the fundamental group.
    Pi1 {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Isomorphism classes of split covers of a given degree.
    Covers {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        degree: u64,
        /// Only connected covers.
        #[arg(long)]
        connected: bool,
    },
    /// The obstruction set for a finite component group.
    Sha {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        group: String,
    },
    /// Kernel of the Witt group map.
    WittKernel {
        #[command(flatten)]
        source: ModelSource,
    },
    /// Blow up a smooth point or an ordinary double point.
    Blowup {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        point: String,
    },
    /// Add a smooth marked point on a component.
    Refine {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        component: String,
    },
    /// Cross-checks between independent algorithms.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Orbit count of the coboundary action against the obstruction set.
    DoubleCoset {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        group: String,
    },
    /// Exactness of the sequence for a normal subgroup.
    QuotientExactness {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        group: String,
        /// `center`, or comma-separated element indices generating N. All
        /// normal subgroups when omitted.
        #[arg(long)]
        normal: Option<String>,
    },
    /// Both sides of the bijectivity criterion for the quotient map.
    TransFactor {
        #[command(flatten)]
        source: ModelSource,
        #[arg(long)]
        group: String,
        #[arg(long)]
        normal: Option<String>,
    },
    /// Rank and obstruction set size under refinement and blowup. Without a
    /// model, runs on random models drawn from `--seed`.
    Homotopy {
        #[command(flatten)]
        source: OptionalModelSource,
        #[arg(long, default_value = "C2")]
        group: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

pub enum Failure {
    Domain(shagraph::Error),
    Usage(String),
}

impl From<shagraph::Error> for Failure {
    fn from(e: shagraph::Error) -> Self {
        Failure::Domain(e)
    }
}

/// What a command produced: a JSON report and, for graph-shaped results, a
/// DOT rendering. `passed` is false when a verification failed.
pub struct Output {
    pub json: serde_json::Value,
    pub dot: Option<String>,
    pub passed: bool,
}

fn read_model(
    model: &Option<PathBuf>,
    inline: &Option<String>,
) -> Result<ClosedFiberModel, Failure> {
    let text = match (model, inline) {
        (Some(path), _) if path.as_os_str() == "-" => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
            buf
        }
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(text)) => text.replace(';', "\n"),
        (None, None) => return Err(Failure::Usage("a model is required".into())),
    };
    let model = parse_model(&text)?;
    let diags = validate(&model);
    for w in diags.warnings() {
        eprintln!("warning[{}]: {}", w.code, w.message);
    }
    Ok(model)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let limits = cli
        .max_states
        .map_or_else(Limits::default, Limits::with_max_states);
    let load = |s: &ModelSource| read_model(&s.model, &s.inline);
    match &cli.command {
        Command::Graph { source } => report::graph(&load(source)?),
        Command::Pi1 { source } => report::pi1(&load(source)?),
        Command::Covers {
            source,
            degree,
            connected,
        } => report::covers(&load(source)?, *degree as usize, *connected, &limits),
        Command::Sha { source, group } => report::sha(&load(source)?, group, &limits),
        Command::WittKernel { source } => report::witt(&load(source)?, &limits),
        Command::Blowup { source, point } => report::blowup(&load(source)?, point),
        Command::Refine { source, component } => report::refine(&load(source)?, component),
        Command::Verify { check } => match check {
            Check::DoubleCoset { source, group } => {
                verify::double_coset(&load(source)?, group, &limits)
            }
            Check::QuotientExactness {
                source,
                group,
                normal,
            } => verify::quotient_exactness(&load(source)?, group, normal.as_deref(), &limits),
            Check::TransFactor {
                source,
                group,
                normal,
            } => verify::trans_factor(&load(source)?, group, normal.as_deref(), &limits),
            Check::Homotopy {
                source,
                group,
                samples,
            } => {
                let model = match (&source.model, &source.inline) {
                    (None, None) => None,
                    (m, i) => Some(read_model(m, i)?),
                };
                verify::homotopy(model.as_ref(), group, *samples, cli.seed, &limits)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Domain(e)) => {
            report::print_error(&e);
            return ExitCode::from(1);
        }
    };
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("reports serialize") + "\n",
        Format::Text => report::render_text(&out.json),
        Format::Dot => match out.dot {
            Some(dot) => dot,
            None => {
                eprintln!(
                    "error: --format dot is only available for graph, pi1, blowup and refine"
                );
                return ExitCode::from(2);
            }
        },
    };
    print!("{rendered}");
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
