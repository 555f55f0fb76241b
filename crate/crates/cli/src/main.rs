//! `cfsem` command-line front end.
//!
//! Exit codes: 0 when the check passes, 1 when it fails (with a witness),
//! 2 on input errors.

mod commands;
mod output;
mod query;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cfsem", version, about = "Finite structural causal models: d-separation, back-door checks, surgery and exact counterfactual laws")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    /// Maximum number of disturbance tuples to enumerate.
    #[arg(long, env = "CFSEM_ENUM_CAP", default_value_t = cfsem::DEFAULT_ENUMERATION_CAP,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub cap: u64,

    /// Maximum number of paths to enumerate in graph checks.
    #[arg(long, default_value_t = cfsem::dsep::DEFAULT_PATH_LIMIT, global = true)]
    pub path_limit: usize,

    /// Significant digits of the float shown next to each exact probability.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=30), global = true)]
    pub precision: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is X d-separated from Y given Z?
    Dsep(DsepArgs),
    /// Back-door criterion for (A, Y, L), or enumeration of admissible sets.
    Backdoor(BackdoorArgs),
    /// Run the surgery, consistency, back-door and cross-world checks on a model.
    Verify(VerifyArgs),
    /// Exact observational or counterfactual distribution.
    Dist(DistArgs),
    /// Write a seeded random model.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct DsepArgs {
    /// Graph text file or model JSON file.
    pub graph: PathBuf,
    /// Comma-separated node labels.
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    #[arg(long, default_value = "")]
    pub z: String,
}

#[derive(Debug, Args)]
pub struct BackdoorArgs {
    pub graph: PathBuf,
    /// Treatment set.
    #[arg(long)]
    pub a: String,
    /// Outcome node.
    #[arg(long)]
    pub y: String,
    /// Adjustment set.
    #[arg(long, default_value = "", conflicts_with = "enumerate")]
    pub l: String,
    /// List every admissible subset of these candidates instead.
    #[arg(long)]
    pub enumerate: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Model JSON file.
    pub model: PathBuf,
    /// Intervention such as `A=1` or `A=1,B=0`.
    #[arg(long)]
    pub intervention: String,
    /// Outcome for the back-door check (default: last non-treatment node).
    #[arg(long)]
    pub y: Option<String>,
    /// Adjustment set for the back-door check; `""` is the empty set.
    #[arg(long)]
    pub l: Option<String>,
    /// Also check consistency events, Markov factorization after surgery and route equivalence.
    #[arg(long)]
    pub all_lemmas: bool,
    /// Also check the cross-world independence condition and its preservation.
    #[arg(long)]
    pub ffrcistg: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DistQuery {
    /// Observational query such as `P(Y|A=1,L=0)`.
    #[arg(long)]
    pub query: Option<String>,
    /// Counterfactual query such as `Y | do(A=1)`.
    #[arg(long)]
    pub counterfactual: Option<String>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    pub model: PathBuf,
    #[command(flatten)]
    pub query: DistQuery,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub nodes: usize,
    #[arg(long, default_value_t = 3)]
    pub max_domain: usize,
    #[arg(long, default_value_t = 3)]
    pub max_disturbance: usize,
    #[arg(long, default_value_t = 0.5)]
    pub edge_probability: f64,
    /// Dependent disturbances satisfying the cross-world condition.
    #[arg(long)]
    pub ffrcistg: bool,
    /// Output file (default: standard output).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            match (&outcome.raw, cli.format) {
                (Some(raw), _) => print!("{raw}"),
                (None, Format::Text) => {
                    for line in &outcome.text {
                        println!("{line}");
                    }
                }
                (None, Format::Json) => println!("{}", serde_json::to_string_pretty(&outcome.json).expect("serializable")),
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
