//! `param-atlas`: census, ring presentations, coverage and finite-field oracles from the
//! command line.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use param_atlas_core::{AtlasError, Result};
use serde_json::json;

use crate::commands::{Report, TwistSpec};
use crate::config::{GlobalArgs, OutputFormat, RunConfig};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "param-atlas",
    version,
    about = "Unipotent components, B_G presentations and oracles for small reductive groups"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unipotent components with their component groups and twisted classes.
    Census,
    /// Presentation of the ring of B_G.
    BgRing,
    /// Which components are reached from a standard Levi subgroup.
    Coverage,
    /// Finite-field checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Twisted classes of an abelian group under a -> k a.
    Twisted {
        /// Order of a cyclic group.
        #[arg(long, conflicts_with = "moduli")]
        order: Option<usize>,
        /// Invariant factors of an abelian group, comma separated.
        #[arg(long, value_delimiter = ',')]
        moduli: Vec<usize>,
        /// id, inv, or an integer multiplier.
        #[arg(long, default_value = "id")]
        twist: String,
    },
    /// Solutions of Phi Sigma Phi^-1 = Sigma^q in G(F_{ell^k}).
    Commutant {
        #[arg(long)]
        sigma: String,
    },
    /// Component classes of the solutions for a unipotent Sigma.
    Classify {
        #[arg(long)]
        sigma: String,
    },
    /// Avoidance predicate for an element of a standard Levi.
    Avoidant {
        /// Block sizes of the Levi, e.g. 2,2.
        #[arg(long)]
        levi: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        r: Option<u32>,
    },
    /// Jacobian rank at a sample, or at random samples when no point is given.
    Jacobian {
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long, default_value_t = 20)]
        attempts: usize,
    },
    /// Pointwise check of the rewritten Adams twists on random torus points.
    Eval {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Points of B_G over F_{ell^k}.
    CountPoints,
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Census => "census",
        Command::BgRing => "bg-ring",
        Command::Coverage => "coverage",
        Command::Oracle(o) => match o {
            OracleCommand::Twisted { .. } => "oracle twisted",
            OracleCommand::Commutant { .. } => "oracle commutant",
            OracleCommand::Classify { .. } => "oracle classify",
            OracleCommand::Avoidant { .. } => "oracle avoidant",
            OracleCommand::Jacobian { .. } => "oracle jacobian",
            OracleCommand::Eval { .. } => "oracle eval",
            OracleCommand::CountPoints => "oracle count-points",
        },
    }
}

fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report> {
    match cmd {
        Command::Census => commands::cmd_census(cfg),
        Command::BgRing => commands::cmd_bg_ring(cfg),
        Command::Coverage => commands::cmd_coverage(cfg),
        Command::Oracle(o) => match o {
            OracleCommand::Twisted { order, moduli, twist } => {
                let moduli = match order {
                    Some(n) => vec![*n],
                    None if moduli.is_empty() => {
                        return Err(AtlasError::InvalidInput("--order or --moduli is required".into()))
                    }
                    None => moduli.clone(),
                };
                commands::cmd_twisted(&moduli, &TwistSpec::parse(twist)?, cfg)
            }
            OracleCommand::Commutant { sigma } => commands::cmd_commutant(sigma, cfg),
            OracleCommand::Classify { sigma } => commands::cmd_classify(sigma, cfg),
            OracleCommand::Avoidant { levi, m, r } => commands::cmd_avoidant(levi, m, *r, cfg),
            OracleCommand::Jacobian { sigma, phi, attempts } => {
                commands::cmd_jacobian(sigma.as_deref(), phi.as_deref(), *attempts, cfg)
            }
            OracleCommand::Eval { trials } => commands::cmd_eval(*trials, cfg),
            OracleCommand::CountPoints => commands::cmd_count_points(cfg),
        },
    }
}

fn exit_code(e: &AtlasError) -> u8 {
    match e {
        AtlasError::BudgetExceeded { .. } => 3,
        AtlasError::RewriteDiverged(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_args(&cli.global).and_then(|cfg| run(&cli.command, &cfg).map(|r| (cfg, r)));
    match result {
        Ok((cfg, report)) => {
            let out = match cfg.output {
                OutputFormat::Text => report.text,
                OutputFormat::Json => {
                    let doc = json!({
                        "schema_version": SCHEMA_VERSION,
                        "command": command_name(&cli.command),
                        "config": {
                            "group": cfg.group.map(|p| p.to_string()),
                            "q": cfg.q,
                            "ell": cfg.ell,
                            "field_degree": cfg.field_degree,
                            "budget": cfg.budget as u64,
                            "seed": cfg.seed,
                        },
                        "result": report.json,
                    });
                    serde_json::to_string_pretty(&doc).expect("json output") + "\n"
                }
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
