//! `pertopo`: persistent π₁ and homology computations with theorem checks.
//!
//! Exit codes: 0 when the run completes without a refutation, 1 when some
//! check is refuted, 2 on input errors.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::InputError;
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(name = "pertopo", version, about = "Persistent fundamental groups and homology of filtered simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Longest intermediate word in rewriting searches.
    #[arg(long, global = true, default_value_t = 32)]
    budget_words: usize,
    /// Words visited by rewriting searches.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget_nodes: usize,
    /// Cosets defined by Todd–Coxeter enumeration.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget_cosets: usize,
    /// `all` or a comma-separated list of critical values.
    #[arg(long, global = true, default_value = "all")]
    levels: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here; for `rips` and `suspend`, the generated `.flt` instead.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vietoris–Rips filtration of a point cloud, written as `.flt`.
    Rips {
        points: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = f64::INFINITY)]
        max_scale: f64,
    },
    /// Mod-2 persistence barcodes per dimension.
    Barcode {
        flt: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// Directory for one `h<k>.dgm` file per dimension.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Abelianized persistent π₁ over pairs of levels.
    Pi1 {
        flt: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Van Kampen checks over pairs of levels of a cover.
    Vk {
        flt: PathBuf,
        #[arg(long)]
        cover_a: PathBuf,
        #[arg(long)]
        cover_b: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        /// Drop this `N_uv` relator before the kernel check (mutation testing).
        #[arg(long)]
        drop_relator: Option<usize>,
    },
    /// Bottleneck distances and interleaving checks.
    Interleave {
        #[command(subcommand)]
        action: InterleaveAction,
    },
    /// Homology-level check of the persistent Hurewicz isomorphism.
    Hurewicz {
        flt: PathBuf,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        basepoint: Option<usize>,
    },
    /// Suspension of a filtration and the degree-shift check of its barcodes.
    Suspend {
        flt: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_k: usize,
    },
    /// Excision check for a cover over pairs of levels.
    Excise {
        flt: PathBuf,
        #[arg(long)]
        cover_a: PathBuf,
        #[arg(long)]
        cover_b: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_k: usize,
    },
    /// Write a curated example filtration (and its cover files) to a directory.
    Corpus {
        #[arg(value_enum)]
        name: commands::CorpusName,
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum InterleaveAction {
    /// Bottleneck distance between two diagram files.
    Distance { left: PathBuf, right: PathBuf },
    /// Check a δ-interleaving of the π₁ persistences of two filtrations.
    Check {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        /// Witness file to check; defaults to the maps induced by inclusion.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Write the checked witness here.
        #[arg(long)]
        emit_witness: Option<PathBuf>,
    },
    /// Upper bound `d_I(X, X') <= max(δ_A, δ_B)` from piece interleavings.
    Corollary {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        cover_a: PathBuf,
        #[arg(long)]
        cover_b: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
        #[arg(long)]
        delta_a: f64,
        #[arg(long)]
        delta_b: f64,
    },
}

fn run(cli: Cli) -> Result<Option<Report>, InputError> {
    let c = &cli.common;
    let budget = input::budget(c.budget_words, c.budget_nodes, c.budget_cosets)?;
    let report = match cli.command {
        Command::Rips { points, max_dim, max_scale } => {
            commands::rips(&points, max_dim, max_scale, c.out.as_deref())?;
            return Ok(None);
        }
        Command::Barcode { flt, max_dim, out_dir } => commands::barcode(&flt, max_dim, out_dir.as_deref())?,
        Command::Pi1 { flt, basepoint } => commands::pi1(&flt, basepoint, &c.levels, &budget)?,
        Command::Vk { flt, cover_a, cover_b, basepoint, drop_relator } => {
            commands::vk(&flt, &cover_a, &cover_b, basepoint, &c.levels, drop_relator, &budget)?
        }
        Command::Interleave { action } => match action {
            InterleaveAction::Distance { left, right } => commands::distance(&left, &right)?,
            InterleaveAction::Check { left, right, delta, basepoint, witness, emit_witness } => {
                commands::check(&left, &right, delta, basepoint, witness.as_deref(), emit_witness.as_deref(), &budget)?
            }
            InterleaveAction::Corollary { left, right, cover_a, cover_b, basepoint, delta_a, delta_b } => {
                commands::corollary(&left, &right, &cover_a, &cover_b, basepoint, delta_a, delta_b, &budget)?
            }
        },
        Command::Hurewicz { flt, u, v, m, basepoint } => commands::hurewicz(&flt, u, v, m, basepoint, &budget)?,
        Command::Suspend { flt, max_k } => commands::suspend(&flt, max_k, c.out.as_deref())?,
        Command::Excise { flt, cover_a, cover_b, max_k } => commands::excise(&flt, &cover_a, &cover_b, max_k, &c.levels)?,
        Command::Corpus { name, dir } => commands::corpus(name, &dir)?,
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common.clone();
    let writes_report = !matches!(cli.command, Command::Suspend { .. });
    let start = Instant::now();
    let mut report = match run(cli) {
        Ok(Some(r)) => r,
        Ok(None) => return ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if common.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    let text = match common.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    match (&common.out, writes_report) {
        (Some(path), true) => {
            if let Err(e) = input::write(path, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        _ => print!("{text}"),
    }
    if report.refuted() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
